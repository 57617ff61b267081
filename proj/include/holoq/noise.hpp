#ifndef HOLOQ_NOISE_HPP
#define HOLOQ_NOISE_HPP

// Lindblad master-equation integrator (RK4, piecewise-constant H), the noisy
// gate channel on the computational subspace, average gate fidelity, and the
// short-path vs pi-path comparison harness.

#include <array>
#include <cmath>
#include <vector>

#include "holoq/decoupling.hpp"
#include "holoq/holonomy.hpp"

namespace holoq {

// Markovian stand-in for the unspecified environment operators: decay
// |e> -> |0>, |e> -> |1> plus pure dephasing on each level.
struct NoiseModel {
  double gamma_e0 = 0.0;
  double gamma_e1 = 0.0;
  double kappa_0 = 0.0;
  double kappa_1 = 0.0;
  double kappa_e = 0.0;

  double total_rate() const {
    return gamma_e0 + gamma_e1 + kappa_0 + kappa_1 + kappa_e;
  }

  std::vector<Mat> jump_operators() const {
    std::vector<Mat> ls;
    auto add = [&ls](double rate, int row, int col) {
      if (rate <= 0.0) return;
      Mat l = Mat::Zero(3, 3);
      l(row, col) = std::sqrt(rate);
      ls.push_back(l);
    };
    add(gamma_e0, 0, 2);
    add(gamma_e1, 1, 2);
    add(kappa_0, 0, 0);
    add(kappa_1, 1, 1);
    add(kappa_e, 2, 2);
    return ls;
  }
};

namespace detail {

inline Mat lindblad_rhs(const Mat& rho, const Mat& h,
                        const std::vector<Mat>& ls) {
  Mat drho = cplx(0.0, -1.0) * (h * rho - rho * h);
  for (const Mat& l : ls) {
    const Mat ldl = l.adjoint() * l;
    drho += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
  }
  return drho;
}

inline Mat rk4_step(const Mat& rho, const Mat& h, const std::vector<Mat>& ls,
                    double dt) {
  const Mat k1 = lindblad_rhs(rho, h, ls);
  const Mat k2 = lindblad_rhs(rho + 0.5 * dt * k1, h, ls);
  const Mat k3 = lindblad_rhs(rho + 0.5 * dt * k2, h, ls);
  const Mat k4 = lindblad_rhs(rho + dt * k3, h, ls);
  return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace detail

inline double step_scale(const Mat& h, const NoiseModel& noise) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const double hnorm = es.eigenvalues().cwiseAbs().maxCoeff();
  return std::max({hnorm, noise.total_rate(), 1e-12});
}

inline Mat lindblad_step(const Mat& rho, const Mat& h, const NoiseModel& noise,
                         double dt) {
  if (dt > 0.01 / step_scale(h, noise)) {
    throw StepTooLarge("lindblad_step: dt exceeds 0.01 / max(|H|, rates)");
  }
  return detail::rk4_step(rho, h, noise.jump_operators(), dt);
}

// dt = min(tau_j)/200, capped by the per-step bound.
inline double default_dt(const PathPlan& plan, const NoiseModel& noise) {
  double dt = plan.segments.front().tau;
  for (const auto& seg : plan.segments) {
    dt = std::min(dt, seg.tau / 200.0);
    dt = std::min(dt, 0.0099 / step_scale(hamiltonian(seg), noise));
  }
  return dt;
}

// Channel on span{|0>,|1>}: images of the four basis matrices |i><j|,
// restricted to the computational block.  Leakage shows up as trace loss.
struct QubitChannel {
  // out[2*i + j] = E(|i><j|) restricted to the 2x2 computational block
  std::array<Eigen::Matrix2cd, 4> out;

  // superoperator matrix S[(i,j),(k,l)] = <i| E(|k><l|) |j>
  Eigen::Matrix4cd superoperator() const {
    Eigen::Matrix4cd s;
    for (int k = 0; k < 2; ++k) {
      for (int l = 0; l < 2; ++l) {
        const Eigen::Matrix2cd& m = out[2 * k + l];
        for (int i = 0; i < 2; ++i) {
          for (int j = 0; j < 2; ++j) {
            s(2 * i + j, 2 * k + l) = m(i, j);
          }
        }
      }
    }
    return s;
  }
};

namespace detail {

struct Stage {
  Mat h;
  double tau;
  std::vector<Mat> pulses_before;
};

inline std::vector<Stage> stages_of(const PathPlan& plan) {
  std::vector<Stage> st;
  double elapsed = 0.0;
  for (std::size_t j = 0; j < plan.segments.size(); ++j) {
    Stage s{hamiltonian(plan.segments[j]), plan.segments[j].tau, {}};
    if (j > 0) {
      // compensation phase uses the elapsed time at the boundary (shared
      // rotating-frame time origin), matching evolve_path
      s.pulses_before.push_back(frame_change(plan.segments[j - 1].delta,
                                             plan.segments[j].delta, elapsed));
    }
    elapsed += plan.segments[j].tau;
    st.push_back(std::move(s));
  }
  return st;
}

inline std::vector<Stage> stages_of(const ProtectedSchedule& sched) {
  std::vector<Stage> st;
  std::vector<Mat> pending;
  for (const auto& step : sched.steps) {
    if (step.pulse) pending.push_back(pulse_by_name(*step.pulse));
    if (step.segment) {
      st.push_back({hamiltonian(*step.segment), step.segment->tau, pending});
      pending.clear();
    }
  }
  if (!pending.empty()) {
    // trailing pulses with no segment after them: zero-duration stage
    st.push_back({Mat::Zero(3, 3), 0.0, pending});
  }
  return st;
}

inline Mat propagate_matrix(Mat rho, const std::vector<Stage>& stages,
                            const NoiseModel& noise, double dt) {
  const std::vector<Mat> ls = noise.jump_operators();
  for (const auto& stage : stages) {
    for (const Mat& p : stage.pulses_before) rho = p * rho * p.adjoint();
    if (stage.tau <= 0.0) continue;
    const int steps = std::max(1, static_cast<int>(std::ceil(stage.tau / dt)));
    const double h_dt = stage.tau / steps;
    for (int s = 0; s < steps; ++s) {
      rho = rk4_step(rho, stage.h, ls, h_dt);
    }
  }
  return rho;
}

inline QubitChannel channel_from_stages(const std::vector<Stage>& stages,
                                        const NoiseModel& noise, double dt) {
  QubitChannel ch;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Mat rho = Mat::Zero(3, 3);
      rho(i, j) = 1.0;
      const Mat out = propagate_matrix(rho, stages, noise, dt);
      ch.out[2 * i + j] = out.block(0, 0, 2, 2);
    }
  }
  return ch;
}

}  // namespace detail

inline QubitChannel noisy_gate_channel(const PathPlan& plan,
                                       const NoiseModel& noise, double dt) {
  return detail::channel_from_stages(detail::stages_of(plan), noise, dt);
}

inline QubitChannel noisy_gate_channel(const ProtectedSchedule& sched,
                                       const NoiseModel& noise, double dt) {
  return detail::channel_from_stages(detail::stages_of(sched), noise, dt);
}

// F_avg = (2 F_pro + 1)/3 with F_pro = tr(S_ideal^dag S)/4; invariant under
// a global phase of the ideal gate.
inline double average_gate_fidelity(const QubitChannel& channel,
                                    const Eigen::Matrix2cd& ideal) {
  Eigen::Matrix4cd s_ideal;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
          s_ideal(2 * i + j, 2 * k + l) = ideal(i, k) * std::conj(ideal(j, l));
        }
      }
    }
  }
  const double f_pro =
      ((s_ideal.adjoint() * channel.superoperator()).trace().real()) / 4.0;
  return (2.0 * f_pro + 1.0) / 3.0;
}

struct PathComparison {
  double fidelity_short = 0.0;
  double fidelity_reference = 0.0;
  double total_angle_short = 0.0;
  double total_angle_reference = 0.0;
  double dt = 0.0;
};

// Each plan is scored against its own ideal gate (phases may differ).
inline PathComparison compare_paths(const PathPlan& short_plan,
                                    const PathPlan& reference_plan,
                                    const NoiseModel& noise, double dt = 0.0) {
  PathComparison cmp;
  if (dt <= 0.0) {
    dt = std::min(default_dt(short_plan, noise),
                  default_dt(reference_plan, noise));
  }
  cmp.dt = dt;
  const HolonomyReport rs = extract_gate(short_plan);
  const HolonomyReport rr = extract_gate(reference_plan);
  const Eigen::Matrix2cd ideal_s =
      computational_gate(rs.beta, short_plan.initial_frame);
  const Eigen::Matrix2cd ideal_r =
      computational_gate(rr.beta, reference_plan.initial_frame);
  cmp.fidelity_short =
      average_gate_fidelity(noisy_gate_channel(short_plan, noise, dt), ideal_s);
  cmp.fidelity_reference = average_gate_fidelity(
      noisy_gate_channel(reference_plan, noise, dt), ideal_r);
  cmp.total_angle_short = total_rotation_angle(short_plan);
  cmp.total_angle_reference = total_rotation_angle(reference_plan);
  return cmp;
}

}  // namespace holoq

#endif
