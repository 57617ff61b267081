#ifndef HOLOQ_HOLONOMY_HPP
#define HOLOQ_HOLONOMY_HPP

// Cyclic/geometric condition checks, the segment-matching equations, gate and
// geometric-phase extraction, and the shortened-path search.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "holoq/propagation.hpp"

namespace holoq {

// Extracted gate on the ordered basis (|b1>, |d1>), normalized so the
// dark-dark entry is 1.
struct HolonomyReport {
  Eigen::Matrix2cd gate = Eigen::Matrix2cd::Identity();
  double beta = 0.0;
  double cyclic_residual = 0.0;
  double geometric_residual = 0.0;
  double total_angle = 0.0;
  double phase_bright = 0.0;  // arg <b1|U(T)|b1> before normalization
  double phase_dark = 0.0;    // arg <d1|U(T)|d1> before normalization
  bool cyclic = true;
};

enum class Branch { principal, complement };

struct MatchSolution {
  double theta2 = 0.0;           // matched rotation angle of segment 2
  double a = 0.0;                // branch constant, 0 or pi
  double phi2 = 0.0;             // matched laser phase
  bool degenerate_phase = false; // |sin th sin eta| = 1: phi2 unconstrained
};

inline double check_cyclic(const PathPlan& plan, int samples_per_segment = 64) {
  const Trajectory traj = evolve_path(plan, samples_per_segment);
  return (traj.back().projector - traj.front().projector).norm();
}

// Max |<phi_k(t)| H(t) |phi_l(t)>| over sampled times and basis pairs;
// vanishes iff the transport is parallel (purely geometric).
inline double check_geometric(const PathPlan& plan, int samples_per_segment = 64) {
  const Trajectory traj = evolve_path(plan, samples_per_segment);
  std::vector<Mat> hams;
  hams.reserve(plan.segments.size());
  for (const auto& seg : plan.segments) hams.push_back(hamiltonian(seg));

  double worst = 0.0;
  for (const auto& s : traj.samples) {
    const Mat& h = hams[s.segment];
    const Vec hb = h * s.basis_b;
    const Vec hd = h * s.basis_d;
    worst = std::max({worst, std::abs(s.basis_b.dot(hb)),
                      std::abs(s.basis_b.dot(hd)), std::abs(s.basis_d.dot(hb)),
                      std::abs(s.basis_d.dot(hd))});
  }
  return worst;
}

// Population matching |sin th2 sin eta2| = |sin th1 sin eta1| solved for th2.
inline double match_rotation_angle(double theta1, double eta1, double eta2,
                                   Branch branch = Branch::principal) {
  const double target = std::abs(std::sin(theta1) * std::sin(eta1));
  const double reach = std::abs(std::sin(eta2));
  if (target > reach + 1e-12) {
    throw NoSolution("match_rotation_angle: second segment cannot reach the "
                     "required |e> population");
  }
  const double principal = std::asin(std::min(1.0, target / reach));
  return branch == Branch::principal ? principal : kPi - principal;
}

inline MatchSolution match_phase(double phi1, double delta1, double delta2,
                                 double tau, double theta1, double eta1,
                                 double theta2, double eta2) {
  const double p1 = std::sin(theta1) * std::sin(eta1);
  const double p2 = std::sin(theta2) * std::sin(eta2);
  if (std::abs(std::abs(p1) - std::abs(p2)) > 1e-9) {
    throw MatchViolation("match_phase: rotation-angle condition not satisfied");
  }
  MatchSolution sol;
  sol.theta2 = theta2;
  sol.a = (p1 * p2 > 0.0) ? kPi : 0.0;
  sol.degenerate_phase = std::abs(std::abs(p1) - 1.0) <= 1e-9 &&
                         std::abs(std::abs(p2) - 1.0) <= 1e-9;
  const double arg1 =
      std::atan2(std::sin(theta1) * std::cos(eta1), std::cos(theta1));
  const double arg2 =
      std::atan2(std::sin(theta2) * std::cos(eta2), std::cos(theta2));
  sol.phi2 = wrap_2pi(phi1 + (delta1 - delta2) * tau - sol.a - arg1 - arg2);
  return sol;
}

inline double total_rotation_angle(const PathPlan& plan) {
  double sum = 0.0;
  for (const auto& seg : plan.segments) sum += seg.theta_angle();
  return sum;
}

// Geometric phase acquired by the bright state, summed over segments:
// beta = sum_j arg(cos th_j + i sin th_j cos eta_j) - th_j cos eta_j.
// Valid for matched plans (cyclic, |sin th sin eta| < 1 per segment).
inline double closed_form_beta(const PathPlan& plan) {
  double beta = 0.0;
  for (const auto& seg : plan.segments) {
    const double th = seg.theta_angle();
    const double ce = std::cos(seg.eta());
    beta += std::atan2(std::sin(th) * ce, std::cos(th)) - th * ce;
  }
  return beta;
}

inline HolonomyReport extract_gate(const PathPlan& plan,
                                   int samples_per_segment = 64,
                                   double tolerance = 1e-8) {
  const Trajectory traj = evolve_path(plan, samples_per_segment);
  const auto [b0, d0] = bright_dark(plan.initial_frame);
  const Vec& bf = traj.back().basis_b;
  const Vec& df = traj.back().basis_d;

  HolonomyReport rep;
  rep.cyclic_residual = (traj.back().projector - traj.front().projector).norm();
  rep.geometric_residual = check_geometric(plan, samples_per_segment);
  rep.total_angle = total_rotation_angle(plan);
  rep.cyclic = rep.cyclic_residual <= tolerance;

  Eigen::Matrix2cd g;
  g << b0.dot(bf), b0.dot(df), d0.dot(bf), d0.dot(df);
  rep.phase_bright = std::arg(g(0, 0));
  rep.phase_dark = std::arg(g(1, 1));
  // report relative to an unchanged dark state (divides out accumulated
  // frame-compensation phases)
  g *= std::exp(cplx(0.0, -rep.phase_dark));
  rep.gate = g;
  rep.beta = std::arg(g(0, 0));
  // canonicalize the branch cut: report pi, not -pi
  if (rep.beta <= -kPi + 1e-9) rep.beta += 2.0 * kPi;
  return rep;
}

// 2x2 gate on the computational basis (|0>, |1>) implemented by a holonomy
// with phase beta in the given bright frame.
inline Eigen::Matrix2cd computational_gate(double beta, const BrightFrame& frame) {
  const auto [b3, d3] = bright_dark(frame);
  Eigen::Vector2cd b(b3(0), b3(1)), d(d3(0), d3(1));
  return std::exp(cplx(0.0, beta)) * b * b.adjoint() + d * d.adjoint();
}

inline Eigen::Matrix2cd compose_gates(const HolonomyReport& g1,
                                      const BrightFrame& f1,
                                      const HolonomyReport& g2,
                                      const BrightFrame& f2) {
  return computational_gate(g2.beta, f2) * computational_gate(g1.beta, f1);
}

// --- shortened-path search -------------------------------------------------

struct PathConstraints {
  double omega_max = 1.0;
  double tau_max = 100.0;
};

// Matched two-segment plan from the free parameters (th1, eta1, eta2, branch):
// th2 and phi2 follow from the matching equations; pulses run at omega_max.
inline std::optional<PathPlan> build_matched_pair(double theta1, double eta1,
                                                  double eta2, Branch branch,
                                                  const PathConstraints& con,
                                                  double phi1 = 0.0,
                                                  const BrightFrame& frame = {kPi / 4, 0.0}) {
  double theta2;
  try {
    theta2 = match_rotation_angle(theta1, eta1, eta2, branch);
  } catch (const NoSolution&) {
    return std::nullopt;
  }
  const double delta1 = 2.0 * con.omega_max / std::sin(eta1) * std::cos(eta1);
  const double delta2 = 2.0 * con.omega_max / std::sin(eta2) * std::cos(eta2);
  const double tau1 = theta1 * std::sin(eta1) / con.omega_max;
  const double tau2 = theta2 * std::sin(eta2) / con.omega_max;
  if (tau1 <= 0.0 || tau2 <= 0.0 || tau1 > con.tau_max || tau2 > con.tau_max) {
    return std::nullopt;
  }
  const MatchSolution sol =
      match_phase(phi1, delta1, delta2, tau1, theta1, eta1, theta2, eta2);

  SegmentSpec s1{frame, con.omega_max, delta1, wrap_2pi(phi1), tau1};
  SegmentSpec s2{frame, con.omega_max, delta2, sol.phi2, tau2};
  return PathPlan::from_segments({s1, s2});
}

// Single full-loop segment (th = pi): cyclic on its own with
// beta = pi (1 - cos eta).
inline PathPlan build_full_loop(double eta, const PathConstraints& con,
                                double phi1 = 0.0,
                                const BrightFrame& frame = {kPi / 4, 0.0}) {
  const double delta = 2.0 * con.omega_max / std::sin(eta) * std::cos(eta);
  const double tau = kPi * std::sin(eta) / con.omega_max;
  SegmentSpec s{frame, con.omega_max, delta, wrap_2pi(phi1), tau};
  return PathPlan::from_segments({s});
}

namespace detail {

inline double wrap_pm_pi(double x) {
  double y = std::fmod(x + kPi, 2.0 * kPi);
  if (y < 0.0) y += 2.0 * kPi;
  return y - kPi;
}

struct PairCandidate {
  double total_angle;
  double eta1, eta2, theta1;
  Branch branch;
};

// beta of the matched pair as a function of th1 at fixed (eta1, eta2, branch)
inline double pair_beta(double theta1, double eta1, double eta2, Branch branch) {
  const double theta2 = match_rotation_angle(theta1, eta1, eta2, branch);
  const double c1 = std::cos(eta1), c2 = std::cos(eta2);
  return std::atan2(std::sin(theta1) * c1, std::cos(theta1)) - theta1 * c1 +
         std::atan2(std::sin(theta2) * c2, std::cos(theta2)) - theta2 * c2;
}

}  // namespace detail

// Deterministic grid + bracketed 1-D search for a matched plan hitting the
// target geometric phase with minimal total rotation angle.  The single
// full-loop family (th = pi) is included so the search can always fall back
// to the classic pi-length paths.
inline PathPlan plan_shortest_path(double target_beta,
                                   const std::vector<double>& eta1_grid,
                                   const std::vector<double>& eta2_grid,
                                   const PathConstraints& con = {},
                                   double beta_tol = 1e-6) {
  if (target_beta <= 0.0 || target_beta >= 2.0 * kPi) {
    throw InvalidArgument("plan_shortest_path: target beta must lie in (0, 2 pi)");
  }
  if (eta1_grid.empty() || eta2_grid.empty()) {
    throw InvalidArgument("plan_shortest_path: empty eta grid");
  }

  std::optional<detail::PairCandidate> best_pair;
  std::optional<std::pair<double, double>> best_loop;  // (total angle, eta)

  const int scan_points = 2048;
  for (double eta1 : eta1_grid) {
    // single-segment full loop: beta = pi (1 - cos eta1), total angle pi
    if (std::abs(detail::wrap_pm_pi(kPi * (1.0 - std::cos(eta1)) - target_beta)) <=
        beta_tol) {
      const double tau = kPi * std::sin(eta1) / con.omega_max;
      if (tau > 0.0 && tau <= con.tau_max &&
          (!best_loop || eta1 < best_loop->second)) {
        best_loop = {kPi, eta1};
      }
    }
    for (double eta2 : eta2_grid) {
      for (Branch branch : {Branch::principal, Branch::complement}) {
        double prev_f = 0.0;
        double prev_th = 0.0;
        bool have_prev = false;
        for (int i = 1; i < scan_points; ++i) {
          const double th1 = kPi * i / scan_points;
          double f;
          try {
            f = detail::wrap_pm_pi(detail::pair_beta(th1, eta1, eta2, branch) -
                                   target_beta);
          } catch (const NoSolution&) {
            have_prev = false;
            continue;
          }
          // bracketed sign change, excluding branch-cut jumps
          if (have_prev && prev_f * f <= 0.0 && std::abs(f - prev_f) < kPi) {
            double lo = prev_th, hi = th1, flo = prev_f;
            for (int it = 0; it < 80; ++it) {
              const double mid = 0.5 * (lo + hi);
              const double fm = detail::wrap_pm_pi(
                  detail::pair_beta(mid, eta1, eta2, branch) - target_beta);
              if (flo * fm <= 0.0) {
                hi = mid;
              } else {
                lo = mid;
                flo = fm;
              }
            }
            const double root = 0.5 * (lo + hi);
            const double res = detail::wrap_pm_pi(
                detail::pair_beta(root, eta1, eta2, branch) - target_beta);
            if (std::abs(res) <= beta_tol) {
              const double th2 = match_rotation_angle(root, eta1, eta2, branch);
              const double sum = root + th2;
              const double tau1 = root * std::sin(eta1) / con.omega_max;
              const double tau2 = th2 * std::sin(eta2) / con.omega_max;
              const bool feasible = tau1 > 0.0 && tau2 > 0.0 &&
                                    tau1 <= con.tau_max && tau2 <= con.tau_max;
              if (feasible &&
                  (!best_pair || sum < best_pair->total_angle - 1e-12 ||
                   (std::abs(sum - best_pair->total_angle) <= 1e-12 &&
                    std::make_pair(eta1, eta2) <
                        std::make_pair(best_pair->eta1, best_pair->eta2)))) {
                best_pair = {sum, eta1, eta2, root, branch};
              }
            }
          }
          prev_f = f;
          prev_th = th1;
          have_prev = true;
        }
      }
    }
  }

  // prefer the shorter candidate; on a tie the single-loop plan wins (the
  // window absorbs the ill-conditioned asin(sin .) rounding near th = pi/2)
  if (best_loop && (!best_pair || best_loop->first <= best_pair->total_angle + 1e-9)) {
    return build_full_loop(best_loop->second, con);
  }
  if (best_pair) {
    auto plan = build_matched_pair(best_pair->theta1, best_pair->eta1,
                                   best_pair->eta2, best_pair->branch, con);
    if (plan) return *plan;
  }
  throw NoSolution("plan_shortest_path: no feasible candidate on the grids");
}

}  // namespace holoq

#endif
