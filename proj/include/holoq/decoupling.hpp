#ifndef HOLOQ_DECOUPLING_HPP
#define HOLOQ_DECOUPLING_HPP

// Decoupling group {I, g1, g2, g3}, pulse realizations, the interleaved
// four-segment sequence with toggling-frame conjugation, first-order group
// averaging, and the dephasing-symmetrization pulse P.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "holoq/propagation.hpp"

namespace holoq {

struct DecouplingGroup {
  // elements[0] = I, then g1, g2, g3 (diagonal, entries +-1)
  std::array<Mat, 4> elements;
};

inline Mat diag_signs(double s0, double s1, double se) {
  Mat m = Mat::Zero(3, 3);
  m(0, 0) = s0;
  m(1, 1) = s1;
  m(2, 2) = se;
  return m;
}

inline DecouplingGroup build_group() {
  DecouplingGroup g;
  g.elements[0] = Mat::Identity(3, 3);
  g.elements[1] = diag_signs(-1.0, 1.0, -1.0);
  g.elements[2] = diag_signs(-1.0, -1.0, 1.0);
  g.elements[3] = diag_signs(1.0, -1.0, -1.0);
  return g;
}

// g1 = e^{-i pi(|e><0| + h.c.)}, g3 = e^{-i pi(|e><1| + h.c.)}
inline Mat pulse_realization(int k) {
  if (k != 1 && k != 3) {
    throw InvalidArgument("pulse_realization: k must be 1 or 3");
  }
  Mat gen = Mat::Zero(3, 3);
  const int j = (k == 1) ? 0 : 1;
  gen(2, j) = 1.0;
  gen(j, 2) = 1.0;
  return expm_hermitian(gen, kPi);
}

// P = e^{-i pi/sqrt(2) [|e>(<0|-<1|) + h.c.]}; swaps |0> and |1|, flips |e>.
inline Mat dephasing_pulse() {
  Mat gen = Mat::Zero(3, 3);
  const double s = 1.0 / std::sqrt(2.0);
  gen(2, 0) = s;
  gen(2, 1) = -s;
  gen(0, 2) = s;
  gen(1, 2) = -s;
  return expm_hermitian(gen, kPi);
}

inline Mat first_order_average(const DecouplingGroup& group, const Mat& coupling) {
  Mat avg = Mat::Zero(3, 3);
  for (const Mat& g : group.elements) {
    avg += g.adjoint() * coupling * g;
  }
  return avg / 4.0;
}

// Recover (frame, omega, delta, laser_phase) from a 3x3 operator of the
// rotating-frame form Delta|e><e| + (W0 e^{i p0}|e><0| + W1 e^{i p1}|e><1| + h.c.).
inline SegmentSpec extract_segment_params(const Mat& h, double tau) {
  const cplx c0 = h(2, 0), c1 = h(2, 1);
  SegmentSpec seg = from_physical(std::abs(c0), std::abs(c1), std::arg(c0),
                                  std::arg(c1), h(2, 2).real(), tau);
  // the remaining entries must vanish for the form to hold
  Mat rebuilt = hamiltonian(seg);
  if ((rebuilt - h).norm() > 1e-10 * std::max(h.norm(), 1.0)) {
    throw InvalidOperator("extract_segment_params: operator is not of the "
                          "rotating-frame form");
  }
  return seg;
}

struct ScheduleStep {
  std::optional<std::string> pulse;   // pulse applied before the segment
  std::optional<SegmentSpec> segment; // absent for the trailing pulse entry
};

struct ProtectedSchedule {
  std::vector<ScheduleStep> steps;
  std::array<int, 4> conjugations;  // group index applied to each segment
};

// Interleave a 4-segment plan with the sequence I -> H1' -> g1 -> H2' -> g3
// -> H3' -> g1 -> H4' -> g3, where H_k' is the toggling-frame conjugation of
// H_k by I, g1, g2, g3 respectively.
inline ProtectedSchedule interleave(const PathPlan& plan) {
  if (plan.segments.size() != 4) {
    throw InvalidPlan("interleave: plan must have exactly 4 segments");
  }
  const DecouplingGroup group = build_group();
  const std::array<const char*, 4> pulse_names = {nullptr, "g1", "g3", "g1"};

  ProtectedSchedule sched;
  sched.conjugations = {0, 1, 2, 3};
  for (int k = 0; k < 4; ++k) {
    const Mat& g = group.elements[sched.conjugations[k]];
    const Mat h_conj = g * hamiltonian(plan.segments[k]) * g;
    SegmentSpec conj = extract_segment_params(h_conj, plan.segments[k].tau);
    ScheduleStep step;
    if (pulse_names[k]) step.pulse = pulse_names[k];
    step.segment = conj;
    sched.steps.push_back(step);
  }
  sched.steps.push_back({std::string("g3"), std::nullopt});
  return sched;
}

inline Mat pulse_by_name(const std::string& name) {
  if (name == "g1") return pulse_realization(1);
  if (name == "g3") return pulse_realization(3);
  if (name == "P") return dephasing_pulse();
  throw InvalidArgument("unknown pulse name: " + name);
}

// Total unitary of the interleaved sequence, pulses instantaneous.
inline Mat protected_total(const ProtectedSchedule& sched) {
  Mat u = Mat::Identity(3, 3);
  for (const auto& step : sched.steps) {
    if (step.pulse) u = pulse_by_name(*step.pulse) * u;
    if (step.segment) u = segment_propagator(*step.segment) * u;
  }
  return u;
}

inline Mat unprotected_total(const PathPlan& plan) {
  Mat u = Mat::Identity(3, 3);
  for (const auto& seg : plan.segments) u = segment_propagator(seg) * u;
  return u;
}

// Geometric condition on the toggled subspaces g_k S: during segment k the
// computational basis is g_k times the unprotected evolved basis.
inline double protected_geometric_residual(const PathPlan& plan,
                                           const ProtectedSchedule& sched,
                                           int samples_per_segment = 64) {
  const Trajectory traj = evolve_path(plan, samples_per_segment);
  const DecouplingGroup group = build_group();
  std::vector<Mat> hams;
  for (const auto& step : sched.steps) {
    if (step.segment) hams.push_back(hamiltonian(*step.segment));
  }
  double worst = 0.0;
  for (const auto& s : traj.samples) {
    const Mat& g = group.elements[sched.conjugations[s.segment]];
    const Vec tb = g * s.basis_b;
    const Vec td = g * s.basis_d;
    const Mat& h = hams[s.segment];
    worst = std::max({worst, std::abs(tb.dot(h * tb)), std::abs(tb.dot(h * td)),
                      std::abs(td.dot(h * tb)), std::abs(td.dot(h * td))});
  }
  return worst;
}

}  // namespace holoq

#endif
