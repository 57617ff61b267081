#ifndef HOLOQ_PROPAGATION_HPP
#define HOLOQ_PROPAGATION_HPP

// Segment propagators (spectral and closed-form), the frame-compensated
// handoff between segments, and full-path trajectory evolution.

#include <utility>
#include <vector>

#include "holoq/lambda_system.hpp"
#include "holoq/operators.hpp"

namespace holoq {

// Ordered segment list; initial_frame fixes |b1>, |d1> and the computational
// subspace the holonomy is reported on.
struct PathPlan {
  std::vector<SegmentSpec> segments;
  BrightFrame initial_frame;

  static PathPlan from_segments(std::vector<SegmentSpec> segs) {
    if (segs.empty()) throw InvalidPlan("path plan needs at least one segment");
    PathPlan plan;
    plan.initial_frame = segs.front().frame;
    plan.segments = std::move(segs);
    return plan;
  }

  double total_duration() const {
    double t = 0.0;
    for (const auto& s : segments) t += s.tau;
    return t;
  }
};

struct TrajectorySample {
  double t = 0.0;
  int segment = 0;
  Vec basis_b;  // evolved image of |b1>
  Vec basis_d;  // evolved image of |d1>
  Mat projector;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  // compensation phase arg e^{i(D_next - D_prev) t_boundary} recorded at each
  // interior segment boundary
  std::vector<double> boundary_phases;

  const TrajectorySample& front() const { return samples.front(); }
  const TrajectorySample& back() const { return samples.back(); }
};

inline Mat segment_propagator(const SegmentSpec& seg) {
  return expm_hermitian(hamiltonian(seg), seg.tau);
}

// Closed-form propagator: identity on |d>, SU(2)-type rotation on the
// (|b>, |e>) block with angle theta and axis tilt eta:
//   U|b> = e^{-i th cos(eta)} [(cos th + i sin th cos eta)|b>
//                              - i e^{i phi_L} sin th sin eta |e>].
inline Mat segment_propagator_closed_form(const SegmentSpec& seg) {
  const double th = seg.theta_angle();
  const double eta = seg.eta();
  const double ce = std::cos(eta), se = std::sin(eta);
  const cplx pref = std::exp(cplx(0.0, -th * ce));
  const cplx phl = std::exp(cplx(0.0, seg.laser_phase));
  const auto [b, d] = bright_dark(seg.frame);
  Vec e = Vec::Zero(3);
  e(2) = 1.0;

  const cplx ubb = pref * cplx(std::cos(th), std::sin(th) * ce);
  const cplx ueb = pref * (cplx(0.0, -1.0) * phl * std::sin(th) * se);
  const cplx uee = pref * cplx(std::cos(th), -std::sin(th) * ce);
  const cplx ube = pref * (cplx(0.0, -1.0) * std::conj(phl) * std::sin(th) * se);

  Mat u = d * d.adjoint();
  u += ubb * b * b.adjoint();
  u += ueb * e * b.adjoint();
  u += ube * b * e.adjoint();
  u += uee * e * e.adjoint();
  return u;
}

inline std::pair<Vec, Vec> compensated_handoff(const std::pair<Vec, Vec>& basis,
                                               double delta_prev,
                                               double delta_next,
                                               double tau_prev) {
  const Mat v = frame_change(delta_prev, delta_next, tau_prev);
  return {v * basis.first, v * basis.second};
}

inline Trajectory evolve_path(const PathPlan& plan, int samples_per_segment = 64) {
  if (plan.segments.empty()) throw InvalidPlan("evolve_path: empty plan");
  if (samples_per_segment < 2) {
    throw InvalidArgument("evolve_path: need at least 2 samples per segment");
  }

  Trajectory traj;
  auto [b, d] = bright_dark(plan.initial_frame);
  double t0 = 0.0;

  for (std::size_t j = 0; j < plan.segments.size(); ++j) {
    const SegmentSpec& seg = plan.segments[j];
    const Mat h = hamiltonian(seg);
    for (int s = 0; s < samples_per_segment; ++s) {
      const double dt = seg.tau * s / (samples_per_segment - 1);
      const Mat u = expm_hermitian(h, dt);
      TrajectorySample sample;
      sample.t = t0 + dt;
      sample.segment = static_cast<int>(j);
      sample.basis_b = u * b;
      sample.basis_d = u * d;
      sample.projector = sample.basis_b * sample.basis_b.adjoint() +
                         sample.basis_d * sample.basis_d.adjoint();
      traj.samples.push_back(std::move(sample));
    }
    const Mat u_full = expm_hermitian(h, seg.tau);
    b = u_full * b;
    d = u_full * d;
    t0 += seg.tau;
    if (j + 1 < plan.segments.size()) {
      // the rotating frames share one time origin, so the compensation phase
      // grows with the elapsed time at the boundary, not the segment duration
      const double d_next = plan.segments[j + 1].delta;
      std::tie(b, d) = compensated_handoff({b, d}, seg.delta, d_next, t0);
      traj.boundary_phases.push_back(wrap_2pi((d_next - seg.delta) * t0));
    }
  }
  return traj;
}

}  // namespace holoq

#endif
