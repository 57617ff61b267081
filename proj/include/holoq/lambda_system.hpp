#ifndef HOLOQ_LAMBDA_SYSTEM_HPP
#define HOLOQ_LAMBDA_SYSTEM_HPP

// Three-level Lambda system: bright/dark basis, per-segment rotating-frame
// Hamiltonians and the diagonal frame-change compensation between segments.
// All frequencies are dimensionless multiples of a reference frequency
// Omega_ref = 1; times are in units of 1/Omega_ref.

#include <cmath>
#include <numbers>
#include <tuple>
#include <utility>

#include "holoq/operators.hpp"

namespace holoq {

inline constexpr double kPi = std::numbers::pi;

inline double wrap_2pi(double x) {
  double y = std::fmod(x, 2.0 * kPi);
  if (y < 0.0) y += 2.0 * kPi;
  return y;
}

// Bright-state parametrization |b> = cos(theta)|0> + sin(theta)e^{i phi}|1>.
struct BrightFrame {
  double theta = 0.0;  // [0, pi/2]
  double phi = 0.0;    // [0, 2 pi)
};

// One pulse segment of the piecewise-constant drive.
struct SegmentSpec {
  BrightFrame frame;
  double omega = 0.0;        // Rabi amplitude, >= 0
  double delta = 0.0;        // detuning
  double laser_phase = 0.0;  // [0, 2 pi)
  double tau = 0.0;          // duration, > 0

  // effective rotation frequency sqrt((Delta/2)^2 + Omega^2)
  double effective_freq() const {
    return std::hypot(0.5 * delta, omega);
  }
  // effective rotation angle over the full segment
  double theta_angle() const { return effective_freq() * tau; }
  // eta with tan(eta) = 2 Omega / Delta, quadrant from atan2
  double eta() const { return std::atan2(2.0 * omega, delta); }
};

inline std::pair<Vec, Vec> bright_dark(const BrightFrame& f) {
  const cplx ph = std::exp(cplx(0.0, f.phi));
  Vec b = Vec::Zero(3), d = Vec::Zero(3);
  b(0) = std::cos(f.theta);
  b(1) = std::sin(f.theta) * ph;
  d(0) = std::sin(f.theta);
  d(1) = -std::cos(f.theta) * ph;
  return {b, d};
}

inline SegmentSpec from_physical(double omega_e0, double omega_e1, double phi0,
                                 double phi1, double delta, double tau) {
  if (omega_e0 <= 0.0 && omega_e1 <= 0.0) {
    throw DegenerateSegment("from_physical: both Rabi amplitudes vanish");
  }
  SegmentSpec seg;
  seg.frame.theta = std::atan2(omega_e1, omega_e0);
  seg.frame.phi = wrap_2pi(phi0 - phi1);
  seg.omega = std::hypot(omega_e0, omega_e1);
  seg.delta = delta;
  seg.laser_phase = wrap_2pi(phi0);
  seg.tau = tau;
  return seg;
}

// H = Delta |e><e| + Omega (e^{i phi_L} |e><b| + h.c.); annihilates |d>.
inline Mat hamiltonian(const SegmentSpec& seg) {
  const auto [b, d] = bright_dark(seg.frame);
  Vec e = Vec::Zero(3);
  e(2) = 1.0;
  const cplx drive = seg.omega * std::exp(cplx(0.0, seg.laser_phase));
  Mat h = seg.delta * e * e.adjoint();
  h += drive * e * b.adjoint();
  h += std::conj(drive) * b * e.adjoint();
  return h;
}

// V_next(t) V_prev^dag(t) = diag(e^{i(D2-D1)t}, e^{i(D2-D1)t}, 1): the phase
// compensation applied when consecutive segments use different detunings.
inline Mat frame_change(double delta_prev, double delta_next, double tau) {
  const cplx c = std::exp(cplx(0.0, (delta_next - delta_prev) * tau));
  Mat v = Mat::Identity(3, 3);
  v(0, 0) = c;
  v(1, 1) = c;
  return v;
}

struct SubspaceCoeffs {
  cplx c_e, c_b, c_d;
};

inline SubspaceCoeffs decompose(const Vec& state, const BrightFrame& frame) {
  if (state.size() != 3 || std::abs(state.norm() - 1.0) > 1e-10) {
    throw InvalidState("decompose: state must be a normalized 3-vector");
  }
  const auto [b, d] = bright_dark(frame);
  return {state(2), b.dot(state), d.dot(state)};
}

}  // namespace holoq

#endif
