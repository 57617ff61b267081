#ifndef HOLOQ_TWO_QUBIT_HPP
#define HOLOQ_TWO_QUBIT_HPP

// Nuclear-spin-conditioned Hamiltonians on the 6-dimensional electron (x)
// nuclear space and composition of conditional holonomic gates.
// Index convention: 3 * spin + level, spin 0 <-> |up>, 1 <-> |down>;
// the auxiliary level |a> plays the role of |e>.

#include <utility>

#include "holoq/holonomy.hpp"

namespace holoq {

enum class Spin { up, down };

inline Mat conditional_hamiltonian(Spin spin, const SegmentSpec& seg) {
  Mat h6 = Mat::Zero(6, 6);
  const int off = (spin == Spin::up) ? 0 : 3;
  h6.block(off, off, 3, 3) = hamiltonian(seg);
  return h6;
}

struct ConditionalPlan {
  PathPlan plan_up;
  PathPlan plan_down;
};

struct ConditionalGate {
  Mat gate6;                 // block diagonal on the full 6-dim space
  Eigen::Matrix4cd gate4;    // restriction to (up0, up1, down0, down1)
  HolonomyReport report_up;
  HolonomyReport report_down;
};

inline ConditionalGate compose_conditional_gate(const ConditionalPlan& cp,
                                                int samples_per_segment = 64,
                                                double tolerance = 1e-8) {
  ConditionalGate out;
  out.report_up = extract_gate(cp.plan_up, samples_per_segment, tolerance);
  out.report_down = extract_gate(cp.plan_down, samples_per_segment, tolerance);
  if (!out.report_up.cyclic || !out.report_down.cyclic) {
    throw NotCyclic("compose_conditional_gate: sub-plan residual above tolerance");
  }
  const Eigen::Matrix2cd u_up =
      computational_gate(out.report_up.beta, cp.plan_up.initial_frame);
  const Eigen::Matrix2cd u_down =
      computational_gate(out.report_down.beta, cp.plan_down.initial_frame);

  out.gate4.setZero();
  out.gate4.block<2, 2>(0, 0) = u_up;
  out.gate4.block<2, 2>(2, 2) = u_down;

  // embed on the 6-dim space, identity on the auxiliary levels
  out.gate6 = Mat::Identity(6, 6);
  out.gate6.block(0, 0, 2, 2) = u_up;
  out.gate6.block(3, 3, 2, 2) = u_down;
  return out;
}

// Concurrence of a pure two-qubit state via the spin-flip formula
// C = 2 |a00 a11 - a01 a10|.
inline double concurrence(const Eigen::Vector4cd& psi) {
  return 2.0 * std::abs(psi(0) * psi(3) - psi(1) * psi(2));
}

struct EntanglementResult {
  bool entangling = false;
  double measure = 0.0;
};

// Probes the gate with the four product states |+->(x)|+->; a local (product)
// gate leaves all four unentangled.
inline EntanglementResult is_entangling(const Eigen::Matrix4cd& gate) {
  if (!is_unitary(gate, 1e-8)) {
    throw InvalidOperator("is_entangling: gate is not unitary");
  }
  const double s = 1.0 / std::sqrt(2.0);
  EntanglementResult res;
  for (double sn : {1.0, -1.0}) {
    for (double se : {1.0, -1.0}) {
      Eigen::Vector4cd probe;
      probe << s * s, s * s * se, s * s * sn, s * s * sn * se;
      res.measure = std::max(res.measure,
                             concurrence((gate * probe).eval()));
    }
  }
  res.entangling = res.measure > 1e-6;
  return res;
}

}  // namespace holoq

#endif
