#include <catch2/catch_amalgamated.hpp>

#include "holoq/decoupling.hpp"
#include "holoq/two_qubit.hpp"
#include "test_helpers.hpp"

using namespace holoq;
using holoq::testing::random_segment;
using holoq::testing::uniform;

namespace {

PathPlan pi_pulse_plan(double theta_frame = 0.0) {
  SegmentSpec seg{{theta_frame, 0.0}, 1.0, 0.0, 0.0, kPi};
  return PathPlan::from_segments({seg});
}

// full 2 pi loop: cyclic with beta = 0
PathPlan identity_plan() {
  SegmentSpec seg{{0.0, 0.0}, 1.0, 0.0, 0.0, 2.0 * kPi};
  return PathPlan::from_segments({seg});
}

Eigen::Matrix2cd haar_unitary() {
  Eigen::Matrix2cd a;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      a(i, j) = cplx(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
    }
  }
  const Eigen::HouseholderQR<Eigen::Matrix2cd> qr(a);
  return qr.householderQ();
}

}  // namespace

TEST_CASE("conditional Hamiltonian block structure", "[twoqubit]") {
  SegmentSpec seg{{0.0, 0.0}, 1.0, 0.0, 0.0, 1.0};
  const Mat h = conditional_hamiltonian(Spin::up, seg);
  REQUIRE(h.rows() == 6);
  REQUIRE(std::abs(h(2, 0) - 1.0) < 1e-15);
  REQUIRE(h.block(3, 3, 3, 3).norm() == 0.0);
  REQUIRE(h.block(0, 3, 3, 3).norm() == 0.0);

  for (int i = 0; i < 20; ++i) {
    const Mat hr = conditional_hamiltonian(Spin::down, random_segment());
    REQUIRE(is_hermitian(hr));
    REQUIRE(hr.block(0, 0, 3, 3).norm() == 0.0);
  }
}

TEST_CASE("controlled-phase construction", "[twoqubit]") {
  ConditionalPlan cp{pi_pulse_plan(), identity_plan()};
  const ConditionalGate gate = compose_conditional_gate(cp);
  REQUIRE(gate.report_up.beta == Catch::Approx(kPi).margin(1e-9));
  REQUIRE(std::abs(gate.report_down.beta) < 1e-9);

  Eigen::Matrix4cd expected = Eigen::Matrix4cd::Identity();
  expected(0, 0) = -1.0;
  REQUIRE((gate.gate4 - expected).norm() < 1e-8);

  const EntanglementResult ent = is_entangling(gate.gate4);
  REQUIRE(ent.entangling);
  REQUIRE(ent.measure == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("equal blocks factorize", "[twoqubit]") {
  ConditionalPlan cp{pi_pulse_plan(kPi / 4), pi_pulse_plan(kPi / 4)};
  const ConditionalGate gate = compose_conditional_gate(cp);
  REQUIRE((gate.gate4.block<2, 2>(0, 0) - gate.gate4.block<2, 2>(2, 2)).norm() <
          1e-10);
  const EntanglementResult ent = is_entangling(gate.gate4);
  REQUIRE_FALSE(ent.entangling);
  REQUIRE(ent.measure < 1e-10);
}

TEST_CASE("blocks equal up to a global phase are local", "[twoqubit]") {
  const Eigen::Matrix2cd u = haar_unitary();
  Eigen::Matrix4cd gate = Eigen::Matrix4cd::Zero();
  gate.block<2, 2>(0, 0) = u;
  gate.block<2, 2>(2, 2) = std::exp(cplx(0.0, 1.234)) * u;
  const EntanglementResult ent = is_entangling(gate);
  REQUIRE_FALSE(ent.entangling);
  REQUIRE(ent.measure < 1e-12);
}

TEST_CASE("local products never flag as entangling", "[twoqubit]") {
  for (int i = 0; i < 100; ++i) {
    const Eigen::Matrix2cd u = haar_unitary();
    const Eigen::Matrix2cd v = haar_unitary();
    Eigen::Matrix4cd gate;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        gate.block<2, 2>(2 * a, 2 * b) = u(a, b) * v;
      }
    }
    REQUIRE_FALSE(is_entangling(gate).entangling);
  }
}

TEST_CASE("composed gate blocks pass the single-qubit conditions", "[twoqubit]") {
  const PathConstraints con{1.0, 100.0};
  auto matched = build_matched_pair(kPi / 3, std::atan2(4.0, 3.0), kPi / 2,
                                    Branch::principal, con);
  REQUIRE(matched.has_value());
  ConditionalPlan cp{*matched, pi_pulse_plan(0.0)};
  const ConditionalGate gate = compose_conditional_gate(cp);
  REQUIRE(gate.report_up.cyclic_residual < 1e-8);
  REQUIRE(gate.report_down.cyclic_residual < 1e-8);
  REQUIRE(gate.report_up.geometric_residual < 1e-8);

  // different blocks: entangling
  REQUIRE(is_entangling(gate.gate4).entangling);

  // off-spin blocks vanish
  REQUIRE(gate.gate4.block<2, 2>(0, 2).norm() == 0.0);
  REQUIRE(gate.gate6.block(0, 3, 3, 3).norm() == 0.0);
}

TEST_CASE("non-cyclic sub-plan is rejected", "[twoqubit]") {
  SegmentSpec half{{0.0, 0.0}, 1.0, 0.0, 0.0, kPi / 2};
  ConditionalPlan cp{PathPlan::from_segments({half}), identity_plan()};
  REQUIRE_THROWS_AS(compose_conditional_gate(cp), NotCyclic);
}

TEST_CASE("is_entangling rejects non-unitary input", "[twoqubit]") {
  Eigen::Matrix4cd bad = Eigen::Matrix4cd::Zero();
  REQUIRE_THROWS_AS(is_entangling(bad), InvalidOperator);
}

TEST_CASE("per-block decoupling preserves the composed gate", "[twoqubit]") {
  // 4-segment split of a matched pair, interleaved per spin block
  const PathConstraints con{1.0, 100.0};
  auto matched = build_matched_pair(kPi / 3, std::atan2(4.0, 3.0), kPi / 2,
                                    Branch::principal, con);
  REQUIRE(matched.has_value());
  std::vector<SegmentSpec> segs;
  for (const SegmentSpec& s : matched->segments) {
    SegmentSpec half = s;
    half.tau = s.tau / 2.0;
    segs.push_back(half);
    segs.push_back(half);
  }
  const PathPlan plan4 = PathPlan::from_segments(std::move(segs));
  const ProtectedSchedule sched = interleave(plan4);
  REQUIRE((protected_total(sched) - unprotected_total(plan4)).norm() < 1e-10);
}
