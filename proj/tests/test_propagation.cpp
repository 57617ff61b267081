#include <catch2/catch_amalgamated.hpp>

#include "holoq/propagation.hpp"
#include "test_helpers.hpp"

using namespace holoq;
using holoq::testing::random_segment;
using holoq::testing::uniform;

namespace {

// first segment of the worked example: th1 = pi/3, eta1 = atan(4/3),
// laser phase 0, unit Rabi amplitude
SegmentSpec worked_segment1(const BrightFrame& frame = {kPi / 4, 0.0}) {
  const double eta1 = std::atan2(4.0, 3.0);
  const double theta1 = kPi / 3;
  SegmentSpec seg;
  seg.frame = frame;
  seg.omega = 1.0;
  seg.delta = 2.0 / std::tan(eta1);
  seg.laser_phase = 0.0;
  seg.tau = theta1 * std::sin(eta1);
  return seg;
}

}  // namespace

TEST_CASE("resonant pi pulse", "[propagation]") {
  SegmentSpec seg{{kPi / 4, 0.0}, 1.0, 0.0, 0.0, kPi};
  const Mat u = segment_propagator(seg);
  const auto [b, d] = bright_dark(seg.frame);
  Vec e = Vec::Zero(3);
  e(2) = 1.0;
  REQUIRE((u * b + b).norm() < 1e-12);
  REQUIRE((u * e + e).norm() < 1e-12);
  REQUIRE((u * d - d).norm() < 1e-12);
}

TEST_CASE("worked-example segment 1 bright-to-e amplitude", "[propagation]") {
  const SegmentSpec seg = worked_segment1();
  REQUIRE(seg.theta_angle() == Catch::Approx(kPi / 3));
  REQUIRE(seg.eta() == Catch::Approx(std::atan2(4.0, 3.0)));
  const Mat u = segment_propagator(seg);
  const auto [b, d] = bright_dark(seg.frame);
  Vec e = Vec::Zero(3);
  e(2) = 1.0;
  // |<e|U|b>| = sin(pi/3) * 4/5 = 2 sqrt(3) / 5
  REQUIRE(std::abs(e.dot(u * b)) ==
          Catch::Approx(2.0 * std::sqrt(3.0) / 5.0).epsilon(1e-10));

  // decompose of the evolved bright state in the segment frame
  const auto c = decompose((u * b).eval(), seg.frame);
  REQUIRE(std::abs(c.c_e) ==
          Catch::Approx(2.0 * std::sqrt(3.0) / 5.0).epsilon(1e-10));
}

TEST_CASE("free-evolution segment", "[propagation]") {
  SegmentSpec seg{{0.3, 0.0}, 0.0, 1.3, 0.0, 2.0};
  const Mat u = segment_propagator(seg);
  REQUIRE(std::abs(u(0, 0) - 1.0) < 1e-12);
  REQUIRE(std::abs(u(1, 1) - 1.0) < 1e-12);
  REQUIRE(std::abs(u(2, 2) - std::exp(cplx(0.0, -1.3 * 2.0))) < 1e-12);
}

TEST_CASE("closed form agrees with the spectral propagator", "[propagation]") {
  for (int i = 0; i < 1000; ++i) {
    SegmentSpec seg = random_segment();
    // keep theta <= 4 pi
    if (seg.theta_angle() > 4.0 * kPi) seg.tau = 4.0 * kPi / seg.effective_freq();
    REQUIRE((segment_propagator(seg) - segment_propagator_closed_form(seg)).norm() <
            1e-10);
  }
}

TEST_CASE("dark invariance and bright confinement along a segment", "[propagation]") {
  for (int i = 0; i < 30; ++i) {
    const SegmentSpec seg = random_segment();
    const auto [b, d] = bright_dark(seg.frame);
    const Mat h = hamiltonian(seg);
    for (int s = 0; s <= 16; ++s) {
      const Mat u = expm_hermitian(h, seg.tau * s / 16.0);
      REQUIRE(std::abs(std::abs(d.dot(u * d)) - 1.0) < 1e-10);
      REQUIRE(std::abs(d.dot(u * b)) < 1e-10);
    }
  }
}

TEST_CASE("compensated handoff", "[propagation]") {
  const auto basis = bright_dark({0.4, 0.2});

  SECTION("equal detunings: identity") {
    const auto out = compensated_handoff(basis, 0.9, 0.9, 1.3);
    REQUIRE((out.first - basis.first).norm() == 0.0);
    REQUIRE((out.second - basis.second).norm() == 0.0);
  }

  SECTION("worked example phase on the dark state") {
    const double tau = 0.837758040957278;
    const double delta1 = 0.4 * kPi / tau;
    const auto out = compensated_handoff(basis, delta1, 0.0, tau);
    const cplx expected = std::exp(cplx(0.0, -0.4 * kPi));
    REQUIRE((out.second - expected * basis.second).norm() < 1e-12);
  }

  SECTION("orthonormality preserved") {
    const auto out = compensated_handoff(basis, 1.7, -0.3, 0.9);
    REQUIRE(std::abs(out.first.norm() - 1.0) < 1e-12);
    REQUIRE(std::abs(out.first.dot(out.second)) < 1e-12);
  }
}

TEST_CASE("evolve_path on a single pi pulse", "[propagation]") {
  SegmentSpec seg{{kPi / 4, 0.0}, 1.0, 0.0, 0.0, kPi};
  const auto plan = PathPlan::from_segments({seg});
  const Trajectory traj = evolve_path(plan, 32);
  const auto [b, d] = bright_dark(seg.frame);
  REQUIRE((traj.back().basis_b + b).norm() < 1e-10);
  REQUIRE((traj.back().basis_d - d).norm() < 1e-10);
  REQUIRE((traj.back().projector - traj.front().projector).norm() < 1e-10);
}

TEST_CASE("trajectory basis stays orthonormal", "[propagation]") {
  const PathPlan plan = holoq::testing::random_matched_pair();
  const Trajectory traj = evolve_path(plan, 32);
  for (const auto& s : traj.samples) {
    REQUIRE(std::abs(s.basis_b.norm() - 1.0) < 1e-10);
    REQUIRE(std::abs(s.basis_d.norm() - 1.0) < 1e-10);
    REQUIRE(std::abs(s.basis_b.dot(s.basis_d)) < 1e-10);
  }
}

TEST_CASE("evolve_path validates input", "[propagation]") {
  SegmentSpec seg = random_segment();
  const auto plan = PathPlan::from_segments({seg});
  REQUIRE_THROWS_AS(evolve_path(plan, 1), InvalidArgument);
  REQUIRE_THROWS_AS(PathPlan::from_segments({}), InvalidPlan);
}
