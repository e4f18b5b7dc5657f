#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "locaudit/errors.hpp"
#include "locaudit/hardy.hpp"
#include "locaudit/rng.hpp"

using namespace locaudit;

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Largest attainable P(D1=+1, B2=-1) under the three chain constraints:
/// (5 sqrt 5 - 11) / 2.
const double kAnalyticOptimum = (5.0 * std::sqrt(5.0) - 11.0) / 2.0;

HardyParams nondegenerate_params() {
  // Arbitrary but safely nondegenerate: same-side angles well separated,
  // state away from every eigenstate.
  return HardyParams{{1.1, 2.0, 0.7}, {0.3, 1.5, 2.2, 0.9}};
}

StateVector product_state(double gamma, double delta) {
  return StateVector({Complex{std::cos(gamma / 2) * std::cos(delta / 2), 0.0},
                      Complex{std::cos(gamma / 2) * std::sin(delta / 2), 0.0},
                      Complex{std::sin(gamma / 2) * std::cos(delta / 2), 0.0},
                      Complex{std::sin(gamma / 2) * std::sin(delta / 2), 0.0}});
}

bool same_config(const HardyConfiguration& a, const HardyConfiguration& b) {
  if (!(a.psi == b.psi)) return false;
  for (int k = 0; k < 4; ++k)
    if (max_abs_diff(a.observables()[k]->matrix(), b.observables()[k]->matrix()) != 0.0)
      return false;
  return true;
}

}  // namespace

TEST_CASE("hyperspherical state parametrization round-trips") {
  const StateVector psi = state_from_angles({0.9, 2.1, 4.4});
  CHECK(psi.dim() == 4);
  CHECK(psi.norm_squared() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(psi.amplitudes()[0].real() == doctest::Approx(std::cos(0.9)).epsilon(1e-14));
  CHECK(psi.amplitudes()[3].real() ==
        doctest::Approx(std::sin(0.9) * std::sin(2.1) * std::sin(4.4)).epsilon(1e-14));

  SplitMix64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    std::array<double, 4> x{};
    double n2 = 0.0;
    for (double& c : x) {
      c = rng.next_in(-1.0, 1.0);
      n2 += c * c;
    }
    for (double& c : x) c /= std::sqrt(n2);

    const StateVector back = state_from_angles(angles_from_state(x));
    for (int k = 0; k < 4; ++k) {
      CHECK(back.amplitudes()[k].imag() == 0.0);
      CHECK(back.amplitudes()[k].real() == doctest::Approx(x[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("planar observables live on the z-x Bloch circle") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const double theta = rng.next_in(-6.0, 6.0);
    const ComplexMatrix expected =
        Complex{std::cos(theta), 0.0} * pauli_z() + Complex{std::sin(theta), 0.0} * pauli_x();
    CHECK(max_abs_diff(planar_observable(theta), expected) < 1e-15);
    CHECK(max_abs_diff(planar_observable(theta), planar_observable(theta + 2.0 * kPi)) < 1e-14);
  }
}

TEST_CASE("build_config realizes the parameters") {
  const HardyParams params = nondegenerate_params();
  const HardyConfiguration config = build_config(params);

  CHECK(config.psi == state_from_angles(params.state_angles));
  CHECK(max_abs_diff(config.d1.matrix(),
                     tensor_product(planar_observable(0.3), ComplexMatrix::identity(2))) == 0.0);
  CHECK(max_abs_diff(config.b2.matrix(),
                     tensor_product(ComplexMatrix::identity(2), planar_observable(0.9))) == 0.0);
  CHECK(config.d1.region() == Region::Alpha);
  CHECK(config.d2.region() == Region::Alpha);
  CHECK(config.b1.region() == Region::Beta);
  CHECK(config.b2.region() == Region::Beta);
  CHECK(config.by_label("D2").label() == "D2");
  CHECK_THROWS_AS((void)config.by_label("D3"), UnknownLabel);
}

TEST_CASE("build_config rejects degenerate parameters") {
  // Same-side angles equal mod pi make the pair commute.
  HardyParams equal_d = nondegenerate_params();
  equal_d.meas_angles[1] = equal_d.meas_angles[0];
  CHECK_THROWS_AS((void)build_config(equal_d), DegenerateParams);

  HardyParams pi_apart = nondegenerate_params();
  pi_apart.meas_angles[3] = pi_apart.meas_angles[2] + kPi;
  CHECK_THROWS_AS((void)build_config(pi_apart), DegenerateParams);

  // |00> is an eigenstate of M(0) on the first factor.
  HardyParams eigen = nondegenerate_params();
  eigen.state_angles = {0.0, 0.0, 0.0};
  eigen.meas_angles[0] = 0.0;
  CHECK_THROWS_AS((void)build_config(eigen), DegenerateParams);
}

TEST_CASE("hardy_score with zero penalty is the target probability") {
  const HardyConfiguration config = build_config(nondegenerate_params());
  CHECK(hardy_score(config, 0.0) ==
        joint_probability(config.psi, config.d1, Sign::Plus, config.b2, Sign::Minus));

  // The penalty subtracts exactly the mass on the three chain-violating pairs.
  const double mass =
      joint_probability(config.psi, config.d1, Sign::Plus, config.b1, Sign::Minus) +
      joint_probability(config.psi, config.b1, Sign::Plus, config.d2, Sign::Minus) +
      joint_probability(config.psi, config.d2, Sign::Plus, config.b2, Sign::Minus);
  CHECK(hardy_score(config, 100.0) ==
        doctest::Approx(hardy_score(config, 0.0) - 100.0 * mass).epsilon(1e-12));
}

// Independent closed-form oracle on product states: for psi = u(g) (x) u(d),
// P(A=+1, B=-1) factorizes into cos^2((g-ta)/2) sin^2((d-tb)/2).
TEST_CASE("joint probabilities match the product-state closed form") {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const double g = rng.next_in(0.0, 2.0 * kPi), d = rng.next_in(0.0, 2.0 * kPi);
    const double ta = rng.next_in(0.0, 2.0 * kPi), tb = rng.next_in(0.0, 2.0 * kPi);
    const auto a = validate_observable(
        tensor_product(planar_observable(ta), ComplexMatrix::identity(2)), Region::Alpha, "A");
    const auto b = validate_observable(
        tensor_product(ComplexMatrix::identity(2), planar_observable(tb)), Region::Beta, "B");
    const StateVector psi = product_state(g, d);

    const double expected = std::pow(std::cos((g - ta) / 2), 2) * std::pow(std::sin((d - tb) / 2), 2);
    CHECK(joint_probability(psi, a, Sign::Plus, b, Sign::Minus) ==
          doctest::Approx(expected).epsilon(1e-11));
  }
}

// On a product state the chain constraints leave no room: any configuration
// whose penalized score is positive at weight 100 must violate a constraint
// by at least score/100, and the optimum over product states is 0. A random
// sweep checks that the penalized score never exceeds a tiny positive bound.
TEST_CASE("product states never approach the entangled optimum") {
  SplitMix64 rng(31);
  double best = -1e9;
  for (int trial = 0; trial < 400; ++trial) {
    const double g = rng.next_in(0.0, 2.0 * kPi), d = rng.next_in(0.0, 2.0 * kPi);
    HardyParams params;
    // Hyperspherical coordinates of u(g) (x) u(d) for g, d in (0, pi).
    params.state_angles = angles_from_state({std::cos(g / 2) * std::cos(d / 2),
                                             std::cos(g / 2) * std::sin(d / 2),
                                             std::sin(g / 2) * std::cos(d / 2),
                                             std::sin(g / 2) * std::sin(d / 2)});
    for (double& t : params.meas_angles) t = rng.next_in(0.0, 2.0 * kPi);
    try {
      best = std::max(best, hardy_score(build_config(params), 100.0));
    } catch (const DegenerateParams&) {
      continue;
    }
  }
  CHECK(best < kAnalyticOptimum / 2);
}

TEST_CASE("optimizer finds the analytic optimum deterministically") {
  const auto [config_a, report_a] = optimize_hardy(42);
  const auto [config_b, report_b] = optimize_hardy(42);

  CHECK(same_config(config_a, config_b));
  CHECK(report_a == report_b);
  CHECK(report_a.all_pass());

  const double score = report_a.by_id("q.iv").measured;
  CHECK(std::abs(score - kAnalyticOptimum) < 1e-6);

  // Independent restart counts land on the same optimum.
  OptimizeSettings few;
  few.restarts = 8;
  const auto [config_c, report_c] = optimize_hardy(1234, few);
  CHECK(std::abs(report_c.by_id("q.iv").measured - kAnalyticOptimum) < 1e-6);
}

TEST_CASE("optimizer rejects invalid settings and infeasible tolerances") {
  OptimizeSettings bad;
  bad.restarts = 0;
  CHECK_THROWS_AS((void)optimize_hardy(1, bad), Error);
  CHECK_THROWS_AS((void)optimize_hardy(1, bad), std::runtime_error);

  // No configuration reaches P(D1=+1, B2=-1) > 0.5, so demanding it is
  // infeasible.
  OptimizeSettings impossible;
  impossible.restarts = 2;
  impossible.tol = 0.5;
  CHECK_THROWS_AS((void)optimize_hardy(7, impossible), NoFeasibleConfig);
}

TEST_CASE("canonical configuration is certified at 1e-9") {
  const HardyConfiguration config = canonical_config();
  const ConditionReport report = verify_config(config, 1e-9);

  CHECK(report.all_pass());
  for (const ConditionEntry& e : report.entries) CHECK(e.pass);
  CHECK(report.by_id("q.ii").measured > 1e-6);
  CHECK(report.by_id("q.iv").measured > 0.08);
  CHECK(std::abs(report.by_id("q.iv").measured - kAnalyticOptimum) < 1e-12);

  // The frozen parameters reproduce it.
  CHECK(same_config(config, build_config(canonical_params())));
}

TEST_CASE("verify_config reports failures instead of throwing") {
  // Rotating B1 away breaks the two chain legs through it but nothing else.
  HardyParams bent = canonical_params();
  bent.meas_angles[2] += 0.3;
  const HardyConfiguration config = build_config(bent);
  const ConditionReport report = verify_config(config, 1e-9);

  CHECK_FALSE(report.all_pass());
  CHECK(report.by_id("q.i").pass);
  CHECK(report.by_id("q.ii").pass);
  CHECK_FALSE(report.by_id("q.iii.a").pass);
  CHECK_FALSE(report.by_id("q.iii.b").pass);
  CHECK(report.by_id("q.iii.c").pass);
  CHECK_THROWS_AS((void)report.by_id("nonexistent"), Error);
}

TEST_CASE("every optimizer output is certified") {
  for (std::uint64_t seed : {2u, 3u, 4u}) {
    OptimizeSettings settings;
    settings.restarts = 8;
    const auto [config, report] = optimize_hardy(seed, settings);
    CHECK(report.all_pass());
    CHECK(verify_config(config, 1e-9).all_pass());
    CHECK(report.by_id("q.iv").measured <= 0.0902);
  }
}
