#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "snowline/profile.hpp"

using snowline::SnowflakeProfile;

// frozen 30-digit reference values (offline high-precision evaluation of the
// closed forms)
static constexpr double kL_half_quarter = 1.511857892036908908858066;
static constexpr double kPhi_quarter = 0.3779644730092272272145165;
static constexpr double kPhi_half_c001 = 0.7053278933842965835277992;
static constexpr double kL_08_05 = 1.045403575577487620075536;
static constexpr double kPhi_06 = 0.7367883976130072429513838;

TEST_CASE("slope constant matches the closed form") {
  SnowflakeProfile p(0.5, 0.25);
  CHECK(p.slope() == Catch::Approx(kL_half_quarter).epsilon(1e-14));
  CHECK(SnowflakeProfile(0.8, 0.5).slope() == Catch::Approx(kL_08_05).epsilon(1e-14));
  // c = 1 degenerates to the identity profile
  for (double alpha : {0.1, 0.5, 0.9}) {
    SnowflakeProfile ident(alpha, 1.0);
    CHECK(ident.slope() == 1.0);
    CHECK(ident.phi(0.37) == Catch::Approx(0.37).margin(1e-15));
  }
  // decreasing in c for fixed alpha
  double prev = SnowflakeProfile(0.5, 0.05).slope();
  for (double c : {0.1, 0.25, 0.5, 0.75, 1.0}) {
    const double cur = SnowflakeProfile(0.5, c).slope();
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK(SnowflakeProfile(0.5, 0.1).slope() > SnowflakeProfile(0.5, 0.25).slope());
}

TEST_CASE("phi endpoint and branch values") {
  SnowflakeProfile p(0.5, 0.25);
  CHECK(p.phi(0.0) == 0.0);
  CHECK(p.phi(1.0) == 1.0);
  CHECK(p.phi(0.25) == Catch::Approx(kPhi_quarter).epsilon(1e-14));
  CHECK(p.phi(0.6) == Catch::Approx(kPhi_06).epsilon(1e-14));
  CHECK_THROWS_AS(p.phi(-0.1), std::domain_error);
  CHECK_THROWS_AS(p.phi(1.1), std::domain_error);
  CHECK_THROWS_AS(SnowflakeProfile(1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(SnowflakeProfile(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SnowflakeProfile(0.5, 1.5), std::invalid_argument);
}

TEST_CASE("branch continuity and differentiability at c") {
  for (double alpha : {0.3, 0.5, 0.8}) {
    for (double c : {0.2, 0.4, 0.7}) {
      SnowflakeProfile p(alpha, c);
      // two-branch agreement at x = c within 4 ulps
      const double lin = p.slope() * c;
      const double shift = c * (1.0 - alpha);
      const double pow_branch = std::pow((c - shift) / (1.0 - shift), alpha);
      const double ulp = std::nextafter(std::max(lin, pow_branch), 2.0) -
                         std::max(lin, pow_branch);
      CHECK(std::abs(lin - pow_branch) <= 4 * ulp);
      // one-sided difference quotients agree
      auto f = [&](double x) { return p.phi(x); };
      const double left = oracles::one_sided_slope(f, c, -1);
      const double right = oracles::one_sided_slope(f, c, +1);
      CHECK(std::abs(left - right) <= 1e-8);
      CHECK(left == Catch::Approx(p.slope()).epsilon(1e-6));
    }
  }
}

TEST_CASE("inverse round-trips and matches the bisection oracle") {
  std::mt19937_64 rng(2024);
  SnowflakeProfile p(0.5, 0.25);
  CHECK(p.phi_inverse(0.0) == 0.0);
  CHECK(p.phi_inverse(1.0) == 1.0);
  CHECK(p.phi_inverse(p.phi(0.6)) == Catch::Approx(0.6).margin(1e-12));
  for (int i = 0; i < 2000; ++i) {
    const double alpha = 0.05 + 0.9 * oracles::u01(rng);
    const double c = 0.02 + 0.98 * oracles::u01(rng);
    SnowflakeProfile q(alpha, c);
    const double y = oracles::u01(rng);
    const double x = q.phi_inverse(y);
    CHECK(std::abs(q.phi(x) - y) <= 1e-12);
    CHECK(std::abs(q.phi_inverse(q.phi(x)) - x) <= 1e-12);
    CHECK(std::abs(x - oracles::bisect_inverse(q, y)) <= 1e-12);
  }
}

TEST_CASE("monotone, concave, dominates the identity") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 4000; ++i) {
    const double alpha = 0.05 + 0.9 * oracles::u01(rng);
    const double c = 0.02 + 0.98 * oracles::u01(rng);
    SnowflakeProfile p(alpha, c);
    double x = oracles::u01(rng), y = oracles::u01(rng), z = oracles::u01(rng);
    if (x > y) std::swap(x, y);
    if (y > z) std::swap(y, z);
    if (x > y) std::swap(x, y);
    if (z > y && y > x) {
      const double s1 = (p.phi(y) - p.phi(x)) / (y - x);
      const double s2 = (p.phi(z) - p.phi(y)) / (z - y);
      CHECK(s1 >= s2 - 1e-9 * std::max(1.0, s1));
    }
    if (y > x) CHECK(p.phi(y) > p.phi(x));
    CHECK(p.phi(x) >= x - 1e-12);
  }
}

TEST_CASE("submultiplicativity defect is nonnegative") {
  std::mt19937_64 rng(5);
  SnowflakeProfile p(0.5, 0.25);
  CHECK(p.submultiplicativity_defect(1.0, 0.37) == Catch::Approx(0.0).margin(1e-15));
  CHECK(p.submultiplicativity_defect(0.0, 0.8) == Catch::Approx(0.0).margin(1e-15));
  CHECK(p.submultiplicativity_defect(0.5, 0.5) >= 0.0);
  for (int i = 0; i < 20000; ++i) {
    const double alpha = 0.05 + 0.9 * oracles::u01(rng);
    const double c = 0.02 + 0.98 * oracles::u01(rng);
    SnowflakeProfile q(alpha, c);
    CHECK(q.submultiplicativity_defect(oracles::u01(rng), oracles::u01(rng)) >= -1e-12);
  }
}

TEST_CASE("concavity defect bound") {
  SnowflakeProfile p(0.5, 0.01);
  const auto [lhs, rhs] = p.concavity_defect_bound(0.5, 1.0);
  CHECK(lhs == Catch::Approx(2 * kPhi_half_c001 - 1).epsilon(1e-13));
  CHECK(rhs == Catch::Approx(2 - std::sqrt(2.0)).epsilon(1e-13));
  CHECK(lhs <= rhs);

  SnowflakeProfile q(0.5, 0.25);
  // linear regime: exact additivity
  const auto [l0, r0] = q.concavity_defect_bound(0.1, 0.2);
  CHECK(std::abs(l0) <= 1e-14);
  CHECK(r0 >= 0.0);
  const auto [l1, r1] = q.concavity_defect_bound(0.0, 0.9);
  CHECK(std::abs(l1) <= 1e-14);
  CHECK_THROWS_AS(q.concavity_defect_bound(0.6, 0.5), std::invalid_argument);

  std::mt19937_64 rng(11);
  for (int i = 0; i < 20000; ++i) {
    const double alpha = 0.05 + 0.9 * oracles::u01(rng);
    const double c = 0.02 + 0.98 * oracles::u01(rng);
    SnowflakeProfile w(alpha, c);
    const double x = oracles::u01(rng);
    const double t = x * oracles::u01(rng);
    const auto [l, r] = w.concavity_defect_bound(t, x);
    CHECK(l >= -1e-12);
    CHECK(l <= r + 1e-12);
    // x = 2c sits in both proof branches; spot the boundary explicitly
    if (2 * c <= 1.0) {
      const auto [lb, rb] = w.concavity_defect_bound(c, 2 * c);
      CHECK(lb >= -1e-12);
      CHECK(lb <= rb + 1e-12);
    }
  }
}

TEST_CASE("extreme constructions carry the slope without representable c") {
  // log-parameterized profile with c far below the double range
  auto p = SnowflakeProfile::from_complement(std::exp2(-9), -1179.92);
  CHECK(p.c() == 0.0);
  CHECK(p.slope() > 1.0);
  CHECK(p.phi(0.5) == Catch::Approx(std::pow(0.5, 1.0 - std::exp2(-9))).epsilon(1e-14));
  CHECK(p.phi(0.0) == 0.0);
  CHECK(p.phi(1.0) == 1.0);
  CHECK(p.phi_inverse(p.phi(0.3)) == Catch::Approx(0.3).margin(1e-12));
}
