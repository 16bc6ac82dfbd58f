#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "snowline/dimension.hpp"

using namespace snowline;

namespace {

const LineMetricSpace& default_line() {
  static LineMetricSpace space(ConstructionParams::defaults(64));
  return space;
}

// consecutive-cover oracle on a fine grid: walk as far as each piece allows
long dp_cover_count(const LineMetricSpace& line, int n, double r, double eps, int grid) {
  const double sn = line.s(n);
  const double W = sn * line.profile(n).phi_inverse(r / sn);
  long count = 0;
  double pos = 0.0;
  while (pos < W - 1e-15 * W) {
    // furthest grid point whose delta-gap stays within eps*r
    double best = pos;
    for (int g = grid; g >= 1; --g) {
      const double cand = std::min(W, pos + W * g / grid);
      if (cand <= pos) continue;
      if (line.delta_within(n, cand - pos) <= eps * r * (1 + 1e-12)) {
        best = cand;
        break;
      }
    }
    if (best <= pos) return -1;  // grid too coarse
    pos = best;
    ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("interval covering counts obey the covering function") {
  const auto& line = default_line();
  for (int n : {1, 2, 3, 8, 16, 32}) {
    const double inv_alpha = 1.0 / (1.0 - line.params().row(n).one_minus_alpha);
    for (double eps : {0.5, 0.25, 0.125}) {
      for (double fr : {1.0, 0.5, 0.1}) {
        const auto rep = covering_number_interval(line, n, fr * line.s(n), eps);
        CHECK(rep.count >= 1);
        CHECK(rep.bound == Catch::Approx(2.0 * std::pow(eps, -inv_alpha)).epsilon(1e-12));
        CHECK(static_cast<double>(rep.count) <= rep.bound);
      }
    }
  }
  // worst case at eps = 1/2, r = s_n
  const auto worst = covering_number_interval(line, 4, line.s(4), 0.5);
  CHECK(static_cast<double>(worst.count) <=
        2.0 * std::exp2(1.0 / (1.0 - line.params().row(4).one_minus_alpha)));
  // n = 1 has alpha = 3/4: bound 2 * 4^{4/3}
  const auto n1 = covering_number_interval(line, 1, line.s(1), 0.25);
  CHECK(n1.count <= 12);

  // fully linear regime behaves Euclidean: count = ceil(1/eps)
  const double phi_c1 = line.params().row(1).c * line.slope(1);
  const auto lin = covering_number_interval(line, 1, 0.9 * phi_c1 * line.s(1), 0.25);
  CHECK(lin.count == 4);

  CHECK_THROWS_AS(covering_number_interval(line, 1, 2 * line.s(1), 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(covering_number_interval(line, 1, line.s(1), 0.7), std::invalid_argument);
}

TEST_CASE("greedy cover matches the dynamic walk oracle") {
  const auto& line = default_line();
  for (int n : {1, 2, 5}) {
    for (double eps : {0.5, 0.25}) {
      for (double fr : {1.0, 0.4}) {
        const auto rep = covering_number_interval(line, n, fr * line.s(n), eps);
        const long dp = dp_cover_count(line, n, fr * line.s(n), eps, 4096);
        REQUIRE(dp > 0);
        CHECK(dp >= rep.count);
        CHECK(dp <= rep.count + 1);
      }
    }
  }
}

TEST_CASE("covering counts compose submultiplicatively") {
  const auto& line = default_line();
  for (int n : {2, 3, 7}) {
    for (double fr : {1.0, 0.5}) {
      const double r = fr * line.s(n);
      const double e1 = 0.5, e2 = 0.5;
      const long whole = covering_number_interval(line, n, r, e1 * e2).count;
      const long outer = covering_number_interval(line, n, r, e1).count;
      const long inner = covering_number_interval(line, n, e1 * r, e2).count;
      CHECK(whole <= outer * inner);
    }
  }
}

TEST_CASE("doubling estimates") {
  const auto& line = default_line();
  // flat region: a 4R segment needs exactly two R-balls
  CHECK(doubling_constant_estimate(line, Interval{1.5, 2.5}, {0.1}, 3) == 2);
  // snowflaked interval stays uniformly bounded
  const int n = 4;
  const long count =
      doubling_constant_estimate(line, Interval{line.a(n), line.b(n)}, {line.s(n) / 2}, 3);
  CHECK(count >= 1);
  CHECK(count <= 4);
  // flat product plane with axis-aligned sampling
  ProductSpace ps(LineMetricSpace(ConstructionParams::defaults(8)), 2);
  BoxContinuum region{{1.5, 2.5}, {{0.0, 1.0}}};
  CHECK(doubling_constant_estimate(ps, region, {0.1}, 2) <= 4);
}

TEST_CASE("assouad sweep brackets dimension one") {
  const auto& line = default_line();
  std::vector<int> ns;
  for (int n = 2; n <= 32; ++n) ns.push_back(n);
  const std::vector<double> fracs{1.0, 0.5, 0.1};
  const std::vector<double> ieps{0.5, 0.25, 0.125};
  const std::vector<double> feps{0.5, 0.25, 0.125, 1e-8, 1e-9};

  for (double beta : {1.05, 1.2, 2.0}) {
    const auto rows = assouad_dimension_estimate(line, {beta}, ns, fracs, ieps, feps);
    double worst = 0.0;
    for (const auto& row : rows) worst = std::max(worst, row.violation);
    CHECK(worst <= 1.0);
  }
  // below the dimension the flat region must eventually violate
  const auto rows = assouad_dimension_estimate(line, {0.9}, ns, fracs, ieps, feps);
  double worst = 0.0;
  for (const auto& row : rows)
    if (row.n == 0) worst = std::max(worst, row.violation);
  CHECK(worst > 1.0);
  // flat-region-only sampling at beta = 1 stays admissible
  const auto flat_rows = assouad_dimension_estimate(line, {1.0}, {}, fracs, ieps, feps);
  for (const auto& row : flat_rows) CHECK(row.violation <= 1.0);
}

TEST_CASE("radial contractibility") {
  const auto& line = default_line();
  CHECK(radial_contractibility_check(line, 2.0, 0.5, 16));
  const int n = 3;
  CHECK(radial_contractibility_check(line, 0.5 * (line.a(n) + line.b(n)), line.s(n), 24));
  std::mt19937_64 rng(53);
  for (int i = 0; i < 30; ++i) {
    const double p = -1.0 + 3.0 * oracles::u01(rng);
    const double r = 0.01 + oracles::u01(rng);
    CHECK(radial_contractibility_check(line, p, r, 12));
  }
  CHECK_THROWS_AS(radial_contractibility_check(line, 0.0, -1.0, 8), std::invalid_argument);
}

TEST_CASE("covering bound ingredient holds over the default table") {
  CHECK(covering_phi_c_inequality_gap(default_line()) <= 0.0);
}
