#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <numeric>

#include "snowline/modulus.hpp"

using namespace snowline;

namespace {

ProductSpace plane() { return ProductSpace(LineMetricSpace(ConstructionParams::defaults(16)), 2); }

GridDiscretization unit_square_grid(const ProductSpace& ps, int res) {
  BoxContinuum box{{2.0, 3.0}, {{0.0, 1.0}}};
  return make_grid(ps, box, {res, res});
}

std::vector<Curve> horizontal_rows(const GridDiscretization& grid) {
  // one t-direction crossing per v-row
  std::vector<Curve> out;
  const Interval& iv = grid.box.v_ranges[0];
  const double h = iv.length() / grid.resolution[1];
  for (int i = 0; i < grid.resolution[1]; ++i) {
    Curve c;
    c.vertices = {make_point(grid.box.t_range.lo, {iv.lo + (i + 0.5) * h}),
                  make_point(grid.box.t_range.hi, {iv.lo + (i + 0.5) * h})};
    out.push_back(c);
  }
  return out;
}

}  // namespace

TEST_CASE("curve segment lengths") {
  const auto ps = plane();
  const auto& line = ps.line();
  const int n = 2;
  Curve vertical;
  vertical.vertices = {make_point(line.a(n), {0.0}), make_point(line.a(n), {line.s(n)})};
  auto lens = curve_segment_lengths(ps, vertical);
  REQUIRE(lens.size() == 1);
  CHECK(lens[0] == Catch::Approx(line.s(n)).epsilon(1e-12));

  Curve across;
  across.vertices = {make_point(line.a(n), {0.0}), make_point(line.b(n), {0.0})};
  CHECK(curve_segment_lengths(ps, across)[0] ==
        Catch::Approx(line.s(n) * line.slope(n)).epsilon(1e-12));

  Curve diag;
  diag.vertices = {make_point(2.0, {0.0}), make_point(3.0, {1.0}), make_point(3.0, {2.0})};
  lens = curve_segment_lengths(ps, diag);
  REQUIRE(lens.size() == 2);
  CHECK(lens[0] == Catch::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(lens[1] == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("grid weights conserve the measure") {
  const auto ps = plane();
  const auto& line = ps.line();
  const int n = 3;
  BoxContinuum box{{line.a(n), line.b(n)}, {{0.0, line.s(n)}}};
  GridDiscretization grid = make_grid(ps, box, {16, 16});
  const double total = std::accumulate(grid.weight.begin(), grid.weight.end(), 0.0);
  CHECK(total == Catch::Approx(ps.measure_mud(box)).epsilon(1e-9));
  // t-slices uniform in mu_1
  const double slice = ps.line().measure_mu1(box.t_range.lo, box.t_range.hi) / 16;
  for (int j = 0; j < 16; ++j)
    CHECK(ps.line().measure_mu1(grid.t_edges[j], grid.t_edges[j + 1]) ==
          Catch::Approx(slice).epsilon(1e-9));

  // a box straddling flat and snowflaked territory still partitions evenly
  BoxContinuum wide{{line.a(2) - 0.01, line.b(2) + 0.01}, {{0.0, 1.0}}};
  GridDiscretization wgrid = make_grid(ps, wide, {32, 4});
  const double wslice = ps.line().measure_mu1(wide.t_range.lo, wide.t_range.hi) / 32;
  for (int j = 0; j < 32; ++j)
    CHECK(ps.line().measure_mu1(wgrid.t_edges[j], wgrid.t_edges[j + 1]) ==
          Catch::Approx(wslice).epsilon(1e-9));
}

TEST_CASE("curve integrals") {
  const auto ps = plane();
  const auto& line = ps.line();
  const int n = 2;
  const double sn = line.s(n);
  BoxContinuum box{{line.a(n), line.b(n)}, {{0.0, sn}}};
  GridDiscretization grid = make_grid(ps, box, {8, 8});

  Curve vertical;
  const double tmid = 0.5 * (grid.t_edges[3] + grid.t_edges[4]);
  vertical.vertices = {make_point(tmid, {0.0}), make_point(tmid, {sn})};

  std::fill(grid.density.begin(), grid.density.end(), 1.0 / sn);
  CHECK(curve_integral(ps, grid, vertical) == Catch::Approx(1.0).epsilon(1e-12));
  std::fill(grid.density.begin(), grid.density.end(), 0.0);
  CHECK(curve_integral(ps, grid, vertical) == 0.0);

  // t-direction segment across I_n accumulates mu_1 length
  Curve across;
  across.vertices = {make_point(line.a(n), {sn / 2}), make_point(line.b(n), {sn / 2})};
  std::fill(grid.density.begin(), grid.density.end(), 1.0);
  CHECK(curve_integral(ps, grid, across) ==
        Catch::Approx(line.s(n) * line.slope(n)).epsilon(1e-9));

  // out-of-box curves are rejected
  Curve outside;
  outside.vertices = {make_point(line.a(n), {0.0}), make_point(line.a(n), {2 * sn})};
  CHECK_THROWS_AS(curve_integral(ps, grid, outside), std::invalid_argument);

  // admissibility report
  std::fill(grid.density.begin(), grid.density.end(), 1.0 / sn);
  const auto rep = check_admissible(ps, grid, {vertical}, 1e-9);
  CHECK(rep.admissible);
  CHECK(rep.worst_curve_integral == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("analytic modulus bounds") {
  const auto ps = plane();
  for (int n : {2, 3, 6}) {
    const auto bounds = analytic_modulus_bounds(ps, n);
    CHECK(bounds.lower == Catch::Approx(n + 2.0).epsilon(1e-9));
    CHECK(bounds.exact_candidate == Catch::Approx(bounds.lower).epsilon(1e-12));
  }
  // independent of the ambient dimension
  for (int d : {3, 4}) {
    ProductSpace psd(LineMetricSpace(ConstructionParams::defaults(16)), d);
    CHECK(analytic_modulus_bounds(psd, 4).lower == Catch::Approx(6.0).epsilon(1e-9));
    CHECK(analytic_modulus_bounds(psd, 4).exact_candidate ==
          Catch::Approx(6.0).epsilon(1e-9));
  }
}

TEST_CASE("solver reproduces the single-curve closed form") {
  const auto ps = plane();
  BoxContinuum box{{2.0, 4.0}, {{0.0, 1.0}}};
  GridDiscretization grid = make_grid(ps, box, {8, 8});
  Curve c;
  c.vertices = {make_point(2.0, {0.5625}), make_point(4.0, {0.5625})};
  const double kappa = grid.weight[0] / (2.0 / 8);  // cell weight per unit length
  for (double p : {2.0, 3.0}) {
    GridDiscretization g = grid;
    const auto sol = solve_modulus(ps, g, {c}, p, 1000, 1e-12);
    CHECK(sol.converged);
    const double expect = kappa * std::pow(2.0, 1.0 - p);
    CHECK(sol.value == Catch::Approx(expect).epsilon(1e-9));
    CHECK(sol.duality_gap >= -1e-12);
    CHECK(sol.duality_gap <= 1e-9 * expect);
  }
}

TEST_CASE("solver hits the unit square modulus") {
  const auto ps = plane();
  GridDiscretization grid = unit_square_grid(ps, 64);
  const auto family = horizontal_rows(grid);
  const auto sol = solve_modulus(ps, grid, family, 2.0, 100000, 1e-9);
  CHECK(sol.converged);
  CHECK(sol.value == Catch::Approx(1.0).epsilon(0.02));
  CHECK(sol.lower_bound <= sol.value + 1e-12);
  const auto rep = check_admissible(ps, grid, family, 1e-6);
  CHECK(rep.admissible);
}

TEST_CASE("solver brackets the analytic value on the snowflaked box") {
  const auto ps = plane();
  const auto& line = ps.line();
  for (int n : {2, 4}) {
    BoxContinuum box{{line.a(n), line.b(n)}, {{0.0, line.s(n)}}};
    GridDiscretization grid = make_grid(ps, box, {32, 32});
    VerticalFamily fam = make_vertical_family(grid, n);
    const auto curves = fam.curves(box.v_ranges[0]);
    CHECK(curves.size() == 32);
    const auto sol = solve_modulus(ps, grid, curves, 2.0, 100000, 1e-9);
    const double target = analytic_modulus_bounds(ps, n).lower;
    CHECK(sol.converged);
    CHECK(sol.value == Catch::Approx(target).epsilon(0.05));
  }
}

TEST_CASE("solver properties: monotone families, weight scaling, non-convergence") {
  const auto ps = plane();
  GridDiscretization grid = unit_square_grid(ps, 16);
  auto family = horizontal_rows(grid);

  // nested families never decrease the modulus
  std::vector<Curve> half(family.begin(), family.begin() + 8);
  GridDiscretization g1 = grid, g2 = grid;
  const double v_half = solve_modulus(ps, g1, half, 2.0, 100000, 1e-10).value;
  const double v_full = solve_modulus(ps, g2, family, 2.0, 100000, 1e-10).value;
  CHECK(v_full >= v_half - 1e-9);

  // scaling every weight by kappa scales the energy by kappa
  GridDiscretization scaled = grid;
  for (double& w : scaled.weight) w *= 3.0;
  const double v_scaled = solve_modulus(ps, scaled, family, 2.0, 100000, 1e-10).value;
  CHECK(v_scaled == Catch::Approx(3.0 * v_full).epsilon(1e-9));

  // diagonal curve shares cells with a row: still converges with overlap
  Curve diag;
  diag.vertices = {make_point(2.0, {0.0}), make_point(3.0, {1.0})};
  auto overlapping = family;
  overlapping.push_back(diag);
  GridDiscretization g3 = grid;
  const auto sol = solve_modulus(ps, g3, overlapping, 2.0, 100000, 1e-9);
  CHECK(sol.converged);
  CHECK(sol.value >= v_full - 1e-9);

  // iteration starvation reports non-convergence with best bounds
  GridDiscretization g4 = grid;
  const auto starved = solve_modulus(ps, g4, family, 2.0, 3, 1e-9);
  CHECK_FALSE(starved.converged);
  CHECK(starved.lower_bound >= 0.0);

  CHECK_THROWS_AS(solve_modulus(ps, g4, family, 1.0, 10, 1e-9), std::invalid_argument);
  Curve degenerate;
  degenerate.vertices = {make_point(2.5, {0.5}), make_point(2.5, {0.5})};
  CHECK_THROWS_AS(solve_modulus(ps, g4, {degenerate}, 2.0, 10, 1e-9), std::invalid_argument);
}

TEST_CASE("refinement study: values stable across resolutions") {
  const auto ps = plane();
  const auto& line = ps.line();
  const int n = 3;
  const double target = analytic_modulus_bounds(ps, n).lower;
  for (int res : {16, 32, 64}) {
    BoxContinuum box{{line.a(n), line.b(n)}, {{0.0, line.s(n)}}};
    GridDiscretization grid = make_grid(ps, box, {res, res});
    VerticalFamily fam = make_vertical_family(grid, n);
    const auto sol = solve_modulus(ps, grid, fam.curves(box.v_ranges[0]), 2.0, 100000, 1e-10);
    CHECK(sol.converged);
    CHECK(sol.value == Catch::Approx(target).epsilon(1e-6));
  }
  for (int res : {16, 32, 64}) {
    GridDiscretization grid = unit_square_grid(ps, res);
    const auto sol = solve_modulus(ps, grid, horizontal_rows(grid), 2.0, 100000, 1e-10);
    CHECK(sol.converged);
    CHECK(sol.value == Catch::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("Fubini-Hoelder identity on the measure level") {
  for (int d : {2, 3}) {
    ProductSpace ps(LineMetricSpace(ConstructionParams::defaults(12)), d);
    const auto& line = ps.line();
    for (int n : {2, 5}) {
      const double sn = line.s(n);
      BoxContinuum box{{line.a(n), line.b(n)}, {}};
      box.v_ranges.assign(static_cast<std::size_t>(d - 1), Interval{0.0, sn});
      const double energy = std::pow(sn, -d) * ps.measure_mud(box);
      const double lower = line.segment_length(line.a(n), line.b(n)) / sn;
      CHECK(energy == Catch::Approx(lower).epsilon(1e-12));
    }
  }
}

TEST_CASE("divergence experiment rows") {
  const auto ps = plane();
  const auto rows = modulus_divergence_experiment(ps, {2, 3, 4}, 32, 2.0);
  REQUIRE(rows.size() == 3);
  double prev = 0.0;
  for (const auto& row : rows) {
    CHECK(row.converged);
    CHECK(row.delta_ratio == 1.0);
    CHECK(row.analytic_lower == Catch::Approx(row.n + 2.0).epsilon(1e-9));
    CHECK(row.solved_value >= 0.9 * row.analytic_lower);
    CHECK(row.solved_value <= 1.1 * row.analytic_lower);
    CHECK(row.analytic_lower > prev);
    prev = row.analytic_lower;
  }
  const auto control = modulus_flat_control_row(ps, 0.0625, 32, 2.0);
  CHECK(control.converged);
  CHECK(control.solved_value == Catch::Approx(1.0).epsilon(0.05));
  CHECK(control.delta_ratio == 1.0);
}

TEST_CASE("three-dimensional vertical family") {
  ProductSpace ps(LineMetricSpace(ConstructionParams::defaults(8)), 3);
  const auto rows = modulus_divergence_experiment(ps, {2}, 8, 3.0);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].converged);
  CHECK(rows[0].analytic_lower == Catch::Approx(4.0).epsilon(1e-9));
  CHECK(rows[0].solved_value >= 0.9 * rows[0].analytic_lower);
  CHECK(rows[0].solved_value <= 1.1 * rows[0].analytic_lower);
  CHECK(rows[0].delta_ratio == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("density dump writes a parseable header") {
  const auto ps = plane();
  GridDiscretization grid = unit_square_grid(ps, 4);
  std::fill(grid.density.begin(), grid.density.end(), 0.25);
  const auto path = std::filesystem::temp_directory_path() / "snowline_density_test.bin";
  write_density_dump(grid, path.string());
  std::ifstream in(path, std::ios::binary);
  char magic[4];
  in.read(magic, 4);
  CHECK(std::string(magic, 4) == "SNWD");
  std::uint32_t version = 0, dim = 0;
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&dim), 4);
  CHECK(version == 1);
  CHECK(dim == 2);
  std::filesystem::remove(path);
}
