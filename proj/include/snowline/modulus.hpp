#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "snowline/product_space.hpp"

namespace snowline {

/// Polyline curve in X_d; rectifiable with arclength measured in the product
/// metric (mu_1 derivative along t, Euclidean along v).
struct Curve {
  std::vector<ProductPoint> vertices;
};

namespace detail {

// record the parameter at which the segment a -> b crosses `edge`
inline void collect_crossings(double a, double b, double edge, std::vector<double>& ss) {
  if (b == a) return;
  const double s = (edge - a) / (b - a);
  if (s > 0.0 && s < 1.0) ss.push_back(s);
}

}  // namespace detail

/// X_d arclength of each polyline segment. The t-span is split at interval
/// endpoints so the mu_1 slope is constant per piece.
inline std::vector<double> curve_segment_lengths(const ProductSpace& space,
                                                 const Curve& curve) {
  if (curve.vertices.size() < 2)
    throw std::invalid_argument("curve_segment_lengths: need >= 2 vertices");
  const LineMetricSpace& line = space.line();
  std::vector<double> out;
  out.reserve(curve.vertices.size() - 1);
  for (std::size_t seg = 0; seg + 1 < curve.vertices.size(); ++seg) {
    const ProductPoint& P = curve.vertices[seg];
    const ProductPoint& Q = curve.vertices[seg + 1];
    double ve = 0.0;
    for (std::size_t ax = 0; ax < P.v.size(); ++ax) {
      const double dv = Q.v[ax] - P.v[ax];
      ve += dv * dv;
    }
    std::vector<double> cuts{0.0, 1.0};
    for (int n = 1; n <= line.n_max(); ++n) {
      detail::collect_crossings(P.t, Q.t, line.a(n), cuts);
      detail::collect_crossings(P.t, Q.t, line.b(n), cuts);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double len = 0.0;
    for (std::size_t q = 0; q + 1 < cuts.size(); ++q) {
      const double t0 = P.t + cuts[q] * (Q.t - P.t);
      const double t1 = P.t + cuts[q + 1] * (Q.t - P.t);
      const double mu = t0 == t1 ? 0.0
                                 : line.segment_length(std::min(t0, t1), std::max(t0, t1));
      const double frac = cuts[q + 1] - cuts[q];
      len += std::sqrt(mu * mu + frac * frac * ve);
    }
    out.push_back(len);
  }
  return out;
}

/// Axis partitioned discretization of a box: t-cells uniform in mu_1 length,
/// v-cells uniform in Lebesgue length. weight = mu_d of each cell; density =
/// the candidate admissible function rho, constant per cell.
struct GridDiscretization {
  BoxContinuum box;
  std::vector<int> resolution;   // size d (t axis first)
  std::vector<double> t_edges;   // resolution[0] + 1 edges
  std::vector<double> weight;    // flattened, t-major
  std::vector<double> density;

  int dim() const { return static_cast<int>(resolution.size()); }
  std::size_t cell_count() const { return weight.size(); }

  std::size_t flatten(const std::vector<int>& idx) const {
    std::size_t flat = 0;
    for (std::size_t ax = 0; ax < idx.size(); ++ax)
      flat = flat * static_cast<std::size_t>(resolution[ax]) + static_cast<std::size_t>(idx[ax]);
    return flat;
  }

  int t_cell(double t) const {
    const auto it = std::upper_bound(t_edges.begin(), t_edges.end(), t);
    int idx = static_cast<int>(it - t_edges.begin()) - 1;
    return std::clamp(idx, 0, resolution[0] - 1);
  }
  int v_cell(int axis, double v) const {  // axis in [1, d)
    const Interval& iv = box.v_ranges[static_cast<std::size_t>(axis - 1)];
    const double h = iv.length() / resolution[static_cast<std::size_t>(axis)];
    int idx = static_cast<int>(std::floor((v - iv.lo) / h));
    return std::clamp(idx, 0, resolution[static_cast<std::size_t>(axis)] - 1);
  }
};

namespace detail {

/// Partition of [t0,t1] into `res` cells of equal mu_1 length. Breakpoints at
/// interval endpoints keep every cell inside one constant-slope regime.
inline std::vector<double> mu1_uniform_partition(const LineMetricSpace& line, Interval t_range,
                                                 int res) {
  std::vector<double> brk{t_range.lo};
  for (int n = line.n_max(); n >= 1; --n)
    for (double e : {line.a(n), line.b(n)})
      if (e > t_range.lo && e < t_range.hi) brk.push_back(e);
  brk.push_back(t_range.hi);
  std::sort(brk.begin(), brk.end());
  brk.erase(std::unique(brk.begin(), brk.end()), brk.end());

  std::vector<double> cum(brk.size(), 0.0);
  for (std::size_t i = 1; i < brk.size(); ++i)
    cum[i] = cum[i - 1] + line.segment_length(brk[i - 1], brk[i]);
  const double total = cum.back();

  std::vector<double> edges(static_cast<std::size_t>(res) + 1);
  edges.front() = t_range.lo;
  edges.back() = t_range.hi;
  for (int j = 1; j < res; ++j) {
    const double target = total * j / res;
    const auto it = std::upper_bound(cum.begin(), cum.end(), target);
    const std::size_t i = std::min(brk.size() - 2, static_cast<std::size_t>(it - cum.begin()) - 1);
    const double slope = (cum[i + 1] - cum[i]) / (brk[i + 1] - brk[i]);
    edges[static_cast<std::size_t>(j)] = brk[i] + (target - cum[i]) / slope;
  }
  return edges;
}

}  // namespace detail

inline GridDiscretization make_grid(const ProductSpace& space, const BoxContinuum& box,
                                    const std::vector<int>& resolution) {
  if (static_cast<int>(resolution.size()) != box.dim() || box.dim() != space.dim())
    throw std::invalid_argument("make_grid: resolution/box dimension mismatch");
  for (int r : resolution)
    if (r < 1) throw std::invalid_argument("make_grid: resolution must be >= 1");
  GridDiscretization grid;
  grid.box = box;
  grid.resolution = resolution;
  grid.t_edges = detail::mu1_uniform_partition(space.line(), box.t_range, resolution[0]);

  std::size_t cells = 1;
  for (int r : resolution) cells *= static_cast<std::size_t>(r);
  grid.weight.assign(cells, 0.0);
  grid.density.assign(cells, 0.0);

  double v_volume = 1.0;
  for (std::size_t ax = 0; ax < box.v_ranges.size(); ++ax)
    v_volume *= box.v_ranges[ax].length() / resolution[ax + 1];
  const std::size_t per_slice = cells / static_cast<std::size_t>(resolution[0]);
  for (int j = 0; j < resolution[0]; ++j) {
    const double w = space.line().measure_mu1(grid.t_edges[static_cast<std::size_t>(j)],
                                              grid.t_edges[static_cast<std::size_t>(j) + 1]) *
                     v_volume;
    std::fill_n(grid.weight.begin() + static_cast<std::ptrdiff_t>(j * per_slice), per_slice, w);
  }
  return grid;
}

/// Sparse trace of a curve over a grid: (cell, arclength in cell) pairs.
struct TracedCurve {
  std::vector<std::pair<std::size_t, double>> cells;
  double length = 0.0;
};

inline TracedCurve trace_curve(const ProductSpace& space, const GridDiscretization& grid,
                               const Curve& curve) {
  if (curve.vertices.size() < 2) throw std::invalid_argument("trace_curve: need >= 2 vertices");
  const int d = grid.dim();
  const double pad = 1e-9;
  for (const ProductPoint& pt : curve.vertices) {
    if (static_cast<int>(pt.v.size()) != d - 1)
      throw std::invalid_argument("trace_curve: vertex dimension mismatch");
    const double tspan = std::max(1.0, std::abs(grid.box.t_range.hi));
    if (pt.t < grid.box.t_range.lo - pad * tspan || pt.t > grid.box.t_range.hi + pad * tspan)
      throw std::invalid_argument("trace_curve: curve leaves the grid box (t)");
    for (std::size_t ax = 0; ax < pt.v.size(); ++ax) {
      const Interval& iv = grid.box.v_ranges[ax];
      const double span = std::max(1.0, std::abs(iv.hi));
      if (pt.v[ax] < iv.lo - pad * span || pt.v[ax] > iv.hi + pad * span)
        throw std::invalid_argument("trace_curve: curve leaves the grid box (v)");
    }
  }

  std::vector<std::pair<std::size_t, double>> raw;
  const LineMetricSpace& line = space.line();
  for (std::size_t seg = 0; seg + 1 < curve.vertices.size(); ++seg) {
    const ProductPoint& P = curve.vertices[seg];
    const ProductPoint& Q = curve.vertices[seg + 1];
    std::vector<double> ss{0.0, 1.0};
    for (double e : grid.t_edges) detail::collect_crossings(P.t, Q.t, e, ss);
    // split at interval endpoints so the mu_1 slope is constant per piece
    for (int n = 1; n <= line.n_max(); ++n) {
      detail::collect_crossings(P.t, Q.t, line.a(n), ss);
      detail::collect_crossings(P.t, Q.t, line.b(n), ss);
    }
    for (int ax = 1; ax < d; ++ax) {
      const Interval& iv = grid.box.v_ranges[static_cast<std::size_t>(ax - 1)];
      const double h = iv.length() / grid.resolution[static_cast<std::size_t>(ax)];
      for (int j = 1; j < grid.resolution[static_cast<std::size_t>(ax)]; ++j)
        detail::collect_crossings(P.v[static_cast<std::size_t>(ax - 1)],
                                  Q.v[static_cast<std::size_t>(ax - 1)], iv.lo + j * h, ss);
    }
    std::sort(ss.begin(), ss.end());
    ss.erase(std::unique(ss.begin(), ss.end()), ss.end());

    std::vector<int> idx(static_cast<std::size_t>(d));
    for (std::size_t q = 0; q + 1 < ss.size(); ++q) {
      const double s0 = ss[q], s1 = ss[q + 1], sm = 0.5 * (s0 + s1);
      const double t0 = P.t + s0 * (Q.t - P.t);
      const double t1 = P.t + s1 * (Q.t - P.t);
      const double tm = P.t + sm * (Q.t - P.t);
      double mu = t0 == t1 ? 0.0 : line.segment_length(std::min(t0, t1), std::max(t0, t1));
      double ve = 0.0;
      idx[0] = grid.t_cell(tm);
      for (int ax = 1; ax < d; ++ax) {
        const double dv = (s1 - s0) * (Q.v[static_cast<std::size_t>(ax - 1)] -
                                       P.v[static_cast<std::size_t>(ax - 1)]);
        ve += dv * dv;
        const double vm = P.v[static_cast<std::size_t>(ax - 1)] +
                          sm * (Q.v[static_cast<std::size_t>(ax - 1)] -
                                P.v[static_cast<std::size_t>(ax - 1)]);
        idx[static_cast<std::size_t>(ax)] = grid.v_cell(ax, vm);
      }
      const double len = ve == 0.0 ? mu : (mu == 0.0 ? std::sqrt(ve) : std::sqrt(mu * mu + ve));
      if (len > 0.0) raw.emplace_back(grid.flatten(idx), len);
    }
  }

  std::sort(raw.begin(), raw.end());
  TracedCurve out;
  for (const auto& [cell, len] : raw) {
    if (!out.cells.empty() && out.cells.back().first == cell)
      out.cells.back().second += len;
    else
      out.cells.emplace_back(cell, len);
    out.length += len;
  }
  return out;
}

/// Integral of the grid density along a curve.
inline double curve_integral(const ProductSpace& space, const GridDiscretization& grid,
                             const Curve& curve) {
  TracedCurve traced = trace_curve(space, grid, curve);
  double acc = 0.0;
  for (const auto& [cell, len] : traced.cells) acc += grid.density[cell] * len;
  return acc;
}

struct AdmissibilityReport {
  bool admissible = false;
  double worst_curve_integral = 0.0;
};

/// admissible iff every sampled curve integrates the density to >= 1 - tol.
inline AdmissibilityReport check_admissible(const ProductSpace& space,
                                            const GridDiscretization& grid,
                                            const std::vector<Curve>& family, double tol) {
  if (family.empty()) throw std::invalid_argument("check_admissible: empty family");
  AdmissibilityReport rep;
  rep.worst_curve_integral = std::numeric_limits<double>::infinity();
  for (const Curve& c : family)
    rep.worst_curve_integral = std::min(rep.worst_curve_integral, curve_integral(space, grid, c));
  rep.admissible = rep.worst_curve_integral >= 1.0 - tol;
  return rep;
}

/// Analytic modulus bounds for the vertical family over
/// I_n x [0,s_n]^{d-1}: the Fubini + Hoelder lower bound s_n^{-1} ell(I_n)
/// and the energy of the constant density 1/s_n, which attains it.
struct AnalyticModulusBounds {
  double lower = 0.0;
  double exact_candidate = 0.0;
};

inline AnalyticModulusBounds analytic_modulus_bounds(const ProductSpace& space, int n) {
  const LineMetricSpace& line = space.line();
  if (n < 1 || n > line.n_max())
    throw std::invalid_argument("analytic_modulus_bounds: bad interval index");
  const double sn = line.s(n);
  AnalyticModulusBounds out;
  out.lower = line.segment_length(line.a(n), line.b(n)) / sn;
  BoxContinuum box;
  box.t_range = {line.a(n), line.b(n)};
  box.v_ranges.assign(static_cast<std::size_t>(space.dim() - 1), Interval{0.0, sn});
  out.exact_candidate = std::pow(sn, -space.dim()) * space.measure_mud(box);
  return out;
}

/// The family of straight lines joining E_n and F_n orthogonally: one
/// segment per (t-cell, transverse v-cell) of the grid, moving along the
/// first v axis.
struct VerticalFamily {
  int n = 0;
  int dim = 0;
  std::vector<double> t_samples;
  std::vector<std::vector<double>> v_samples;  // tail coordinates (axes 2..d-1)

  std::vector<Curve> curves(const Interval& moving_range) const {
    std::vector<Curve> out;
    out.reserve(t_samples.size() * v_samples.size());
    for (double t : t_samples)
      for (const std::vector<double>& tail : v_samples) {
        Curve c;
        std::vector<double> lo{moving_range.lo};
        std::vector<double> hi{moving_range.hi};
        lo.insert(lo.end(), tail.begin(), tail.end());
        hi.insert(hi.end(), tail.begin(), tail.end());
        c.vertices = {ProductPoint{t, lo}, ProductPoint{t, hi}};
        out.push_back(std::move(c));
      }
    return out;
  }
};

inline VerticalFamily make_vertical_family(const GridDiscretization& grid, int n) {
  VerticalFamily fam;
  fam.n = n;
  fam.dim = grid.dim();
  for (int j = 0; j < grid.resolution[0]; ++j)
    fam.t_samples.push_back(0.5 * (grid.t_edges[static_cast<std::size_t>(j)] +
                                   grid.t_edges[static_cast<std::size_t>(j) + 1]));
  std::vector<std::vector<double>> tails{{}};
  for (int ax = 2; ax < grid.dim(); ++ax) {
    const Interval& iv = grid.box.v_ranges[static_cast<std::size_t>(ax - 1)];
    const int res = grid.resolution[static_cast<std::size_t>(ax)];
    const double h = iv.length() / res;
    std::vector<std::vector<double>> next;
    for (const auto& t : tails)
      for (int j = 0; j < res; ++j) {
        auto copy = t;
        copy.push_back(iv.lo + (j + 0.5) * h);
        next.push_back(std::move(copy));
      }
    tails = std::move(next);
  }
  fam.v_samples = std::move(tails);
  return fam;
}

struct ModulusSolution {
  double value = std::numeric_limits<double>::infinity();  // energy of scaled density
  double lower_bound = 0.0;                                // Lagrangian dual value
  double duality_gap = std::numeric_limits<double>::infinity();
  std::vector<double> density;  // admissibility-scaled rho per cell
  int iterations = 0;
  bool converged = false;
  double worst_curve_integral = 0.0;
};

/// Discrete p-modulus by most-violated-constraint dual ascent.
///
/// Minimizes sum_c w_c rho_c^p subject to sum_{c in gamma} l_c rho_c >= 1
/// per curve. Maintains per-curve multipliers lambda >= 0; the induced
/// density rho_c = (sigma_c / (p w_c))^{1/(p-1)} with sigma = sum lambda l is
/// the exact unconstrained minimizer of the Lagrangian. Each step raises the
/// multiplier of the currently shortest curve until its constraint is tight
/// (closed form for p = 2, monotone bisection otherwise). sigma only grows,
/// so all curve lengths are non-decreasing and the dual value
///   g(lambda) = sum lambda - (p-1)/p sum_c sigma_c rho_c
/// is a certified lower bound; the returned density is scaled to exact
/// admissibility, giving the upper bound and the duality gap.
inline ModulusSolution solve_modulus(const ProductSpace& space, GridDiscretization& grid,
                                     const std::vector<Curve>& family, double p,
                                     int max_iters = 100000, double tol = 1e-9) {
  if (!(p > 1.0)) throw std::invalid_argument("solve_modulus: need p > 1");
  if (family.empty()) throw std::invalid_argument("solve_modulus: empty family");
  std::vector<TracedCurve> rows;
  rows.reserve(family.size());
  for (const Curve& c : family) {
    rows.push_back(trace_curve(space, grid, c));
    if (!(rows.back().length > 0.0))
      throw std::invalid_argument("solve_modulus: zero-length curve in family");
  }

  const std::size_t ncells = grid.cell_count();
  std::vector<double> sigma(ncells, 0.0), rho(ncells, 0.0), lambda(rows.size(), 0.0);
  const double q = 1.0 / (p - 1.0);
  auto rho_of = [&](std::size_t c) {
    return sigma[c] > 0.0 ? std::pow(sigma[c] / (p * grid.weight[c]), q) : 0.0;
  };
  auto row_length = [&](const TracedCurve& row) {
    double acc = 0.0;
    for (const auto& [c, l] : row.cells) acc += l * rho[c];
    return acc;
  };

  ModulusSolution sol;
  int it = 0;
  double min_len = 0.0;
  while (it < max_iters) {
    ++it;
    std::size_t argmin = 0;
    min_len = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const double len = row_length(rows[r]);
      if (len < min_len) {
        min_len = len;
        argmin = r;
      }
    }
    if (min_len >= 1.0 - tol) {
      sol.converged = true;
      break;
    }
    const TracedCurve& row = rows[argmin];
    double dl = 0.0;
    if (p == 2.0) {
      double cur = 0.0, quad = 0.0;
      for (const auto& [c, l] : row.cells) {
        cur += l * sigma[c] / (2.0 * grid.weight[c]);
        quad += l * l / (2.0 * grid.weight[c]);
      }
      dl = (1.0 - cur) / quad;
    } else {
      auto len_at = [&](double d) {
        double acc = 0.0;
        for (const auto& [c, l] : row.cells)
          acc += l * std::pow((sigma[c] + d * l) / (p * grid.weight[c]), q);
        return acc;
      };
      double a = 0.0;
      for (const auto& [c, l] : row.cells) a += l * std::pow(l / (p * grid.weight[c]), q);
      double hi = std::pow(a, -(p - 1.0));
      while (len_at(hi) < 1.0) hi *= 2.0;
      double lo = 0.0;
      for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (len_at(mid) >= 1.0 ? hi : lo) = mid;
      }
      dl = hi;
    }
    lambda[argmin] += dl;
    for (const auto& [c, l] : row.cells) {
      sigma[c] += dl * l;
      rho[c] = rho_of(c);
    }
  }
  sol.iterations = it;
  if (!sol.converged) {
    min_len = std::numeric_limits<double>::infinity();
    for (const TracedCurve& row : rows) min_len = std::min(min_len, row_length(row));
  }
  sol.worst_curve_integral = min_len;

  sol.lower_bound = std::accumulate(lambda.begin(), lambda.end(), 0.0);
  double cross = 0.0, energy = 0.0;
  for (std::size_t c = 0; c < ncells; ++c) {
    cross += sigma[c] * rho[c];
    energy += grid.weight[c] * std::pow(rho[c], p);
  }
  sol.lower_bound -= (p - 1.0) / p * cross;

  if (min_len > 0.0) {
    const double scale = 1.0 / min_len;
    sol.value = std::pow(scale, p) * energy;
    sol.density.resize(ncells);
    for (std::size_t c = 0; c < ncells; ++c) sol.density[c] = rho[c] * scale;
    grid.density = sol.density;
    sol.duality_gap = sol.value - sol.lower_bound;
    sol.worst_curve_integral = 1.0;
  }
  return sol;
}

/// One row of the modulus-divergence experiment.
struct ModulusRow {
  int n = 0;
  double delta_ratio = 0.0;
  double analytic_lower = 0.0;
  double solved_value = 0.0;
  double duality_gap = 0.0;
  int resolution = 0;
  bool converged = false;
};

/// Prop-6.2-style experiment: per n builds E_n = I_n x {0} x [0,s_n]^{d-2}
/// and F_n = I_n x {s_n} x [0,s_n]^{d-2}, checks the relative separation,
/// and brackets mod_d of the joining vertical family between the analytic
/// bound and the solver value.
inline std::vector<ModulusRow> modulus_divergence_experiment(
    const ProductSpace& space, const std::vector<int>& n_list, int resolution, double p,
    int max_iters = 100000, double tol = 1e-9,
    std::vector<GridDiscretization>* grids_out = nullptr) {
  const LineMetricSpace& line = space.line();
  const int d = space.dim();
  std::vector<ModulusRow> out;
  for (int n : n_list) {
    const double sn = line.s(n);
    BoxContinuum box;
    box.t_range = {line.a(n), line.b(n)};
    box.v_ranges.assign(static_cast<std::size_t>(d - 1), Interval{0.0, sn});

    BoxContinuum e = box, f = box;
    e.v_ranges[0] = {0.0, 0.0};
    f.v_ranges[0] = {sn, sn};

    GridDiscretization grid = make_grid(space, box, std::vector<int>(static_cast<std::size_t>(d), resolution));
    VerticalFamily fam = make_vertical_family(grid, n);
    ModulusSolution sol =
        solve_modulus(space, grid, fam.curves(box.v_ranges[0]), p, max_iters, tol);

    ModulusRow row;
    row.n = n;
    row.delta_ratio = space.separation_ratio(e, f);
    row.analytic_lower = analytic_modulus_bounds(space, n).lower;
    row.solved_value = sol.value;
    row.duality_gap = sol.duality_gap;
    row.resolution = resolution;
    row.converged = sol.converged;
    out.push_back(row);
    if (grids_out) grids_out->push_back(std::move(grid));
  }
  return out;
}

/// Euclidean control instance far from every interval: parallel plates of a
/// cube, classical modulus 1.
inline ModulusRow modulus_flat_control_row(const ProductSpace& space, double side,
                                           int resolution, double p, int max_iters = 100000,
                                           double tol = 1e-9) {
  const int d = space.dim();
  BoxContinuum box;
  box.t_range = {2.0 - side, 2.0};
  box.v_ranges.assign(static_cast<std::size_t>(d - 1), Interval{0.0, side});
  GridDiscretization grid = make_grid(space, box, std::vector<int>(static_cast<std::size_t>(d), resolution));
  VerticalFamily fam = make_vertical_family(grid, 0);
  ModulusSolution sol = solve_modulus(space, grid, fam.curves(box.v_ranges[0]), p, max_iters, tol);
  ModulusRow row;
  row.n = 0;
  BoxContinuum e = box, f = box;
  e.v_ranges[0] = {0.0, 0.0};
  f.v_ranges[0] = {side, side};
  row.delta_ratio = space.separation_ratio(e, f);
  row.analytic_lower = 1.0;
  row.solved_value = sol.value;
  row.duality_gap = sol.duality_gap;
  row.resolution = resolution;
  row.converged = sol.converged;
  return row;
}

/// Flat binary dump of a density grid: magic, version, dimension, box
/// bounds, per-axis resolution, then the densities in t-major order.
inline void write_density_dump(const GridDiscretization& grid, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_density_dump: cannot open " + path);
  const char magic[4] = {'S', 'N', 'W', 'D'};
  out.write(magic, 4);
  const std::uint32_t version = 1;
  const std::uint32_t dim = static_cast<std::uint32_t>(grid.dim());
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
  auto put_double = [&](double x) { out.write(reinterpret_cast<const char*>(&x), sizeof x); };
  put_double(grid.box.t_range.lo);
  put_double(grid.box.t_range.hi);
  for (const Interval& iv : grid.box.v_ranges) {
    put_double(iv.lo);
    put_double(iv.hi);
  }
  for (int r : grid.resolution) {
    const std::uint32_t res = static_cast<std::uint32_t>(r);
    out.write(reinterpret_cast<const char*>(&res), sizeof res);
  }
  for (double rho : grid.density) put_double(rho);
}

}  // namespace snowline
