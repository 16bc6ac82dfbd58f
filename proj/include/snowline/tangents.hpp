#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "snowline/product_space.hpp"

namespace snowline {

/// Finite pointed metric space: labels, a symmetric distance matrix and a
/// basepoint index. The unit of Gromov-Hausdorff estimation.
struct FinitePointedSpace {
  std::vector<std::string> labels;
  std::vector<double> dist;  // row-major n x n
  std::size_t base = 0;

  std::size_t size() const { return labels.size(); }
  double d(std::size_t i, std::size_t j) const { return dist[i * size() + j]; }

  void validate(double tol = 1e-9) const {
    const std::size_t n = size();
    if (dist.size() != n * n) throw std::invalid_argument("FinitePointedSpace: bad matrix size");
    if (base >= n) throw std::invalid_argument("FinitePointedSpace: bad basepoint");
    for (std::size_t i = 0; i < n; ++i) {
      if (d(i, i) != 0.0) throw std::invalid_argument("FinitePointedSpace: nonzero diagonal");
      for (std::size_t j = 0; j < i; ++j) {
        if (d(i, j) != d(j, i)) throw std::invalid_argument("FinitePointedSpace: asymmetric");
        if (d(i, j) < 0.0) throw std::invalid_argument("FinitePointedSpace: negative distance");
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (d(i, k) > d(i, j) + d(j, k) + tol)
            throw std::invalid_argument("FinitePointedSpace: triangle inequality fails");
  }
};

/// The three defect components of a candidate rough isometry and their max.
struct RoughIsometryReport {
  double eps_basepoint = 0.0;
  double eps_density = 0.0;
  double eps_distortion = 0.0;
  double eps = 0.0;
};

/// Measures how far `map` (domain index -> codomain index) is from an
/// eps-rough isometry: basepoint displacement, codomain density gap of the
/// image, and worst pairwise distortion.
inline RoughIsometryReport check_rough_isometry(const FinitePointedSpace& dom,
                                                const FinitePointedSpace& cod,
                                                const std::vector<std::size_t>& map) {
  if (map.size() != dom.size())
    throw std::invalid_argument("check_rough_isometry: map not total on domain");
  RoughIsometryReport rep;
  rep.eps_basepoint = cod.d(map[dom.base], cod.base);
  for (std::size_t i = 0; i < dom.size(); ++i)
    for (std::size_t j = i + 1; j < dom.size(); ++j)
      rep.eps_distortion =
          std::max(rep.eps_distortion, std::abs(cod.d(map[i], map[j]) - dom.d(i, j)));
  for (std::size_t y = 0; y < cod.size(); ++y) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dom.size(); ++i) nearest = std::min(nearest, cod.d(y, map[i]));
    rep.eps_density = std::max(rep.eps_density, nearest);
  }
  rep.eps = std::max({rep.eps_basepoint, rep.eps_density, rep.eps_distortion});
  return rep;
}

/// Certified upper bound for the pointed GH distance via an explicit map.
inline double gh_upper_bound(const FinitePointedSpace& dom, const FinitePointedSpace& cod,
                             const std::vector<std::size_t>& map) {
  return check_rough_isometry(dom, cod, map).eps;
}

namespace detail {

inline double best_map_eps(const FinitePointedSpace& dom, const FinitePointedSpace& cod,
                           double cutoff) {
  const std::size_t n = dom.size();
  std::vector<std::size_t> map(n, 0);
  map[dom.base] = cod.base;
  std::vector<std::size_t> order;  // indices to assign, basepoint fixed
  for (std::size_t i = 0; i < n; ++i)
    if (i != dom.base) order.push_back(i);

  double best = cutoff;
  // depth-first over assignments with incremental distortion pruning
  std::function<void(std::size_t, double)> rec = [&](std::size_t pos, double dist_so_far) {
    if (dist_so_far >= best) return;
    if (pos == order.size()) {
      double eps = dist_so_far;
      for (std::size_t y = 0; y < cod.size() && eps < best; ++y) {
        double nearest = cod.d(y, map[dom.base]);
        for (std::size_t i : order) nearest = std::min(nearest, cod.d(y, map[i]));
        eps = std::max(eps, nearest);
      }
      best = std::min(best, eps);
      return;
    }
    const std::size_t i = order[pos];
    for (std::size_t target = 0; target < cod.size(); ++target) {
      map[i] = target;
      double dist = std::abs(cod.d(target, map[dom.base]) - dom.d(i, dom.base));
      for (std::size_t q = 0; q < pos && dist < best; ++q) {
        const std::size_t j = order[q];
        dist = std::max(dist, std::abs(cod.d(target, map[j]) - dom.d(i, j)));
      }
      if (dist < best) rec(pos + 1, std::max(dist_so_far, dist));
    }
  };
  rec(0, 0.0);
  return best;
}

}  // namespace detail

/// Exhaustive pointed-GH oracle on tiny instances: minimizes the rough
/// isometry defect over all basepoint-preserving maps in both directions and
/// keeps the best single-map certificate.
inline double gh_bruteforce(const FinitePointedSpace& a, const FinitePointedSpace& b) {
  if (a.size() > 8 || b.size() > 8)
    throw std::invalid_argument("gh_bruteforce: instances limited to 8 points");
  const double inf = std::numeric_limits<double>::infinity();
  const double ab = detail::best_map_eps(a, b, inf);
  const double ba = detail::best_map_eps(b, a, ab);
  return std::min(ab, ba);
}

/// Finds the point at signed delta-distance `tau` from p (negative = left)
/// by bisection on the monotone radial function.
inline double radial_point(const LineMetricSpace& space, double p, double tau) {
  if (tau == 0.0) return p;
  const double t = std::abs(tau);
  if (tau > 0.0) {
    double lo = p, hi = p + t;  // delta >= euclid, so delta(p, p+t) >= t
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      (space.delta(p, mid) <= t ? lo : hi) = mid;
    }
    return lo;
  }
  double lo = p - t, hi = p;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (space.delta(p, mid) <= t ? hi : lo) = mid;
  }
  return hi;
}

/// Deterministic sample of the closed ball B(center, radius/lambda) in
/// (R, lambda*delta): points sit at uniformly spaced signed radial values,
/// always including the center and both extremes.
struct LineBallSample {
  FinitePointedSpace space;          // metric lambda*delta
  std::vector<double> coords;        // line coordinates
  std::vector<double> signed_radial; // lambda-scaled signed delta distance
  double mesh = 0.0;                 // max signed-radial gap
  double left = 0.0, right = 0.0;    // ball extent on the line
};

inline LineBallSample sample_line_ball(const LineMetricSpace& line, double center,
                                       double radius, int count, double lambda = 1.0) {
  if (!(radius > 0.0) || count < 2)
    throw std::invalid_argument("sample_line_ball: need radius > 0 and count >= 2");
  std::vector<double> taus(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    taus[static_cast<std::size_t>(i)] = -radius + 2.0 * radius * i / (count - 1);
  // pin the basepoint onto the grid slot closest to 0
  std::size_t base = 0;
  for (std::size_t i = 1; i < taus.size(); ++i)
    if (std::abs(taus[i]) < std::abs(taus[base])) base = i;
  taus[base] = 0.0;

  LineBallSample out;
  out.signed_radial = taus;
  out.coords.resize(taus.size());
  // taus live in the lambda-scaled metric; the delta-target is taus/lambda
  for (std::size_t i = 0; i < taus.size(); ++i)
    out.coords[i] = radial_point(line, center, taus[i] / lambda);
  out.left = out.coords.front();
  out.right = out.coords.back();
  out.mesh = 0.0;
  for (std::size_t i = 1; i < taus.size(); ++i)
    out.mesh = std::max(out.mesh, taus[i] - taus[i - 1]);

  const std::size_t n = taus.size();
  out.space.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.space.labels[i] = "x" + std::to_string(i);
  out.space.base = base;
  out.space.dist.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double dij = lambda * line.delta(out.coords[i], out.coords[j]);
      out.space.dist[i * n + j] = dij;
      out.space.dist[j * n + i] = dij;
    }
  return out;
}

/// Uniform grid sample of the Euclidean interval [-radius, radius] with
/// basepoint 0; the reference codomain for line tangent experiments.
inline FinitePointedSpace make_segment_space(const std::vector<double>& values,
                                             std::size_t base) {
  FinitePointedSpace sp;
  const std::size_t n = values.size();
  sp.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) sp.labels[i] = "y" + std::to_string(i);
  sp.base = base;
  sp.dist.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sp.dist[i * n + j] = std::abs(values[i] - values[j]);
  return sp;
}

/// The signed radial chart of the ball B(p, r): x -> +-delta(p, x), together
/// with the defect bound it is guaranteed to satisfy,
///   eps = (2 - 2^{alpha_N}) min(s_N, 2r),
/// N the first interval the ball meets. Zero when the ball misses every
/// interval or is small enough that delta is a length metric on it.
struct RadialChart {
  const LineMetricSpace* line = nullptr;
  double center = 0.0;
  double radius = 0.0;
  double predicted_eps = 0.0;
  std::optional<int> first_interval;

  double operator()(double x) const {
    const double d = line->delta(center, x);
    return x <= center ? -d : d;
  }
};

inline RadialChart radial_chart(const LineMetricSpace& line, double p, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("radial_chart: need r > 0");
  RadialChart chart;
  chart.line = &line;
  chart.center = p;
  chart.radius = r;
  const double a = radial_point(line, p, -r);
  const double b = radial_point(line, p, r);
  chart.first_interval = line.first_interval_meeting(a, b);
  if (!chart.first_interval) return chart;
  const int n = *chart.first_interval;
  const double sn = line.s(n);
  const double phi_c = line.params().row(n).c * line.slope(n);  // phi_N(c_N)
  if (r < 0.5 * sn * phi_c) return chart;  // length-metric regime
  chart.predicted_eps =
      two_minus_two_pow_alpha(line.params().row(n).one_minus_alpha) * std::min(sn, 2.0 * r);
  return chart;
}

/// One row of a weak-tangent convergence experiment.
struct TangentRow {
  int n = 0;
  double lambda = 0.0;
  int first_interval = 0;  // 0 when the ball misses every interval
  double predicted_eps = 0.0;
  double measured_eps = 0.0;
  double mesh = 0.0;
};

/// Runs the rescaled-ball experiment on the line: for each (center, lambda)
/// pair, samples B(center, R) in (R, lambda*delta), maps it onto the uniform
/// grid of [-R, R] by the radial chart, and records the certified GH bound.
inline std::vector<TangentRow> tangent_convergence_experiment(
    const LineMetricSpace& line, const std::vector<int>& ns,
    const std::vector<double>& centers, const std::vector<double>& lambdas, double R,
    int count) {
  if (centers.size() != lambdas.size() || centers.size() != ns.size())
    throw std::invalid_argument("tangent_convergence_experiment: length mismatch");
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] > lambdas[i - 1]))
      throw std::invalid_argument("tangent_convergence_experiment: scales must increase");
  std::vector<TangentRow> rows;
  rows.reserve(ns.size());
  for (std::size_t k = 0; k < ns.size(); ++k) {
    const double lambda = lambdas[k];
    LineBallSample sample = sample_line_ball(line, centers[k], R, count, lambda);
    FinitePointedSpace codomain = make_segment_space(sample.signed_radial, sample.space.base);
    std::vector<std::size_t> ident(sample.space.size());
    for (std::size_t i = 0; i < ident.size(); ++i) ident[i] = i;
    TangentRow row;
    row.n = ns[k];
    row.lambda = lambda;
    RadialChart chart = radial_chart(line, centers[k], R / lambda);
    row.first_interval = chart.first_interval.value_or(0);
    row.predicted_eps = lambda * chart.predicted_eps;
    row.measured_eps = gh_upper_bound(sample.space, codomain, ident);
    row.mesh = sample.mesh;
    rows.push_back(row);
  }
  return rows;
}

/// Product-space sample: tensor grid of line radial values and Euclidean
/// offsets, restricted to the rho-ball of radius R in (X_d, lambda*rho).
struct ProductBallSample {
  FinitePointedSpace space;
  FinitePointedSpace codomain;  // matching Euclidean ball grid
  double mesh = 0.0;
};

inline ProductBallSample sample_product_ball(const ProductSpace& ps, double t_center,
                                             double radius, int count_per_axis,
                                             double lambda) {
  if (ps.dim() != 2)
    throw std::invalid_argument("sample_product_ball: tensor sampling implemented for d = 2");
  LineBallSample lb = sample_line_ball(ps.line(), t_center, radius, count_per_axis, lambda);
  std::vector<double> nus(static_cast<std::size_t>(count_per_axis));
  for (int i = 0; i < count_per_axis; ++i)
    nus[static_cast<std::size_t>(i)] = -radius + 2.0 * radius * i / (count_per_axis - 1);
  nus[lb.space.base] = 0.0;

  std::vector<std::pair<std::size_t, std::size_t>> keep;
  const double r2 = radius * radius * (1.0 + 1e-12);
  for (std::size_t i = 0; i < lb.signed_radial.size(); ++i)
    for (std::size_t j = 0; j < nus.size(); ++j)
      if (lb.signed_radial[i] * lb.signed_radial[i] + nus[j] * nus[j] <= r2)
        keep.emplace_back(i, j);

  ProductBallSample out;
  out.mesh = std::max(lb.mesh, 2.0 * radius / (count_per_axis - 1));
  const std::size_t n = keep.size();
  out.space.labels.resize(n);
  out.codomain.labels.resize(n);
  out.space.dist.assign(n * n, 0.0);
  out.codomain.dist.assign(n * n, 0.0);
  for (std::size_t q = 0; q < n; ++q) {
    out.space.labels[q] = "p" + std::to_string(q);
    out.codomain.labels[q] = "q" + std::to_string(q);
    if (keep[q].first == lb.space.base && nus[keep[q].second] == 0.0) {
      out.space.base = q;
      out.codomain.base = q;
    }
  }
  for (std::size_t q = 0; q < n; ++q) {
    const auto [iq, jq] = keep[q];
    for (std::size_t w = 0; w < q; ++w) {
      const auto [iw, jw] = keep[w];
      const double dt = lambda * ps.line().delta(lb.coords[iq], lb.coords[iw]);
      const double dv = nus[jq] - nus[jw];
      const double dd = dv == 0.0 ? dt : (dt == 0.0 ? std::abs(dv) : std::sqrt(dt * dt + dv * dv));
      out.space.dist[q * n + w] = dd;
      out.space.dist[w * n + q] = dd;
      const double tq = lb.signed_radial[iq] - lb.signed_radial[iw];
      const double ee = dv == 0.0 ? std::abs(tq)
                                  : (tq == 0.0 ? std::abs(dv) : std::sqrt(tq * tq + dv * dv));
      out.codomain.dist[q * n + w] = ee;
      out.codomain.dist[w * n + q] = ee;
    }
  }
  return out;
}

/// Product-space variant of the rescaled-ball experiment: tensor samples of
/// rho-balls mapped by (radial chart) x identity onto the Euclidean ball
/// grid. The v coordinates map exactly, so the distortion is governed by the
/// line bound.
inline std::vector<TangentRow> tangent_convergence_experiment(
    const ProductSpace& ps, const std::vector<int>& ns, const std::vector<double>& centers,
    const std::vector<double>& lambdas, double R, int count_per_axis) {
  if (centers.size() != lambdas.size() || centers.size() != ns.size())
    throw std::invalid_argument("tangent_convergence_experiment: length mismatch");
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] > lambdas[i - 1]))
      throw std::invalid_argument("tangent_convergence_experiment: scales must increase");
  std::vector<TangentRow> rows;
  rows.reserve(ns.size());
  for (std::size_t k = 0; k < ns.size(); ++k) {
    ProductBallSample sample = sample_product_ball(ps, centers[k], R, count_per_axis, lambdas[k]);
    std::vector<std::size_t> ident(sample.space.size());
    for (std::size_t i = 0; i < ident.size(); ++i) ident[i] = i;
    TangentRow row;
    row.n = ns[k];
    row.lambda = lambdas[k];
    RadialChart chart = radial_chart(ps.line(), centers[k], R / lambdas[k]);
    row.first_interval = chart.first_interval.value_or(0);
    row.predicted_eps = lambdas[k] * chart.predicted_eps;
    row.measured_eps = gh_upper_bound(sample.space, sample.codomain, ident);
    row.mesh = sample.mesh;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace snowline
