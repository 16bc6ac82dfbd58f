#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "snowline/product_space.hpp"
#include "snowline/tangents.hpp"

namespace snowline {

/// Result of covering a diameter-r set by pieces of diameter <= eps*r.
struct CoveringReport {
  double r = 0.0;
  double eps = 0.0;
  long count = 0;
  double bound = 0.0;  // claimed covering-function value 2 eps^{-1/alpha_n}
};

namespace detail {

// ceil with a snap window for quotients that are integers up to roundoff
inline long snap_ceil(double q) {
  const double nearest = std::round(q);
  if (std::abs(q - nearest) <= 1e-10 * std::max(1.0, std::abs(q)))
    return static_cast<long>(nearest);
  return static_cast<long>(std::ceil(q));
}

}  // namespace detail

/// Greedy minimal cover of a delta-diameter-r subinterval of I_n by
/// consecutive subintervals of delta-diameter <= eps*r. delta_n depends only
/// on the Euclidean gap, so maximal pieces all have Euclidean width
/// s_n phi^{-1}(eps r / s_n) and the greedy count is the width quotient.
inline CoveringReport covering_number_interval(const LineMetricSpace& line, int n, double r,
                                               double eps) {
  if (n < 1 || n > line.n_max())
    throw std::invalid_argument("covering_number_interval: bad interval index");
  const double sn = line.s(n);
  if (!(r > 0.0 && r <= sn))
    throw std::invalid_argument("covering_number_interval: need 0 < r <= s_n");
  if (!(eps > 0.0 && eps <= 0.5))
    throw std::invalid_argument("covering_number_interval: need 0 < eps <= 1/2");
  const SnowflakeProfile& prof = line.profile(n);
  const double width = prof.phi_inverse(r / sn);
  const double piece = prof.phi_inverse(eps * r / sn);
  CoveringReport rep;
  rep.r = r;
  rep.eps = eps;
  rep.count = detail::snap_ceil(width / piece);
  rep.bound = 2.0 * std::pow(eps, -1.0 / (1.0 - line.params().row(n).one_minus_alpha));
  return rep;
}

/// Greedy set-cover of the points of a finite metric space by closed
/// R-balls centered at its points, always picking the candidate covering
/// the most uncovered points (first index on ties).
inline long greedy_ball_cover(const FinitePointedSpace& sp, double R) {
  const std::size_t n = sp.size();
  std::vector<bool> covered(n, false);
  long balls = 0;
  std::size_t remaining = n;
  while (remaining > 0) {
    std::size_t best = 0;
    long best_gain = -1;
    for (std::size_t c = 0; c < n; ++c) {
      long gain = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (!covered[i] && sp.d(c, i) <= R * (1.0 + 1e-12)) ++gain;
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    if (best_gain <= 0) break;  // cannot happen: every point covers itself
    for (std::size_t i = 0; i < n; ++i)
      if (!covered[i] && sp.d(best, i) <= R * (1.0 + 1e-12)) {
        covered[i] = true;
        --remaining;
      }
    ++balls;
  }
  return balls;
}

/// Greedy max-coverage cover of the sampled 2R-ball around each center by
/// R-balls centered at sample points; returns the worst count over the
/// sampled (center, R) configurations.
inline long doubling_constant_estimate(const LineMetricSpace& line, Interval region,
                                       const std::vector<double>& scales, int centers,
                                       int samples_per_axis = 5) {
  if (scales.empty()) throw std::invalid_argument("doubling_constant_estimate: no scales");
  if (centers < 1) throw std::invalid_argument("doubling_constant_estimate: need centers >= 1");
  long worst = 0;
  for (int ci = 0; ci < centers; ++ci) {
    const double t = centers == 1 ? 0.5 : static_cast<double>(ci) / (centers - 1);
    const double center = region.lo + t * (region.hi - region.lo);
    for (double R : scales) {
      LineBallSample sample = sample_line_ball(line, center, 2.0 * R, samples_per_axis);
      worst = std::max(worst, greedy_ball_cover(sample.space, R));
    }
  }
  return worst;
}

/// Same estimator on a product-space box (tensor-sampled rho-balls).
inline long doubling_constant_estimate(const ProductSpace& ps, const BoxContinuum& region,
                                       const std::vector<double>& scales, int centers,
                                       int samples_per_axis = 5) {
  if (scales.empty()) throw std::invalid_argument("doubling_constant_estimate: no scales");
  long worst = 0;
  for (int ci = 0; ci < centers; ++ci) {
    const double t = centers == 1 ? 0.5 : static_cast<double>(ci) / (centers - 1);
    const double tc = region.t_range.lo + t * (region.t_range.hi - region.t_range.lo);
    for (double R : scales) {
      ProductBallSample sample = sample_product_ball(ps, tc, 2.0 * R, samples_per_axis, 1.0);
      worst = std::max(worst, greedy_ball_cover(sample.space, R));
    }
  }
  return worst;
}

/// One sampled row of the Assouad-dimension sweep.
struct AssouadRow {
  double beta = 0.0;
  int n = 0;  // 0 for flat-region rows
  double r = 0.0;
  double eps = 0.0;
  long count = 0;
  double bound = 0.0;  // 4 C(beta) eps^{-beta}
  double violation = 0.0;
};

/// C(beta) = max(1, max over n with 1/alpha_n >= beta of 2^{1/alpha_n - beta}).
inline double assouad_prefactor(const LineMetricSpace& line, double beta) {
  double c = 1.0;
  for (int n = 1; n <= line.n_max(); ++n) {
    const double inv_alpha = 1.0 / (1.0 - line.params().row(n).one_minus_alpha);
    if (inv_alpha < beta) break;  // 1/alpha_n decreases in n
    c = std::max(c, std::exp2(inv_alpha - beta));
  }
  return c;
}

/// Sweeps covering counts against the candidate covering functions
/// 4 C(beta) eps^{-beta}: interval rows use the greedy interval cover,
/// flat rows the Euclidean count ceil(1/eps). violation <= 1 everywhere
/// certifies the covering function for that beta at the sampled scales.
inline std::vector<AssouadRow> assouad_dimension_estimate(
    const LineMetricSpace& line, const std::vector<double>& beta_grid,
    const std::vector<int>& interval_ns, const std::vector<double>& r_fractions,
    const std::vector<double>& interval_eps, const std::vector<double>& flat_eps) {
  std::vector<AssouadRow> rows;
  for (double beta : beta_grid) {
    const double C = assouad_prefactor(line, beta);
    for (int n : interval_ns)
      for (double fr : r_fractions)
        for (double eps : interval_eps) {
          CoveringReport rep = covering_number_interval(line, n, fr * line.s(n), eps);
          AssouadRow row;
          row.beta = beta;
          row.n = n;
          row.r = rep.r;
          row.eps = eps;
          row.count = rep.count;
          row.bound = 4.0 * C * std::pow(eps, -beta);
          row.violation = static_cast<double>(row.count) / row.bound;
          rows.push_back(row);
        }
    for (double eps : flat_eps) {
      AssouadRow row;
      row.beta = beta;
      row.n = 0;
      row.r = 1.0;
      row.eps = eps;
      row.count = detail::snap_ceil(1.0 / eps);
      row.bound = 4.0 * C * std::pow(eps, -beta);
      row.violation = static_cast<double>(row.count) / row.bound;
      rows.push_back(row);
    }
  }
  return rows;
}

/// Checks on a sampled grid that every straight-line homotopy track toward
/// p stays inside the ball: delta(p, p + t(x-p)) <= delta(p, x).
inline bool radial_contractibility_check(const LineMetricSpace& line, double p, double r,
                                         int steps, double tol = 1e-12) {
  if (!(r > 0.0) || steps < 2)
    throw std::invalid_argument("radial_contractibility_check: need r > 0, steps >= 2");
  const double a = radial_point(line, p, -r);
  const double b = radial_point(line, p, r);
  for (int i = 0; i <= steps; ++i) {
    const double x = a + (b - a) * i / steps;
    const double dx = line.delta(p, x);
    for (int j = 0; j <= steps; ++j) {
      const double t = static_cast<double>(j) / steps;
      const double h = p + t * (x - p);
      if (line.delta(p, h) > dx + tol) return false;
    }
  }
  return true;
}

/// Numerical check of the covering-bound ingredient
/// phi_n(c_n)^{1/alpha_n} <= c_n, evaluated in log space so deep rows with
/// underflowed c_n are still meaningful. Returns the worst log-gap
/// (positive = violated).
inline double covering_phi_c_inequality_gap(const LineMetricSpace& line) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int n = 1; n <= line.n_max(); ++n) {
    const IntervalParams& row = line.params().row(n);
    const double alpha = 1.0 - row.one_minus_alpha;
    const double lhs = (row.log_c + std::log(row.slope)) / alpha;  // log phi(c)^{1/alpha}
    worst = std::max(worst, lhs - row.log_c);
  }
  return worst;
}

}  // namespace snowline
