#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "snowline/line_metric.hpp"

namespace snowline {

/// Point of X_d = (R x R^{d-1}, sqrt(delta^2 + euclid^2)): t is the
/// snowflaked coordinate, v the d-1 Euclidean ones.
struct ProductPoint {
  double t = 0.0;
  std::vector<double> v;
};

inline ProductPoint make_point(double t, std::vector<double> v) {
  return ProductPoint{t, std::move(v)};
}

/// Closed interval; degenerate (lo == hi) is allowed.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// Axis-aligned box continuum in X_d.
struct BoxContinuum {
  Interval t_range;
  std::vector<Interval> v_ranges;  // d-1 entries

  int dim() const { return static_cast<int>(v_ranges.size()) + 1; }
};

/// The d-dimensional product of the snowflaked line with Euclidean space,
/// with product measure mu_d = mu_1 x lambda_{d-1}.
class ProductSpace {
 public:
  ProductSpace(LineMetricSpace line, int dim) : line_(std::move(line)), dim_(dim) {
    if (dim_ < 2) throw std::invalid_argument("ProductSpace: dimension must be >= 2");
  }

  const LineMetricSpace& line() const { return line_; }
  int dim() const { return dim_; }

  double rho(const ProductPoint& x, const ProductPoint& y) const {
    check_dim(x);
    check_dim(y);
    const double dt = line_.delta(x.t, y.t);
    double ve = 0.0;
    for (std::size_t i = 0; i < x.v.size(); ++i) {
      const double d = x.v[i] - y.v[i];
      ve += d * d;
    }
    if (ve == 0.0) return dt;
    if (dt == 0.0) return std::sqrt(ve);
    return std::sqrt(dt * dt + ve);
  }

  /// mu_d of a box: mu_1 of the t-range times the Lebesgue volume of the
  /// v-ranges.
  double measure_mud(const BoxContinuum& box) const {
    check_box(box);
    double m = line_.measure_mu1(box.t_range.lo, box.t_range.hi);
    for (const Interval& iv : box.v_ranges) m *= iv.length();
    return m;
  }

  /// rho-distance between two boxes; componentwise monotone, so the infimum
  /// is attained on facing faces and splits per axis.
  double box_distance(const BoxContinuum& e, const BoxContinuum& f) const {
    check_box(e);
    check_box(f);
    const double tgap = interval_gap_delta(e.t_range, f.t_range);
    double ve = 0.0;
    int nonzero = 0;
    double single = tgap;
    if (tgap != 0.0) ++nonzero;
    for (std::size_t i = 0; i < e.v_ranges.size(); ++i) {
      const double g = interval_gap(e.v_ranges[i], f.v_ranges[i]);
      if (g != 0.0) {
        ++nonzero;
        single = g;
      }
      ve += g * g;
    }
    if (nonzero == 0) return 0.0;
    if (nonzero == 1) return single;  // keep single-axis gaps exact
    return std::sqrt(tgap * tgap + ve);
  }

  /// rho-diameter of a box; the supremum is attained at opposite corners.
  double box_diameter(const BoxContinuum& box) const {
    check_box(box);
    const double text = line_.delta(box.t_range.lo, box.t_range.hi);
    double ve = 0.0;
    int nonzero = 0;
    double single = text;
    if (text != 0.0) ++nonzero;
    for (const Interval& iv : box.v_ranges) {
      const double len = iv.length();
      if (len != 0.0) {
        ++nonzero;
        single = len;
      }
      ve += len * len;
    }
    if (nonzero == 0) return 0.0;
    if (nonzero == 1) return single;
    return std::sqrt(text * text + ve);
  }

  /// Relative separation Delta(E,F) = dist(E,F) / min(diam E, diam F).
  double separation_ratio(const BoxContinuum& e, const BoxContinuum& f) const {
    const double de = box_diameter(e);
    const double df = box_diameter(f);
    if (!(de > 0.0) || !(df > 0.0))
      throw std::invalid_argument("separation_ratio: degenerate continuum");
    return box_distance(e, f) / std::min(de, df);
  }

  /// Bounded sphere-chart metric on the open unit ball of R^d: pull points
  /// out radially by 1/(1-|z|), measure with rho, and compress by
  /// t -> t/(1+t).
  double compactified_metric(const std::vector<double>& x,
                             const std::vector<double>& y) const {
    const ProductPoint px = unball(x);
    const ProductPoint py = unball(y);
    const double r = rho(px, py);
    return r / (1.0 + r);
  }

 private:
  void check_dim(const ProductPoint& p) const {
    if (static_cast<int>(p.v.size()) != dim_ - 1)
      throw std::invalid_argument("ProductSpace: point dimension mismatch");
  }
  void check_box(const BoxContinuum& box) const {
    if (box.dim() != dim_)
      throw std::invalid_argument("ProductSpace: box dimension mismatch");
    if (box.t_range.hi < box.t_range.lo)
      throw std::invalid_argument("ProductSpace: empty t-range");
    for (const Interval& iv : box.v_ranges)
      if (iv.hi < iv.lo) throw std::invalid_argument("ProductSpace: empty v-range");
  }

  static double interval_gap(const Interval& a, const Interval& b) {
    if (a.lo > b.hi) return a.lo - b.hi;
    if (b.lo > a.hi) return b.lo - a.hi;
    return 0.0;
  }

  double interval_gap_delta(const Interval& a, const Interval& b) const {
    if (a.lo > b.hi) return line_.delta(b.hi, a.lo);
    if (b.lo > a.hi) return line_.delta(a.hi, b.lo);
    return 0.0;
  }

  ProductPoint unball(const std::vector<double>& z) const {
    if (static_cast<int>(z.size()) != dim_)
      throw std::invalid_argument("compactified_metric: point dimension mismatch");
    double n2 = 0.0;
    for (double zi : z) n2 += zi * zi;
    const double norm = std::sqrt(n2);
    if (!(norm < 1.0))
      throw std::domain_error("compactified_metric: point outside the open unit ball");
    const double scale = 1.0 / (1.0 - norm);
    ProductPoint p;
    p.t = z[0] * scale;
    p.v.assign(z.begin() + 1, z.end());
    for (double& vi : p.v) vi *= scale;
    return p;
  }

  LineMetricSpace line_;
  int dim_;
};

}  // namespace snowline
