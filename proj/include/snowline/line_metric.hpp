#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "snowline/profile.hpp"

namespace snowline {

/// Per-interval parameter row of the construction. alpha is carried as the
/// exact complement 1-alpha and c as log c; the raw doubles are kept for
/// reporting (c may be a denormal or 0 for deep rows).
struct IntervalParams {
  double one_minus_alpha = 0.0;
  double alpha = 0.0;
  double log_c = 0.0;
  double c = 0.0;
  double slope = 0.0;  // L(alpha_n, c_n)
  double s = 0.0;      // delta-diameter of I_n
};

/// Parameter sequences (alpha_n, c_n, s_n), n = 1..n_max, defining the
/// snowflaked intervals I_n = [1/n - s_n, 1/n].
struct ConstructionParams {
  std::vector<IntervalParams> rows;

  int n_max() const { return static_cast<int>(rows.size()); }
  const IntervalParams& row(int n) const { return rows.at(static_cast<std::size_t>(n - 1)); }

  /// Shipped default recipe: alpha_n = 1 - 2^-(n+1), c_n solved from
  /// L(alpha_n, c_n) = n + 2, s_n = min(1/n - 1/(n+1), 1/(n^2 L)).
  static ConstructionParams defaults(int n_max);

  /// Explicit sequences; validated like the default recipe.
  static ConstructionParams explicit_sequences(const std::vector<double>& alpha,
                                               const std::vector<double>& c,
                                               const std::vector<double>& s);

  void validate() const;
};

/// Location of a point relative to the intervals I_n.
struct IntervalLocation {
  int n = 0;       // 0 means outside every interval
  double u = 0.0;  // local coordinate x - a_n in [0, s_n] when inside

  bool inside() const { return n > 0; }
};

/// The modified metric delta on the real line: Euclidean outside the
/// intervals I_n, snowflaked by delta_n = s_n phi_n(d / s_n) inside, with
/// crossings priced through interval endpoints. Immutable after
/// construction; all evaluations are pure.
class LineMetricSpace {
 public:
  explicit LineMetricSpace(ConstructionParams params) : params_(std::move(params)) {
    params_.validate();
    const int m = params_.n_max();
    profiles_.reserve(static_cast<std::size_t>(m));
    a_.resize(static_cast<std::size_t>(m));
    b_.resize(static_cast<std::size_t>(m));
    for (int n = 1; n <= m; ++n) {
      auto& row = params_.rows[static_cast<std::size_t>(n - 1)];
      profiles_.push_back(SnowflakeProfile::from_complement(row.one_minus_alpha, row.log_c));
      b_[static_cast<std::size_t>(n - 1)] = 1.0 / n;
      // snap s_n to the representable width b_n - a_n so endpoint identities
      // like delta(a_n, b_n) = s_n are bit-exact
      double a = b_[static_cast<std::size_t>(n - 1)] - row.s;
      row.s = b_[static_cast<std::size_t>(n - 1)] - a;
      a_[static_cast<std::size_t>(n - 1)] = a;
    }
  }

  const ConstructionParams& params() const { return params_; }
  int n_max() const { return params_.n_max(); }
  double a(int n) const { return a_[static_cast<std::size_t>(n - 1)]; }
  double b(int n) const { return b_[static_cast<std::size_t>(n - 1)]; }
  double s(int n) const { return params_.row(n).s; }
  double slope(int n) const { return params_.row(n).slope; }
  const SnowflakeProfile& profile(int n) const {
    return profiles_[static_cast<std::size_t>(n - 1)];
  }

  /// O(1) interval lookup via the candidate index floor(1/x).
  IntervalLocation locate(double x) const {
    const int m = n_max();
    if (!(x > 0.0) || x > b_[0] || x < a_[static_cast<std::size_t>(m - 1)]) return {};
    const int guess = static_cast<int>(1.0 / x);
    for (int n = guess - 1; n <= guess + 1; ++n) {
      if (n < 1 || n > m) continue;
      if (x >= a(n) && x <= b(n)) return {n, x - a(n)};
    }
    return {};
  }

  /// delta_n restricted to I_n, as a function of the Euclidean gap e.
  double delta_within(int n, double e) const {
    const double sn = s(n);
    const double u = std::min(1.0, e / sn);
    return sn * profile(n).phi(u);
  }

  /// The metric. Closed form: |x-y| plus, for an endpoint interior to some
  /// I_k, the snowflake surcharge of its stub to the facing endpoint of I_k.
  double delta(double x, double y) const {
    if (x > y) std::swap(x, y);
    const IntervalLocation lx = locate(x);
    const IntervalLocation ly = locate(y);
    if (lx.inside() && lx.n == ly.n) return delta_within(lx.n, y - x);
    double out = y - x;
    if (lx.inside()) {
      const double stub = b(lx.n) - x;
      out += delta_within(lx.n, stub) - stub;
    }
    if (ly.inside()) {
      const double stub = y - a(ly.n);
      out += delta_within(ly.n, stub) - stub;
    }
    return out;
  }

  /// Literal case-by-case form of the defining five cases; reference route
  /// used to cross-check delta().
  double delta_by_cases(double x, double y) const {
    if (x > y) std::swap(x, y);
    const IntervalLocation lx = locate(x);
    const IntervalLocation ly = locate(y);
    if (lx.inside() && ly.inside() && lx.n == ly.n) return delta_within(lx.n, y - x);
    if (!lx.inside() && !ly.inside()) return y - x;
    if (!lx.inside()) return (a(ly.n) - x) + delta_within(ly.n, y - a(ly.n));
    if (!ly.inside()) return delta_within(lx.n, b(lx.n) - x) + (y - b(lx.n));
    return delta_within(lx.n, b(lx.n) - x) + (a(ly.n) - b(lx.n)) +
           delta_within(ly.n, y - a(ly.n));
  }

  /// Length of [x,y] under delta: the metric derivative is L_k on I_k and 1
  /// elsewhere.
  double segment_length(double x, double y) const {
    if (x > y) throw std::invalid_argument("segment_length: need x <= y");
    double len = y - x;
    for (int n = 1; n <= n_max(); ++n) {
      const double overlap = std::min(y, b(n)) - std::max(x, a(n));
      if (overlap > 0.0) len += (slope(n) - 1.0) * overlap;
    }
    return len;
  }

  /// The length measure mu_1 of [x,y].
  double measure_mu1(double x, double y) const { return segment_length(x, y); }

  /// Smallest interval index whose interval meets [lo, hi], if any.
  std::optional<int> first_interval_meeting(double lo, double hi) const {
    for (int n = 1; n <= n_max(); ++n)
      if (lo <= b(n) && a(n) <= hi) return n;
    return std::nullopt;
  }

  /// For the default recipe, s_n L_n = 1/n^2, so the discarded tail beyond
  /// n_max contributes length less than 1/n_max.
  double truncation_tail_bound() const { return 1.0 / n_max(); }

 private:
  ConstructionParams params_;
  std::vector<SnowflakeProfile> profiles_;
  std::vector<double> a_, b_;
};

namespace detail {

// ln L(alpha, c) as a function of u = ln c, stable for arbitrarily negative u.
inline double log_slope_of_log_c(double comp, double u) {
  const double a = 1.0 - comp;
  const double c = std::exp(u);
  return -comp * u + a * std::log1p(-comp) - a * std::log1p(-c * comp);
}

// Solve L(alpha, c) = target for ln c by bisection; L is continuous and
// strictly decreasing in c with L -> 1 as c -> 1 and L -> infinity as c -> 0.
inline double solve_log_c(double comp, double target, double tol = 1e-12,
                          int max_iter = 200) {
  const double log_target = std::log(target);
  double hi = 0.0;  // L(c=1) = 1 <= target
  double lo = -1.0;
  while (log_slope_of_log_c(comp, lo) < log_target) {
    lo *= 2.0;
    if (lo < -1e300) throw std::runtime_error("solve_log_c: bracket failure");
  }
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (log_slope_of_log_c(comp, mid) >= log_target)
      lo = mid;
    else
      hi = mid;
    if (std::abs(std::exp(log_slope_of_log_c(comp, lo)) - target) <= tol) return lo;
  }
  return std::abs(std::exp(log_slope_of_log_c(comp, lo)) - target) <
                 std::abs(std::exp(log_slope_of_log_c(comp, hi)) - target)
             ? lo
             : hi;
}

}  // namespace detail

inline ConstructionParams ConstructionParams::defaults(int n_max) {
  if (n_max < 1) throw std::invalid_argument("defaults: n_max must be >= 1");
  ConstructionParams p;
  p.rows.resize(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    IntervalParams& row = p.rows[static_cast<std::size_t>(n - 1)];
    row.one_minus_alpha = std::exp2(-(n + 1));
    row.alpha = 1.0 - row.one_minus_alpha;
    row.log_c = detail::solve_log_c(row.one_minus_alpha, n + 2.0);
    row.c = std::exp(row.log_c);
    row.slope = std::exp(detail::log_slope_of_log_c(row.one_minus_alpha, row.log_c));
    const double gap = 1.0 / n - 1.0 / (n + 1);
    row.s = std::min(gap, 1.0 / (double(n) * n * row.slope));
  }
  p.validate();
  return p;
}

inline ConstructionParams ConstructionParams::explicit_sequences(
    const std::vector<double>& alpha, const std::vector<double>& c,
    const std::vector<double>& s) {
  if (alpha.empty() || alpha.size() != c.size() || alpha.size() != s.size())
    throw std::invalid_argument("explicit_sequences: sequences must be nonempty and equal length");
  ConstructionParams p;
  p.rows.resize(alpha.size());
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    IntervalParams& row = p.rows[k];
    if (!(alpha[k] > 0.0 && alpha[k] < 1.0))
      throw std::invalid_argument("explicit_sequences: alpha_" + std::to_string(k + 1) +
                                  " outside (0,1)");
    if (!(c[k] > 0.0 && c[k] <= 1.0))
      throw std::invalid_argument("explicit_sequences: c_" + std::to_string(k + 1) +
                                  " outside (0,1]");
    row.one_minus_alpha = 1.0 - alpha[k];
    row.alpha = alpha[k];
    row.log_c = std::log(c[k]);
    row.c = c[k];
    row.slope = std::exp(detail::log_slope_of_log_c(row.one_minus_alpha, row.log_c));
    row.s = s[k];
  }
  p.validate();
  return p;
}

inline void ConstructionParams::validate() const {
  const int m = n_max();
  if (m < 1) throw std::invalid_argument("ConstructionParams: empty");
  for (int n = 1; n <= m; ++n) {
    const IntervalParams& r = row(n);
    const std::string at = " at n=" + std::to_string(n);
    if (!(r.one_minus_alpha > 0.0 && r.one_minus_alpha < 1.0))
      throw std::invalid_argument("ConstructionParams: alpha outside (0,1)" + at);
    if (!(r.log_c <= 0.0) || !std::isfinite(r.log_c))
      throw std::invalid_argument("ConstructionParams: c outside (0,1]" + at);
    if (!(r.s > 0.0))
      throw std::invalid_argument("ConstructionParams: s not positive" + at);
    if (!(r.s < 2.0 * (1.0 / n - 1.0 / (n + 1.0))))
      throw std::invalid_argument("ConstructionParams: s_n >= 2(1/n - 1/(n+1))" + at);
    if (!(r.slope >= 1.0 - 1e-12))
      throw std::invalid_argument("ConstructionParams: L(alpha,c) < 1" + at);
    // the intervals must actually be pairwise disjoint (the five-case metric
    // requires it); strictly stronger than the s_n bound above
    if (!(1.0 / n - r.s > 1.0 / (n + 1.0)))
      throw std::invalid_argument("ConstructionParams: I_n overlaps I_{n+1}" + at);
  }
  for (int n = 1; n < m; ++n) {
    const IntervalParams& r0 = row(n);
    const IntervalParams& r1 = row(n + 1);
    const std::string at = " at n=" + std::to_string(n);
    if (!(r1.one_minus_alpha < r0.one_minus_alpha))
      throw std::invalid_argument("ConstructionParams: alpha not strictly increasing" + at);
    if (!(r1.slope > r0.slope))
      throw std::invalid_argument("ConstructionParams: L not strictly increasing" + at);
    if (!(r1.s * r1.slope <= r0.s * r0.slope * (1.0 + 1e-12)))
      throw std::invalid_argument("ConstructionParams: s_n L_n not non-increasing" + at);
  }
}

}  // namespace snowline
