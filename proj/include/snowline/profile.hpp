#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace snowline {

/// 2 - 2^alpha evaluated from the complement 1-alpha, stable when alpha is
/// within an ulp of 1.
inline double two_minus_two_pow_alpha(double one_minus_alpha) {
  return -2.0 * std::expm1(-one_minus_alpha * std::numbers::ln2);
}

/// Piecewise snowflake profile: linear with slope L(alpha,c) on [0,c] and
/// the shifted power ((x - c(1-alpha))/(1 - c(1-alpha)))^alpha on [c,1].
/// Strictly increasing, concave, fixes 0 and 1, differentiable at c.
///
/// The profile is parameterized by (1-alpha, log c) internally so that
/// constructions with alpha within an ulp of 1 or with c below the smallest
/// positive double stay well defined: in that regime the linear branch lies
/// under representable resolution and evaluation reduces to x^alpha, while
/// the slope constant L is still carried exactly.
class SnowflakeProfile {
 public:
  SnowflakeProfile(double alpha, double c)
      : SnowflakeProfile(guarded_complement(alpha), guarded_log(c), c, alpha) {}

  /// Exact-complement construction: one_minus_alpha in (0,1), log_c <= 0.
  static SnowflakeProfile from_complement(double one_minus_alpha, double log_c) {
    return SnowflakeProfile(one_minus_alpha, log_c, std::exp(log_c),
                            1.0 - one_minus_alpha);
  }

  double alpha() const { return alpha_; }
  double one_minus_alpha() const { return comp_; }
  double c() const { return c_; }
  double log_c() const { return log_c_; }

  /// L(alpha, c) = (1/c) * (c*alpha / (1 - c(1-alpha)))^alpha, >= 1.
  double slope() const { return slope_; }

  /// 2 - 2^alpha for this profile.
  double branch_defect_factor() const { return two_minus_two_pow_alpha(comp_); }

  double phi(double x) const {
    if (!(x >= 0.0 && x <= 1.0))
      throw std::domain_error("SnowflakeProfile::phi: x outside [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    // the linear branch is exact at c; evaluating it for x within 1e-14 of c
    // avoids cancellation in (x - c(1-alpha))
    if (x <= c_ + 1e-14) return slope_ * x;
    const double shift = c_ * comp_;
    return std::pow((x - shift) / (1.0 - shift), alpha_);
  }

  double phi_inverse(double y) const {
    if (!(y >= 0.0 && y <= 1.0))
      throw std::domain_error("SnowflakeProfile::phi_inverse: y outside [0,1]");
    if (y == 0.0) return 0.0;
    if (y == 1.0) return 1.0;
    if (y <= c_ * slope_ + 1e-14) return y / slope_;
    const double shift = c_ * comp_;
    return shift + (1.0 - shift) * std::pow(y, 1.0 / alpha_);
  }

  /// phi(a)*phi(b) - phi(a*b); >= 0 up to roundoff (phi is submultiplicative).
  double submultiplicativity_defect(double a, double b) const {
    if (!(a >= 0.0 && a <= 1.0) || !(b >= 0.0 && b <= 1.0))
      throw std::domain_error("submultiplicativity_defect: arguments outside [0,1]");
    return phi(a) * phi(b) - phi(a * b);
  }

  /// For 0 <= t <= x <= 1 returns (lhs, rhs) with
  ///   lhs = phi(t) + phi(x-t) - phi(x),  rhs = (2 - 2^alpha) * phi(x);
  /// the profile satisfies 0 <= lhs <= rhs.
  std::pair<double, double> concavity_defect_bound(double t, double x) const {
    if (!(t >= 0.0 && t <= x && x <= 1.0))
      throw std::invalid_argument("concavity_defect_bound: need 0 <= t <= x <= 1");
    const double lhs = phi(t) + phi(x - t) - phi(x);
    const double rhs = branch_defect_factor() * phi(x);
    return {lhs, rhs};
  }

 private:
  SnowflakeProfile(double one_minus_alpha, double log_c, double c, double alpha)
      : comp_(one_minus_alpha), log_c_(log_c), c_(c), alpha_(alpha) {
    if (!(comp_ > 0.0 && comp_ < 1.0))
      throw std::invalid_argument("SnowflakeProfile: alpha outside (0,1)");
    if (!(log_c_ <= 0.0))
      throw std::invalid_argument("SnowflakeProfile: c outside (0,1]");
    // the direct form shares its rounding with the power branch of phi (the
    // two agree at c within a few ulps); the log form covers c beyond the
    // representable range (where c underflows to 0)
    slope_ = c_ >= 1e-280 ? (1.0 / c_) * std::pow(c_ * alpha_ / (1.0 - c_ * comp_), alpha_)
                          : std::exp(log_slope(comp_, log_c_, c_));
  }

  static double guarded_complement(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
      throw std::invalid_argument("SnowflakeProfile: alpha outside (0,1)");
    return 1.0 - alpha;
  }
  static double guarded_log(double c) {
    if (!(c > 0.0 && c <= 1.0))
      throw std::invalid_argument("SnowflakeProfile: c outside (0,1]");
    return std::log(c);
  }

  // ln L = -(1-a) ln c + a ln a - a ln(1 - c(1-a)), written so that c = 1
  // gives exactly 0 and subnormal/underflowed c stays finite.
  static double log_slope(double comp, double log_c, double c) {
    const double a = 1.0 - comp;
    return -comp * log_c + a * std::log1p(-comp) - a * std::log1p(-c * comp);
  }

  double comp_;    // 1 - alpha, kept exact
  double log_c_;   // natural log of c
  double c_;       // 0 when below the representable range
  double alpha_;
  double slope_;   // L(alpha, c)
};

}  // namespace snowline
