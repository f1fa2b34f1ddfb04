#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

// Exponential-integral kernels used by the closed-form secrecy rate and its
// derivatives: E1(z), Ei(x) for x < 0, and the upper incomplete gamma
// Gamma(-1, z) = exp(-z)/z - E1(z).
//
// Every call site in the rate engine pairs exp(+c) with E1(c + t) terms, so
// scaled variants exp(z)*E1(z) and exp(z)*Gamma(-1,z) are provided as well;
// they stay finite for arbitrarily large z where the unscaled product would
// overflow.

namespace uavsec::specfun {

struct SpecFunResult {
  double value = 0.0;
  /// Truncation-based bound on the absolute error, not a guess.
  double est_abs_error = 0.0;
  /// Set when the result underflowed to (signed) zero in double precision.
  bool underflowed = false;
};

namespace detail {

inline constexpr double kEulerGamma = 0.5772156649015328606065120900824024;

/// Power series for E1(z) = -gamma - ln z + sum_{k>=1} (-1)^{k+1} z^k/(k k!).
/// Intended for z <= ~2; remains finite down to z = 1e-300 where the -ln z
/// term dominates.
inline SpecFunResult e1_series(double z) {
  double sum = 0.0;
  double pow_term = 1.0;  // z^k / k!
  double next_mag = 0.0;
  for (int k = 1; k <= 200; ++k) {
    pow_term *= z / k;
    const double add = ((k & 1) ? pow_term : -pow_term) / k;
    sum += add;
    next_mag = std::abs(pow_term) * z / ((k + 1.0) * (k + 1.0));
    if (next_mag < 1e-18 * (std::abs(sum) + 1.0)) break;
  }
  const double value = -kEulerGamma - std::log(z) + sum;
  const double eps_floor = 4.0 * std::numeric_limits<double>::epsilon() * (std::abs(value) + 1.0);
  return {value, next_mag + eps_floor, false};
}

/// Modified Lentz continued fraction for exp(z)*E1(z):
///   E1(z) = exp(-z) / (z + 1 - 1^2/(z + 3 - 2^2/(z + 5 - ...)))
/// Reliable for z >= ~0.7; convergence improves rapidly with z.
inline SpecFunResult e1_cont_frac_scaled(double z) {
  constexpr double tiny = 1e-300;
  double b = z + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  double delta = 0.0;
  for (int k = 1; k <= 500; ++k) {
    const double a = -static_cast<double>(k) * k;
    b += 2.0;
    d = b + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  const double err = (std::abs(delta - 1.0) + std::numeric_limits<double>::epsilon()) * std::abs(h);
  return {h, err, false};
}

/// Modified Lentz continued fraction for exp(z)*Gamma(-1,z)*z:
///   Gamma(-1,z) = exp(-z)/z * 1/(z + 2 - 1*2/(z + 4 - 2*3/(z + 6 - ...)))
inline SpecFunResult gamma_m1_cont_frac_scaled(double z) {
  constexpr double tiny = 1e-300;
  double b = z + 2.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  double delta = 0.0;
  for (int k = 1; k <= 500; ++k) {
    const double a = -static_cast<double>(k) * (k + 1.0);
    b += 2.0;
    d = b + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  const double err = (std::abs(delta - 1.0) + std::numeric_limits<double>::epsilon()) * std::abs(h);
  return {h, err, false};
}

// Series/continued-fraction switchover. Both branches agree to <= 1e-12 on
// the overlap band [0.8, 1.25]; the unit tests pin that.
inline constexpr double kBranchSwitch = 1.0;

}  // namespace detail

/// E1(z) = int_z^inf exp(-t)/t dt for z > 0.
/// Finite down to z = 1e-300 (logarithmic divergence handled by the series);
/// underflows to zero for z beyond ~740.
inline SpecFunResult expint_E1(double z) {
  if (!(z > 0.0)) throw std::invalid_argument("expint_E1: argument must be > 0");
  if (z <= detail::kBranchSwitch) return detail::e1_series(z);
  const SpecFunResult scaled = detail::e1_cont_frac_scaled(z);
  const double damp = std::exp(-z);
  double value = damp * scaled.value;
  if (value == 0.0) {
    return {0.0, std::numeric_limits<double>::denorm_min(), true};
  }
  return {value, damp * scaled.est_abs_error + std::numeric_limits<double>::epsilon() * value, false};
}

/// Principal-value exponential integral Ei(x) for strictly negative x, where
/// Ei(x) = -E1(-x) < 0. Arguments >= 0 never occur in the rate expressions
/// and are rejected. Below -746 the value underflows; a signed zero with the
/// underflow flag is returned.
inline SpecFunResult expint_Ei_neg(double x) {
  if (!(x < 0.0)) throw std::invalid_argument("expint_Ei_neg: argument must be < 0");
  if (x < -746.0) return {-0.0, std::numeric_limits<double>::denorm_min(), true};
  const SpecFunResult e1 = expint_E1(-x);
  return {-e1.value, e1.est_abs_error, e1.underflowed};
}

/// Gamma(-1, z) = int_z^inf t^-2 exp(-t) dt = exp(-z)/z - E1(z), z > 0.
inline SpecFunResult upper_gamma_m1(double z) {
  if (!(z > 0.0)) throw std::invalid_argument("upper_gamma_m1: argument must be > 0");
  if (z <= detail::kBranchSwitch) {
    const SpecFunResult e1 = detail::e1_series(z);
    const double lead = std::exp(-z) / z;
    const double value = lead - e1.value;
    return {value, e1.est_abs_error + 2.0 * std::numeric_limits<double>::epsilon() * lead, false};
  }
  const SpecFunResult scaled = detail::gamma_m1_cont_frac_scaled(z);
  const double damp = std::exp(-z) / z;
  double value = damp * scaled.value;
  if (value == 0.0) {
    return {0.0, std::numeric_limits<double>::denorm_min(), true};
  }
  return {value, damp * scaled.est_abs_error + std::numeric_limits<double>::epsilon() * value, false};
}

/// exp(z) * E1(z). Stable for any z > 0; pairs with an explicit exp(-t)
/// factor at the call sites so no intermediate overflows.
inline double expint_E1_scaled(double z) {
  if (!(z > 0.0)) throw std::invalid_argument("expint_E1_scaled: argument must be > 0");
  if (z <= detail::kBranchSwitch) return std::exp(z) * detail::e1_series(z).value;
  return detail::e1_cont_frac_scaled(z).value;
}

/// exp(z) * Gamma(-1, z). Stable for any z > 0.
inline double upper_gamma_m1_scaled(double z) {
  if (!(z > 0.0)) throw std::invalid_argument("upper_gamma_m1_scaled: argument must be > 0");
  if (z <= detail::kBranchSwitch) return std::exp(z) * upper_gamma_m1(z).value;
  return detail::gamma_m1_cont_frac_scaled(z).value / z;
}

}  // namespace uavsec::specfun
