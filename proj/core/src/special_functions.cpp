#include "airylat/special_functions.hpp"

#include <cmath>
#include <numbers>

#include "airylat/errors.hpp"

namespace airylat {

namespace {

constexpr long double kAi0 = 0.355028053887817239260063186L;   // Ai(0)
constexpr long double kAip0 = 0.258819403792806798405183560L;  // -Ai'(0)
constexpr long double kSeriesRelTol = 1e-18L;
constexpr int kMaxTerms = 400;

void require_finite(double v, const char* fn) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string(fn) + ": argument is not finite");
  }
}

}  // namespace

namespace detail {

// Ai(x) = Ai(0) f(x) + Ai'(0) g(x) with
//   f = sum_k 3^k (1/3)_k x^{3k}   / (3k)!
//   g = sum_k 3^k (2/3)_k x^{3k+1} / (3k+1)!
// Each term follows from the previous one by a ratio in x^3. The sums are
// accumulated in long double: near |x| = 8 the terms cancel down by ~1e4.
double airy_series(double xd) {
  const long double x = xd;
  const long double x3 = x * x * x;
  long double f_term = 1.0L;
  long double g_term = x;
  long double f = f_term;
  long double g = g_term;
  for (int k = 1; k < kMaxTerms; ++k) {
    f_term *= x3 / ((3.0L * k - 1.0L) * (3.0L * k));
    g_term *= x3 / ((3.0L * k) * (3.0L * k + 1.0L));
    f += f_term;
    g += g_term;
    const long double scale = std::abs(kAi0 * f) + std::abs(kAip0 * g);
    if (std::abs(kAi0 * f_term) + std::abs(kAip0 * g_term) <
        kSeriesRelTol * scale) {
      break;
    }
  }
  return static_cast<double>(kAi0 * f - kAip0 * g);
}

// Large-|x| expansions in zeta = 2|x|^{3/2}/3 with coefficients
//   u_k = (6k-5)(6k-3)(6k-1) / ((2k-1) 216 k) u_{k-1},  u_0 = 1,
// summed until the terms stop decreasing (optimal truncation).
double airy_asymptotic(double x) {
  const double ax = std::abs(x);
  const double zeta = 2.0 / 3.0 * ax * std::sqrt(ax);
  const double quarter = std::pow(ax, 0.25);
  const double sqrt_pi = std::sqrt(std::numbers::pi);

  if (x > 0.0) {
    double sum = 1.0;
    double term = 1.0;
    double u = 1.0;
    double zeta_pow = 1.0;
    for (int k = 1; k < kMaxTerms; ++k) {
      u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) /
           ((2.0 * k - 1.0) * 216.0 * k);
      zeta_pow *= zeta;
      const double next = u / zeta_pow;
      if (next >= std::abs(term) || next < 1e-17) break;
      term = (k % 2 == 0) ? next : -next;
      sum += term;
    }
    return std::exp(-zeta) / (2.0 * sqrt_pi * quarter) * sum;
  }

  // Ai(-x) = [cos(zeta - pi/4) P - ... ] / (sqrt(pi) x^{1/4}), where the
  // even and odd coefficients split into the cosine and sine parts.
  double even = 1.0;
  double odd = 0.0;
  double u = 1.0;
  double zeta_pow = 1.0;
  double last = 1.0;
  for (int k = 1; k < kMaxTerms; ++k) {
    u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) /
         ((2.0 * k - 1.0) * 216.0 * k);
    zeta_pow *= zeta;
    const double mag = u / zeta_pow;
    if (mag >= last || mag < 1e-17) break;
    last = mag;
    // k even -> even series, sign (-1)^{k/2}; k odd -> odd series,
    // sign (-1)^{(k-1)/2}.
    const int half = k / 2;
    const double sign = (half % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      even += sign * mag;
    } else {
      odd += sign * mag;
    }
  }
  const double phase = zeta - std::numbers::pi / 4.0;
  return (std::cos(phase) * even + std::sin(phase) * odd) /
         (sqrt_pi * quarter);
}

double bessel_j0_series(double u) {
  const long double q = -0.25L * static_cast<long double>(u) * u;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k < kMaxTerms; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    sum += term;
    if (std::abs(term) < kSeriesRelTol * std::abs(sum) && k > 2) break;
  }
  return static_cast<double>(sum);
}

// Hankel expansion J0(u) ~ sqrt(2/(pi u)) (P cos chi - Q sin chi),
// chi = u - pi/4, with a_k = prod_{m=1..k} (-(2m-1)^2) / (k! 8^k).
double bessel_j0_asymptotic(double u) {
  const double au = std::abs(u);
  double p = 1.0;
  double q = 0.0;
  double a = 1.0;
  double last = 1.0;
  double upow = 1.0;
  for (int k = 1; k < kMaxTerms; ++k) {
    const double odd = 2.0 * k - 1.0;
    a *= -(odd * odd) / (8.0 * k);
    upow *= au;
    const double t = a / upow;
    if (std::abs(t) >= last || std::abs(t) < 1e-17) break;
    last = std::abs(t);
    // P sums (-1)^m a_{2m} u^{-2m}, Q sums (-1)^m a_{2m+1} u^{-2m-1}.
    const int half = k / 2;
    const double sign = (half % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      p += sign * t;
    } else {
      q += sign * t;
    }
  }
  const double chi = au - std::numbers::pi / 4.0;
  return std::sqrt(2.0 / (std::numbers::pi * au)) *
         (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace detail

EvalRegime airy_regime(double x) noexcept {
  using K = EvalRegime::Kind;
  if (std::abs(x) <= kAirySwitchRadius) return {K::series, kAirySwitchRadius};
  return {x > 0 ? K::asymptotic_positive : K::asymptotic_negative,
          kAirySwitchRadius};
}

EvalRegime bessel_regime(double u) noexcept {
  using K = EvalRegime::Kind;
  if (std::abs(u) <= kBesselSwitchRadius) {
    return {K::series, kBesselSwitchRadius};
  }
  return {u > 0 ? K::asymptotic_positive : K::asymptotic_negative,
          kBesselSwitchRadius};
}

double airy_ai(double x) {
  require_finite(x, "airy_ai");
  if (airy_regime(x).kind == EvalRegime::Kind::series) {
    return detail::airy_series(x);
  }
  return detail::airy_asymptotic(x);
}

double bessel_j0(double u) {
  require_finite(u, "bessel_j0");
  if (bessel_regime(u).kind == EvalRegime::Kind::series) {
    return detail::bessel_j0_series(u);
  }
  return detail::bessel_j0_asymptotic(u);
}

}  // namespace airylat
