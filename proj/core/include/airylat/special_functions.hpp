#pragma once

// Airy Ai and Bessel J0 on the real line, built from elementary functions
// only (exp, sin, cos, sqrt, pow).

namespace airylat {

/// Which expansion evaluates a special function at a given argument.
struct EvalRegime {
  enum class Kind { series, asymptotic_positive, asymptotic_negative };
  Kind kind;
  double switch_radius;  // |argument| beyond which asymptotics take over
};

inline constexpr double kAirySwitchRadius = 8.0;
inline constexpr double kBesselSwitchRadius = 16.0;

/// Ai(x). Absolute error <= 1e-9 on |x| <= 50. Throws DomainError for
/// non-finite x.
[[nodiscard]] double airy_ai(double x);

/// J0(u). Absolute error <= 1e-10 on |u| <= 20. Throws DomainError for
/// non-finite u.
[[nodiscard]] double bessel_j0(double u);

[[nodiscard]] EvalRegime airy_regime(double x) noexcept;
[[nodiscard]] EvalRegime bessel_regime(double u) noexcept;

namespace detail {
// Individual branches, exposed so the regime overlap can be tested.
double airy_series(double x);
double airy_asymptotic(double x);
double bessel_j0_series(double u);
double bessel_j0_asymptotic(double u);
}  // namespace detail

}  // namespace airylat
