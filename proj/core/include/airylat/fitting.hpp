#pragma once

#include <iosfwd>
#include <span>
#include <string_view>

#include "airylat/diagnostics.hpp"

namespace airylat {

/// Lab-frame kinematics of constant proper acceleration alpha with light
/// speed c, starting from rest at the origin.
struct RelativisticState {
  double x;
  double v;
  double a;
};

/// x = (c^2/alpha)(sqrt(1 + (alpha t/c)^2) - 1),
/// v = alpha t / sqrt(1 + (alpha t/c)^2),
/// a = alpha / (1 + (alpha t/c)^2)^{3/2}.
[[nodiscard]] RelativisticState predict_relativistic(double alpha, double c,
                                                     double t);

/// (alpha x/c^2 + 1)^2 - (alpha t/c)^2 - 1; zero on the hyperbolic
/// worldline.
[[nodiscard]] double hyperbola_residual(double alpha, double c, double t,
                                        double x) noexcept;

/// hyperbola_residual converted to a position offset to first order.
[[nodiscard]] double hyperbola_residual_position(double alpha, double c,
                                                 double t, double x) noexcept;

enum class FitMethod { linearized, refined, parabola_fallback };

[[nodiscard]] std::string_view to_string(FitMethod m) noexcept;

struct RelativisticFit {
  double alpha = 0.0;
  double c = 0.0;  // NaN for the parabola fallback
  double rms_residual = 0.0;
  FitMethod method = FitMethod::linearized;
  std::size_t n_points = 0;
  double t_first = 0.0;
  double t_last = 0.0;
  /// alpha * t_span / c from the hyperbolic fit (NaN when no hyperbolic
  /// solution exists).
  double relativistic_gate = 0.0;
  double linearized_rms = 0.0;

  [[nodiscard]] bool downgraded() const noexcept {
    return method == FitMethod::parabola_fallback;
  }
};

/// Below this alpha t_max / c the two-parameter fit is not trusted.
inline constexpr double kRelativisticGate = 0.3;

/// Two-parameter fit of the peak trajectory to the hyperbolic worldline.
/// Positions and times are re-origined to the first sample. Stage 1 solves
/// x = (alpha/2) t^2 - (alpha/(2c^2)) x^2 by linear least squares; stage 2
/// refines with damped Gauss-Newton. Falls back to fit_parabola when the
/// data are not relativistic enough.
[[nodiscard]] RelativisticFit fit_hyperbolic(const PeakTrajectory& trajectory);

/// Least-squares a for x = a t^2 / 2 with the origin pinned at the first
/// sample.
[[nodiscard]] double fit_parabola(const PeakTrajectory& trajectory);

struct ScalingPoint {
  double delta_x;
  double alpha;
};

struct ScalingFit {
  double exponent;
  double prefactor;
};

/// Power law alpha = prefactor * delta_x^exponent by regression in log-log.
/// Needs >= 3 positive points with distinct delta_x.
[[nodiscard]] ScalingFit fit_scaling(std::span<const ScalingPoint> points);

/// Centre of mass of a Bloch-oscillating packet, 2(J/V0)(1 - cos V0 t).
[[nodiscard]] double bloch_com_reference(double v0, double t);

/// Key-value report: alpha, c, rms_residual, method, n_points, t_range.
void write_fit(std::ostream& out, const RelativisticFit& fit);

}  // namespace airylat
