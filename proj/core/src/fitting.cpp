#include "airylat/fitting.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

#include "airylat/errors.hpp"
#include "text_format.hpp"

namespace airylat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kMaxIterations = 100;
constexpr double kConvergence = 1e-10;

struct Origined {
  std::vector<double> t;
  std::vector<double> x;
};

Origined re_origin(const PeakTrajectory& traj) {
  Origined o;
  o.t.reserve(traj.size());
  o.x.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    o.t.push_back(traj.times[i] - traj.times[0]);
    o.x.push_back(traj.positions[i] - traj.positions[0]);
  }
  return o;
}

// s - 1 with s = sqrt(1 + u^2), without cancellation at small u.
double sqrt1p_minus1(double u2) { return u2 / (std::sqrt(1.0 + u2) + 1.0); }

double model(double alpha, double c, double t) {
  const double u = alpha * t / c;
  return c * c / alpha * sqrt1p_minus1(u * u);
}

double sum_squares(const Origined& d, double alpha, double c) {
  double ss = 0.0;
  for (std::size_t i = 0; i < d.t.size(); ++i) {
    const double r = d.x[i] - model(alpha, c, d.t[i]);
    ss += r * r;
  }
  return ss;
}

double parabola_accel(const Origined& d) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < d.t.size(); ++i) {
    const double t2 = d.t[i] * d.t[i];
    num += d.x[i] * t2;
    den += t2 * t2;
  }
  if (!(den > 0.0)) throw DomainError("fit_parabola: all times coincide");
  return 2.0 * num / den;
}

}  // namespace

RelativisticState predict_relativistic(double alpha, double c, double t) {
  if (!(alpha > 0.0) || !(c > 0.0) || !(t >= 0.0)) {
    throw DomainError("predict_relativistic: need alpha > 0, c > 0, t >= 0");
  }
  const double u = alpha * t / c;
  const double s = std::sqrt(1.0 + u * u);
  return {c * c / alpha * sqrt1p_minus1(u * u), alpha * t / s, alpha / (s * s * s)};
}

double hyperbola_residual(double alpha, double c, double t, double x) noexcept {
  const double lhs = alpha * x / (c * c) + 1.0;
  const double u = alpha * t / c;
  return lhs * lhs - u * u - 1.0;
}

double hyperbola_residual_position(double alpha, double c, double t,
                                   double x) noexcept {
  const double slope = 2.0 * (alpha * x / (c * c) + 1.0) * alpha / (c * c);
  return hyperbola_residual(alpha, c, t, x) / slope;
}

std::string_view to_string(FitMethod m) noexcept {
  switch (m) {
    case FitMethod::linearized:
      return "linearized";
    case FitMethod::refined:
      return "refined";
    case FitMethod::parabola_fallback:
      return "parabola-fallback";
  }
  return "unknown";
}

double fit_parabola(const PeakTrajectory& trajectory) {
  trajectory.validate();
  if (trajectory.size() < 3) throw DomainError("fit_parabola: need >= 3 points");
  return parabola_accel(re_origin(trajectory));
}

RelativisticFit fit_hyperbolic(const PeakTrajectory& trajectory) {
  trajectory.validate();
  if (trajectory.size() < 10) {
    throw DomainError("fit_hyperbolic: need >= 10 points");
  }
  const Origined d = re_origin(trajectory);
  const std::size_t n = d.t.size();
  const double t_span = d.t.back();

  RelativisticFit fit;
  fit.n_points = n;
  fit.t_first = trajectory.times.front();
  fit.t_last = trajectory.times.back();

  // Stage 1: x = A t^2 + B x^2 with A = alpha/2, B = -alpha/(2c^2).
  double stt = 0.0, stx = 0.0, sxx = 0.0, sty = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = d.t[i] * d.t[i];
    const double q = d.x[i] * d.x[i];
    stt += p * p;
    stx += p * q;
    sxx += q * q;
    sty += p * d.x[i];
    sxy += q * d.x[i];
  }
  const double det = stt * sxx - stx * stx;
  double alpha = kNaN;
  double c = kNaN;
  if (std::abs(det) > 1e-300 * std::max(1.0, stt * sxx)) {
    const double a_coef = (sty * sxx - stx * sxy) / det;
    const double b_coef = (stt * sxy - stx * sty) / det;
    if (a_coef > 0.0 && b_coef < 0.0) {
      alpha = 2.0 * a_coef;
      c = std::sqrt(-a_coef / b_coef);
    }
  }

  auto fallback = [&](double gate) {
    fit.method = FitMethod::parabola_fallback;
    fit.alpha = parabola_accel(d);
    fit.c = kNaN;
    fit.relativistic_gate = gate;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = d.x[i] - 0.5 * fit.alpha * d.t[i] * d.t[i];
      ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
    fit.linearized_rms = kNaN;
    return fit;
  };

  if (!std::isfinite(alpha) || !std::isfinite(c)) return fallback(kNaN);

  // Stage 2: Levenberg-Marquardt on (alpha, c).
  double ss = sum_squares(d, alpha, c);
  fit.linearized_rms = std::sqrt(ss / static_cast<double>(n));
  double lambda = 1e-3;
  bool improved = false;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    std::array<double, 3> jtj{};  // (aa, ac, cc)
    std::array<double, 2> jtr{};
    for (std::size_t i = 0; i < n; ++i) {
      const double t = d.t[i];
      const double u = alpha * t / c;
      const double s = std::sqrt(1.0 + u * u);
      const double sm1 = sqrt1p_minus1(u * u);
      const double d_alpha = -(c * c) / (alpha * alpha) * sm1 + t * t / s;
      const double d_c = 2.0 * c / alpha * sm1 - alpha * t * t / (c * s);
      const double r = d.x[i] - c * c / alpha * sm1;
      jtj[0] += d_alpha * d_alpha;
      jtj[1] += d_alpha * d_c;
      jtj[2] += d_c * d_c;
      jtr[0] += d_alpha * r;
      jtr[1] += d_c * r;
    }
    bool accepted = false;
    double rel_change = 0.0;
    for (int attempt = 0; attempt < 30 && !accepted; ++attempt) {
      const double m00 = jtj[0] * (1.0 + lambda);
      const double m11 = jtj[2] * (1.0 + lambda);
      const double m01 = jtj[1];
      const double dm = m00 * m11 - m01 * m01;
      if (!(std::abs(dm) > 0.0)) {
        lambda *= 10.0;
        continue;
      }
      const double da = (jtr[0] * m11 - m01 * jtr[1]) / dm;
      const double dc = (m00 * jtr[1] - m01 * jtr[0]) / dm;
      const double na = alpha + da;
      const double nc = c + dc;
      if (na > 0.0 && nc > 0.0) {
        const double nss = sum_squares(d, na, nc);
        if (nss <= ss) {
          rel_change = std::max(std::abs(da) / alpha, std::abs(dc) / c);
          alpha = na;
          c = nc;
          ss = nss;
          lambda = std::max(lambda / 10.0, 1e-12);
          accepted = true;
          improved = true;
          break;
        }
      }
      lambda *= 10.0;
    }
    if (!accepted || rel_change < kConvergence) break;
  }

  fit.alpha = alpha;
  fit.c = c;
  fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
  fit.method = improved ? FitMethod::refined : FitMethod::linearized;
  fit.relativistic_gate = alpha * t_span / c;
  if (fit.relativistic_gate < kRelativisticGate) {
    return fallback(fit.relativistic_gate);
  }
  return fit;
}

ScalingFit fit_scaling(std::span<const ScalingPoint> points) {
  if (points.size() < 3) {
    throw DomainError("fit_scaling: need at least three points");
  }
  double sx = 0.0, sy = 0.0;
  for (const auto& p : points) {
    if (!(p.delta_x > 0.0) || !(p.alpha > 0.0)) {
      throw DomainError("fit_scaling: delta_x and alpha must be positive");
    }
    sx += std::log(p.delta_x);
    sy += std::log(p.alpha);
  }
  const auto m = static_cast<double>(points.size());
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    const double dx = std::log(p.delta_x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(p.alpha) - my);
  }
  if (!(sxx > 1e-24)) {
    throw DomainError("fit_scaling: delta_x values do not vary (rank deficient)");
  }
  const double slope = sxy / sxx;
  return {slope, std::exp(my - slope * mx)};
}

double bloch_com_reference(double v0, double t) {
  if (v0 == 0.0) {
    throw DomainError("bloch_com_reference: V0 = 0 has no Bloch oscillation");
  }
  return 2.0 * (UnitSystem::J / v0) * (1.0 - std::cos(v0 * t));
}

void write_fit(std::ostream& out, const RelativisticFit& fit) {
  using detail::format_number;
  out << "alpha = " << format_number(fit.alpha) << '\n'
      << "c = " << format_number(fit.c) << '\n'
      << "rms_residual = " << format_number(fit.rms_residual) << '\n'
      << "method = " << to_string(fit.method) << '\n'
      << "n_points = " << fit.n_points << '\n'
      << "t_range = " << format_number(fit.t_first) << ':'
      << format_number(fit.t_last) << '\n'
      << "relativistic_gate = " << format_number(fit.relativistic_gate) << '\n';
}

}  // namespace airylat
