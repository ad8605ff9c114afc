#include "airylat/propagators.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "airylat/errors.hpp"
#include "airylat/special_functions.hpp"
#include "fourier.hpp"

namespace airylat {

namespace {

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGaussNodes = {
    -0.9061798459386639928, -0.5384693101056830910, 0.0,
    0.5384693101056830910, 0.9061798459386639928};
constexpr std::array<double, 5> kGaussWeights = {
    0.2369268850561890875, 0.4786286704993664680, 0.5688888888888888889,
    0.4786286704993664680, 0.2369268850561890875};

constexpr double kTimeEps = 1e-9;

// Running integrals C = int cos B, S = int sin B with B(t) = A(t) - A(t0),
// accumulated over sub-intervals no longer than dt.
class PhaseIntegral {
 public:
  PhaseIntegral(const LinearPotential& potential, double t0, double dt)
      : potential_(potential), a0_(potential_gauge(potential, t0)), dt_(dt) {}

  void advance(double from, double to) {
    if (to <= from) return;
    const auto steps =
        static_cast<long>(std::ceil((to - from) / dt_ - kTimeEps));
    const long n = std::max(1L, steps);
    const double h = (to - from) / static_cast<double>(n);
    for (long s = 0; s < n; ++s) {
      const double mid = from + (static_cast<double>(s) + 0.5) * h;
      double c = 0.0;
      double si = 0.0;
      for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
        const double t = mid + 0.5 * h * kGaussNodes[q];
        const double b = potential_gauge(potential_, t) - a0_;
        c += kGaussWeights[q] * std::cos(b);
        si += kGaussWeights[q] * std::sin(b);
      }
      cos_integral_ += 0.5 * h * c;
      sin_integral_ += 0.5 * h * si;
    }
  }

  [[nodiscard]] double cos_integral() const noexcept { return cos_integral_; }
  [[nodiscard]] double sin_integral() const noexcept { return sin_integral_; }
  [[nodiscard]] double relative_gauge(double t) const {
    return potential_gauge(potential_, t) - a0_;
  }

 private:
  const LinearPotential& potential_;
  double a0_;
  double dt_;
  double cos_integral_ = 0.0;
  double sin_integral_ = 0.0;
};

// Lab-frame state from the initial spectrum and the accumulated integrals.
WaveState assemble(const WaveState& initial, std::span<const Complex> spectrum,
                   std::span<const double> k, const detail::Fft& fft,
                   double cos_int, double sin_int, double gauge, double time) {
  const std::size_t n = spectrum.size();
  std::vector<Complex> buf(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double phase =
        2.0 * UnitSystem::J * (std::cos(k[m]) * cos_int + std::sin(k[m]) * sin_int);
    buf[m] = spectrum[m] * Complex(std::cos(phase), std::sin(phase)) * inv_n;
  }
  fft.backward(buf);
  const auto& grid = initial.grid();
  if (gauge != 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double theta = -static_cast<double>(grid.site(i)) * gauge;
      buf[i] *= Complex(std::cos(theta), std::sin(theta));
    }
  }
  return {grid, std::move(buf), time};
}

std::vector<double> snapshot_times(double t0, double t_final, double interval) {
  std::vector<double> times;
  const double span = t_final - t0;
  const auto count = static_cast<long>(std::floor(span / interval + kTimeEps));
  times.reserve(static_cast<std::size_t>(count) + 2);
  for (long i = 1; i <= count; ++i) {
    times.push_back(t0 + static_cast<double>(i) * interval);
  }
  if (times.empty() || t_final - times.back() > kTimeEps * std::max(1.0, interval)) {
    if (span > 0.0) times.push_back(t_final);
  } else {
    times.back() = std::min(times.back(), t_final);
  }
  return times;
}

}  // namespace

DriveSchedule::DriveSchedule(double omega, std::vector<DriveSegment> segments)
    : omega_(omega), segments_(std::move(segments)) {
  if (!(omega_ > 0.0) || !std::isfinite(omega_)) {
    throw ConfigurationError("DriveSchedule: omega must be positive");
  }
  if (segments_.empty()) {
    throw ConfigurationError("DriveSchedule: no segments");
  }
  if (segments_.front().t_start != 0.0) {
    throw ConfigurationError("DriveSchedule: first segment must start at t = 0");
  }
  for (std::size_t i = 1; i < segments_.size(); ++i) {
    if (!(segments_[i].t_start > segments_[i - 1].t_start)) {
      throw ConfigurationError(
          "DriveSchedule: segment start times must strictly increase");
    }
  }
  for (const auto& s : segments_) {
    if (!std::isfinite(s.k0)) {
      throw ConfigurationError("DriveSchedule: non-finite K0");
    }
  }
  // Within segment s: A(t) = A(t_s) + K0_s (sin(omega t) - sin(omega t_s)).
  gauge_at_start_.resize(segments_.size());
  gauge_at_start_[0] = 0.0;
  for (std::size_t i = 1; i < segments_.size(); ++i) {
    const auto& prev = segments_[i - 1];
    gauge_at_start_[i] =
        gauge_at_start_[i - 1] +
        prev.k0 * (std::sin(omega_ * segments_[i].t_start) -
                   std::sin(omega_ * prev.t_start));
  }
}

double DriveSchedule::period() const noexcept {
  return 2.0 * std::numbers::pi / omega_;
}

std::size_t DriveSchedule::segment_index(double t) const noexcept {
  std::size_t i = 0;
  while (i + 1 < segments_.size() && t >= segments_[i + 1].t_start) ++i;
  return i;
}

double DriveSchedule::k0_at(double t) const noexcept {
  return segments_[segment_index(t)].k0;
}

double DriveSchedule::slope(double t) const noexcept {
  return k0_at(t) * omega_ * std::cos(omega_ * t);
}

double DriveSchedule::gauge(double t) const noexcept {
  const std::size_t i = segment_index(t);
  const auto& seg = segments_[i];
  return gauge_at_start_[i] +
         seg.k0 * (std::sin(omega_ * t) - std::sin(omega_ * seg.t_start));
}

double potential_slope(const LinearPotential& p, double t) {
  return std::visit([t](const auto& v) { return v.slope(t); }, p);
}

double potential_gauge(const LinearPotential& p, double t) {
  return std::visit([t](const auto& v) { return v.gauge(t); }, p);
}

void StepperConfig::validate(const LinearPotential& potential) const {
  if (!(dt > 0.0) || !(snapshot_interval > 0.0)) {
    throw ConfigurationError("StepperConfig: dt and snapshot interval must be > 0");
  }
  if (dt > snapshot_interval) {
    throw ConfigurationError("StepperConfig: dt exceeds the snapshot interval");
  }
  if (const auto* drive = std::get_if<DriveSchedule>(&potential)) {
    if (dt > drive->period() / 128.0 * (1.0 + 1e-12)) {
      throw ConfigurationError(
          "StepperConfig: dt must resolve the drive period (dt <= T/128)");
    }
  }
  if (const auto* tilt = std::get_if<TiltSpec>(&potential)) {
    if (!std::isfinite(tilt->v0)) {
      throw ConfigurationError("TiltSpec: V0 must be finite");
    }
  }
}

StepperConfig StepperConfig::defaults_for(const LinearPotential& potential,
                                          double snapshot_interval) {
  StepperConfig cfg;
  cfg.snapshot_interval = snapshot_interval;
  if (const auto* drive = std::get_if<DriveSchedule>(&potential)) {
    cfg.dt = drive->period() / 256.0;
  } else {
    cfg.dt = std::min(0.02, snapshot_interval);
  }
  return cfg;
}

WaveState evolve_free_exact(const WaveState& state, double t_final) {
  const double t0 = state.time();
  if (t_final < t0) {
    throw DomainError("evolve_free_exact: t_final precedes the state time");
  }
  if (t_final == t0) return state;
  const std::size_t n = state.grid().size();
  detail::Fft fft(n);
  std::vector<Complex> spectrum(state.amplitudes().begin(), state.amplitudes().end());
  fft.forward(spectrum);
  const auto k = detail::fft_angular_frequencies(n);
  return assemble(state, spectrum, k, fft, t_final - t0, 0.0, 0.0, t_final);
}

void propagate_gauged(const WaveState& state, const LinearPotential& potential,
                      double t_final, const StepperConfig& config,
                      const SnapshotSink& sink) {
  config.validate(potential);
  const double t0 = state.time();
  if (t_final < t0) {
    throw DomainError("evolve_gauged_exact: t_final precedes the state time");
  }

  const std::size_t n = state.grid().size();
  detail::Fft fft(n);
  std::vector<Complex> spectrum(state.amplitudes().begin(), state.amplitudes().end());
  fft.forward(spectrum);
  const auto k = detail::fft_angular_frequencies(n);

  // Integration breakpoints where the drive amplitude jumps.
  std::vector<double> breaks;
  if (const auto* drive = std::get_if<DriveSchedule>(&potential)) {
    for (const auto& seg : drive->segments()) {
      if (seg.t_start > t0 && seg.t_start < t_final) breaks.push_back(seg.t_start);
    }
  }

  sink(state);
  PhaseIntegral integral(potential, t0, config.dt);
  double t_prev = t0;
  std::size_t next_break = 0;
  for (const double target : snapshot_times(t0, t_final, config.snapshot_interval)) {
    while (next_break < breaks.size() && breaks[next_break] < target) {
      integral.advance(t_prev, breaks[next_break]);
      t_prev = breaks[next_break++];
    }
    integral.advance(t_prev, target);
    t_prev = target;
    sink(assemble(state, spectrum, k, fft, integral.cos_integral(),
                  integral.sin_integral(), integral.relative_gauge(target), target));
  }
}

std::vector<WaveState> evolve_gauged_exact(const WaveState& state,
                                           const LinearPotential& potential,
                                           double t_final,
                                           const StepperConfig& config) {
  std::vector<WaveState> snapshots;
  propagate_gauged(state, potential, t_final, config,
                   [&snapshots](const WaveState& s) { snapshots.push_back(s); });
  return snapshots;
}

WaveState step_crank_nicolson(const WaveState& state,
                              std::span<const double> site_potential, double dt) {
  const std::size_t n = state.grid().size();
  if (!(dt > 0.0)) throw DomainError("step_crank_nicolson: dt must be > 0");
  if (site_potential.size() != n) {
    throw ConfigurationError(
        "step_crank_nicolson: potential length does not match the grid");
  }
  const auto psi = state.amplitudes();
  const Complex half_i{0.0, 0.5 * dt};
  // H has -J on the off-diagonals, so (1 -+ i dt H / 2) carry +-i dt J / 2.
  const Complex rhs_off = half_i * UnitSystem::J;
  const Complex lower = -half_i * UnitSystem::J;

  std::vector<Complex> rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex neighbours{0.0, 0.0};
    if (i > 0) neighbours += psi[i - 1];
    if (i + 1 < n) neighbours += psi[i + 1];
    rhs[i] = (1.0 - half_i * site_potential[i]) * psi[i] + rhs_off * neighbours;
  }

  // Thomas algorithm for the symmetric tridiagonal system.
  std::vector<Complex> c_prime(n);
  std::vector<Complex> out(n);
  Complex pivot = 1.0 + half_i * site_potential[0];
  if (std::abs(pivot) < 1e-300) throw InternalError("step_crank_nicolson: singular pivot");
  c_prime[0] = lower / pivot;
  out[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = 1.0 + half_i * site_potential[i] - lower * c_prime[i - 1];
    if (std::abs(pivot) < 1e-300) {
      throw InternalError("step_crank_nicolson: singular pivot");
    }
    c_prime[i] = lower / pivot;
    out[i] = (rhs[i] - lower * out[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) out[i] -= c_prime[i] * out[i + 1];

  return {state.grid(), std::move(out), state.time() + dt};
}

WaveState evolve_crank_nicolson(const WaveState& state,
                                const LinearPotential& potential, double t_final,
                                double dt) {
  const double t0 = state.time();
  if (t_final < t0) {
    throw DomainError("evolve_crank_nicolson: t_final precedes the state time");
  }
  if (!(dt > 0.0)) throw DomainError("evolve_crank_nicolson: dt must be > 0");
  const auto steps = static_cast<long>(std::ceil((t_final - t0) / dt - kTimeEps));
  if (steps <= 0) return state;
  const double h = (t_final - t0) / static_cast<double>(steps);
  const auto& grid = state.grid();
  std::vector<double> v(grid.size());
  WaveState current = state;
  for (long s = 0; s < steps; ++s) {
    const double slope = potential_slope(potential, t0 + (static_cast<double>(s) + 0.5) * h);
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = slope * static_cast<double>(grid.site(i));
    }
    current = step_crank_nicolson(current, v, h);
  }
  current.set_time(t_final);
  return current;
}

double effective_tunneling(double k0) { return UnitSystem::J * bessel_j0(k0); }

double refractive_index(double k0) {
  const double j0 = bessel_j0(k0);
  if (std::abs(j0) < kRefractiveDivergence) {
    throw DivergenceError("refractive_index: J0(K0) vanishes, index diverges");
  }
  return 1.0 / j0;
}

}  // namespace airylat
