#include "airylat/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "airylat/errors.hpp"
#include "text_format.hpp"

namespace airylat {

namespace {

constexpr double kFlatDenominator = 1e-15;

bool uniform_spacing(std::span<const double> t) {
  if (t.size() < 2) return true;
  const double h = t[1] - t[0];
  for (std::size_t i = 2; i < t.size(); ++i) {
    if (std::abs((t[i] - t[i - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      return false;
    }
  }
  return true;
}

std::vector<double> boxcar(std::span<const double> v, std::size_t window) {
  const std::size_t n = v.size();
  const std::size_t half = window / 2;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Shrink symmetrically at the ends so linear data stays linear.
    const std::size_t h = std::min({half, i, n - 1 - i});
    double sum = 0.0;
    for (std::size_t j = i - h; j <= i + h; ++j) sum += v[j];
    out[i] = sum / static_cast<double>(2 * h + 1);
  }
  return out;
}

}  // namespace

void PeakTrajectory::validate() const {
  const std::size_t n = times.size();
  if (positions.size() != n || (!velocities.empty() && velocities.size() != n) ||
      (!accelerations.empty() && accelerations.size() != n) ||
      (!peak_densities.empty() && peak_densities.size() != n)) {
    throw DomainError("PeakTrajectory: columns differ in length");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(times[i] > times[i - 1])) {
      throw DomainError("PeakTrajectory: times must strictly increase");
    }
  }
}

PeakTrajectory PeakTrajectory::head(std::size_t count) const {
  auto cut = [count](const std::vector<double>& v) {
    return std::vector<double>(v.begin(), v.begin() + static_cast<long>(std::min(count, v.size())));
  };
  return {cut(times), cut(positions), cut(velocities), cut(accelerations),
          cut(peak_densities)};
}

double parabolic_offset(double d_minus, double d0, double d_plus) noexcept {
  const double denom = d_minus - 2.0 * d0 + d_plus;
  if (std::abs(denom) < kFlatDenominator) return 0.0;
  return 0.5 * (d_minus - d_plus) / denom;
}

double find_main_peak(const WaveState& state) {
  const auto d = state.density();
  const auto it = std::max_element(d.begin(), d.end());
  const auto i = static_cast<std::size_t>(it - d.begin());
  if (i == 0 || i + 1 == d.size()) {
    throw BoundaryError("find_main_peak: maximum density on the grid boundary");
  }
  return static_cast<double>(state.grid().site(i)) +
         parabolic_offset(d[i - 1], d[i], d[i + 1]);
}

void PeakTracker::push(const WaveState& snap) {
  auto& out = trajectory_;
  const auto& grid = snap.grid();
  if (out.times.empty()) {
    const double pos = find_main_peak(snap);
    out.times.push_back(snap.time());
    out.positions.push_back(pos);
    out.peak_densities.push_back(std::norm(snap.at(std::lround(pos))));
    return;
  }
  const std::size_t last_good = out.size() - 1;
  const double dt = snap.time() - out.times.back();
  // Either direction works, so a reversed sequence retraces the same path.
  const double direction = out.size() < 2 ? dt : out.times[1] - out.times[0];
  if (!(dt * direction > 0.0)) {
    throw DomainError("PeakTracker: snapshot times must be strictly monotone");
  }
  double predicted = out.positions.back();
  if (out.size() >= 2) {
    const std::size_t m = out.size();
    const double prev_dt = out.times[m - 1] - out.times[m - 2];
    predicted += (out.positions[m - 1] - out.positions[m - 2]) * dt / prev_dt;
  }
  const auto half = static_cast<long>(std::ceil(std::max(5.0, 3.0 * v_max_ * std::abs(dt))));
  const long centre = std::lround(predicted);
  const long lo = std::max(grid.j_min() + 1, centre - half);
  const long hi = std::min(grid.j_max() - 1, centre + half);
  if (lo > hi) {
    throw TrackingLostError(
        "track_peak: search window left the grid at t = " + std::to_string(snap.time()),
        last_good);
  }
  const auto amp = snap.amplitudes();
  const auto dens = [&](long j) { return std::norm(amp[grid.index(j)]); };
  long best = lo;
  for (long j = lo + 1; j <= hi; ++j) {
    if (dens(j) > dens(best)) best = j;
  }
  const double d0 = dens(best);
  const double dm = dens(best - 1);
  const double dp = dens(best + 1);
  // The window maximum must be a genuine local maximum of the density.
  if (!(d0 >= dm && d0 >= dp) || !(d0 > 0.0)) {
    throw TrackingLostError("track_peak: no peak inside the continuity window at t = " +
                                std::to_string(snap.time()),
                            last_good);
  }
  out.times.push_back(snap.time());
  out.positions.push_back(static_cast<double>(best) + parabolic_offset(dm, d0, dp));
  out.peak_densities.push_back(d0);
}

PeakTrajectory track_peak(std::span<const WaveState> snapshots, double v_max) {
  if (snapshots.size() < 2) {
    throw DomainError("track_peak: need at least two snapshots");
  }
  PeakTracker tracker(v_max);
  for (const auto& s : snapshots) tracker.push(s);
  return tracker.release();
}

PeakTrajectory differentiate(PeakTrajectory series, int order, std::size_t window) {
  series.validate();
  const std::size_t n = series.size();
  if (order != 1 && order != 2) throw DomainError("differentiate: order must be 1 or 2");
  if (n < (order == 1 ? 3u : 5u)) {
    throw DomainError("differentiate: not enough points for order " +
                      std::to_string(order));
  }
  if (!uniform_spacing(series.times)) {
    throw DomainError("differentiate: time spacing is not uniform");
  }
  const double h = (series.times.back() - series.times.front()) /
                   static_cast<double>(n - 1);
  const auto& x = series.positions;

  // Second-order differences throughout; one-sided at the ends. Smoothing
  // the differenced series equals differencing the smoothed positions in
  // the interior.
  std::vector<double> v(n);
  v[0] = (-3.0 * x[0] + 4.0 * x[1] - x[2]) / (2.0 * h);
  v[n - 1] = (3.0 * x[n - 1] - 4.0 * x[n - 2] + x[n - 3]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) v[i] = (x[i + 1] - x[i - 1]) / (2.0 * h);
  series.velocities = boxcar(v, window);

  if (order == 2) {
    std::vector<double> a(n);
    const double h2 = h * h;
    a[0] = (2.0 * x[0] - 5.0 * x[1] + 4.0 * x[2] - x[3]) / h2;
    a[n - 1] = (2.0 * x[n - 1] - 5.0 * x[n - 2] + 4.0 * x[n - 3] - x[n - 4]) / h2;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      a[i] = (x[i + 1] - 2.0 * x[i] + x[i - 1]) / h2;
    }
    series.accelerations = boxcar(a, window);
  }
  return series;
}

void MomentumDriftTracker::push(const WaveState& snap) {
  MomentumDrift& out = drift_;
  const double two_pi = 2.0 * std::numbers::pi;
  const auto md = momentum_density(snap);
  const std::size_t n = md.density.size();
  const auto& d = md.density;
  const auto imax = static_cast<std::size_t>(
      std::max_element(d.begin(), d.end()) - d.begin());
  const double peak = d[imax];

  std::vector<double> sorted = d;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(n / 2), sorted.end());
  const double median = sorted[n / 2];
  if (!(peak >= 2.0 * median)) {
    throw AmbiguityError("momentum_peak_drift: no prominent peak at t = " +
                         std::to_string(snap.time()));
  }
  // Any other local maximum at half the peak height or more is a rival.
  std::string rivals;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = d[(i + n - 1) % n];
    const double right = d[(i + 1) % n];
    if (d[i] >= 0.5 * peak && d[i] > left && d[i] >= right) {
      const std::size_t gap = std::min((i + n - imax) % n, (imax + n - i) % n);
      if (gap > 2) rivals += " k=" + std::to_string(md.k[i]);
    }
  }
  if (!rivals.empty()) {
    throw AmbiguityError("momentum_peak_drift: multimodal density at t = " +
                         std::to_string(snap.time()) + ", candidates k=" +
                         std::to_string(md.k[imax]) + rivals);
  }
  const double offset =
      parabolic_offset(d[(imax + n - 1) % n], peak, d[(imax + 1) % n]);
  const double k = wrap_momentum(md.k[imax] + offset * two_pi / static_cast<double>(n));

  if (!out.times.empty()) {
    const double step = wrap_momentum(k - out.k_wrapped.back());
    const double prev = out.k_unwrapped.back();
    const double next = prev + step;
    // Zone-edge crossings sit at odd multiples of pi in the unwrapped
    // series; interpolate the crossing time linearly.
    const double lo = std::min(prev, next);
    const double hi = std::max(prev, next);
    const double first = std::ceil((lo - std::numbers::pi) / two_pi);
    for (double m = first; std::numbers::pi + m * two_pi <= hi; m += 1.0) {
      const double edge = std::numbers::pi + m * two_pi;
      if (edge <= lo) continue;
      const double frac = (edge - prev) / (next - prev);
      out.wrap_times.push_back(out.times.back() +
                               frac * (snap.time() - out.times.back()));
    }
    out.k_unwrapped.push_back(next);
  } else {
    out.k_unwrapped.push_back(k);
  }
  out.times.push_back(snap.time());
  out.k_wrapped.push_back(k);
}

MomentumDrift momentum_peak_drift(std::span<const WaveState> snapshots) {
  MomentumDriftTracker tracker;
  for (const auto& s : snapshots) tracker.push(s);
  return tracker.drift();
}

double center_of_mass(const WaveState& state) {
  const auto amp = state.amplitudes();
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const double p = std::norm(amp[i]);
    weighted += static_cast<double>(state.grid().site(i)) * p;
    total += p;
  }
  if (!(total > 0.0)) throw DomainError("center_of_mass: zero state");
  return weighted / total;
}

void write_trajectory(std::ostream& out, const PeakTrajectory& trajectory) {
  using detail::format_number;
  out << "t,position,velocity,acceleration\n";
  const auto col = [](const std::vector<double>& v, std::size_t i) {
    return i < v.size() ? format_number(v[i]) : std::string("nan");
  };
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    out << format_number(trajectory.times[i]) << ','
        << format_number(trajectory.positions[i]) << ','
        << col(trajectory.velocities, i) << ',' << col(trajectory.accelerations, i)
        << '\n';
  }
}

}  // namespace airylat
