#include "airylat/lattice.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "airylat/errors.hpp"
#include "fourier.hpp"
#include "text_format.hpp"

namespace airylat {

LatticeGrid::LatticeGrid(double delta_x, long j_min, long j_max)
    : delta_x_(delta_x), j_min_(j_min), j_max_(j_max) {
  if (!(delta_x > 0.0) || !std::isfinite(delta_x)) {
    throw ConfigurationError("LatticeGrid: delta_x must be positive");
  }
  if (j_min >= j_max) {
    throw ConfigurationError("LatticeGrid: j_min must be < j_max");
  }
}

LatticeGrid LatticeGrid::padded(long sites) const {
  if (sites < 0) throw ConfigurationError("LatticeGrid: negative padding");
  return {delta_x_, j_min_ - sites, j_max_ + sites};
}

WaveState::WaveState(LatticeGrid grid, std::vector<Complex> amplitudes,
                     double time)
    : grid_(grid), amplitudes_(std::move(amplitudes)), time_(time) {
  if (amplitudes_.size() != grid_.size()) {
    throw ConfigurationError("WaveState: amplitude count " +
                             std::to_string(amplitudes_.size()) +
                             " does not match grid size " +
                             std::to_string(grid_.size()));
  }
}

double WaveState::norm_squared() const noexcept {
  double sum = 0.0;
  for (const auto& a : amplitudes_) sum += std::norm(a);
  return sum;
}

void WaveState::normalize() {
  const double n2 = norm_squared();
  if (!(n2 > 0.0) || !std::isfinite(n2)) {
    throw DomainError("WaveState::normalize: state has zero or invalid norm");
  }
  const double scale = 1.0 / std::sqrt(n2);
  for (auto& a : amplitudes_) a *= scale;
}

std::vector<double> WaveState::density() const {
  std::vector<double> d(amplitudes_.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::norm(amplitudes_[i]);
  return d;
}

WaveState WaveState::embedded_in(const LatticeGrid& larger) const {
  if (larger.delta_x() != grid_.delta_x() ||
      !larger.contains(grid_.j_min()) || !larger.contains(grid_.j_max())) {
    throw ConfigurationError(
        "WaveState::embedded_in: target grid does not contain the state");
  }
  std::vector<Complex> out(larger.size());
  const std::size_t offset = larger.index(grid_.j_min());
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    out[offset + i] = amplitudes_[i];
  }
  return {larger, std::move(out), time_};
}

double fidelity(const WaveState& a, const WaveState& b) {
  if (!(a.grid() == b.grid())) {
    throw ConfigurationError("fidelity: states live on different grids");
  }
  Complex overlap{0.0, 0.0};
  const auto aa = a.amplitudes();
  const auto bb = b.amplitudes();
  for (std::size_t i = 0; i < aa.size(); ++i) overlap += std::conj(aa[i]) * bb[i];
  return std::norm(overlap);
}

double dispersion(double k) noexcept {
  return -2.0 * UnitSystem::J * std::cos(k);
}

double group_velocity(double k) noexcept {
  return 2.0 * UnitSystem::J * std::sin(k);
}

double wrap_momentum(double k) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(k + std::numbers::pi, two_pi);
  if (w < 0.0) w += two_pi;
  return w - std::numbers::pi;
}

MomentumDensity momentum_density(const WaveState& state) {
  const std::size_t n = state.grid().size();
  // k_n = -pi + 2 pi n / N: multiplying by (-1)^m before the FFT shifts the
  // bins by pi. The e^{-i k j_min} offset is a pure phase per bin.
  std::vector<Complex> buf(state.amplitudes().begin(), state.amplitudes().end());
  for (std::size_t m = 1; m < n; m += 2) buf[m] = -buf[m];
  detail::Fft fft(n);
  fft.forward(buf);

  MomentumDensity out;
  out.k.resize(n);
  out.density.resize(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  const double step = 2.0 * std::numbers::pi * inv_n;
  for (std::size_t i = 0; i < n; ++i) {
    out.k[i] = -std::numbers::pi + step * static_cast<double>(i);
    out.density[i] = std::norm(buf[i]) * inv_n;
  }
  return out;
}

double to_physical_units(double quantity, QuantityKind kind,
                         double lattice_spacing, double j_frequency) {
  if (!(lattice_spacing > 0.0) || !(j_frequency > 0.0)) {
    throw DomainError(
        "to_physical_units: lattice spacing and J frequency must be positive");
  }
  switch (kind) {
    case QuantityKind::velocity:
      return quantity * lattice_spacing * j_frequency;
    case QuantityKind::acceleration:
      return quantity * lattice_spacing * j_frequency * j_frequency;
    case QuantityKind::time:
      return quantity / j_frequency;
    case QuantityKind::length:
      return quantity * lattice_spacing;
  }
  throw InternalError("to_physical_units: unknown quantity kind");
}

double boundary_occupation(const WaveState& state, std::size_t edge_sites) {
  const auto amp = state.amplitudes();
  const std::size_t n = amp.size();
  const std::size_t w = std::min(edge_sites, n / 2);
  double sum = 0.0;
  for (std::size_t i = 0; i < w; ++i) {
    sum += std::norm(amp[i]) + std::norm(amp[n - 1 - i]);
  }
  return sum;
}

void write_snapshot(std::ostream& out, const WaveState& state) {
  using detail::format_number;
  const auto& grid = state.grid();
  out << "site_index,position,re,im,density\n";
  const auto amp = state.amplitudes();
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const long j = grid.site(i);
    out << j << ',' << format_number(grid.position(j)) << ','
        << format_number(amp[i].real()) << ','
        << format_number(amp[i].imag()) << ','
        << format_number(std::norm(amp[i])) << '\n';
  }
}

}  // namespace airylat
