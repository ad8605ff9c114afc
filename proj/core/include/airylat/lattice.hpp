#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace airylat {

using Complex = std::complex<double>;

/// Natural units of the simulation: hbar = m = 1, energies in units of the
/// hopping J, times in 1/J.
struct UnitSystem {
  static constexpr double J = 1.0;
  static constexpr double hbar = 1.0;
  static constexpr double mass = 1.0;
  /// Self-acceleration of the continuum Airy packet, x(t) = t^2 / 4.
  static constexpr double continuum_accel = 0.5;
  /// Maximum group velocity on the lattice.
  static constexpr double v_max = 2.0 * J;
};

/// Finite 1D lattice: sites j_min..j_max, site j at position j * delta_x.
class LatticeGrid {
 public:
  LatticeGrid(double delta_x, long j_min, long j_max);

  [[nodiscard]] double delta_x() const noexcept { return delta_x_; }
  [[nodiscard]] long j_min() const noexcept { return j_min_; }
  [[nodiscard]] long j_max() const noexcept { return j_max_; }
  [[nodiscard]] std::size_t size() const noexcept {
    return static_cast<std::size_t>(j_max_ - j_min_ + 1);
  }

  [[nodiscard]] double position(long j) const noexcept {
    return static_cast<double>(j) * delta_x_;
  }
  [[nodiscard]] long site(std::size_t index) const noexcept {
    return j_min_ + static_cast<long>(index);
  }
  [[nodiscard]] std::size_t index(long j) const noexcept {
    return static_cast<std::size_t>(j - j_min_);
  }
  [[nodiscard]] bool contains(long j) const noexcept {
    return j >= j_min_ && j <= j_max_;
  }

  /// Same spacing, extended by `sites` on both ends.
  [[nodiscard]] LatticeGrid padded(long sites) const;

  friend bool operator==(const LatticeGrid&, const LatticeGrid&) = default;

 private:
  double delta_x_;
  long j_min_;
  long j_max_;
};

/// Wavefunction on a lattice at a given time. Value object.
class WaveState {
 public:
  WaveState(LatticeGrid grid, std::vector<Complex> amplitudes,
            double time = 0.0);

  [[nodiscard]] const LatticeGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] double time() const noexcept { return time_; }
  void set_time(double t) noexcept { time_ = t; }

  [[nodiscard]] std::span<const Complex> amplitudes() const noexcept {
    return amplitudes_;
  }
  [[nodiscard]] std::span<Complex> amplitudes() noexcept {
    return amplitudes_;
  }
  [[nodiscard]] Complex at(long j) const { return amplitudes_.at(grid_.index(j)); }

  [[nodiscard]] double norm_squared() const noexcept;
  /// Scales to unit norm. Throws DomainError on a zero state.
  void normalize();
  [[nodiscard]] std::vector<double> density() const;

  /// Zero-pads onto a larger grid with the same spacing.
  [[nodiscard]] WaveState embedded_in(const LatticeGrid& larger) const;

 private:
  LatticeGrid grid_;
  std::vector<Complex> amplitudes_;
  double time_;
};

/// |<a|b>|^2 for states on identical grids.
[[nodiscard]] double fidelity(const WaveState& a, const WaveState& b);

/// E(k) = -2J cos k.
[[nodiscard]] double dispersion(double k) noexcept;

/// dE/dk = 2J sin k.
[[nodiscard]] double group_velocity(double k) noexcept;

/// Wraps k into [-pi, pi).
[[nodiscard]] double wrap_momentum(double k) noexcept;

struct MomentumDensity {
  std::vector<double> k;        // k_n = -pi + 2 pi n / N
  std::vector<double> density;  // |psi~(k_n)|^2, sums to the state norm
};

/// |sum_j e^{-i k j} psi_j / sqrt(N)|^2 on the N-point Brillouin-zone grid.
[[nodiscard]] MomentumDensity momentum_density(const WaveState& state);

enum class QuantityKind { velocity, acceleration, time, length };

/// Lattice units -> SI for lattice constant `lattice_spacing` (m) and
/// tunnelling frequency `j_frequency` (Hz).
[[nodiscard]] double to_physical_units(double quantity, QuantityKind kind,
                                       double lattice_spacing,
                                       double j_frequency);

inline constexpr std::size_t kBoundaryEdgeSites = 16;
inline constexpr double kBoundaryThreshold = 1e-8;

/// Probability held by the outermost `edge_sites` sites on each side.
[[nodiscard]] double boundary_occupation(
    const WaveState& state, std::size_t edge_sites = kBoundaryEdgeSites);

/// Rows `site_index,position,re,im,density` preceded by a header line.
void write_snapshot(std::ostream& out, const WaveState& state);

}  // namespace airylat
