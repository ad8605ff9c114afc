#pragma once

// Time evolution on the tight-binding chain. The exact propagators work in
// momentum space on a periodic ring; site-linear potentials V(t) * j are
// removed by the gauge psi_j -> e^{-i j A(t)} psi_j, A(t) = int_0^t V, which
// leaves the momentum-diagonal Hamiltonian -2J cos(k - A(t)). Crank-Nicolson
// on the hard-wall chain is kept as an independent check.

#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "airylat/lattice.hpp"

namespace airylat {

struct DriveSegment {
  double t_start;
  double k0;  // dimensionless amplitude K / omega
};

/// Sinusoidal drive K(t) cos(omega t) * j with piecewise-constant
/// K(t) = K0(t) * omega. A single global clock: the drive phase is not
/// reset at segment boundaries.
class DriveSchedule {
 public:
  /// Throws ConfigurationError unless omega > 0, segments non-empty, the
  /// first segment starts at 0 and start times strictly increase.
  DriveSchedule(double omega, std::vector<DriveSegment> segments);

  /// Single segment with constant K0 from t = 0.
  static DriveSchedule constant(double omega, double k0) {
    return DriveSchedule(omega, {{0.0, k0}});
  }

  [[nodiscard]] double omega() const noexcept { return omega_; }
  [[nodiscard]] std::span<const DriveSegment> segments() const noexcept {
    return segments_;
  }
  [[nodiscard]] double period() const noexcept;

  [[nodiscard]] std::size_t segment_index(double t) const noexcept;
  [[nodiscard]] double k0_at(double t) const noexcept;
  /// Site-potential slope K(t) cos(omega t).
  [[nodiscard]] double slope(double t) const noexcept;
  /// A(t) = int_0^t K(t') cos(omega t') dt', continuous in t.
  [[nodiscard]] double gauge(double t) const noexcept;

 private:
  double omega_;
  std::vector<DriveSegment> segments_;
  std::vector<double> gauge_at_start_;
};

/// Static tilt. The site potential is -v0 * j, so v0 > 0 drives the packet
/// towards +x and the momentum as k(t) = v0 t.
struct TiltSpec {
  double v0 = 0.0;

  [[nodiscard]] double slope(double /*t*/) const noexcept { return -v0; }
  [[nodiscard]] double gauge(double t) const noexcept { return -v0 * t; }
};

/// No external potential.
struct FreeLattice {
  [[nodiscard]] double slope(double /*t*/) const noexcept { return 0.0; }
  [[nodiscard]] double gauge(double /*t*/) const noexcept { return 0.0; }
};

using LinearPotential = std::variant<FreeLattice, TiltSpec, DriveSchedule>;

[[nodiscard]] double potential_slope(const LinearPotential& p, double t);
[[nodiscard]] double potential_gauge(const LinearPotential& p, double t);

struct StepperConfig {
  double dt = 0.02;
  double snapshot_interval = 0.25;

  /// dt <= snapshot_interval, and dt <= period / 128 for driven runs.
  void validate(const LinearPotential& potential) const;
  /// dt = period / 256 for a drive, 0.02 otherwise.
  static StepperConfig defaults_for(const LinearPotential& potential,
                                    double snapshot_interval = 0.25);
};

/// Exact free evolution from state.time() to t_final. Throws DomainError
/// if t_final < state.time().
[[nodiscard]] WaveState evolve_free_exact(const WaveState& state,
                                          double t_final);

using SnapshotSink = std::function<void(const WaveState&)>;

/// Streaming form of evolve_gauged_exact: hands each snapshot (the initial
/// state first) to `sink` instead of collecting them.
void propagate_gauged(const WaveState& state, const LinearPotential& potential,
                      double t_final, const StepperConfig& config,
                      const SnapshotSink& sink);

/// Exact evolution under a site-linear potential. Returns snapshots at
/// state.time() + n * snapshot_interval, plus t_final.
[[nodiscard]] std::vector<WaveState> evolve_gauged_exact(
    const WaveState& state, const LinearPotential& potential, double t_final,
    const StepperConfig& config);

/// One Cayley step (1 + i dt H / 2) psi' = (1 - i dt H / 2) psi on the
/// hard-wall chain with the given diagonal potential.
[[nodiscard]] WaveState step_crank_nicolson(const WaveState& state,
                                            std::span<const double> site_potential,
                                            double dt);

/// Repeated Crank-Nicolson steps with the potential sampled at each step's
/// midpoint.
[[nodiscard]] WaveState evolve_crank_nicolson(const WaveState& state,
                                              const LinearPotential& potential,
                                              double t_final, double dt);

/// J_eff = J * J0(K0).
[[nodiscard]] double effective_tunneling(double k0);

/// 1 / J0(K0). Throws DivergenceError where |J0(K0)| < 1e-4.
[[nodiscard]] double refractive_index(double k0);

inline constexpr double kRefractiveDivergence = 1e-4;

}  // namespace airylat
