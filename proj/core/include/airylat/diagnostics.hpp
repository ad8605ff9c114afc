#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "airylat/lattice.hpp"

namespace airylat {

/// Time series of the main-peak position in (fractional) site units.
/// Velocities and accelerations are empty until differentiate() fills them.
struct PeakTrajectory {
  std::vector<double> times;
  std::vector<double> positions;
  std::vector<double> velocities;
  std::vector<double> accelerations;
  /// Density at the tracked peak site; empty for synthetic series.
  std::vector<double> peak_densities;

  [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
  /// Throws DomainError on non-increasing times or ragged columns.
  void validate() const;
  /// Leading `count` samples.
  [[nodiscard]] PeakTrajectory head(std::size_t count) const;
};

/// Sub-site offset of the vertex of the parabola through (d_minus, d0,
/// d_plus); 0 when the triple is flat.
[[nodiscard]] double parabolic_offset(double d_minus, double d0,
                                      double d_plus) noexcept;

/// Global density maximum refined by a three-point parabola. Throws
/// BoundaryError when the maximum is on an end site.
[[nodiscard]] double find_main_peak(const WaveState& state);

/// Incremental main-peak tracker. After the first snapshot, the search is
/// restricted to +-max(5, 3 v_max dt) sites around the linearly
/// extrapolated position, so decaying lobes cannot swap places.
class PeakTracker {
 public:
  explicit PeakTracker(double v_max = UnitSystem::v_max) : v_max_(v_max) {}

  /// Snapshot times must be strictly monotone, in either direction. Throws
  /// TrackingLostError when the window holds no interior maximum.
  void push(const WaveState& snapshot);

  [[nodiscard]] const PeakTrajectory& trajectory() const noexcept {
    return trajectory_;
  }
  [[nodiscard]] PeakTrajectory release() noexcept { return std::move(trajectory_); }

 private:
  double v_max_;
  PeakTrajectory trajectory_;
};

/// PeakTracker over a whole snapshot sequence (at least two snapshots).
[[nodiscard]] PeakTrajectory track_peak(std::span<const WaveState> snapshots,
                                        double v_max = UnitSystem::v_max);

/// Fills velocities (order 1) or velocities and accelerations (order 2)
/// from central differences, smoothed by a `window`-point boxcar.
[[nodiscard]] PeakTrajectory differentiate(PeakTrajectory series, int order,
                                           std::size_t window = 5);

struct MomentumDrift {
  std::vector<double> times;
  std::vector<double> k_wrapped;    // in [-pi, pi)
  std::vector<double> k_unwrapped;  // continuous across the zone edge
  std::vector<double> wrap_times;   // interpolated zone-edge crossings
};

/// Incremental form of momentum_peak_drift.
class MomentumDriftTracker {
 public:
  /// Throws AmbiguityError when the density is not clearly unimodal.
  void push(const WaveState& snapshot);
  [[nodiscard]] const MomentumDrift& drift() const noexcept { return drift_; }

 private:
  MomentumDrift drift_;
};

/// Momentum-density peak per snapshot, parabola-refined and unwrapped
/// across the zone edge. Throws AmbiguityError when the density is not
/// clearly unimodal.
[[nodiscard]] MomentumDrift momentum_peak_drift(
    std::span<const WaveState> snapshots);

/// sum_j j |psi_j|^2 / sum_j |psi_j|^2, in site units.
[[nodiscard]] double center_of_mass(const WaveState& state);

/// Header `t,position,velocity,acceleration`; absent columns print "nan".
void write_trajectory(std::ostream& out, const PeakTrajectory& trajectory);

}  // namespace airylat
