#pragma once

// Scenario registry and runner: builds the initial state, propagates it,
// streams snapshots through the diagnostics and writes the run files
// (density.csv, trajectory.csv, momentum.csv, fit.txt, meta.txt).

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "airylat/diagnostics.hpp"
#include "airylat/fitting.hpp"
#include "airylat/initial_states.hpp"
#include "airylat/propagators.hpp"

namespace airylat {

enum class Scenario { airy_free, airy_fit, scaling_sweep, bloch, driven, summary };

[[nodiscard]] std::string_view to_string(Scenario s) noexcept;
/// Accepts both scenario names (airy-free, airy-fit, ...) and CLI
/// subcommand names (airy, fit, sweep, bloch, driven, summary).
[[nodiscard]] Scenario parse_scenario(std::string_view name);

struct ScenarioConfig {
  Scenario scenario = Scenario::airy_free;

  // Support of the initial state. The simulated lattice adds `pad` empty
  // sites on each side.
  double delta_x = 0.2;
  long j_min = -2500;
  long j_max = 500;
  std::optional<long> pad;  // default: auto_pad()

  ApertureSpec aperture = ApertureSpec::hard();
  double t_max = 300.0;
  double dt = 0.02;
  double snapshot_interval = 0.25;  // trajectory sampling
  double density_interval = 1.0;    // density / momentum maps
  bool write_density = true;

  std::optional<DriveSchedule> drive;
  std::optional<TiltSpec> tilt;
  std::optional<double> kick_phi;
  std::optional<double> gaussian_width;  // position units
  double gaussian_center = 0.0;

  std::vector<double> sweep_dx;  // scaling-sweep only
  /// Same span for every sweep row instead of sweep_t_max(delta_x).
  std::optional<double> sweep_fixed_t_max;

  /// Caption defaults for each scenario.
  [[nodiscard]] static ScenarioConfig defaults(Scenario s);

  /// Throws ConfigurationError when a field required by the scenario is
  /// missing, a foreign one is present, or a value is out of range.
  void validate() const;

  [[nodiscard]] LatticeGrid support_grid() const;
  [[nodiscard]] long auto_pad() const;
  [[nodiscard]] LatticeGrid simulation_grid() const;
  /// Flat key-value echo sufficient to rerun the scenario.
  [[nodiscard]] std::map<std::string, std::string> echo() const;
};

/// (t, column, density) rows, sorted by t then column.
struct DensityTable {
  std::vector<double> times;
  std::vector<double> columns;  // site index or k
  std::vector<std::vector<double>> rows;
};

/// Measured drift of the main peak in one drive segment.
struct SegmentMotion {
  double t_start;
  double t_end;
  double k0;
  double velocity;       // least-squares slope, sites per unit time
  double max_excursion;  // max |x(t) - x(t_start)| inside the segment
};

/// For bloch runs the trajectory holds the centre of mass instead of the
/// main peak.
struct RunArtifact {
  ScenarioConfig config;
  DensityTable density;
  PeakTrajectory trajectory;
  std::optional<DensityTable> momentum;
  std::optional<RelativisticFit> fit;
  std::optional<MomentumDrift> momentum_drift;
  std::vector<SegmentMotion> segments;
  std::map<std::string, std::string> metadata;
};

/// Runs one scenario end to end. Throws GridTooSmallError as soon as the
/// edge layer of the lattice holds more than 1e-8 probability. When
/// output_dir is non-empty, writes the run files there.
RunArtifact run_scenario(const ScenarioConfig& config,
                         const std::filesystem::path& output_dir);

struct SweepRow {
  double delta_x = 0.0;
  double t_max = 0.0;
  std::optional<RelativisticFit> fit;
  std::string error;  // non-empty when the member run failed
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<ScalingFit> scaling;
  std::string scaling_error;
};

/// Per-row time span used by the sweep: 60 / delta_x (300 at 0.2).
[[nodiscard]] double sweep_t_max(double delta_x) noexcept;

/// airy-fit at each delta_x (in dx_list order) plus the power-law
/// regression of alpha on delta_x. Writes table.csv and scaling.txt, and
/// one sub-directory per row.
SweepResult sweep_scaling(const std::vector<double>& dx_list,
                          const std::filesystem::path& output_dir,
                          const ScenarioConfig& base);

/// Velocity ratio and excursion per drive segment of a driven run.
[[nodiscard]] std::vector<SegmentMotion> segment_motion(
    const PeakTrajectory& trajectory, const DriveSchedule& schedule,
    double t_max, double settle = 2.0);

}  // namespace airylat
