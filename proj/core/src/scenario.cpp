#include "airylat/scenario.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "airylat/errors.hpp"
#include "report_io.hpp"
#include "text_format.hpp"

#ifndef AIRYLAT_VERSION
#define AIRYLAT_VERSION "unknown"
#endif

namespace airylat {

namespace {

using detail::format_number;

constexpr double kFitPeakFloor = 0.2;  // fit stops once the peak decays to 20%
constexpr double kBlochV0 = 2.0 * std::numbers::pi / 1000.0;

bool is_airy(Scenario s) {
  return s == Scenario::airy_free || s == Scenario::airy_fit ||
         s == Scenario::scaling_sweep || s == Scenario::summary;
}

std::string format_schedule(const DriveSchedule& d) {
  std::string out;
  for (const auto& seg : d.segments()) {
    if (!out.empty()) out += ',';
    out += format_number(seg.t_start) + ':' + format_number(seg.k0);
  }
  return out;
}

std::string format_aperture(const ApertureSpec& a) {
  return a.kind == ApertureSpec::Kind::hard ? "hard" : "exp:" + format_number(a.gamma);
}

// Samples per density row, or 0 when the ratio is not an integer.
long density_stride(const ScenarioConfig& c) {
  const double ratio = c.density_interval / c.snapshot_interval;
  const double r = std::round(ratio);
  if (r < 1.0 || std::abs(ratio - r) > 1e-9 * ratio) return 0;
  return static_cast<long>(r);
}

PeakTrajectory truncate_at_peak_floor(const PeakTrajectory& t) {
  if (t.peak_densities.empty()) return t;
  const double floor = kFitPeakFloor * t.peak_densities.front();
  std::size_t n = t.size();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.peak_densities[i] < floor) {
      n = i;
      break;
    }
  }
  return t.head(n);
}

struct Propagation {
  PeakTrajectory trajectory;
  DensityTable density;
  std::optional<DensityTable> momentum;
  std::optional<MomentumDrift> drift;
  double max_boundary = 0.0;
};

// Streams one propagation through the diagnostics requested by `mode`.
enum class Track { peak, center_of_mass };

Propagation propagate(const ScenarioConfig& cfg, const WaveState& initial,
                      const LinearPotential& potential, Track track,
                      bool momentum_map) {
  StepperConfig stepper{cfg.dt, cfg.snapshot_interval};
  const long stride = density_stride(cfg);
  const auto& grid = initial.grid();

  Propagation out;
  PeakTracker tracker;
  MomentumDriftTracker drift;
  if (cfg.write_density) {
    out.density.columns.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      out.density.columns.push_back(static_cast<double>(grid.site(i)));
    }
  }
  if (momentum_map) out.momentum.emplace();

  long index = 0;
  propagate_gauged(initial, potential, cfg.t_max, stepper, [&](const WaveState& s) {
    const double edge = boundary_occupation(s);
    out.max_boundary = std::max(out.max_boundary, edge);
    if (edge > kBoundaryThreshold) {
      throw GridTooSmallError("boundary occupation " + format_number(edge) +
                                  " exceeds threshold at t = " + format_number(s.time()),
                              s.time());
    }
    if (track == Track::peak) {
      tracker.push(s);
    } else {
      out.trajectory.times.push_back(s.time());
      out.trajectory.positions.push_back(center_of_mass(s));
    }
    if (index % stride == 0) {
      if (cfg.write_density) {
        out.density.times.push_back(s.time());
        out.density.rows.push_back(s.density());
      }
      if (momentum_map) {
        auto md = momentum_density(s);
        if (out.momentum->columns.empty()) out.momentum->columns = md.k;
        out.momentum->times.push_back(s.time());
        out.momentum->rows.push_back(std::move(md.density));
        drift.push(s);
      }
    }
    ++index;
  });

  if (track == Track::peak) out.trajectory = tracker.release();
  if (momentum_map) out.drift = drift.drift();
  return out;
}

WaveState initial_airy(const ScenarioConfig& cfg) {
  auto state = build_airy_state(cfg.support_grid(), cfg.aperture)
                   .embedded_in(cfg.simulation_grid());
  if (cfg.kick_phi) state = imprint_phase(std::move(state), *cfg.kick_phi);
  return state;
}

WaveState initial_gaussian(const ScenarioConfig& cfg) {
  return build_gaussian_state(cfg.support_grid(), cfg.gaussian_center,
                              *cfg.gaussian_width)
      .embedded_in(cfg.simulation_grid());
}

void write_run_files(const RunArtifact& run, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  if (run.config.write_density && !run.density.times.empty()) {
    detail::write_density_table(dir / "density.csv", run.density, "site");
  }
  detail::write_trajectory_file(dir / "trajectory.csv", run.trajectory);
  if (run.momentum) detail::write_density_table(dir / "momentum.csv", *run.momentum, "k");
  if (run.fit) detail::write_fit_file(dir / "fit.txt", *run.fit);
  if (!run.segments.empty()) detail::write_segments(dir / "segments.csv", run.segments);
  detail::write_key_values(dir / "meta.txt", run.metadata);
}

void write_summary(const std::filesystem::path& dir, const RunArtifact& airy,
                   const PeakTrajectory& bloch, double delta_x) {
  std::ofstream out(dir / "summary.csv", std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigurationError("cannot write " + (dir / "summary.csv").string());
  out << "t,continuum_velocity,lattice_velocity,relativistic_velocity,bloch_velocity\n";
  const auto& tr = airy.trajectory;
  const std::size_t n = std::min(tr.size(), bloch.size());
  const double continuum_accel = 2.0 * delta_x * delta_x * delta_x;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = tr.times[i];
    double rel = std::numeric_limits<double>::quiet_NaN();
    if (airy.fit && !airy.fit->downgraded()) {
      rel = predict_relativistic(airy.fit->alpha, airy.fit->c, t - tr.times.front()).v;
    }
    out << format_number(t) << ',' << format_number(continuum_accel * t) << ','
        << format_number(tr.velocities.empty() ? std::nan("") : tr.velocities[i]) << ','
        << format_number(rel) << ','
        << format_number(bloch.velocities.empty() ? std::nan("") : bloch.velocities[i])
        << '\n';
  }
}

}  // namespace

std::string_view to_string(Scenario s) noexcept {
  switch (s) {
    case Scenario::airy_free:
      return "airy-free";
    case Scenario::airy_fit:
      return "airy-fit";
    case Scenario::scaling_sweep:
      return "scaling-sweep";
    case Scenario::bloch:
      return "bloch";
    case Scenario::driven:
      return "driven";
    case Scenario::summary:
      return "summary";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view name) {
  if (name == "airy-free" || name == "airy") return Scenario::airy_free;
  if (name == "airy-fit" || name == "fit") return Scenario::airy_fit;
  if (name == "scaling-sweep" || name == "sweep") return Scenario::scaling_sweep;
  if (name == "bloch") return Scenario::bloch;
  if (name == "driven") return Scenario::driven;
  if (name == "summary") return Scenario::summary;
  throw ConfigurationError("unknown scenario '" + std::string(name) + "'");
}

ScenarioConfig ScenarioConfig::defaults(Scenario s) {
  ScenarioConfig c;
  c.scenario = s;
  switch (s) {
    case Scenario::airy_free:
    case Scenario::airy_fit:
      break;
    case Scenario::scaling_sweep:
      c.sweep_dx = {0.2, 0.15, 0.1, 0.05};
      c.write_density = false;
      break;
    case Scenario::bloch:
      c.j_min = -500;
      c.j_max = 1200;
      c.t_max = 1000.0;
      c.tilt = TiltSpec{kBlochV0};
      c.gaussian_width = 10.0;
      break;
    case Scenario::driven:
      c.t_max = 90.0;
      c.drive = DriveSchedule(2.0 * std::numbers::pi,
                              {{0.0, 0.5}, {30.0, 1.691}, {60.0, 0.5}});
      c.dt = c.drive->period() / 256.0;
      c.kick_phi = 1.45;
      break;
    case Scenario::summary:
      c.tilt = TiltSpec{kBlochV0};
      c.gaussian_width = 10.0;
      break;
  }
  return c;
}

void ScenarioConfig::validate() const {
  auto fail = [this](const std::string& what) {
    throw ConfigurationError(std::string(to_string(scenario)) + ": " + what);
  };
  auto forbid = [&](bool present, const char* name) {
    if (present) fail(std::string(name) + " is not used by this scenario");
  };
  auto require = [&](bool present, const char* name) {
    if (!present) fail(std::string(name) + " is required");
  };

  if (!(delta_x > 0.0) || !std::isfinite(delta_x)) fail("dx must be positive");
  if (j_min >= j_max) fail("grid needs jmin < jmax");
  if (pad && *pad < 0) fail("pad must be non-negative");
  aperture.validate();
  if (!(t_max > 0.0) || !std::isfinite(t_max)) fail("tmax must be positive");
  if (!(dt > 0.0)) fail("dt must be positive");
  if (!(snapshot_interval > 0.0)) fail("snapshot interval must be positive");
  if (dt > snapshot_interval) fail("dt exceeds the snapshot interval");
  if (density_stride(*this) == 0) {
    fail("density interval must be a whole multiple of the snapshot interval");
  }

  const bool sweep = scenario == Scenario::scaling_sweep;
  if (sweep) {
    require(!sweep_dx.empty(), "dx list");
    for (double dx : sweep_dx) {
      if (!(dx > 0.0)) fail("sweep dx values must be positive");
    }
  } else {
    forbid(!sweep_dx.empty(), "dx list");
    forbid(sweep_fixed_t_max.has_value(), "sweep t_max");
  }

  switch (scenario) {
    case Scenario::airy_free:
    case Scenario::airy_fit:
    case Scenario::scaling_sweep:
      forbid(drive.has_value(), "drive schedule");
      forbid(tilt.has_value(), "tilt");
      forbid(kick_phi.has_value(), "kick phase");
      forbid(gaussian_width.has_value(), "gaussian width");
      break;
    case Scenario::bloch:
    case Scenario::summary:
      require(tilt.has_value(), "tilt");
      require(gaussian_width.has_value(), "gaussian width");
      forbid(drive.has_value(), "drive schedule");
      forbid(kick_phi.has_value(), "kick phase");
      if (!(tilt->v0 != 0.0) || !std::isfinite(tilt->v0)) fail("V0 must be non-zero");
      break;
    case Scenario::driven:
      require(drive.has_value(), "drive schedule");
      require(kick_phi.has_value(), "kick phase");
      forbid(tilt.has_value(), "tilt");
      forbid(gaussian_width.has_value(), "gaussian width");
      if (std::abs(*kick_phi) > std::numbers::pi) fail("|phi| must not exceed pi");
      StepperConfig{dt, snapshot_interval}.validate(LinearPotential{*drive});
      break;
  }
}

LatticeGrid ScenarioConfig::support_grid() const { return {delta_x, j_min, j_max}; }

long ScenarioConfig::auto_pad() const {
  if (is_airy(scenario) || scenario == Scenario::driven) {
    return static_cast<long>(std::ceil(2.2 * t_max)) + 64;
  }
  return 64;
}

LatticeGrid ScenarioConfig::simulation_grid() const {
  return support_grid().padded(pad.value_or(auto_pad()));
}

std::map<std::string, std::string> ScenarioConfig::echo() const {
  std::map<std::string, std::string> m;
  m["scenario"] = std::string(to_string(scenario));
  m["dx"] = format_number(delta_x);
  m["grid"] = std::to_string(j_min) + ":" + std::to_string(j_max);
  m["pad"] = std::to_string(pad.value_or(auto_pad()));
  m["aperture"] = format_aperture(aperture);
  m["tmax"] = format_number(t_max);
  m["dt"] = format_number(dt);
  m["snapshot_interval"] = format_number(snapshot_interval);
  m["density_interval"] = format_number(density_interval);
  m["write_density"] = write_density ? "true" : "false";
  if (drive) {
    m["omega"] = format_number(drive->omega());
    m["schedule"] = format_schedule(*drive);
  }
  if (tilt) m["v0"] = format_number(tilt->v0);
  if (kick_phi) m["phi"] = format_number(*kick_phi);
  if (gaussian_width) {
    m["width"] = format_number(*gaussian_width);
    m["center"] = format_number(gaussian_center);
  }
  if (!sweep_dx.empty()) {
    std::string list;
    for (double dx : sweep_dx) list += (list.empty() ? "" : ",") + format_number(dx);
    m["dx_list"] = list;
  }
  if (sweep_fixed_t_max) m["sweep_tmax"] = format_number(*sweep_fixed_t_max);
  return m;
}

std::vector<SegmentMotion> segment_motion(const PeakTrajectory& trajectory,
                                          const DriveSchedule& schedule, double t_max,
                                          double settle) {
  std::vector<SegmentMotion> out;
  const auto segs = schedule.segments();
  for (std::size_t s = 0; s < segs.size(); ++s) {
    const double start = segs[s].t_start;
    const double end = s + 1 < segs.size() ? segs[s + 1].t_start : t_max;
    if (start >= t_max) break;

    // Least-squares slope over the settled part of the segment.
    double st = 0.0, sx = 0.0, stt = 0.0, stx = 0.0, m = 0.0;
    double x_start = std::numeric_limits<double>::quiet_NaN();
    double excursion = 0.0;
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
      const double t = trajectory.times[i];
      const double x = trajectory.positions[i];
      if (t < start - 1e-9 || t > end + 1e-9) continue;
      if (std::isnan(x_start)) x_start = x;
      excursion = std::max(excursion, std::abs(x - x_start));
      if (t < start + settle || t > end - settle) continue;
      st += t;
      sx += x;
      stt += t * t;
      stx += t * x;
      m += 1.0;
    }
    double velocity = std::numeric_limits<double>::quiet_NaN();
    const double den = m * stt - st * st;
    if (m >= 2.0 && den > 0.0) velocity = (m * stx - st * sx) / den;
    out.push_back({start, end, segs[s].k0, velocity, excursion});
  }
  return out;
}

RunArtifact run_scenario(const ScenarioConfig& config,
                         const std::filesystem::path& output_dir) {
  config.validate();
  if (config.scenario == Scenario::scaling_sweep) {
    throw ConfigurationError("scaling-sweep runs through sweep_scaling()");
  }
  const auto wall_start = std::chrono::steady_clock::now();

  RunArtifact run;
  run.config = config;
  run.metadata = config.echo();
  run.metadata["version"] = AIRYLAT_VERSION;

  const Scenario sc = config.scenario;
  if (sc == Scenario::bloch) {
    Propagation p = propagate(config, initial_gaussian(config),
                              LinearPotential{*config.tilt}, Track::center_of_mass, true);
    run.trajectory = std::move(p.trajectory);
    run.density = std::move(p.density);
    run.momentum = std::move(p.momentum);
    run.momentum_drift = std::move(p.drift);
    run.metadata["max_boundary_occupation"] = format_number(p.max_boundary);
  } else {
    LinearPotential potential = FreeLattice{};
    if (sc == Scenario::driven) potential = *config.drive;
    Propagation p = propagate(config, initial_airy(config), potential, Track::peak, false);
    run.trajectory = std::move(p.trajectory);
    run.density = std::move(p.density);
    run.metadata["max_boundary_occupation"] = format_number(p.max_boundary);
  }
  if (run.trajectory.size() >= 5) {
    run.trajectory = differentiate(std::move(run.trajectory), 2);
  }

  if (sc == Scenario::airy_fit || sc == Scenario::summary) {
    const PeakTrajectory window = truncate_at_peak_floor(run.trajectory);
    run.fit = fit_hyperbolic(window);
    run.metadata["fit_method"] = std::string(to_string(run.fit->method));
  }
  if (sc == Scenario::driven) {
    run.segments = segment_motion(run.trajectory, *config.drive, config.t_max);
  }
  if (run.momentum_drift) {
    const auto& w = run.momentum_drift->wrap_times;
    std::string list;
    for (double t : w) list += (list.empty() ? "" : ",") + format_number(t);
    run.metadata["momentum_wrap_times"] = list.empty() ? "none" : list;
  }

  PeakTrajectory bloch_part;
  if (sc == Scenario::summary) {
    ScenarioConfig b = ScenarioConfig::defaults(Scenario::bloch);
    b.tilt = config.tilt;
    b.gaussian_width = config.gaussian_width;
    b.gaussian_center = config.gaussian_center;
    b.t_max = config.t_max;
    b.snapshot_interval = config.snapshot_interval;
    b.density_interval = config.density_interval;
    b.dt = config.dt;
    b.write_density = false;
    Propagation p = propagate(b, initial_gaussian(b), LinearPotential{*b.tilt},
                              Track::center_of_mass, false);
    bloch_part = differentiate(std::move(p.trajectory), 1);
  }

  const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - wall_start;
  run.metadata["wall_time_seconds"] = format_number(wall.count());
  run.metadata["status"] = run.fit && run.fit->downgraded() ? "fit-fallback" : "ok";

  if (!output_dir.empty()) {
    write_run_files(run, output_dir);
    if (sc == Scenario::summary) write_summary(output_dir, run, bloch_part, config.delta_x);
  }
  return run;
}

double sweep_t_max(double delta_x) noexcept { return 60.0 / delta_x; }

SweepResult sweep_scaling(const std::vector<double>& dx_list,
                          const std::filesystem::path& output_dir,
                          const ScenarioConfig& base) {
  SweepResult result;
  // Rows share the support in position units.
  const double x_lo = static_cast<double>(base.j_min) * base.delta_x;
  const double x_hi = static_cast<double>(base.j_max) * base.delta_x;
  for (const double dx : dx_list) {
    SweepRow row;
    row.delta_x = dx;
    row.t_max = base.sweep_fixed_t_max.value_or(sweep_t_max(dx));
    try {
      if (!(dx > 0.0)) throw ConfigurationError("dx must be positive");
      ScenarioConfig cfg = base;
      cfg.scenario = Scenario::airy_fit;
      cfg.sweep_dx.clear();
      cfg.sweep_fixed_t_max.reset();
      cfg.delta_x = dx;
      cfg.j_min = std::lround(x_lo / dx);
      cfg.j_max = std::lround(x_hi / dx);
      cfg.t_max = row.t_max;
      cfg.pad.reset();
      std::filesystem::path sub;
      if (!output_dir.empty()) sub = output_dir / ("dx_" + format_number(dx));
      row.fit = run_scenario(cfg, sub).fit;
    } catch (const Error& e) {
      row.error = e.what();
    }
    result.rows.push_back(std::move(row));
  }

  std::vector<ScalingPoint> points;
  for (const auto& r : result.rows) {
    if (r.fit) points.push_back({r.delta_x, r.fit->alpha});
  }
  try {
    result.scaling = fit_scaling(points);
  } catch (const DomainError& e) {
    result.scaling_error = e.what();
  }

  if (!output_dir.empty()) {
    std::filesystem::create_directories(output_dir);
    std::ofstream table(output_dir / "table.csv", std::ios::binary | std::ios::trunc);
    if (!table) throw ConfigurationError("cannot write table.csv");
    table << "dx,c,alpha,method,tmax,status\n";
    for (const auto& r : result.rows) {
      table << format_number(r.delta_x) << ',';
      if (r.fit) {
        table << format_number(r.fit->c) << ',' << format_number(r.fit->alpha) << ','
              << to_string(r.fit->method);
      } else {
        table << "nan,nan,none";
      }
      table << ',' << format_number(r.t_max) << ',' << (r.error.empty() ? "ok" : "error")
            << '\n';
    }
    std::map<std::string, std::string> summary;
    if (result.scaling) {
      summary["exponent"] = format_number(result.scaling->exponent);
      summary["prefactor"] = format_number(result.scaling->prefactor);
    } else {
      summary["error"] = result.scaling_error;
    }
    for (const auto& r : result.rows) {
      if (!r.error.empty()) summary["row_error_dx_" + format_number(r.delta_x)] = r.error;
    }
    detail::write_key_values(output_dir / "scaling.txt", summary);
    auto meta = base.echo();
    meta["version"] = AIRYLAT_VERSION;
    detail::write_key_values(output_dir / "meta.txt", meta);
  }
  return result;
}

}  // namespace airylat
