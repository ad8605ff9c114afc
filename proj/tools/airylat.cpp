// airylat: command-line front end for the scenario runner.
//
//   airylat fit --dx 0.2 --tmax 300 --out runs/fit
//   airylat driven --schedule 0:0.5,30:3.8,60:0.5 --out runs/reverse
//   airylat sweep --dx-list 0.2,0.15,0.1,0.05 --out runs/sweep
//
// Exit codes: 0 success, 2 configuration error, 3 run aborted (grid too
// small, tracking lost), 4 fit downgraded to the parabola fallback.

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "airylat/errors.hpp"
#include "airylat/scenario.hpp"

namespace {

using namespace airylat;

constexpr int kExitConfig = 2;
constexpr int kExitAborted = 3;
constexpr int kExitFallback = 4;

double parse_real(std::string_view text, const std::string& what) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigurationError("bad number '" + std::string(text) + "' in " + what);
  }
  return value;
}

long parse_long(std::string_view text, const std::string& what) {
  long value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigurationError("bad integer '" + std::string(text) + "' in " + what);
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::pair<std::string_view, std::string_view> split_pair(std::string_view text,
                                                         const std::string& what) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) {
    throw ConfigurationError("expected a:b in " + what + ", got '" + std::string(text) + "'");
  }
  return {parts[0], parts[1]};
}

ApertureSpec parse_aperture(const std::string& text) {
  if (text == "hard") return ApertureSpec::hard();
  if (text.rfind("exp:", 0) == 0) {
    return ApertureSpec::exponential(parse_real(text.substr(4), "--aperture"));
  }
  throw ConfigurationError("--aperture must be hard or exp:GAMMA");
}

std::vector<DriveSegment> parse_schedule(const std::string& text) {
  std::vector<DriveSegment> segments;
  for (auto item : split(text, ',')) {
    auto [t, k] = split_pair(item, "--schedule");
    segments.push_back({parse_real(t, "--schedule"), parse_real(k, "--schedule")});
  }
  return segments;
}

// Raw flag values; applied on top of the scenario defaults.
struct Flags {
  std::optional<double> dx, tmax, dt, snapshot_interval, density_interval;
  std::optional<std::string> grid, aperture, schedule, dx_list;
  std::optional<long> pad;
  std::optional<double> omega, phi, v0, width, center, sweep_tmax;
  bool no_density = false;
  std::string out;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--dx", f.dx, "Lattice spacing in Airy length units");
  app->add_option("--tmax", f.tmax, "Final time in units of 1/J");
  app->add_option("--dt", f.dt, "Integration step");
  app->add_option("--grid", f.grid, "Support of the initial state, jmin:jmax");
  app->add_option("--pad", f.pad, "Empty sites added on each side of the support");
  app->add_option("--aperture", f.aperture, "hard or exp:GAMMA");
  app->add_option("--out", f.out, "Output directory")->required();
  app->add_option("--snapshot-interval", f.snapshot_interval, "Trajectory sampling interval");
  app->add_option("--density-interval", f.density_interval,
                  "Sampling interval of the density and momentum maps");
  app->add_flag("--no-density", f.no_density, "Skip density.csv");
}

void add_bloch(CLI::App* app, Flags& f) {
  app->add_option("--v0", f.v0, "Tilt per site");
  app->add_option("--width", f.width, "Gaussian width in position units");
  app->add_option("--center", f.center, "Gaussian centre in position units");
}

ScenarioConfig build_config(Scenario scenario, const Flags& f) {
  ScenarioConfig c = ScenarioConfig::defaults(scenario);
  if (f.dx) c.delta_x = *f.dx;
  if (f.tmax) c.t_max = *f.tmax;
  if (f.grid) {
    auto [lo, hi] = split_pair(*f.grid, "--grid");
    c.j_min = parse_long(lo, "--grid");
    c.j_max = parse_long(hi, "--grid");
  }
  if (f.pad) c.pad = *f.pad;
  if (f.aperture) c.aperture = parse_aperture(*f.aperture);
  if (f.snapshot_interval) c.snapshot_interval = *f.snapshot_interval;
  if (f.density_interval) c.density_interval = *f.density_interval;
  if (f.no_density) c.write_density = false;

  if (f.omega || f.schedule) {
    const double omega = f.omega.value_or(c.drive->omega());
    auto segments = f.schedule ? parse_schedule(*f.schedule)
                               : std::vector<DriveSegment>(c.drive->segments().begin(),
                                                           c.drive->segments().end());
    c.drive = DriveSchedule(omega, std::move(segments));
    c.dt = c.drive->period() / 256.0;
  }
  if (f.phi) c.kick_phi = *f.phi;
  if (f.v0) c.tilt = TiltSpec{*f.v0};
  if (f.width) c.gaussian_width = *f.width;
  if (f.center) c.gaussian_center = *f.center;
  if (f.dt) c.dt = *f.dt;
  if (f.dx_list) {
    c.sweep_dx.clear();
    for (auto item : split(*f.dx_list, ',')) c.sweep_dx.push_back(parse_real(item, "--dx-list"));
  }
  if (f.sweep_tmax) c.sweep_fixed_t_max = *f.sweep_tmax;
  return c;
}

void print_fit(const RelativisticFit& fit) {
  std::printf("fit: method=%s alpha=%.6g c=%.6g rms=%.3g gate=%.3g points=%zu\n",
              std::string(to_string(fit.method)).c_str(), fit.alpha, fit.c,
              fit.rms_residual, fit.relativistic_gate, fit.n_points);
}

int run_single(Scenario scenario, const Flags& flags) {
  const ScenarioConfig config = build_config(scenario, flags);
  const RunArtifact run = run_scenario(config, flags.out);
  std::printf("%s: %zu snapshots written to %s\n", std::string(to_string(scenario)).c_str(),
              run.trajectory.size(), flags.out.c_str());
  if (run.fit) print_fit(*run.fit);
  for (const auto& s : run.segments) {
    std::printf("segment [%g, %g] K0=%g velocity=%.5g excursion=%.4g\n", s.t_start, s.t_end,
                s.k0, s.velocity, s.max_excursion);
  }
  if (run.momentum_drift) {
    for (double t : run.momentum_drift->wrap_times) std::printf("momentum wrap at t=%.4g\n", t);
  }
  return run.fit && run.fit->downgraded() ? kExitFallback : 0;
}

int run_sweep(const Flags& flags) {
  const ScenarioConfig base = build_config(Scenario::scaling_sweep, flags);
  base.validate();
  const SweepResult result = sweep_scaling(base.sweep_dx, flags.out, base);
  bool fallback = false;
  for (const auto& row : result.rows) {
    if (row.fit) {
      std::printf("dx=%g tmax=%g ", row.delta_x, row.t_max);
      print_fit(*row.fit);
      fallback = fallback || row.fit->downgraded();
    } else {
      std::printf("dx=%g failed: %s\n", row.delta_x, row.error.c_str());
    }
  }
  if (result.scaling) {
    std::printf("scaling: alpha = %.4g * dx^%.4f\n", result.scaling->prefactor,
                result.scaling->exponent);
  } else {
    std::printf("scaling: %s\n", result.scaling_error.c_str());
  }
  for (const auto& row : result.rows) {
    if (!row.error.empty()) return kExitAborted;
  }
  return fallback ? kExitFallback : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Airy wavepackets on a tight-binding lattice"};
  app.require_subcommand(1);

  Flags flags;
  struct Command {
    const char* name;
    const char* help;
    Scenario scenario;
  };
  const Command commands[] = {
      {"airy", "Free Airy packet: density map and peak trajectory", Scenario::airy_free},
      {"fit", "Free Airy packet with the hyperbolic-motion fit", Scenario::airy_fit},
      {"sweep", "Fit over several lattice spacings and the alpha(dx) power law",
       Scenario::scaling_sweep},
      {"bloch", "Bloch oscillation of a Gaussian packet in a tilted lattice", Scenario::bloch},
      {"driven", "Airy packet in a lattice with a piecewise sinusoidal drive", Scenario::driven},
      {"summary", "Continuum, lattice and Bloch velocities side by side", Scenario::summary},
  };
  std::vector<std::pair<CLI::App*, Scenario>> subs;
  for (const auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    add_common(sub, flags);
    if (cmd.scenario == Scenario::bloch || cmd.scenario == Scenario::summary) {
      add_bloch(sub, flags);
    }
    if (cmd.scenario == Scenario::driven) {
      sub->add_option("--omega", flags.omega, "Drive frequency");
      sub->add_option("--schedule", flags.schedule, "Drive segments t0:K0,t1:K1,...");
      sub->add_option("--phi", flags.phi, "Initial phase gradient per site");
    }
    if (cmd.scenario == Scenario::scaling_sweep) {
      sub->add_option("--dx-list", flags.dx_list, "Comma-separated lattice spacings");
      sub->add_option("--sweep-tmax", flags.sweep_tmax,
                      "Same tmax for every row instead of 60/dx");
      sub->excludes(sub->get_option("--dx"));
    }
    subs.emplace_back(sub, cmd.scenario);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    for (const auto& [sub, scenario] : subs) {
      if (!sub->parsed()) continue;
      if (scenario == Scenario::scaling_sweep) return run_sweep(flags);
      return run_single(scenario, flags);
    }
  } catch (const ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const GridTooSmallError& e) {
    std::cerr << "aborted: " << e.what() << '\n';
    return kExitAborted;
  } catch (const TrackingLostError& e) {
    std::cerr << "aborted: " << e.what() << '\n';
    return kExitAborted;
  } catch (const airylat::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
