#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "airylat/errors.hpp"
#include "airylat/scenario.hpp"

namespace {

using namespace airylat;
namespace fs = std::filesystem;

fs::path scratch_dir() {
  const auto* info = testing::UnitTest::GetInstance()->current_test_info();
  fs::path p = fs::temp_directory_path() /
               (std::string("airylat_") + info->test_suite_name() + "_" + info->name());
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(AIRYLAT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ScenarioConfig short_airy(Scenario s, double t_max) {
  ScenarioConfig c = ScenarioConfig::defaults(s);
  c.j_min = -1000;
  c.j_max = 200;
  c.t_max = t_max;
  return c;
}

// --- names and defaults ---------------------------------------------------

TEST(ScenarioNames, RoundTrip) {
  for (Scenario s : {Scenario::airy_free, Scenario::airy_fit, Scenario::scaling_sweep,
                     Scenario::bloch, Scenario::driven, Scenario::summary}) {
    EXPECT_EQ(parse_scenario(to_string(s)), s);
  }
  EXPECT_EQ(parse_scenario("airy"), Scenario::airy_free);
  EXPECT_EQ(parse_scenario("fit"), Scenario::airy_fit);
  EXPECT_EQ(parse_scenario("sweep"), Scenario::scaling_sweep);
  EXPECT_THROW((void)parse_scenario("warp"), ConfigurationError);
}

TEST(ScenarioDefaults, CaptionValues) {
  const auto fit = ScenarioConfig::defaults(Scenario::airy_fit);
  EXPECT_EQ(fit.delta_x, 0.2);
  EXPECT_EQ(fit.t_max, 300.0);
  EXPECT_EQ(fit.aperture.kind, ApertureSpec::Kind::hard);

  const auto bloch = ScenarioConfig::defaults(Scenario::bloch);
  ASSERT_TRUE(bloch.tilt);
  EXPECT_NEAR(bloch.tilt->v0, 2.0 * std::numbers::pi / 1000.0, 1e-15);
  EXPECT_EQ(bloch.t_max, 1000.0);

  const auto driven = ScenarioConfig::defaults(Scenario::driven);
  ASSERT_TRUE(driven.drive);
  EXPECT_NEAR(driven.drive->omega(), 2.0 * std::numbers::pi, 1e-15);
  ASSERT_EQ(driven.drive->segments().size(), 3u);
  EXPECT_EQ(driven.drive->segments()[1].k0, 1.691);
  EXPECT_NEAR(driven.dt, 1.0 / 256.0, 1e-15);

  const auto sweep = ScenarioConfig::defaults(Scenario::scaling_sweep);
  EXPECT_EQ(sweep.sweep_dx, (std::vector<double>{0.2, 0.15, 0.1, 0.05}));

  for (Scenario s : {Scenario::airy_free, Scenario::airy_fit, Scenario::scaling_sweep,
                     Scenario::bloch, Scenario::driven, Scenario::summary}) {
    EXPECT_NO_THROW(ScenarioConfig::defaults(s).validate()) << to_string(s);
  }
}

TEST(ScenarioValidate, RequiredAndForeignFields) {
  auto driven = ScenarioConfig::defaults(Scenario::driven);
  driven.drive.reset();
  EXPECT_THROW(driven.validate(), ConfigurationError);

  auto bloch = ScenarioConfig::defaults(Scenario::bloch);
  bloch.tilt.reset();
  EXPECT_THROW(bloch.validate(), ConfigurationError);

  auto airy = ScenarioConfig::defaults(Scenario::airy_free);
  airy.tilt = TiltSpec{0.01};
  EXPECT_THROW(airy.validate(), ConfigurationError);

  airy = ScenarioConfig::defaults(Scenario::airy_free);
  airy.sweep_dx = {0.1};
  EXPECT_THROW(airy.validate(), ConfigurationError);

  auto sweep = ScenarioConfig::defaults(Scenario::scaling_sweep);
  sweep.sweep_dx.clear();
  EXPECT_THROW(sweep.validate(), ConfigurationError);
}

TEST(ScenarioValidate, RangeChecks) {
  auto c = ScenarioConfig::defaults(Scenario::airy_free);
  c.delta_x = 0.0;
  EXPECT_THROW(c.validate(), ConfigurationError);
  c = ScenarioConfig::defaults(Scenario::airy_free);
  c.j_min = c.j_max;
  EXPECT_THROW(c.validate(), ConfigurationError);
  c = ScenarioConfig::defaults(Scenario::airy_free);
  c.density_interval = 0.3;
  EXPECT_THROW(c.validate(), ConfigurationError);
  c = ScenarioConfig::defaults(Scenario::airy_free);
  c.dt = 1.0;
  EXPECT_THROW(c.validate(), ConfigurationError);
  auto d = ScenarioConfig::defaults(Scenario::driven);
  d.kick_phi = 4.0;
  EXPECT_THROW(d.validate(), ConfigurationError);
  auto b = ScenarioConfig::defaults(Scenario::bloch);
  b.tilt = TiltSpec{0.0};
  EXPECT_THROW(b.validate(), ConfigurationError);
}

TEST(ScenarioConfig, PaddingAndEcho) {
  const auto fit = ScenarioConfig::defaults(Scenario::airy_fit);
  EXPECT_EQ(fit.auto_pad(), static_cast<long>(std::ceil(2.2 * 300.0)) + 64);
  const LatticeGrid g = fit.simulation_grid();
  EXPECT_EQ(g.j_min(), fit.j_min - fit.auto_pad());
  EXPECT_EQ(g.j_max(), fit.j_max + fit.auto_pad());

  const auto echo = ScenarioConfig::defaults(Scenario::driven).echo();
  EXPECT_EQ(echo.at("scenario"), "driven");
  EXPECT_EQ(echo.at("schedule"), "0:0.5,30:1.691,60:0.5");
  EXPECT_EQ(echo.at("phi"), "1.45");
  EXPECT_EQ(echo.count("v0"), 0u);
}

// --- runs -----------------------------------------------------------------

TEST(RunScenario, AiryFitMatchesCoarseLatticeValues) {
  const fs::path dir = scratch_dir();
  const RunArtifact run = run_scenario(ScenarioConfig::defaults(Scenario::airy_fit), dir);
  ASSERT_TRUE(run.fit);
  EXPECT_FALSE(run.fit->downgraded());
  EXPECT_NEAR(run.fit->alpha, 0.0153, 0.10 * 0.0153);
  EXPECT_NEAR(run.fit->c, 1.90, 0.05);
  for (const char* f : {"density.csv", "trajectory.csv", "fit.txt", "meta.txt"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  EXPECT_EQ(slurp(dir / "trajectory.csv").substr(0, 36), "t,position,velocity,acceleration\n0,-");
  EXPECT_EQ(run.metadata.at("status"), "ok");
  fs::remove_all(dir);
}

TEST(RunScenario, DeterministicOutput) {
  const fs::path a = scratch_dir() / "a";
  const fs::path b = scratch_dir().parent_path() / "airylat_determinism_b";
  fs::remove_all(b);
  const auto cfg = short_airy(Scenario::airy_free, 40.0);
  (void)run_scenario(cfg, a);
  (void)run_scenario(cfg, b);
  EXPECT_EQ(slurp(a / "trajectory.csv"), slurp(b / "trajectory.csv"));
  EXPECT_EQ(slurp(a / "density.csv"), slurp(b / "density.csv"));
  fs::remove_all(a.parent_path());
  fs::remove_all(b);
}

TEST(RunScenario, FreePeakMovesRightward) {
  const RunArtifact run = run_scenario(short_airy(Scenario::airy_free, 120.0), {});
  const auto& tr = run.trajectory;
  ASSERT_GT(tr.size(), 100u);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (std::isfinite(tr.velocities[i])) {
      EXPECT_GE(tr.velocities[i], -1e-3) << tr.times[i];
    }
  }
  EXPECT_GT(tr.positions.back(), tr.positions.front());
}

TEST(RunScenario, TablesAreSorted) {
  const RunArtifact run = run_scenario(short_airy(Scenario::airy_free, 20.0), {});
  const auto& d = run.density;
  ASSERT_FALSE(d.times.empty());
  EXPECT_TRUE(std::is_sorted(d.times.begin(), d.times.end()));
  EXPECT_TRUE(std::adjacent_find(d.columns.begin(), d.columns.end(),
                                 std::greater_equal<>()) == d.columns.end());
  EXPECT_EQ(d.rows.size(), d.times.size());
  for (const auto& row : d.rows) EXPECT_EQ(row.size(), d.columns.size());
  EXPECT_TRUE(std::is_sorted(run.trajectory.times.begin(), run.trajectory.times.end()));
}

TEST(RunScenario, SmallPadRaisesGridTooSmall) {
  auto cfg = short_airy(Scenario::airy_free, 60.0);
  cfg.pad = 0;
  EXPECT_THROW((void)run_scenario(cfg, {}), GridTooSmallError);
}

TEST(RunScenario, SweepIsNotARun) {
  EXPECT_THROW((void)run_scenario(ScenarioConfig::defaults(Scenario::scaling_sweep), {}),
               ConfigurationError);
}

TEST(RunScenario, BlochOscillationReturns) {
  const fs::path dir = scratch_dir();
  auto cfg = ScenarioConfig::defaults(Scenario::bloch);
  cfg.density_interval = 5.0;
  const RunArtifact run = run_scenario(cfg, dir);
  const auto& tr = run.trajectory;
  const double amplitude = 4.0 / cfg.tilt->v0;
  double peak = 0.0;
  for (double x : tr.positions) peak = std::max(peak, x - tr.positions.front());
  EXPECT_NEAR(peak, amplitude, 0.01 * amplitude);
  EXPECT_NEAR(tr.positions.back(), tr.positions.front(), 0.01 * amplitude);
  ASSERT_TRUE(run.momentum_drift);
  ASSERT_FALSE(run.momentum_drift->wrap_times.empty());
  EXPECT_NEAR(run.momentum_drift->wrap_times.front(), 500.0, 5.0);
  EXPECT_TRUE(fs::exists(dir / "momentum.csv"));
  fs::remove_all(dir);
}

TEST(RunScenario, DrivenSegmentsFollowEffectiveTunneling) {
  const fs::path dir = scratch_dir();
  const RunArtifact run = run_scenario(ScenarioConfig::defaults(Scenario::driven), dir);
  ASSERT_EQ(run.segments.size(), 3u);
  const double ratio = run.segments[1].velocity / run.segments[0].velocity;
  EXPECT_NEAR(ratio, 0.429, 0.05 * 0.429);
  EXPECT_NEAR(run.segments[2].velocity, run.segments[0].velocity,
              0.05 * run.segments[0].velocity);
  EXPECT_TRUE(fs::exists(dir / "segments.csv"));
  fs::remove_all(dir);
}

TEST(RunScenario, DrivenFreezesAtBesselZero) {
  auto cfg = ScenarioConfig::defaults(Scenario::driven);
  cfg.drive = DriveSchedule(2.0 * std::numbers::pi, {{0.0, 0.5}, {30.0, 2.4048}, {60.0, 0.5}});
  const RunArtifact run = run_scenario(cfg, {});
  ASSERT_EQ(run.segments.size(), 3u);
  EXPECT_LT(run.segments[1].max_excursion, 1.0);
}

TEST(RunScenario, DrivenReversal) {
  auto cfg = ScenarioConfig::defaults(Scenario::driven);
  cfg.drive = DriveSchedule(2.0 * std::numbers::pi, {{0.0, 0.5}, {30.0, 3.8}, {60.0, 0.5}});
  const RunArtifact run = run_scenario(cfg, {});
  ASSERT_EQ(run.segments.size(), 3u);
  const double ratio = run.segments[1].velocity / run.segments[0].velocity;
  EXPECT_NEAR(ratio, -0.429, 0.10 * 0.429);
}

TEST(SegmentMotion, SlopesOfSyntheticTrajectory) {
  PeakTrajectory tr;
  for (int i = 0; i <= 400; ++i) {
    const double t = 0.25 * i;
    tr.times.push_back(t);
    tr.positions.push_back(t < 50.0 ? 2.0 * t : 100.0 - 0.5 * (t - 50.0));
  }
  const DriveSchedule schedule(1.0, {{0.0, 0.5}, {50.0, 3.8}});
  const auto seg = segment_motion(tr, schedule, 100.0);
  ASSERT_EQ(seg.size(), 2u);
  EXPECT_NEAR(seg[0].velocity, 2.0, 1e-12);
  EXPECT_NEAR(seg[1].velocity, -0.5, 1e-12);
  EXPECT_EQ(seg[1].k0, 3.8);
  EXPECT_NEAR(seg[1].max_excursion, 25.0, 1e-12);
}

TEST(SweepScaling, SingleRowCannotFitPowerLaw) {
  const fs::path dir = scratch_dir();
  auto base = ScenarioConfig::defaults(Scenario::scaling_sweep);
  base.sweep_dx = {0.2};
  const SweepResult r = sweep_scaling(base.sweep_dx, dir, base);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_TRUE(r.rows[0].error.empty());
  EXPECT_EQ(r.rows[0].t_max, 300.0);
  EXPECT_FALSE(r.scaling);
  EXPECT_FALSE(r.scaling_error.empty());
  const std::string table = slurp(dir / "table.csv");
  EXPECT_EQ(table.substr(0, table.find('\n')), "dx,c,alpha,method,tmax,status");
  EXPECT_NE(table.find("0.2,"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "scaling.txt"));
  fs::remove_all(dir);
}

TEST(SweepScaling, TimeSpanScalesInversely) {
  EXPECT_NEAR(sweep_t_max(0.2), 300.0, 1e-9);
  EXPECT_NEAR(sweep_t_max(0.05), 1200.0, 1e-9);
}

// --- command line ---------------------------------------------------------

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch_dir();
  const std::string out = " --out " + dir.string();
  EXPECT_EQ(cli("airy --tmax 20 --grid -1000:200" + out), 0);
  EXPECT_TRUE(fs::exists(dir / "trajectory.csv"));
  EXPECT_EQ(cli("airy --bogus 1" + out), 2);
  EXPECT_EQ(cli("airy --dx -1" + out), 2);
  EXPECT_EQ(cli("bloch --omega 3" + out), 2);
  EXPECT_EQ(cli("airy --tmax 60 --grid -1000:200 --pad 0" + out), 3);
  EXPECT_EQ(cli("fit --dx 0.05 --tmax 1200 --no-density" + out), 4);
  fs::remove_all(dir);
}

}  // namespace
