#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "airylat/diagnostics.hpp"
#include "airylat/errors.hpp"
#include "airylat/fitting.hpp"
#include "airylat/initial_states.hpp"
#include "airylat/propagators.hpp"

namespace {

using namespace airylat;
constexpr double kPi = std::numbers::pi;

WaveState from_density(const LatticeGrid& g, const std::vector<std::pair<long, double>>& d) {
  std::vector<Complex> amp(g.size(), 0.0);
  for (auto [j, v] : d) amp[g.index(j)] = std::sqrt(v);
  return WaveState(g, std::move(amp));
}

PeakTrajectory sampled(double dt, std::size_t n, double (*x)(double)) {
  PeakTrajectory t;
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = static_cast<double>(i) * dt;
    t.times.push_back(ti);
    t.positions.push_back(x(ti));
  }
  return t;
}

// --- find_main_peak -------------------------------------------------------

TEST(FindMainPeak, SymmetricTriple) {
  const LatticeGrid g(1.0, 0, 20);
  EXPECT_DOUBLE_EQ(find_main_peak(from_density(g, {{9, 0.5}, {10, 1.0}, {11, 0.5}})), 10.0);
}

TEST(FindMainPeak, AsymmetricTripleRefines) {
  EXPECT_DOUBLE_EQ(parabolic_offset(0.5, 1.0, 0.5), 0.0);
  // Parabola through (-1, 0), (0, 3), (1, 2) peaks at x = 1/4.
  EXPECT_NEAR(parabolic_offset(0.0, 3.0, 2.0), 0.25, 1e-15);
  EXPECT_EQ(parabolic_offset(1.0, 1.0, 1.0), 0.0);
}

TEST(FindMainPeak, DeltaGivesExactSite) {
  const LatticeGrid g(0.5, -10, 10);
  EXPECT_EQ(find_main_peak(from_density(g, {{3, 1.0}})), 3.0);
}

TEST(FindMainPeak, AiryMainLobe) {
  const WaveState s = build_airy_state(LatticeGrid(0.2, -2500, 500), ApertureSpec::hard());
  EXPECT_NEAR(find_main_peak(s), -1.019 / 0.2, 0.1);
}

TEST(FindMainPeak, InvariantUnderPhaseAndScale) {
  const WaveState s = imprint_phase(build_gaussian_state(LatticeGrid(1.0, -50, 50), 2.3, 4.0), 0.7);
  WaveState t = s;
  for (auto& a : t.amplitudes()) a *= 3.0 * std::polar(1.0, 1.1);
  EXPECT_DOUBLE_EQ(find_main_peak(s), find_main_peak(t));
}

TEST(FindMainPeak, EdgeMaximumIsBoundaryError) {
  const LatticeGrid g(1.0, 0, 10);
  EXPECT_THROW((void)find_main_peak(from_density(g, {{0, 1.0}, {1, 0.5}})), BoundaryError);
  EXPECT_THROW((void)find_main_peak(from_density(g, {{10, 1.0}})), BoundaryError);
}

// --- track_peak -----------------------------------------------------------

TEST(TrackPeak, KickedGaussianMovesAtBandVelocity) {
  const LatticeGrid g(1.0, -100, 600);
  const WaveState s0 = imprint_phase(build_gaussian_state(g, 0.0, 10.0), kPi / 2.0);
  const auto snaps = evolve_gauged_exact(s0, FreeLattice{}, 200.0, {0.02, 1.0});
  const PeakTrajectory tr = track_peak(snaps);
  const double slope = (tr.positions.back() - tr.positions.front()) / 200.0;
  EXPECT_NEAR(slope, 2.0, 0.02 * 2.0);
}

TEST(TrackPeak, ReversedSnapshotsGiveReversedSeries) {
  const LatticeGrid support(0.2, -2500, 500);
  const WaveState s0 =
      build_airy_state(support, ApertureSpec::hard()).embedded_in(support.padded(300));
  auto snaps = evolve_gauged_exact(s0, FreeLattice{}, 120.0, {0.02, 0.5});
  const PeakTrajectory fwd = track_peak(snaps);
  std::reverse(snaps.begin(), snaps.end());
  const PeakTrajectory bwd = track_peak(snaps);
  ASSERT_EQ(fwd.size(), bwd.size());
  for (std::size_t i = 0; i < fwd.size(); ++i) {
    EXPECT_DOUBLE_EQ(fwd.positions[i], bwd.positions[fwd.size() - 1 - i]);
  }
}

TEST(TrackPeak, FreeAiryParabolicThenLinear) {
  const LatticeGrid support(0.2, -2500, 500);
  const WaveState s0 =
      build_airy_state(support, ApertureSpec::hard()).embedded_in(support.padded(724));
  PeakTracker tracker;
  propagate_gauged(s0, FreeLattice{}, 300.0, {0.02, 1.0},
                   [&](const WaveState& s) { tracker.push(s); });
  const PeakTrajectory tr = tracker.trajectory();
  // Early times: x - x0 close to the lattice parabola dx^3 t^2.
  for (std::size_t i = 0; i < tr.size() && tr.times[i] < 80.0; ++i) {
    const double t = tr.times[i];
    EXPECT_NEAR(tr.positions[i] - tr.positions[0], 0.008 * t * t, 0.1 * 0.008 * t * t + 1.0)
        << t;
  }
  // Late times: the speed saturates below the band edge, so the local
  // slope changes little compared with the early acceleration.
  auto slope = [&](double a, double b) {
    const auto i = static_cast<std::size_t>(a), j = static_cast<std::size_t>(b);
    return (tr.positions[j] - tr.positions[i]) / (b - a);
  };
  const double late_change = slope(260, 300) - slope(200, 240);
  const double early_change = slope(40, 80) - slope(0, 40);
  EXPECT_GT(early_change, 0.0);
  EXPECT_LT(late_change, 0.35 * early_change);
  EXPECT_LT(slope(260, 300), 2.0);
}

TEST(TrackPeak, NeedsTwoSnapshots) {
  const WaveState s = build_gaussian_state(LatticeGrid(1.0, -50, 50), 0.0, 5.0);
  std::vector<WaveState> one{s};
  EXPECT_THROW((void)track_peak(one), DomainError);
}

TEST(TrackPeak, LostWhenPeakJumps) {
  const LatticeGrid g(1.0, -100, 100);
  WaveState a = from_density(g, {{-1, 0.5}, {0, 1.0}, {1, 0.5}});
  WaveState b = from_density(g, {{59, 0.5}, {60, 1.0}, {61, 0.5}});
  b.set_time(0.25);
  PeakTracker tracker;
  tracker.push(a);
  try {
    tracker.push(b);
    FAIL() << "expected TrackingLostError";
  } catch (const TrackingLostError& e) {
    EXPECT_EQ(e.last_good_index(), 0u);
  }
}

TEST(TrackPeak, RejectsNonMonotoneTimes) {
  const LatticeGrid g(1.0, -50, 50);
  const WaveState a = build_gaussian_state(g, 0.0, 5.0);
  PeakTracker tracker;
  tracker.push(a);
  EXPECT_THROW(tracker.push(a), DomainError);
}

// --- differentiate --------------------------------------------------------

TEST(Differentiate, ParabolaHasConstantAcceleration) {
  const PeakTrajectory t = differentiate(
      sampled(0.25, 200, [](double x) { return 0.5 * 0.0153 * x * x + 3.0; }), 2);
  ASSERT_EQ(t.accelerations.size(), t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_NEAR(t.accelerations[i], 0.0153, 1e-10) << i;
    EXPECT_NEAR(t.velocities[i], 0.0153 * t.times[i], 1e-10) << i;
  }
}

TEST(Differentiate, LineHasZeroAcceleration) {
  const PeakTrajectory t =
      differentiate(sampled(0.5, 50, [](double x) { return 1.7 * x - 4.0; }), 2);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_NEAR(t.accelerations[i], 0.0, 1e-10);
    EXPECT_NEAR(t.velocities[i], 1.7, 1e-10);
  }
}

TEST(Differentiate, HyperbolaVelocity) {
  const PeakTrajectory t = differentiate(
      sampled(0.25, 1201, [](double x) { return predict_relativistic(0.0153, 1.90, x).x; }), 1);
  EXPECT_TRUE(t.accelerations.empty());
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_NEAR(t.velocities[i], predict_relativistic(0.0153, 1.90, t.times[i]).v, 1e-3);
  }
}

TEST(Differentiate, TrapezoidIntegrationRecoversPositions) {
  auto x = [](double t) { return std::sin(0.3 * t) + 0.01 * t * t; };
  for (double dt : {0.2, 0.1}) {
    const std::size_t n = static_cast<std::size_t>(std::lround(20.0 / dt)) + 1;
    PeakTrajectory s;
    for (std::size_t i = 0; i < n; ++i) {
      s.times.push_back(static_cast<double>(i) * dt);
      s.positions.push_back(x(s.times.back()));
    }
    const PeakTrajectory d = differentiate(s, 1, 1);
    double pos = s.positions[0], worst = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      pos += 0.5 * dt * (d.velocities[i] + d.velocities[i - 1]);
      worst = std::max(worst, std::abs(pos - s.positions[i]));
    }
    EXPECT_LT(worst, 0.2 * dt * dt) << dt;
  }
}

TEST(Differentiate, Preconditions) {
  auto line = [](double x) { return x; };
  EXPECT_THROW((void)differentiate(sampled(1.0, 2, line), 1), DomainError);
  EXPECT_THROW((void)differentiate(sampled(1.0, 4, line), 2), DomainError);
  EXPECT_THROW((void)differentiate(sampled(1.0, 10, line), 3), DomainError);
  PeakTrajectory uneven = sampled(1.0, 10, line);
  uneven.times[5] = 5.3;
  EXPECT_THROW((void)differentiate(uneven, 1), DomainError);
}

// --- PeakTrajectory -------------------------------------------------------

TEST(PeakTrajectory, ValidateAndHead) {
  PeakTrajectory t = sampled(1.0, 10, [](double x) { return 2 * x; });
  EXPECT_NO_THROW(t.validate());
  const PeakTrajectory h = t.head(3);
  EXPECT_EQ(h.size(), 3u);
  EXPECT_EQ(h.positions.back(), 4.0);
  t.positions.pop_back();
  EXPECT_THROW(t.validate(), DomainError);
  PeakTrajectory u = sampled(1.0, 5, [](double x) { return x; });
  u.times[3] = u.times[2];
  EXPECT_THROW(u.validate(), DomainError);
}

// --- momentum_peak_drift --------------------------------------------------

TEST(MomentumPeakDrift, FreeRunHasNoDrift) {
  const LatticeGrid g(1.0, -300, 300);
  const WaveState s0 = imprint_phase(build_gaussian_state(g, 0.0, 20.0), 0.6);
  const auto snaps = evolve_gauged_exact(s0, FreeLattice{}, 50.0, {0.02, 5.0});
  const MomentumDrift d = momentum_peak_drift(snaps);
  for (double k : d.k_unwrapped) EXPECT_NEAR(k, d.k_unwrapped.front(), 1e-6);
  EXPECT_NEAR(d.k_wrapped.front(), 0.6, 0.01);
  EXPECT_TRUE(d.wrap_times.empty());
}

TEST(MomentumPeakDrift, TiltDriftsLinearlyAndWraps) {
  const double v0 = 2.0 * kPi / 1000.0;
  const LatticeGrid support(0.2, -500, 1200);
  const WaveState s0 = build_gaussian_state(support, 0.0, 10.0).embedded_in(support.padded(64));
  const auto snaps = evolve_gauged_exact(s0, TiltSpec{v0}, 1000.0, {0.02, 10.0});
  const MomentumDrift d = momentum_peak_drift(snaps);
  double st = 0, sk = 0, stt = 0, stk = 0;
  const double n = static_cast<double>(d.times.size());
  for (std::size_t i = 0; i < d.times.size(); ++i) {
    st += d.times[i];
    sk += d.k_unwrapped[i];
    stt += d.times[i] * d.times[i];
    stk += d.times[i] * d.k_unwrapped[i];
  }
  const double slope = (n * stk - st * sk) / (n * stt - st * st);
  EXPECT_NEAR(slope, v0, 0.02 * v0);
  ASSERT_EQ(d.wrap_times.size(), 1u);
  EXPECT_NEAR(d.wrap_times[0], 500.0, 5.0);
  for (double k : d.k_wrapped) {
    EXPECT_GE(k, -kPi);
    EXPECT_LT(k, kPi);
  }
}

TEST(MomentumPeakDrift, BimodalDensityIsAmbiguous) {
  const LatticeGrid g(1.0, -200, 200);
  const WaveState a = imprint_phase(build_gaussian_state(g, -40.0, 8.0), 1.0);
  const WaveState b = imprint_phase(build_gaussian_state(g, 40.0, 8.0), -1.0);
  std::vector<Complex> amp(g.size());
  for (std::size_t i = 0; i < amp.size(); ++i) amp[i] = a.amplitudes()[i] + b.amplitudes()[i];
  WaveState s(g, std::move(amp));
  s.normalize();
  std::vector<WaveState> snaps{s};
  EXPECT_THROW((void)momentum_peak_drift(snaps), AmbiguityError);
}

TEST(MomentumPeakDrift, FlatSpectrumIsAmbiguous) {
  const LatticeGrid g(1.0, -20, 20);
  std::vector<WaveState> snaps{from_density(g, {{0, 1.0}})};
  EXPECT_THROW((void)momentum_peak_drift(snaps), AmbiguityError);
}

// --- center_of_mass and output --------------------------------------------

TEST(CenterOfMass, SimpleStates) {
  const LatticeGrid g(0.2, -100, 100);
  EXPECT_NEAR(center_of_mass(build_gaussian_state(g, 0.0, 2.0)), 0.0, 1e-10);
  EXPECT_EQ(center_of_mass(from_density(g, {{7, 1.0}})), 7.0);
  EXPECT_NEAR(center_of_mass(from_density(g, {{2, 0.5}, {4, 0.5}})), 3.0, 1e-15);
}

TEST(WriteTrajectory, HeaderAndMissingColumns) {
  PeakTrajectory t = sampled(0.5, 3, [](double x) { return x; });
  std::ostringstream out;
  write_trajectory(out, t);
  EXPECT_EQ(out.str(), "t,position,velocity,acceleration\n0,0,nan,nan\n0.5,0.5,nan,nan\n1,1,nan,nan\n");
}

}  // namespace
