#include "airylat/initial_states.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "airylat/errors.hpp"
#include "airylat/special_functions.hpp"
#include "fourier.hpp"

namespace airylat {

namespace {

// e^{-gamma k^2} < 1e-10 at the edge of the synthesis window.
constexpr double kSpectrumLogCut = 23.025850929940457;  // ln(1e10)
constexpr std::size_t kSynthesisBudget = std::size_t{1} << 22;
constexpr double kClipTailTolerance = 1e-6;

void require_main_lobe(const LatticeGrid& grid, const char* fn) {
  const double lo = grid.position(grid.j_min());
  const double hi = grid.position(grid.j_max());
  if (!(lo < kAiryMainLobe - grid.delta_x() &&
        hi > kAiryMainLobe + grid.delta_x())) {
    throw ConfigurationError(std::string(fn) +
                             ": grid does not contain the main Airy lobe "
                             "near x = -1.019");
  }
}

}  // namespace

ApertureSpec ApertureSpec::exponential(double gamma) {
  ApertureSpec spec{Kind::exponential, gamma};
  spec.validate();
  return spec;
}

void ApertureSpec::validate() const {
  if (kind == Kind::exponential && !(gamma > 0.0 && std::isfinite(gamma))) {
    throw ConfigurationError("exponential aperture needs gamma > 0");
  }
}

WaveState build_airy_state(const LatticeGrid& grid,
                           const ApertureSpec& aperture) {
  aperture.validate();
  require_main_lobe(grid, "build_airy_state");
  std::vector<Complex> amp(grid.size());
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const double x = grid.position(grid.site(i));
    double value = airy_ai(x);
    if (aperture.kind == ApertureSpec::Kind::exponential) {
      value *= std::exp(aperture.gamma * x);
    }
    amp[i] = value;
  }
  WaveState state(grid, std::move(amp), 0.0);
  state.normalize();
  return state;
}

WaveState build_airy_state_fourier(const LatticeGrid& grid, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ConfigurationError("build_airy_state_fourier: gamma must be > 0");
  }
  require_main_lobe(grid, "build_airy_state_fourier");
  const double dx = grid.delta_x();

  // Spatial window: the lattice plus the e^{gamma x} decay length on the
  // left, plus room for the super-exponential Ai tail on the right, so the
  // periodic images of the synthesised function do not overlap the grid.
  const double decay = kSpectrumLogCut / gamma;
  const double x_left =
      std::min(grid.position(grid.j_min()), -decay) - 10.0;
  const double x_right = std::max(grid.position(grid.j_max()), 30.0) + 10.0;
  const long j0 = static_cast<long>(std::floor(x_left / dx));
  const long j1 = static_cast<long>(std::ceil(x_right / dx));
  const auto cells = static_cast<std::size_t>(j1 - j0);
  if (cells > kSynthesisBudget) {
    throw ConfigurationError(
        "build_airy_state_fourier: gamma too small, aperture decay length "
        "exceeds the synthesis window");
  }

  // Sub-sample each lattice cell so the momentum window pi/h reaches the
  // spectral cut-off, within the point budget.
  const double k_cut = std::sqrt(kSpectrumLogCut / gamma);
  auto refine = static_cast<std::size_t>(std::ceil(dx * k_cut / std::numbers::pi));
  refine = std::max<std::size_t>(1, std::min(refine, kSynthesisBudget / cells));
  const double h = dx / static_cast<double>(refine);
  const double k_window = std::numbers::pi / h;
  // Fraction of sum |psi~|^2 = e^{-2 gamma k^2} lying outside the window.
  const double tail = std::erfc(std::sqrt(2.0 * gamma) * k_window);
  if (tail > kClipTailTolerance) {
    throw ConfigurationError(
        "build_airy_state_fourier: synthesis window clips the spectrum "
        "(tail mass " + std::to_string(tail) + ")");
  }

  const std::size_t n = cells * refine;
  const auto omega = detail::fft_angular_frequencies(n);
  const double x0 = static_cast<double>(j0) * dx;
  std::vector<Complex> buf(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double k = omega[m] / h;
    const double phase = k * k * k / 3.0 + k * x0;
    buf[m] = std::exp(-gamma * k * k) * Complex(std::cos(phase), std::sin(phase));
  }
  detail::Fft fft(n);
  fft.backward(buf);

  std::vector<Complex> amp(grid.size());
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const long j = grid.site(i);
    amp[i] = buf[static_cast<std::size_t>(j - j0) * refine];
  }
  WaveState state(grid, std::move(amp), 0.0);
  state.normalize();
  return state;
}

WaveState build_gaussian_state(const LatticeGrid& grid, double center,
                               double width) {
  if (!(width >= grid.delta_x())) {
    throw ConfigurationError(
        "build_gaussian_state: width below the lattice spacing");
  }
  if (!(center >= grid.position(grid.j_min()) &&
        center <= grid.position(grid.j_max()))) {
    throw ConfigurationError("build_gaussian_state: center outside the grid");
  }
  std::vector<Complex> amp(grid.size());
  const double inv = 1.0 / (4.0 * width * width);
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const double d = grid.position(grid.site(i)) - center;
    amp[i] = std::exp(-d * d * inv);
  }
  WaveState state(grid, std::move(amp), 0.0);
  state.normalize();
  return state;
}

WaveState imprint_phase(WaveState state, double phi) {
  if (!(std::abs(phi) <= std::numbers::pi)) {
    throw DomainError("imprint_phase: |phi| must not exceed pi");
  }
  if (phi == 0.0) return state;
  const auto& grid = state.grid();
  auto amp = state.amplitudes();
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const double theta = phi * static_cast<double>(grid.site(i));
    amp[i] *= Complex(std::cos(theta), std::sin(theta));
  }
  return state;
}

}  // namespace airylat
