#include "fourier.hpp"

#include <fftw3.h>

#include <mutex>
#include <numbers>
#include <utility>

#include "airylat/errors.hpp"

namespace airylat::detail {

namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) {
  return reinterpret_cast<fftw_complex*>(p);
}

}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  if (n == 0) throw ConfigurationError("Fft: zero length");
  std::vector<Complex> scratch(n);
  // ESTIMATE keeps plans (and hence output bits) reproducible run to run.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  auto* buf = as_fftw(scratch.data());
  forward_plan_ =
      fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, flags);
  backward_plan_ =
      fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, flags);
  if (forward_plan_ == nullptr || backward_plan_ == nullptr) {
    release();
    throw InternalError("Fft: FFTW planning failed");
  }
}

Fft::~Fft() { release(); }

Fft::Fft(Fft&& other) noexcept
    : n_(other.n_),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      backward_plan_(std::exchange(other.backward_plan_, nullptr)) {}

Fft& Fft::operator=(Fft&& other) noexcept {
  if (this != &other) {
    release();
    n_ = other.n_;
    forward_plan_ = std::exchange(other.forward_plan_, nullptr);
    backward_plan_ = std::exchange(other.backward_plan_, nullptr);
  }
  return *this;
}

void Fft::release() noexcept {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_ != nullptr) {
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    forward_plan_ = nullptr;
  }
  if (backward_plan_ != nullptr) {
    fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
    backward_plan_ = nullptr;
  }
}

void Fft::forward(std::span<Complex> data) const {
  if (data.size() != n_) throw InternalError("Fft::forward: size mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(data.data()),
                   as_fftw(data.data()));
}

void Fft::backward(std::span<Complex> data) const {
  if (data.size() != n_) throw InternalError("Fft::backward: size mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_),
                   as_fftw(data.data()), as_fftw(data.data()));
}

std::vector<double> fft_angular_frequencies(std::size_t n) {
  std::vector<double> k(n);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t m = 0; m < n; ++m) {
    const auto signed_m = (2 * m < n) ? static_cast<double>(m)
                                      : static_cast<double>(m) -
                                            static_cast<double>(n);
    k[m] = step * signed_m;
  }
  return k;
}

}  // namespace airylat::detail
