#pragma once

// Thin RAII wrapper over FFTW for in-place complex transforms. Internal to
// the core library.

#include <cstddef>
#include <span>
#include <vector>

#include "airylat/lattice.hpp"

namespace airylat::detail {

class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  Fft(Fft&& other) noexcept;
  Fft& operator=(Fft&& other) noexcept;

  [[nodiscard]] std::size_t size() const noexcept { return n_; }

  /// X_m = sum_n x_n e^{-2 pi i n m / N}, unnormalised, in place.
  void forward(std::span<Complex> data) const;
  /// x_n = sum_m X_m e^{+2 pi i n m / N}, unnormalised, in place.
  void backward(std::span<Complex> data) const;

 private:
  void release() noexcept;

  std::size_t n_ = 0;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

/// Angular frequencies 2 pi m / N of FFT bin m, folded into [-pi, pi).
[[nodiscard]] std::vector<double> fft_angular_frequencies(std::size_t n);

}  // namespace airylat::detail
