#pragma once

#include "airylat/lattice.hpp"

namespace airylat {

/// Truncation that makes the Airy profile normalisable.
struct ApertureSpec {
  enum class Kind { hard, exponential };

  Kind kind = Kind::hard;
  double gamma = 0.0;  // decay constant of e^{gamma x}; unused for hard

  static ApertureSpec hard() { return {Kind::hard, 0.0}; }
  /// Throws ConfigurationError unless gamma > 0.
  static ApertureSpec exponential(double gamma);

  void validate() const;
};

/// Position of the first (highest) Airy lobe, the maximum of Ai(x)^2.
inline constexpr double kAiryMainLobe = -1.0188;

/// psi_j ~ Ai(j dx) * aperture(j dx), normalised, time 0. Throws
/// ConfigurationError if the main lobe lies outside the grid.
[[nodiscard]] WaveState build_airy_state(const LatticeGrid& grid,
                                         const ApertureSpec& aperture);

/// Same state synthesised from its spectrum e^{-gamma k^2} e^{i k^3/3}
/// by an inverse FFT on a fine continuum grid, then sampled at the sites.
[[nodiscard]] WaveState build_airy_state_fourier(const LatticeGrid& grid,
                                                 double gamma);

/// psi_j ~ exp(-(j dx - center)^2 / (4 width^2)); center and width in
/// position units.
[[nodiscard]] WaveState build_gaussian_state(const LatticeGrid& grid,
                                             double center, double width);

/// psi_j -> psi_j e^{i phi j}. Gives the packet group velocity 2J sin(phi).
[[nodiscard]] WaveState imprint_phase(WaveState state, double phi);

}  // namespace airylat
