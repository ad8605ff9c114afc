#pragma once

#include <stdexcept>
#include <string>

namespace airylat {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent configuration (grid, aperture, schedule, ...).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Main peak sits on the outermost site, so it cannot be refined.
class BoundaryError : public Error {
 public:
  using Error::Error;
};

/// Probability leaked into the edge layer of the lattice during a run.
class GridTooSmallError : public Error {
 public:
  GridTooSmallError(const std::string& what, double time)
      : Error(what), time_(time) {}
  [[nodiscard]] double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Peak tracker found no maximum inside its continuity window.
class TrackingLostError : public Error {
 public:
  TrackingLostError(const std::string& what, std::size_t last_good_index)
      : Error(what), last_good_index_(last_good_index) {}
  [[nodiscard]] std::size_t last_good_index() const noexcept {
    return last_good_index_;
  }

 private:
  std::size_t last_good_index_;
};

/// Quantity diverges (refractive index at a Bessel root).
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Momentum density has more than one candidate peak.
class AmbiguityError : public Error {
 public:
  using Error::Error;
};

/// Should never happen; signals a construction bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace airylat
