#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace aybe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: Im(tau) <= 0, gcd(n, d) != 1, out-of-range index, shape mismatch.
class ParameterError : public Error {
public:
  using Error::Error;
};

/// An argument came within the pole-proximity threshold of the lattice
/// Z + tau Z (or of a shifted copy of it).
class PoleError : public Error {
public:
  PoleError(const std::string& what, std::complex<double> lattice_point, double distance,
            std::optional<std::pair<int, int>> term = std::nullopt);

  std::complex<double> lattice_point() const noexcept { return lattice_point_; }
  double distance() const noexcept { return distance_; }
  /// The (k, l) term of the r-matrix responsible, when known.
  const std::optional<std::pair<int, int>>& term() const noexcept { return term_; }

private:
  std::complex<double> lattice_point_;
  double distance_;
  std::optional<std::pair<int, int>> term_;
};

/// A theta series did not converge within the configured term budget.
class PrecisionError : public Error {
public:
  using Error::Error;
};

/// Singular matrix where an invertible one was required.
class NumericError : public Error {
public:
  using Error::Error;
};

/// The residue map (or a least-squares fit) is too ill-conditioned to invert.
class DegeneracyError : public Error {
public:
  using Error::Error;
};

/// CYBE source selection did not single out exactly one Laurent order.
class SelectionError : public Error {
public:
  using Error::Error;
};

}  // namespace aybe
