#pragma once

// The elliptic solution of the associative Yang-Baxter equation
//
//   r(v; x1, x2) = sum_{(k,l) in {1..n}^2} exp(2 pi i d k x / n)
//                  sigma(v + (d/n)(k tau + l), x) Z^v_(k,l) (x) Z_(k,l),   x = x2 - x1,
//
// together with its Laurent expansion at v = 0 and the gauge transformations
// that map solutions to solutions.

#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "aybe/special_functions.hpp"
#include "aybe/tensor_algebra.hpp"

namespace aybe {

/// Discrete datum (n, d) plus the modular parameter.
class SolutionParams {
public:
  /// Throws ParameterError unless 0 < d < n <= kMaxDimension, gcd(n, d) = 1, Im(tau) > 0.
  SolutionParams(int n, int d, Complex tau);

  int n() const noexcept { return n_; }
  int d() const noexcept { return d_; }
  Complex tau() const noexcept { return modular_.tau(); }
  const ModularParameter& modular() const noexcept { return modular_; }

  friend bool operator==(const SolutionParams&, const SolutionParams&) = default;

private:
  int n_;
  int d_;
  ModularParameter modular_;
};

struct EvaluationPoint {
  Complex v;
  Complex x1;
  Complex x2;
};

/// Deliberate corruption used by negative controls.
struct FaultInjection {
  /// Flip the sign of the theta quotient belonging to this (k, l).
  std::optional<std::pair<int, int>> negate_term;
};

/// Any r-matrix valued function r(v; x1, x2).
using RMatrixFunction = std::function<TwoTensor(Complex v, Complex x1, Complex x2)>;

/// Evaluator for the closed-form solution with precomputed basis tensors and
/// pole shifts. Immutable after construction; safe to share between threads.
class EllipticRMatrix {
public:
  explicit EllipticRMatrix(SolutionParams params, PrecisionPolicy policy = {},
                           FaultInjection faults = {});

  /// Throws PoleError if x2 - x1 or some v + (d/n)(k tau + l) lies within
  /// kPoleThreshold of the lattice.
  TwoTensor operator()(Complex v, Complex x1, Complex x2) const;
  TwoTensor evaluate(const EvaluationPoint& pt) const { return (*this)(pt.v, pt.x1, pt.x2); }

  /// exp(2 pi i d k x / n) sigma(v + (d/n)(k tau + l), x).
  Complex coefficient(int k, int l, Complex v, Complex x) const;

  /// Distance from the nearest pole of any coefficient at this point.
  double pole_distance(Complex v, Complex x1, Complex x2) const;
  /// Distance from v to the nearest pole in v alone.
  double v_pole_distance(Complex v) const;

  /// (d/n)(k tau + l), indexed by basis_index(n, k, l).
  const std::vector<Complex>& pole_shifts() const noexcept { return shifts_; }
  /// Z^v_(k,l) (x) Z_(k,l).
  const TwoTensor& basis_tensor(int k, int l) const;

  const SolutionParams& params() const noexcept { return params_; }
  const HeisenbergPair& pair() const noexcept { return pair_; }

  RMatrixFunction as_function() const;

private:
  SolutionParams params_;
  PrecisionPolicy policy_;
  FaultInjection faults_;
  HeisenbergPair pair_;
  std::vector<Complex> shifts_;
  std::vector<TwoTensor> basis_;
};

TwoTensor r_elliptic(const SolutionParams& params, const EvaluationPoint& pt);

/// The theta-quotient coefficient produced by the residue/evaluation argument:
///
///   exp(-2 pi i d k z / n) theta'((1+tau)/2) theta(z + v + (1+tau)/2 - delta)
///   / (theta(v + (1+tau)/2 - delta) theta(z + (1+tau)/2)),  delta = (d/n)(k tau - l),
///
/// theta = theta_3. Equals exp(-2 pi i d k z / n) sigma(v - delta, z).
Complex r_coeff_theta(const SolutionParams& params, int k, int l, Complex v, Complex z,
                      const PrecisionPolicy& policy = {});

/// Coefficients of r(v) = r_{-1}/v + r_0 + r_1 v + r_2 v^2 + ...
struct LaurentExpansion {
  Complex x1;
  Complex x2;
  std::map<int, TwoTensor> coefficients;
  double circle_radius = 0.0;
  int sample_count = 0;
  /// Largest Frobenius difference against the extraction with twice the samples.
  double est_error = 0.0;
};

inline constexpr int kLaurentMinOrder = -1;
inline constexpr int kLaurentMaxOrder = 2;

/// Distance from 0 to the nearest pole of r in v other than v = 0 itself.
double foreign_pole_distance(const SolutionParams& params);
/// 0.05 * foreign_pole_distance.
double default_laurent_radius(const SolutionParams& params);

/// Discrete Fourier inversion of r(v) v^{-m} over `samples` equispaced points
/// on |v| = radius. No pole checks: the caller vouches for the circle.
LaurentExpansion laurent_expand(const RMatrixFunction& r, Complex x1, Complex x2, double radius,
                                int samples);

/// As above for the closed form. Throws PoleError if a foreign pole lies
/// within the circle, ParameterError if radius <= 0 or samples < 8.
LaurentExpansion laurent_expand(const SolutionParams& params, Complex x1, Complex x2,
                                double radius, int samples);

/// Order -1 coefficient written as c * (1 (x) 1) + remainder.
struct ResidueDiagnostic {
  Complex c;
  /// Frobenius norm of the remainder.
  double off_identity = 0.0;
};
ResidueDiagnostic residue_diagnostic(const LaurentExpansion& expansion);

using MatrixFunction = std::function<SquareMatrix(Complex x)>;
using ScalarFunction = std::function<Complex(Complex x)>;

enum class GaugeVariant {
  /// (phi(x1) (x) phi(x2)) r (phi(x1) (x) phi(x2))^{-1}
  two_point,
  /// (phi(x1) (x) phi(x1)) r, no inverse
  one_point_left,
};

/// Throws NumericError at evaluation time if phi is singular there.
RMatrixFunction gauge_conjugate(RMatrixFunction r, MatrixFunction phi,
                                GaugeVariant variant = GaugeVariant::two_point);

/// exp(v (beta(x1) - beta(x2))) r(v; x1, x2).
RMatrixFunction gauge_scalar(RMatrixFunction r, ScalarFunction beta);

}  // namespace aybe
