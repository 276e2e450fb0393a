#pragma once

// Jacobi theta functions theta_1, theta_3 and the Kronecker elliptic function
// for the lattice Z + tau Z, Im(tau) > 0.
//
// Conventions (nome q = exp(pi i tau)):
//
//   theta_1(z|tau) = 2 q^{1/4} sum_{n>=0} (-1)^n q^{n(n+1)} sin((2n+1) pi z)
//   theta_3(z|tau) = 1 + 2 sum_{n>=1} q^{n^2} cos(2 pi n z)
//   sigma(u, z)    = theta_1'(0) theta_1(u+z) / (theta_1(u) theta_1(z))
//
// q^{1/4} always means exp(pi i tau / 4), never the principal root of q.
// Every public evaluator reduces its argument into the fundamental strip
// before summing; the *_series variants sum the raw series and exist for
// cross-checks.

#include <complex>
#include <numbers>

namespace aybe {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// Distance to the lattice below which a pole error is raised.
inline constexpr double kPoleThreshold = 1e-6;

/// The modular parameter tau together with its nome q = exp(pi i tau).
class ModularParameter {
public:
  /// Throws ParameterError unless Im(tau) > 0.
  explicit ModularParameter(Complex tau);

  Complex tau() const noexcept { return tau_; }
  Complex nome() const noexcept { return q_; }

  friend bool operator==(const ModularParameter&, const ModularParameter&) = default;

private:
  Complex tau_;
  Complex q_;
};

/// Series truncation: stop once the bound on the next term drops below
/// target_abs_error times the largest bound seen so far.
struct PrecisionPolicy {
  double target_abs_error = 1e-17;
  int max_series_terms = 64;

  /// Throws ParameterError if target_abs_error <= 0 or max_series_terms < 8.
  void validate() const;
};

enum class ThetaKind { theta1, theta3 };

/// z = z0 + m + k tau with z0 in the fundamental strip, and
/// theta(z) = multiplier * theta(z0) for the chosen theta function.
struct ReducedArgument {
  Complex z0;
  long m = 0;
  long k = 0;
  Complex multiplier{1.0, 0.0};
  /// log of multiplier (branch chosen so that exp(log_multiplier) == multiplier).
  Complex log_multiplier{0.0, 0.0};
};

struct LatticePoint {
  long m = 0;
  long k = 0;
  Complex point;
  double distance = 0.0;
};

/// q = exp(pi i tau). Throws ParameterError if Im(tau) <= 0.
Complex nome(Complex tau);

/// Nearest point m + k tau of the lattice to z.
LatticePoint nearest_lattice_point(Complex z, Complex tau);

ReducedArgument reduce_argument(Complex z, Complex tau, ThetaKind which);

Complex theta1(Complex z, Complex tau, const PrecisionPolicy& policy = {});
Complex theta3(Complex z, Complex tau, const PrecisionPolicy& policy = {});

/// Raw series without argument reduction.
Complex theta1_series(Complex z, Complex tau, const PrecisionPolicy& policy = {});
Complex theta3_series(Complex z, Complex tau, const PrecisionPolicy& policy = {});

/// theta_1'(0|tau), by term-wise differentiation.
Complex theta1_deriv_zero(Complex tau, const PrecisionPolicy& policy = {});

/// theta_3'((1 + tau)/2 | tau) = i exp(-pi i tau/4) theta_1'(0|tau).
Complex theta3_deriv_half_period(Complex tau, const PrecisionPolicy& policy = {});

/// theta_3(w + (1 + tau)/2 - x | tau); vanishes exactly at w = x mod lattice.
Complex theta_shifted(Complex x, Complex w, Complex tau, const PrecisionPolicy& policy = {});

/// Kronecker elliptic function as a theta ratio. Simple poles on the
/// lattice in each variable; throws PoleError within kPoleThreshold of one.
///
///   sigma(u+1, z)   = sigma(u, z)
///   sigma(u+tau, z) = exp(-2 pi i z) sigma(u, z)
///   sigma(u, z)     = sigma(z, u)
Complex kronecker_sigma(Complex u, Complex z, Complex tau, const PrecisionPolicy& policy = {});

/// Independent route to sigma through its Fourier series
///
///   sigma(u, z) = -2 pi i sum_n exp(2 pi i n z) / (1 - exp(2 pi i (u + n tau))),
///
/// valid for 0 < Im z < Im tau; z is first shifted by multiples of tau into
/// that band. Throws PrecisionError when z sits too close to the band edge
/// for the series to converge within max_terms.
Complex kronecker_sigma_series(Complex u, Complex z, Complex tau, int max_terms = 400);

}  // namespace aybe
