#include "aybe/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "aybe/errors.hpp"

namespace aybe {
namespace {

void require_upper_half_plane(Complex tau) {
  if (!(tau.imag() > 0.0) || !std::isfinite(tau.real()) || !std::isfinite(tau.imag())) {
    std::ostringstream os;
    os << "modular parameter must satisfy Im(tau) > 0, got tau = " << tau;
    throw ParameterError(os.str());
  }
}

// exp(pi i tau / 4), the q^{1/4} of the theta_1 series.
Complex quarter_nome(Complex tau) { return std::exp(kI * kPi * tau / 4.0); }

// Sum of the theta_1 series without the 2 q^{1/4} prefactor.
Complex theta1_core(Complex z, Complex tau, const PrecisionPolicy& policy) {
  const double log_abs_q = -kPi * tau.imag();
  const double growth = kPi * std::abs(z.imag());
  Complex sum{0.0, 0.0};
  double largest = 0.0;
  for (int n = 0; n < policy.max_series_terms; ++n) {
    const double nn = static_cast<double>(n);
    // |q^{n(n+1)} sin((2n+1) pi z)| <= exp(n(n+1) log|q| + (2n+1) pi |Im z|)
    const double bound = std::exp(nn * (nn + 1.0) * log_abs_q + (2.0 * nn + 1.0) * growth);
    largest = std::max(largest, bound);
    if (n > 0 && bound < policy.target_abs_error * largest) {
      return sum;
    }
    const Complex qpow = std::exp(kI * kPi * tau * (nn * (nn + 1.0)));
    const Complex term = qpow * std::sin((2.0 * nn + 1.0) * kPi * z);
    sum += (n % 2 == 0) ? term : -term;
  }
  throw PrecisionError("theta_1 series did not converge within max_series_terms");
}

Complex theta3_core(Complex z, Complex tau, const PrecisionPolicy& policy) {
  const double log_abs_q = -kPi * tau.imag();
  const double growth = 2.0 * kPi * std::abs(z.imag());
  Complex sum{1.0, 0.0};
  double largest = 1.0;
  for (int n = 1; n <= policy.max_series_terms; ++n) {
    const double nn = static_cast<double>(n);
    const double bound = 2.0 * std::exp(nn * nn * log_abs_q + nn * growth);
    largest = std::max(largest, bound);
    if (bound < policy.target_abs_error * largest) {
      return sum;
    }
    sum += 2.0 * std::exp(kI * kPi * tau * (nn * nn)) * std::cos(2.0 * kPi * nn * z);
  }
  throw PrecisionError("theta_3 series did not converge within max_series_terms");
}

// theta(z) = exp(log_multiplier) * series(z0), kept apart so that ratios of
// thetas never materialize large multipliers.
struct ThetaParts {
  Complex series;
  Complex log_multiplier;
};

ThetaParts theta1_parts(Complex z, Complex tau, const PrecisionPolicy& policy) {
  const ReducedArgument r = reduce_argument(z, tau, ThetaKind::theta1);
  return {2.0 * quarter_nome(tau) * theta1_core(r.z0, tau, policy), r.log_multiplier};
}

void require_off_lattice(Complex z, Complex tau, const char* name) {
  const LatticePoint p = nearest_lattice_point(z, tau);
  if (p.distance < kPoleThreshold) {
    std::ostringstream os;
    os << "kronecker_sigma: " << name << " = " << z << " is within " << p.distance
       << " of lattice point " << p.point << " (m = " << p.m << ", k = " << p.k << ")";
    throw PoleError(os.str(), p.point, p.distance);
  }
}

}  // namespace

ModularParameter::ModularParameter(Complex tau) : tau_(tau), q_(aybe::nome(tau)) {}

void PrecisionPolicy::validate() const {
  if (!(target_abs_error > 0.0)) {
    throw ParameterError("PrecisionPolicy: target_abs_error must be positive");
  }
  if (max_series_terms < 8) {
    throw ParameterError("PrecisionPolicy: max_series_terms must be at least 8");
  }
}

Complex nome(Complex tau) {
  require_upper_half_plane(tau);
  return std::exp(kI * kPi * tau);
}

LatticePoint nearest_lattice_point(Complex z, Complex tau) {
  require_upper_half_plane(tau);
  const long k0 = std::lround(z.imag() / tau.imag());
  const long m0 = std::lround((z - static_cast<double>(k0) * tau).real());
  LatticePoint best{m0, k0, Complex{}, std::numeric_limits<double>::infinity()};
  // For Re(tau) != 0 the rounded candidate is not always the closest one.
  for (long dk = -1; dk <= 1; ++dk) {
    for (long dm = -1; dm <= 1; ++dm) {
      const long k = k0 + dk;
      const long m = m0 + dm;
      const Complex p = static_cast<double>(m) + static_cast<double>(k) * tau;
      const double dist = std::abs(z - p);
      if (dist < best.distance) {
        best = {m, k, p, dist};
      }
    }
  }
  return best;
}

ReducedArgument reduce_argument(Complex z, Complex tau, ThetaKind which) {
  require_upper_half_plane(tau);
  ReducedArgument r;
  r.k = std::lround(z.imag() / tau.imag());
  const Complex shifted = z - static_cast<double>(r.k) * tau;
  r.m = std::lround(shifted.real());
  r.z0 = shifted - static_cast<double>(r.m);

  // theta_3(z0 + k tau) = q^{-k^2} exp(-2 pi i k z0) theta_3(z0); period 1.
  // theta_1 picks up (-1)^k from the tau-shift and (-1)^m from the 1-shift.
  const double kd = static_cast<double>(r.k);
  r.log_multiplier = -kI * kPi * tau * (kd * kd) - 2.0 * kI * kPi * kd * r.z0;
  if (which == ThetaKind::theta1 && ((r.k + r.m) % 2 != 0)) {
    r.log_multiplier += kI * kPi;
  }
  r.multiplier = std::exp(r.log_multiplier);
  return r;
}

Complex theta1_series(Complex z, Complex tau, const PrecisionPolicy& policy) {
  require_upper_half_plane(tau);
  policy.validate();
  return 2.0 * quarter_nome(tau) * theta1_core(z, tau, policy);
}

Complex theta3_series(Complex z, Complex tau, const PrecisionPolicy& policy) {
  require_upper_half_plane(tau);
  policy.validate();
  return theta3_core(z, tau, policy);
}

Complex theta1(Complex z, Complex tau, const PrecisionPolicy& policy) {
  policy.validate();
  const ThetaParts parts = theta1_parts(z, tau, policy);
  return std::exp(parts.log_multiplier) * parts.series;
}

Complex theta3(Complex z, Complex tau, const PrecisionPolicy& policy) {
  policy.validate();
  const ReducedArgument r = reduce_argument(z, tau, ThetaKind::theta3);
  return r.multiplier * theta3_core(r.z0, tau, policy);
}

Complex theta1_deriv_zero(Complex tau, const PrecisionPolicy& policy) {
  require_upper_half_plane(tau);
  policy.validate();
  const double log_abs_q = -kPi * tau.imag();
  Complex sum{0.0, 0.0};
  double largest = 0.0;
  for (int n = 0; n < policy.max_series_terms; ++n) {
    const double nn = static_cast<double>(n);
    const double weight = (2.0 * nn + 1.0) * kPi;
    const double bound = weight * std::exp(nn * (nn + 1.0) * log_abs_q);
    largest = std::max(largest, bound);
    if (n > 0 && bound < policy.target_abs_error * largest) {
      return 2.0 * quarter_nome(tau) * sum;
    }
    const Complex term = weight * std::exp(kI * kPi * tau * (nn * (nn + 1.0)));
    sum += (n % 2 == 0) ? term : -term;
  }
  throw PrecisionError("theta_1'(0) series did not converge within max_series_terms");
}

Complex theta3_deriv_half_period(Complex tau, const PrecisionPolicy& policy) {
  return kI * std::exp(-kI * kPi * tau / 4.0) * theta1_deriv_zero(tau, policy);
}

Complex theta_shifted(Complex x, Complex w, Complex tau, const PrecisionPolicy& policy) {
  return theta3(w + (1.0 + tau) / 2.0 - x, tau, policy);
}

Complex kronecker_sigma(Complex u, Complex z, Complex tau, const PrecisionPolicy& policy) {
  policy.validate();
  require_off_lattice(u, tau, "u");
  require_off_lattice(z, tau, "z");
  const ThetaParts num = theta1_parts(u + z, tau, policy);
  const ThetaParts den_u = theta1_parts(u, tau, policy);
  const ThetaParts den_z = theta1_parts(z, tau, policy);
  const Complex ratio = theta1_deriv_zero(tau, policy) * num.series / (den_u.series * den_z.series);
  return ratio * std::exp(num.log_multiplier - den_u.log_multiplier - den_z.log_multiplier);
}

Complex kronecker_sigma_series(Complex u, Complex z, Complex tau, int max_terms) {
  require_upper_half_plane(tau);
  require_off_lattice(u, tau, "u");
  require_off_lattice(z, tau, "z");

  // Shift z into the band 0 <= Im z < Im tau; sigma(u, z + tau) = exp(-2 pi i u) sigma(u, z).
  const long j = static_cast<long>(std::floor(z.imag() / tau.imag()));
  const Complex zb = z - static_cast<double>(j) * tau;
  const Complex factor = std::exp(-2.0 * kI * kPi * u * static_cast<double>(j));

  const double lo = zb.imag();
  const double hi = tau.imag() - zb.imag();
  // Tail terms decay like exp(-2 pi n lo) and exp(-2 pi n hi).
  const double rate = 2.0 * kPi * std::min(lo, hi);
  if (rate * max_terms < 40.0) {
    throw PrecisionError("kronecker_sigma_series: Im z too close to a multiple of Im tau");
  }
  const int terms = std::min(max_terms, static_cast<int>(std::ceil(40.0 / rate)) + 2);

  Complex sum{0.0, 0.0};
  for (int n = -terms; n <= terms; ++n) {
    const double nd = static_cast<double>(n);
    sum += std::exp(2.0 * kI * kPi * nd * zb) /
           (1.0 - std::exp(2.0 * kI * kPi * (u + nd * tau)));
  }
  return -2.0 * kI * kPi * sum * factor;
}

}  // namespace aybe
