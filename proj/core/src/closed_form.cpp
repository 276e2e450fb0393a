#include "aybe/closed_form.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>

#include "aybe/errors.hpp"

namespace aybe {

SolutionParams::SolutionParams(int n, int d, Complex tau) : n_(n), d_(d), modular_(tau) {
  heisenberg_pair(n, d);  // validates (n, d)
}

EllipticRMatrix::EllipticRMatrix(SolutionParams params, PrecisionPolicy policy,
                                 FaultInjection faults)
    : params_(params),
      policy_(policy),
      faults_(faults),
      pair_(heisenberg_pair(params.n(), params.d())) {
  policy_.validate();
  const int n = params_.n();
  const double ratio = static_cast<double>(params_.d()) / static_cast<double>(n);
  shifts_.resize(static_cast<std::size_t>(n) * n);
  basis_.resize(static_cast<std::size_t>(n) * n);
  for (int k = 1; k <= n; ++k) {
    for (int l = 1; l <= n; ++l) {
      const auto idx = static_cast<std::size_t>(basis_index(n, k, l));
      shifts_[idx] = ratio * (static_cast<double>(k) * params_.tau() + static_cast<double>(l));
      basis_[idx] = TwoTensor::simple(z_dual(pair_, k, l), z_basis(pair_, k, l));
    }
  }
}

const TwoTensor& EllipticRMatrix::basis_tensor(int k, int l) const {
  const int n = params_.n();
  if (k < 1 || k > n || l < 1 || l > n) {
    throw ParameterError("basis_tensor: index outside {1..n}^2");
  }
  return basis_[static_cast<std::size_t>(basis_index(n, k, l))];
}

Complex EllipticRMatrix::coefficient(int k, int l, Complex v, Complex x) const {
  const int n = params_.n();
  const Complex shift = shifts_.at(static_cast<std::size_t>(basis_index(n, k, l)));
  const Complex prefactor = std::exp(2.0 * kI * kPi * static_cast<double>(params_.d() * k) * x /
                                     static_cast<double>(n));
  Complex value = prefactor * kronecker_sigma(v + shift, x, params_.tau(), policy_);
  if (faults_.negate_term && faults_.negate_term->first == k && faults_.negate_term->second == l) {
    value = -value;
  }
  return value;
}

double EllipticRMatrix::v_pole_distance(Complex v) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Complex& s : shifts_) {
    best = std::min(best, nearest_lattice_point(v + s, params_.tau()).distance);
  }
  return best;
}

double EllipticRMatrix::pole_distance(Complex v, Complex x1, Complex x2) const {
  return std::min(v_pole_distance(v), nearest_lattice_point(x2 - x1, params_.tau()).distance);
}

TwoTensor EllipticRMatrix::operator()(Complex v, Complex x1, Complex x2) const {
  const int n = params_.n();
  const Complex x = x2 - x1;
  const LatticePoint px = nearest_lattice_point(x, params_.tau());
  if (px.distance < kPoleThreshold) {
    std::ostringstream os;
    os << "r_elliptic: x = x2 - x1 = " << x << " is within " << px.distance
       << " of lattice point " << px.point;
    throw PoleError(os.str(), px.point, px.distance);
  }
  TwoTensor out(n);
  for (int k = 1; k <= n; ++k) {
    for (int l = 1; l <= n; ++l) {
      const auto idx = static_cast<std::size_t>(basis_index(n, k, l));
      const LatticePoint pv = nearest_lattice_point(v + shifts_[idx], params_.tau());
      if (pv.distance < kPoleThreshold) {
        std::ostringstream os;
        os << "r_elliptic: v = " << v << " hits the pole of term (k, l) = (" << k << ", " << l
           << "): v + (d/n)(k tau + l) is within " << pv.distance << " of lattice point "
           << pv.point;
        throw PoleError(os.str(), pv.point, pv.distance, std::make_pair(k, l));
      }
      out += coefficient(k, l, v, x) * basis_[idx];
    }
  }
  return out;
}

RMatrixFunction EllipticRMatrix::as_function() const {
  return [self = *this](Complex v, Complex x1, Complex x2) { return self(v, x1, x2); };
}

TwoTensor r_elliptic(const SolutionParams& params, const EvaluationPoint& pt) {
  return EllipticRMatrix(params).evaluate(pt);
}

Complex r_coeff_theta(const SolutionParams& params, int k, int l, Complex v, Complex z,
                      const PrecisionPolicy& policy) {
  const int n = params.n();
  if (k < 1 || k > n || l < 1 || l > n) {
    throw ParameterError("r_coeff_theta: index outside {1..n}^2");
  }
  const Complex tau = params.tau();
  const double ratio = static_cast<double>(params.d()) / static_cast<double>(n);
  const Complex delta = ratio * (static_cast<double>(k) * tau - static_cast<double>(l));
  const Complex half = (1.0 + tau) / 2.0;

  // theta_3 vanishes exactly on half + lattice, i.e. where v - delta or z hits the lattice.
  const LatticePoint pv = nearest_lattice_point(v - delta, tau);
  if (pv.distance < kPoleThreshold) {
    std::ostringstream os;
    os << "r_coeff_theta: v - (d/n)(k tau - l) is within " << pv.distance << " of lattice point "
       << pv.point;
    throw PoleError(os.str(), pv.point, pv.distance, std::make_pair(k, l));
  }
  const LatticePoint pz = nearest_lattice_point(z, tau);
  if (pz.distance < kPoleThreshold) {
    std::ostringstream os;
    os << "r_coeff_theta: z is within " << pz.distance << " of lattice point " << pz.point;
    throw PoleError(os.str(), pz.point, pz.distance, std::make_pair(k, l));
  }

  const Complex prefactor =
      std::exp(-2.0 * kI * kPi * static_cast<double>(params.d() * k) * z / static_cast<double>(n));
  const Complex numerator =
      theta3_deriv_half_period(tau, policy) * theta3(z + v + half - delta, tau, policy);
  const Complex denominator = theta3(v + half - delta, tau, policy) * theta3(z + half, tau, policy);
  return prefactor * numerator / denominator;
}

// ---------------------------------------------------------------------------
// Laurent expansion

double foreign_pole_distance(const SolutionParams& params) {
  const EllipticRMatrix r(params);
  const int n = params.n();
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= n; ++k) {
    for (int l = 1; l <= n; ++l) {
      if (k == n && l == n) continue;
      const Complex s = r.pole_shifts()[static_cast<std::size_t>(basis_index(n, k, l))];
      best = std::min(best, nearest_lattice_point(-s, params.tau()).distance);
    }
  }
  return best;
}

double default_laurent_radius(const SolutionParams& params) {
  return 0.05 * foreign_pole_distance(params);
}

namespace {

std::map<int, TwoTensor> invert_samples(const std::vector<TwoTensor>& values,
                                        const std::vector<Complex>& points, int stride) {
  std::map<int, TwoTensor> out;
  const int n = values.front().n();
  const std::size_t count = values.size() / static_cast<std::size_t>(stride);
  for (int m = kLaurentMinOrder; m <= kLaurentMaxOrder; ++m) {
    TwoTensor acc(n);
    for (std::size_t j = 0; j < values.size(); j += static_cast<std::size_t>(stride)) {
      acc += std::pow(points[j], -m) * values[j];
    }
    acc *= Complex{1.0 / static_cast<double>(count), 0.0};
    out.emplace(m, std::move(acc));
  }
  return out;
}

}  // namespace

LaurentExpansion laurent_expand(const RMatrixFunction& r, Complex x1, Complex x2, double radius,
                                int samples) {
  if (!(radius > 0.0)) throw ParameterError("laurent_expand: radius must be positive");
  if (samples < 8) throw ParameterError("laurent_expand: need at least 8 samples");

  // The 2N-point grid contains the N-point grid at even positions.
  const int fine = 2 * samples;
  std::vector<Complex> points(static_cast<std::size_t>(fine));
  std::vector<TwoTensor> values;
  values.reserve(points.size());
  for (int j = 0; j < fine; ++j) {
    points[static_cast<std::size_t>(j)] =
        std::polar(radius, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(fine));
    values.push_back(r(points[static_cast<std::size_t>(j)], x1, x2));
  }

  LaurentExpansion out;
  out.x1 = x1;
  out.x2 = x2;
  out.circle_radius = radius;
  out.sample_count = samples;
  out.coefficients = invert_samples(values, points, 2);
  const auto refined = invert_samples(values, points, 1);
  for (const auto& [order, coeff] : out.coefficients) {
    out.est_error = std::max(out.est_error, (coeff - refined.at(order)).norm());
  }
  return out;
}

LaurentExpansion laurent_expand(const SolutionParams& params, Complex x1, Complex x2,
                                double radius, int samples) {
  if (!(radius > 0.0)) throw ParameterError("laurent_expand: radius must be positive");
  const double foreign = foreign_pole_distance(params);
  if (foreign <= radius) {
    std::ostringstream os;
    os << "laurent_expand: a pole of r at distance " << foreign
       << " from v = 0 lies inside the sampling circle of radius " << radius;
    throw PoleError(os.str(), Complex{}, foreign);
  }
  return laurent_expand(EllipticRMatrix(params).as_function(), x1, x2, radius, samples);
}

ResidueDiagnostic residue_diagnostic(const LaurentExpansion& expansion) {
  const TwoTensor& residue = expansion.coefficients.at(-1);
  const int n = residue.n();
  // Orthogonal projection onto span(1 (x) 1) in the Frobenius inner product.
  Complex trace{0.0, 0.0};
  for (int i = 0; i < n * n; ++i) trace += residue.op()(i, i);
  ResidueDiagnostic diag;
  diag.c = trace / static_cast<double>(n * n);
  diag.off_identity = (residue - diag.c * TwoTensor::identity(n)).norm();
  return diag;
}

// ---------------------------------------------------------------------------
// Gauge transformations

RMatrixFunction gauge_conjugate(RMatrixFunction r, MatrixFunction phi, GaugeVariant variant) {
  return [r = std::move(r), phi = std::move(phi), variant](Complex v, Complex x1,
                                                            Complex x2) -> TwoTensor {
    const TwoTensor base = r(v, x1, x2);
    const SquareMatrix p1 = phi(x1);
    if (variant == GaugeVariant::one_point_left) {
      return TwoTensor::from_operator(Eigen::kroneckerProduct(p1, p1).eval() * base.op());
    }
    const SquareMatrix p2 = phi(x2);
    const CMatrix conj = Eigen::kroneckerProduct(p1, p2).eval();
    Eigen::FullPivLU<CMatrix> lu(conj);
    if (!lu.isInvertible()) {
      throw NumericError("gauge_conjugate: phi is singular at a sample point");
    }
    return TwoTensor::from_operator(conj * base.op() * lu.inverse());
  };
}

RMatrixFunction gauge_scalar(RMatrixFunction r, ScalarFunction beta) {
  return [r = std::move(r), beta = std::move(beta)](Complex v, Complex x1, Complex x2) {
    return std::exp(v * (beta(x1) - beta(x2))) * r(v, x1, x2);
  };
}

}  // namespace aybe
