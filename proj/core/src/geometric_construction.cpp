#include "aybe/geometric_construction.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <sstream>

#include "aybe/errors.hpp"

namespace aybe {
namespace {

Complex delta_shift(const SolutionParams& params, int k, int l) {
  const double ratio = static_cast<double>(params.d()) / static_cast<double>(params.n());
  return ratio * (static_cast<double>(k) * params.tau() - static_cast<double>(l));
}

void require_coeffs(const SolSpaceElement& elem) {
  const auto expected = static_cast<std::size_t>(elem.params.n() * elem.params.n());
  if (elem.coeffs.size() != expected) {
    throw ParameterError("SolSpaceElement: coefficient vector must have length n^2");
  }
}

double relative_gap(const SquareMatrix& a, const SquareMatrix& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

Complex ev_denominator(Complex x, Complex y, Complex tau, const PrecisionPolicy& policy) {
  const LatticePoint p = nearest_lattice_point(y - x, tau);
  if (p.distance < kPoleThreshold) {
    std::ostringstream os;
    os << "ev_map: y - x = " << (y - x) << " is within " << p.distance << " of lattice point "
       << p.point << "; theta_3 vanishes at (1+tau)/2";
    throw PoleError(os.str(), p.point, p.distance);
  }
  return theta_shifted(x, y, tau, policy);
}

}  // namespace

SolSpaceElement unit_element(const SolutionParams& params, Complex v, Complex x, int k, int l) {
  const int n = params.n();
  if (k < 1 || k > n || l < 1 || l > n) {
    throw ParameterError("unit_element: index outside {1..n}^2");
  }
  SolSpaceElement elem{params, v, x, std::vector<Complex>(static_cast<std::size_t>(n * n))};
  elem.coeffs[static_cast<std::size_t>(basis_index(n, k, l))] = 1.0;
  return elem;
}

Complex phi_factor(Complex x, Complex w, Complex tau) {
  return -std::exp(-2.0 * kI * kPi * (w + tau - x));
}

Complex sol_basis_eval(const SolutionParams& params, Complex v, Complex x, int k, int l, Complex w,
                       const PrecisionPolicy& policy) {
  const int n = params.n();
  if (k < 1 || k > n || l < 1 || l > n) {
    throw ParameterError("sol_basis_eval: index outside {1..n}^2");
  }
  // theta_3(w + (1+tau)/2 + v - x - delta) = theta_shifted(x - v + delta, w).
  const Complex prefactor =
      std::exp(-2.0 * kI * kPi * static_cast<double>(params.d() * k) * w / static_cast<double>(n));
  return prefactor * theta_shifted(x - v + delta_shift(params, k, l), w, params.tau(), policy);
}

SquareMatrix sol_element_eval(const SolSpaceElement& elem, Complex w,
                              const PrecisionPolicy& policy) {
  require_coeffs(elem);
  const int n = elem.params.n();
  const HeisenbergPair pair = heisenberg_pair(n, elem.params.d());
  SquareMatrix out = SquareMatrix::Zero(n, n);
  for (int k = 1; k <= n; ++k) {
    for (int l = 1; l <= n; ++l) {
      const Complex c = elem.coeffs[static_cast<std::size_t>(basis_index(n, k, l))];
      if (c == Complex{}) continue;
      out += c * sol_basis_eval(elem.params, elem.v, elem.x, k, l, w, policy) *
             z_basis(pair, k, l);
    }
  }
  return out;
}

FunctionalEqReport check_functional_equations(const SolSpaceElement& elem,
                                              std::span<const Complex> points,
                                              const PrecisionPolicy& policy) {
  const HeisenbergPair pair = heisenberg_pair(elem.params.n(), elem.params.d());
  const Complex tau = elem.params.tau();
  FunctionalEqReport report;
  report.sample_points.assign(points.begin(), points.end());
  for (const Complex w : points) {
    const SquareMatrix f = sol_element_eval(elem, w, policy);
    report.residual_period_1 = std::max(
        report.residual_period_1, relative_gap(sol_element_eval(elem, w + 1.0, policy), ad(pair.X, f)));
    report.residual_period_tau =
        std::max(report.residual_period_tau,
                 relative_gap(sol_element_eval(elem, w + tau, policy),
                              phi_factor(elem.x - elem.v, w, tau) * ad(pair.Y, f)));
  }
  return report;
}

SquareMatrix res_map(const SolSpaceElement& elem, const PrecisionPolicy& policy) {
  return sol_element_eval(elem, elem.x, policy) /
         theta3_deriv_half_period(elem.params.tau(), policy);
}

SquareMatrix ev_map(const SolSpaceElement& elem, Complex y, const PrecisionPolicy& policy) {
  const Complex denominator = ev_denominator(elem.x, y, elem.params.tau(), policy);
  return sol_element_eval(elem, y, policy) / denominator;
}

CMatrix res_matrix(const SolutionParams& params, Complex v, Complex x,
                   const PrecisionPolicy& policy) {
  const int n = params.n();
  CMatrix out(n * n, n * n);
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= n; ++l)
      out.col(basis_index(n, k, l)) = vec(res_map(unit_element(params, v, x, k, l), policy));
  return out;
}

CMatrix ev_matrix(const SolutionParams& params, Complex v, Complex x, Complex y,
                  const PrecisionPolicy& policy) {
  const int n = params.n();
  CMatrix out(n * n, n * n);
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= n; ++l)
      out.col(basis_index(n, k, l)) = vec(ev_map(unit_element(params, v, x, k, l), y, policy));
  return out;
}

LinearEndo alpha_endo(const SolutionParams& params, Complex v, Complex x, Complex y,
                      AlphaMethod method, const FaultInjection& faults,
                      const PrecisionPolicy& policy) {
  const int n = params.n();
  const Complex tau = params.tau();
  const HeisenbergPair pair = heisenberg_pair(n, params.d());
  const auto faulty = [&](int k, int l) {
    return faults.negate_term && faults.negate_term->first == k && faults.negate_term->second == l;
  };

  if (method == AlphaMethod::dense) {
    const CMatrix res = res_matrix(params, v, x, policy);
    CMatrix ev = ev_matrix(params, v, x, y, policy);
    const double cond = condition_number(res);
    if (!(cond < kResConditionLimit)) {
      std::ostringstream os;
      os << "alpha_endo: residue map is degenerate at v = " << v << " (condition number " << cond
         << ")";
      throw DegeneracyError(os.str());
    }
    for (int k = 1; k <= n; ++k)
      for (int l = 1; l <= n; ++l)
        if (faulty(k, l)) ev.col(basis_index(n, k, l)) *= -1.0;
    return {n, ev * res.fullPivLu().inverse()};
  }

  // Each f_(k,l) Z_(k,l) spans an eigenline: alpha(Z_(k,l)) = lambda_(k,l) Z_(k,l), and
  // the projection onto that line is Z -> tr(Z^v_(k,l) Z).
  const Complex theta_prime = theta3_deriv_half_period(tau, policy);
  const Complex ev_den = ev_denominator(x, y, tau, policy);
  LinearEndo endo{n, CMatrix::Zero(n * n, n * n)};
  for (int k = 1; k <= n; ++k) {
    for (int l = 1; l <= n; ++l) {
      const LatticePoint p = nearest_lattice_point(v - delta_shift(params, k, l), tau);
      if (p.distance < kPoleThreshold) {
        std::ostringstream os;
        os << "alpha_endo: residue map is degenerate at v = " << v << ": f_(" << k << "," << l
           << ") vanishes at w = x";
        throw DegeneracyError(os.str());
      }
      const Complex res = sol_basis_eval(params, v, x, k, l, x, policy) / theta_prime;
      const Complex ev = sol_basis_eval(params, v, x, k, l, y, policy) / ev_den;
      Complex lambda = ev / res;
      if (faulty(k, l)) lambda = -lambda;
      const CVector zv = vec(z_basis(pair, k, l));
      const CVector dual_row = vec(z_dual(pair, k, l).transpose());
      endo.matrix += lambda * zv * dual_row.transpose();
    }
  }
  return endo;
}

TwoTensor r_from_construction(const SolutionParams& params, Complex v, Complex x, Complex y,
                              AlphaMethod method, const FaultInjection& faults,
                              const PrecisionPolicy& policy) {
  return can_inv(alpha_endo(params, v, x, y, method, faults, policy));
}

// ---------------------------------------------------------------------------

TwoTensor apply_leg_transform(const TwoTensor& t, LegTransform transform) {
  switch (transform) {
    case LegTransform::identity:
      return t;
    case LegTransform::swap:
      return swap_legs(t);
    case LegTransform::transpose:
      return transpose_legs(t);
    case LegTransform::swap_transpose:
      return swap_legs(transpose_legs(t));
  }
  throw ParameterError("apply_leg_transform: unknown transform");
}

std::vector<Identification> candidate_identifications() {
  std::vector<Identification> out;
  for (const LegTransform t : {LegTransform::identity, LegTransform::swap, LegTransform::transpose,
                               LegTransform::swap_transpose}) {
    for (const bool negate_v : {false, true}) {
      for (const bool swap_points : {false, true}) {
        out.push_back({negate_v, swap_points, t});
      }
    }
  }
  return out;
}

std::string to_string(LegTransform transform) {
  switch (transform) {
    case LegTransform::identity:
      return "identity";
    case LegTransform::swap:
      return "swap";
    case LegTransform::transpose:
      return "transpose";
    case LegTransform::swap_transpose:
      return "swap_transpose";
  }
  return "unknown";
}

std::string to_string(const Identification& id) {
  std::ostringstream os;
  os << "v" << (id.negate_v ? "->-v" : "->v") << ", (x,y)->" << (id.swap_points ? "(x2,x1)" : "(x1,x2)")
     << ", legs:" << to_string(id.transform);
  return os.str();
}

TwoTensor identified_closed_form(const EllipticRMatrix& closed, const Identification& id,
                                 Complex v, Complex x, Complex y) {
  const Complex vc = id.negate_v ? -v : v;
  const TwoTensor r = id.swap_points ? closed(vc, y, x) : closed(vc, x, y);
  return apply_leg_transform(r, id.transform);
}

RMatrixFunction construction_function(const SolutionParams& params, const Identification& id,
                                      AlphaMethod method, const FaultInjection& faults) {
  // Every LegTransform is an involution, so the inverse map reuses `id`.
  return [params, id, method, faults](Complex v, Complex x1, Complex x2) {
    const Complex vc = id.negate_v ? -v : v;
    const TwoTensor gamma = id.swap_points ? r_from_construction(params, vc, x2, x1, method, faults)
                                           : r_from_construction(params, vc, x1, x2, method, faults);
    return apply_leg_transform(gamma, id.transform);
  };
}

}  // namespace aybe
