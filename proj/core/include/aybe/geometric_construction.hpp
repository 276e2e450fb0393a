#pragma once

// The residue/evaluation construction of the elliptic r-matrix.
//
// Sol((n,d), v, x) is the space of entire F: C -> Mat_n(C) with
//
//   F(w + 1)   = Ad_X(F(w))
//   F(w + tau) = phi_{x-v}(w) Ad_Y(F(w)),   phi_x(w) = -exp(-2 pi i (w + tau - x)).
//
// It has the basis f_(k,l)(w) Z_(k,l) with
//
//   f_(k,l)(w) = exp(-2 pi i d k w / n) theta_3(w + (1+tau)/2 + v - x - (d/n)(k tau - l)).
//
// With X and Y as in tensor_algebra.hpp, Ad_X(Z_(k,l)) = eps^{-k} Z_(k,l) and
// Ad_Y(Z_(k,l)) = eps^{-l} Z_(k,l), so f_(k,l)(w+1) = eps^{-k} f_(k,l)(w) and
// f_(k,l)(w+tau) = eps^{-l} phi_{x-v}(w) f_(k,l)(w).
//
// res_x(F) = F(x) / theta_3'((1+tau)/2) and ev_y(F) = F(y) / theta_3(y - x + (1+tau)/2);
// alpha = ev o res^{-1} is an endomorphism of Mat_n(C), and the r-matrix is
// can^{-1}(alpha).

#include <span>
#include <string>
#include <vector>

#include "aybe/closed_form.hpp"

namespace aybe {

struct SolSpaceElement {
  SolutionParams params;
  Complex v;
  Complex x;
  /// Coordinates in the f_(k,l) Z_(k,l) basis, indexed by basis_index(n, k, l).
  std::vector<Complex> coeffs;
};

/// Element with a single unit coordinate at (k, l).
SolSpaceElement unit_element(const SolutionParams& params, Complex v, Complex x, int k, int l);

struct FunctionalEqReport {
  /// max_w |F(w+1) - Ad_X F(w)| / |F(w+1)|
  double residual_period_1 = 0.0;
  /// max_w |F(w+tau) - phi_{x-v}(w) Ad_Y F(w)| / |F(w+tau)|
  double residual_period_tau = 0.0;
  std::vector<Complex> sample_points;
};

Complex phi_factor(Complex x, Complex w, Complex tau);

Complex sol_basis_eval(const SolutionParams& params, Complex v, Complex x, int k, int l, Complex w,
                       const PrecisionPolicy& policy = {});

SquareMatrix sol_element_eval(const SolSpaceElement& elem, Complex w,
                              const PrecisionPolicy& policy = {});

FunctionalEqReport check_functional_equations(const SolSpaceElement& elem,
                                              std::span<const Complex> points,
                                              const PrecisionPolicy& policy = {});

/// F(x) / theta_3'((1+tau)/2).
SquareMatrix res_map(const SolSpaceElement& elem, const PrecisionPolicy& policy = {});

/// F(y) / theta_3(y - x + (1+tau)/2). Throws PoleError when y = x mod lattice.
SquareMatrix ev_map(const SolSpaceElement& elem, Complex y, const PrecisionPolicy& policy = {});

/// Matrices of res and ev in the f-basis: column basis_index(k, l) holds
/// vec(res(f_(k,l) Z_(k,l))), respectively vec(ev(...)).
CMatrix res_matrix(const SolutionParams& params, Complex v, Complex x,
                   const PrecisionPolicy& policy = {});
CMatrix ev_matrix(const SolutionParams& params, Complex v, Complex x, Complex y,
                  const PrecisionPolicy& policy = {});

enum class AlphaMethod {
  /// alpha is diagonal in the Z basis; divide eigenline by eigenline.
  eigenline,
  /// alpha = E R^{-1} from the dense res/ev matrices.
  dense,
};

/// Condition number of the res matrix above which alpha_endo gives up.
inline constexpr double kResConditionLimit = 1e12;

/// The unique endomorphism with alpha o res = ev on Sol((n,d), v, x).
/// Throws DegeneracyError when res is not invertible at v (v - (d/n)(k tau - l)
/// on the lattice for some (k, l)), PoleError when y = x mod lattice.
LinearEndo alpha_endo(const SolutionParams& params, Complex v, Complex x, Complex y,
                      AlphaMethod method = AlphaMethod::eigenline,
                      const FaultInjection& faults = {}, const PrecisionPolicy& policy = {});

/// can^{-1}(alpha_endo(...)).
TwoTensor r_from_construction(const SolutionParams& params, Complex v, Complex x, Complex y,
                              AlphaMethod method = AlphaMethod::eigenline,
                              const FaultInjection& faults = {},
                              const PrecisionPolicy& policy = {});

// ---------------------------------------------------------------------------
// Matching the construction against the closed form

enum class LegTransform { identity, swap, transpose, swap_transpose };

TwoTensor apply_leg_transform(const TwoTensor& t, LegTransform transform);

/// How the construction's (v; x, y) maps onto the closed form's (v; x1, x2):
/// closed-form argument v' = negate_v ? -v : v; (x1, x2) = swap_points ? (y, x) : (x, y);
/// the result is then passed through `transform`.
struct Identification {
  bool negate_v = false;
  bool swap_points = false;
  LegTransform transform = LegTransform::identity;

  friend bool operator==(const Identification&, const Identification&) = default;
};

/// The identification fixed by numerical search: the construction returns
/// the leg-wise transpose of the closed form at the same (v; x, y), with
/// constant 1.
inline constexpr Identification kConstructionIdentification{false, false,
                                                            LegTransform::transpose};

/// All 16 candidates, in the order the search visits them.
std::vector<Identification> candidate_identifications();

std::string to_string(LegTransform transform);
std::string to_string(const Identification& id);

/// Closed form mapped into the construction's frame at (v; x, y).
TwoTensor identified_closed_form(const EllipticRMatrix& closed, const Identification& id,
                                 Complex v, Complex x, Complex y);

/// The construction as an r-matrix function r(v; x1, x2), mapped back into the
/// closed form's frame through the inverse of `id`.
RMatrixFunction construction_function(const SolutionParams& params,
                                      const Identification& id = kConstructionIdentification,
                                      AlphaMethod method = AlphaMethod::eigenline,
                                      const FaultInjection& faults = {});

}  // namespace aybe
