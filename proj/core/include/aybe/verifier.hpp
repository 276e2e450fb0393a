#pragma once

// Residual checks for the functional identities an elliptic AYBE solution
// satisfies, plus seeded sweeps that turn them into pass/fail reports.
//
// All residuals are Frobenius norms of flattened tensors. Relative residuals
// divide by the largest individual term, never by the (possibly cancelling)
// sum, so rescaling the evaluator by a constant leaves them unchanged.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "aybe/closed_form.hpp"
#include "aybe/geometric_construction.hpp"

namespace aybe {

inline constexpr double kAybeTolerance = 1e-8;
inline constexpr double kTheoremTolerance = 1e-8;
inline constexpr double kSkewTolerance = 1e-10;
inline constexpr double kCybeTolerance = 1e-7;
inline constexpr double kQybeTolerance = 1e-7;
inline constexpr double kSymmetryTolerance = 1e-9;
inline constexpr double kResidueTolerance = 1e-8;

/// Generic base point for the quantum Yang-Baxter check.
inline constexpr Complex kDefaultQybeBasePoint{0.17, 0.23};

/// Axis-aligned rectangle [lo.re, hi.re] x [lo.im, hi.im].
struct Box {
  Complex lo;
  Complex hi;
};

struct SampleScheme {
  std::uint64_t seed = 1;
  int count = 100;
  Box v_box{{-0.5, -0.35}, {0.5, 0.35}};
  Box x_box{{-0.5, -0.35}, {0.5, 0.35}};
  /// Points closer than this to any pole of any evaluation are skipped.
  double min_pole_distance = 0.05;

  /// Throws ParameterError unless count >= 1 and min_pole_distance > 0.
  void validate() const;
};

struct Residual {
  double abs = 0.0;
  double rel = 0.0;
};

struct ResidualReport {
  ResidualReport(std::string identity, SolutionParams params, double tolerance, std::uint64_t seed);

  std::string identity_name;
  SolutionParams params;
  double max_abs = 0.0;
  double max_rel = 0.0;
  /// Named coordinates of the sample attaining max_rel.
  std::vector<std::pair<std::string, Complex>> worst_point;
  int samples_used = 0;
  int samples_skipped = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  bool pass = false;
  /// Extra named numbers (fit constants, selected orders, ...).
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::pair<std::string, std::string>> notes;

  /// Folds one sample into max_abs / max_rel / worst_point.
  void record(const Residual& r, std::vector<std::pair<std::string, Complex>> point);
  /// pass = samples_used > 0 && max_rel < tolerance (plus any extra condition).
  void finalize(bool extra_condition = true);
  double metric(const std::string& name) const;
};

// ---------------------------------------------------------------------------
// Pointwise residuals

/// r(u;x1,x2)^12 r(u+v;x2,x3)^23 - r(u+v;x1,x3)^13 r(-v;x1,x2)^12 - r(v;x2,x3)^23 r(u;x1,x3)^13.
Residual aybe_residual(const RMatrixFunction& r, Complex u, Complex v, Complex x1, Complex x2,
                       Complex x3);

/// r(v;x1,x2) + r^21(-v;x2,x1), relative to |r(v;x1,x2)|.
Residual skew_residual(const RMatrixFunction& r, Complex v, Complex x1, Complex x2);

struct Nondegeneracy {
  double condition_number = 0.0;
  double det_modulus = 0.0;
};
/// Conditioning of can(t) as an n^2 x n^2 matrix.
Nondegeneracy nondegeneracy(const TwoTensor& t);

using TwoPointFunction = std::function<TwoTensor(Complex x1, Complex x2)>;

/// [r12, r13] + [r13, r23] + [r12, r23] with r_ij = rbar(x_i, x_j) embedded in legs ij.
Residual cybe_residual(const TwoPointFunction& rbar, Complex x1, Complex x2, Complex x3);

/// R12 R13 R23 - R23 R13 R12 with R_ij = R(x_i, x_j).
Residual qybe_residual(const TwoPointFunction& R, Complex x1, Complex x2, Complex x3);

// ---------------------------------------------------------------------------
// Sweeps

/// r perturbed entrywise by amplitude * max|entry| * (uniform point in the unit square).
RMatrixFunction add_noise(RMatrixFunction r, double amplitude, std::uint64_t seed);

ResidualReport verify_aybe(const RMatrixFunction& r, const SolutionParams& params,
                           const SampleScheme& scheme, double tolerance = kAybeTolerance,
                           std::string name = "aybe");

ResidualReport verify_skew(const RMatrixFunction& r, const SolutionParams& params,
                           const SampleScheme& scheme, double tolerance = kSkewTolerance,
                           std::string name = "skew");

/// Conditioning of can(r) over the sample. metrics: max_condition_number,
/// min_det_modulus. Passes when every sample is finitely conditioned.
ResidualReport verify_nondegeneracy(const SolutionParams& params, const SampleScheme& scheme);

/// r(v+1) = r(v), r(v+tau) = exp(-2 pi i (x2-x1)) r(v), (Ad_X (x) Ad_X) r = r,
/// (Ad_Y (x) Ad_Y) r = r: one report each.
std::vector<ResidualReport> verify_symmetries(const SolutionParams& params,
                                              const SampleScheme& scheme,
                                              double tolerance = kSymmetryTolerance);

/// Order -1 Laurent coefficient: proportional to 1 (x) 1, constant in (x1, x2).
/// metrics: c_re, c_im, off_identity_rel, c_spread, matches_inverse_n, matches_one.
ResidualReport verify_residue(const SolutionParams& params, const SampleScheme& scheme,
                              double tolerance = kResidueTolerance);

using LaurentProvider = std::function<LaurentExpansion(Complex x1, Complex x2)>;

struct CybeSelection {
  int selected_order = 0;
  double residual_r0 = 0.0;
  double residual_r1 = 0.0;
  int samples_used = 0;
};

/// CYBE residuals of (pi (x) pi) r_0 and (pi (x) pi) r_1 over the sample.
/// Throws SelectionError unless exactly one of them stays below tolerance.
CybeSelection cybe_source_select(const SolutionParams& params, const SampleScheme& scheme,
                                 double tolerance = kCybeTolerance);
CybeSelection cybe_source_select(const SolutionParams& params, const LaurentProvider& laurent,
                                 const SampleScheme& scheme, double tolerance = kCybeTolerance);

/// cybe_source_select packaged as a report for the selected order.
ResidualReport verify_cybe(const SolutionParams& params, const SampleScheme& scheme,
                           double tolerance = kCybeTolerance);

ResidualReport verify_qybe(const SolutionParams& params, const SampleScheme& scheme,
                           Complex base_point = kDefaultQybeBasePoint,
                           double tolerance = kQybeTolerance);

struct TheoremCheckOptions {
  Identification identification = kConstructionIdentification;
  AlphaMethod method = AlphaMethod::eigenline;
  FaultInjection construction_faults;
  /// Relative noise added to the closed-form route (0 = none).
  double closed_noise = 0.0;
  double tolerance = kTheoremTolerance;
};

/// Fits one complex constant c with construction ~ c * closed form (least
/// squares over the sample). max_rel is the worst post-fit deviation;
/// metrics: c_re, c_im, c_spread. Passes when both deviation and spread are
/// below tolerance. Throws DegeneracyError if the fit is ill-conditioned.
ResidualReport theorem_main_check(const SolutionParams& params, const SampleScheme& scheme,
                                  const TheoremCheckOptions& options = {});

struct IdentificationCandidate {
  Identification identification;
  double deviation = 0.0;
  Complex fit_constant;
};

/// Runs the theorem check for every candidate identification. The result is
/// in search order; `best` is the first candidate with deviation below tolerance.
struct IdentificationSearch {
  std::vector<IdentificationCandidate> candidates;
  std::optional<Identification> best;
};
IdentificationSearch identify_construction(const SolutionParams& params,
                                           const SampleScheme& scheme,
                                           double tolerance = kTheoremTolerance);

}  // namespace aybe
