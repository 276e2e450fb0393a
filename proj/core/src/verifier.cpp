#include "aybe/verifier.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>

#include "aybe/errors.hpp"

namespace aybe {
namespace {

using NamedPoint = std::vector<std::pair<std::string, Complex>>;

class Sampler {
public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  Complex draw(const Box& box) {
    std::uniform_real_distribution<double> re(box.lo.real(), box.hi.real());
    std::uniform_real_distribution<double> im(box.lo.imag(), box.hi.imag());
    const double a = re(rng_);
    const double b = im(rng_);
    return {a, b};
  }

private:
  std::mt19937_64 rng_;
};

double max_of(std::initializer_list<double> values) { return std::max(values); }

Residual make_residual(double abs, double scale) {
  return {abs, scale == 0.0 ? 0.0 : abs / scale};
}

bool lattice_clear(Complex z, Complex tau, double min_distance) {
  return nearest_lattice_point(z, tau).distance >= min_distance;
}

// Draws until `count` samples are accepted or the attempt budget runs out.
// `draw` returns nullopt for points too close to a pole; `eval` may still throw
// PoleError / DegeneracyError, which also counts as a skip.
template <class Draw, class Eval>
void sweep(ResidualReport& report, const SampleScheme& scheme, Draw&& draw, Eval&& eval) {
  const long budget = 50L * scheme.count;
  for (long attempt = 0; attempt < budget && report.samples_used < scheme.count; ++attempt) {
    std::optional<NamedPoint> point = draw();
    if (!point) {
      ++report.samples_skipped;
      continue;
    }
    try {
      const Residual r = eval(*point);
      report.record(r, std::move(*point));
    } catch (const PoleError&) {
      ++report.samples_skipped;
    } catch (const DegeneracyError&) {
      ++report.samples_skipped;
    }
  }
}

Residual cybe_from_tensors(const TwoTensor& r12, const TwoTensor& r13, const TwoTensor& r23) {
  const ThreeTensor a = embed(r12, Slots::s12);
  const ThreeTensor b = embed(r13, Slots::s13);
  const ThreeTensor c = embed(r23, Slots::s23);
  const ThreeTensor t1 = commutator(a, b);
  const ThreeTensor t2 = commutator(b, c);
  const ThreeTensor t3 = commutator(a, c);
  return make_residual((t1 + t2 + t3).norm(), max_of({t1.norm(), t2.norm(), t3.norm()}));
}

Complex frobenius_inner(const TwoTensor& a, const TwoTensor& b) {
  return (a.op().conjugate().array() * b.op().array()).sum();
}

// Three points with pairwise differences clear of the lattice.
std::optional<NamedPoint> draw_three_points(Sampler& sampler, const SampleScheme& scheme,
                                            Complex tau) {
  const Complex x1 = sampler.draw(scheme.x_box);
  const Complex x2 = sampler.draw(scheme.x_box);
  const Complex x3 = sampler.draw(scheme.x_box);
  if (!lattice_clear(x2 - x1, tau, scheme.min_pole_distance) ||
      !lattice_clear(x3 - x1, tau, scheme.min_pole_distance) ||
      !lattice_clear(x3 - x2, tau, scheme.min_pole_distance)) {
    return std::nullopt;
  }
  return NamedPoint{{"x1", x1}, {"x2", x2}, {"x3", x3}};
}

}  // namespace

void SampleScheme::validate() const {
  if (count < 1) throw ParameterError("SampleScheme: count must be at least 1");
  if (!(min_pole_distance > 0.0)) {
    throw ParameterError("SampleScheme: min_pole_distance must be positive");
  }
}

ResidualReport::ResidualReport(std::string identity, SolutionParams params_, double tolerance_,
                               std::uint64_t seed_)
    : identity_name(std::move(identity)), params(params_), seed(seed_), tolerance(tolerance_) {}

void ResidualReport::record(const Residual& r, std::vector<std::pair<std::string, Complex>> point) {
  ++samples_used;
  max_abs = std::max(max_abs, r.abs);
  // NaN must never look like a pass.
  if (std::isnan(r.rel)) {
    max_rel = std::numeric_limits<double>::infinity();
    worst_point = std::move(point);
  } else if (r.rel > max_rel || worst_point.empty()) {
    max_rel = std::max(max_rel, r.rel);
    worst_point = std::move(point);
  }
}

void ResidualReport::finalize(bool extra_condition) {
  pass = samples_used > 0 && max_rel < tolerance && extra_condition;
}

double ResidualReport::metric(const std::string& name) const {
  for (const auto& [key, value] : metrics) {
    if (key == name) return value;
  }
  throw ParameterError("ResidualReport: no metric named " + name);
}

// ---------------------------------------------------------------------------

Residual aybe_residual(const RMatrixFunction& r, Complex u, Complex v, Complex x1, Complex x2,
                       Complex x3) {
  const ThreeTensor lhs =
      three_mul(embed(r(u, x1, x2), Slots::s12), embed(r(u + v, x2, x3), Slots::s23));
  const ThreeTensor rhs1 =
      three_mul(embed(r(u + v, x1, x3), Slots::s13), embed(r(-v, x1, x2), Slots::s12));
  const ThreeTensor rhs2 =
      three_mul(embed(r(v, x2, x3), Slots::s23), embed(r(u, x1, x3), Slots::s13));
  return make_residual((lhs - rhs1 - rhs2).norm(), max_of({lhs.norm(), rhs1.norm(), rhs2.norm()}));
}

Residual skew_residual(const RMatrixFunction& r, Complex v, Complex x1, Complex x2) {
  const TwoTensor forward = r(v, x1, x2);
  const TwoTensor backward = swap_legs(r(-v, x2, x1));
  return make_residual((forward + backward).norm(), forward.norm());
}

Nondegeneracy nondegeneracy(const TwoTensor& t) {
  const LinearEndo endo = can(t);
  return {condition_number(endo.matrix), std::abs(endo.matrix.fullPivLu().determinant())};
}

Residual cybe_residual(const TwoPointFunction& rbar, Complex x1, Complex x2, Complex x3) {
  return cybe_from_tensors(rbar(x1, x2), rbar(x1, x3), rbar(x2, x3));
}

Residual qybe_residual(const TwoPointFunction& R, Complex x1, Complex x2, Complex x3) {
  const ThreeTensor r12 = embed(R(x1, x2), Slots::s12);
  const ThreeTensor r13 = embed(R(x1, x3), Slots::s13);
  const ThreeTensor r23 = embed(R(x2, x3), Slots::s23);
  const ThreeTensor lhs = three_mul(three_mul(r12, r13), r23);
  const ThreeTensor rhs = three_mul(three_mul(r23, r13), r12);
  return make_residual((lhs - rhs).norm(), std::max(lhs.norm(), rhs.norm()));
}

// ---------------------------------------------------------------------------

RMatrixFunction add_noise(RMatrixFunction r, double amplitude, std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [r = std::move(r), amplitude, rng](Complex v, Complex x1, Complex x2) {
    TwoTensor t = r(v, x1, x2);
    const double scale = amplitude * t.op().cwiseAbs().maxCoeff();
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    CMatrix op = t.op();
    for (Eigen::Index j = 0; j < op.cols(); ++j) {
      for (Eigen::Index i = 0; i < op.rows(); ++i) {
        const double a = unit(*rng);
        const double b = unit(*rng);
        op(i, j) += scale * Complex{a, b};
      }
    }
    return TwoTensor::from_operator(std::move(op));
  };
}

ResidualReport verify_aybe(const RMatrixFunction& r, const SolutionParams& params,
                           const SampleScheme& scheme, double tolerance, std::string name) {
  scheme.validate();
  const EllipticRMatrix closed(params);
  Sampler sampler(scheme.seed);
  ResidualReport report(std::move(name), params, tolerance, scheme.seed);
  const double gap = scheme.min_pole_distance;

  sweep(
      report, scheme,
      [&]() -> std::optional<NamedPoint> {
        const Complex u = sampler.draw(scheme.v_box);
        const Complex v = sampler.draw(scheme.v_box);
        const Complex x1 = sampler.draw(scheme.x_box);
        const Complex x2 = sampler.draw(scheme.x_box);
        const Complex x3 = sampler.draw(scheme.x_box);
        const double d = std::min({closed.pole_distance(u, x1, x2), closed.pole_distance(u + v, x2, x3),
                                   closed.pole_distance(u + v, x1, x3), closed.pole_distance(-v, x1, x2),
                                   closed.pole_distance(v, x2, x3), closed.pole_distance(u, x1, x3)});
        if (d < gap) return std::nullopt;
        return NamedPoint{{"u", u}, {"v", v}, {"x1", x1}, {"x2", x2}, {"x3", x3}};
      },
      [&](const NamedPoint& p) {
        return aybe_residual(r, p[0].second, p[1].second, p[2].second, p[3].second, p[4].second);
      });
  report.finalize();
  return report;
}

ResidualReport verify_skew(const RMatrixFunction& r, const SolutionParams& params,
                           const SampleScheme& scheme, double tolerance, std::string name) {
  scheme.validate();
  const EllipticRMatrix closed(params);
  Sampler sampler(scheme.seed);
  ResidualReport report(std::move(name), params, tolerance, scheme.seed);

  sweep(
      report, scheme,
      [&]() -> std::optional<NamedPoint> {
        const Complex v = sampler.draw(scheme.v_box);
        const Complex x1 = sampler.draw(scheme.x_box);
        const Complex x2 = sampler.draw(scheme.x_box);
        if (std::min(closed.pole_distance(v, x1, x2), closed.pole_distance(-v, x2, x1)) <
            scheme.min_pole_distance) {
          return std::nullopt;
        }
        return NamedPoint{{"v", v}, {"x1", x1}, {"x2", x2}};
      },
      [&](const NamedPoint& p) { return skew_residual(r, p[0].second, p[1].second, p[2].second); });
  report.finalize();
  return report;
}

ResidualReport verify_nondegeneracy(const SolutionParams& params, const SampleScheme& scheme) {
  scheme.validate();
  const EllipticRMatrix closed(params);
  Sampler sampler(scheme.seed);
  ResidualReport report("nondegeneracy", params, std::numeric_limits<double>::infinity(),
                        scheme.seed);
  double worst_condition = 0.0;
  double smallest_det = std::numeric_limits<double>::infinity();

  sweep(
      report, scheme,
      [&]() -> std::optional<NamedPoint> {
        const Complex v = sampler.draw(scheme.v_box);
        const Complex x1 = sampler.draw(scheme.x_box);
        const Complex x2 = sampler.draw(scheme.x_box);
        if (closed.pole_distance(v, x1, x2) < scheme.min_pole_distance) return std::nullopt;
        return NamedPoint{{"v", v}, {"x1", x1}, {"x2", x2}};
      },
      [&](const NamedPoint& p) {
        const Nondegeneracy nd = nondegeneracy(closed(p[0].second, p[1].second, p[2].second));
        worst_condition = std::max(worst_condition, nd.condition_number);
        smallest_det = std::min(smallest_det, nd.det_modulus);
        return Residual{0.0, 0.0};
      });
  report.metrics = {{"max_condition_number", worst_condition}, {"min_det_modulus", smallest_det}};
  report.finalize(std::isfinite(worst_condition) && smallest_det > 0.0);
  return report;
}

std::vector<ResidualReport> verify_symmetries(const SolutionParams& params,
                                              const SampleScheme& scheme, double tolerance) {
  scheme.validate();
  const EllipticRMatrix closed(params);
  const HeisenbergPair& pair = closed.pair();
  const Complex tau = params.tau();
  const CMatrix conj_x = Eigen::kroneckerProduct(pair.X, pair.X).eval();
  const CMatrix conj_y = Eigen::kroneckerProduct(pair.Y, pair.Y).eval();
  const CMatrix conj_x_inv = conj_x.inverse();
  const CMatrix conj_y_inv = conj_y.inverse();

  std::vector<ResidualReport> reports;
  for (const char* name : {"periodicity_1", "periodicity_tau", "equivariance_X", "equivariance_Y"}) {
    reports.emplace_back(name, params, tolerance, scheme.seed);
  }

  Sampler sampler(scheme.seed);
  const long budget = 50L * scheme.count;
  int used = 0;
  for (long attempt = 0; attempt < budget && used < scheme.count; ++attempt) {
    const Complex v = sampler.draw(scheme.v_box);
    const Complex x1 = sampler.draw(scheme.x_box);
    const Complex x2 = sampler.draw(scheme.x_box);
    if (closed.pole_distance(v, x1, x2) < scheme.min_pole_distance) {
      for (auto& r : reports) ++r.samples_skipped;
      continue;
    }
    ++used;
    const NamedPoint point{{"v", v}, {"x1", x1}, {"x2", x2}};
    const TwoTensor base = closed(v, x1, x2);
    const double scale = base.norm();
    const TwoTensor shifted_1 = closed(v + 1.0, x1, x2);
    const TwoTensor shifted_tau = closed(v + tau, x1, x2);
    const Complex multiplier = std::exp(-2.0 * kI * kPi * (x2 - x1));
    const CMatrix ax = conj_x * base.op() * conj_x_inv;
    const CMatrix ay = conj_y * base.op() * conj_y_inv;
    reports[0].record(make_residual((shifted_1 - base).norm(), scale), point);
    reports[1].record(make_residual((shifted_tau - multiplier * base).norm(), scale), point);
    reports[2].record(make_residual((ax - base.op()).norm(), scale), point);
    reports[3].record(make_residual((ay - base.op()).norm(), scale), point);
  }
  for (auto& r : reports) r.finalize();
  return reports;
}

ResidualReport verify_residue(const SolutionParams& params, const SampleScheme& scheme,
                              double tolerance) {
  scheme.validate();
  const double radius = default_laurent_radius(params);
  Sampler sampler(scheme.seed);
  ResidualReport report("residue", params, tolerance, scheme.seed);
  std::optional<Complex> reference;
  double worst_off = 0.0;
  double worst_spread = 0.0;

  sweep(
      report, scheme,
      [&]() -> std::optional<NamedPoint> {
        const Complex x1 = sampler.draw(scheme.x_box);
        const Complex x2 = sampler.draw(scheme.x_box);
        if (!lattice_clear(x2 - x1, params.tau(), scheme.min_pole_distance)) return std::nullopt;
        return NamedPoint{{"x1", x1}, {"x2", x2}};
      },
      [&](const NamedPoint& p) {
        const LaurentExpansion e = laurent_expand(params, p[0].second, p[1].second, radius, 32);
        const ResidueDiagnostic diag = residue_diagnostic(e);
        if (!reference) reference = diag.c;
        const double off = diag.off_identity / std::abs(diag.c);
        const double spread = std::abs(diag.c - *reference) / std::abs(*reference);
        worst_off = std::max(worst_off, off);
        worst_spread = std::max(worst_spread, spread);
        return Residual{std::max(diag.off_identity, std::abs(diag.c - *reference)),
                        std::max(off, spread)};
      });

  const Complex c = reference.value_or(Complex{});
  const double inv_n = 1.0 / static_cast<double>(params.n());
  const bool is_inverse_n = std::abs(c - inv_n) < tolerance;
  const bool is_one = std::abs(c - 1.0) < tolerance;
  report.metrics = {{"c_re", c.real()},
                    {"c_im", c.imag()},
                    {"off_identity_rel", worst_off},
                    {"c_spread", worst_spread},
                    {"matches_inverse_n", is_inverse_n ? 1.0 : 0.0},
                    {"matches_one", is_one ? 1.0 : 0.0}};
  report.notes.emplace_back("normalization", is_inverse_n ? "1/n" : (is_one ? "1" : "neither"));
  report.finalize();
  return report;
}

CybeSelection cybe_source_select(const SolutionParams& params, const SampleScheme& scheme,
                                 double tolerance) {
  const double radius = default_laurent_radius(params);
  return cybe_source_select(
      params,
      [&params, radius](Complex x1, Complex x2) {
        return laurent_expand(params, x1, x2, radius, 32);
      },
      scheme, tolerance);
}

CybeSelection cybe_source_select(const SolutionParams& params, const LaurentProvider& laurent,
                                 const SampleScheme& scheme, double tolerance) {
  scheme.validate();
  Sampler sampler(scheme.seed);
  CybeSelection out;
  const long budget = 50L * scheme.count;
  for (long attempt = 0; attempt < budget && out.samples_used < scheme.count; ++attempt) {
    const auto point = draw_three_points(sampler, scheme, params.tau());
    if (!point) continue;
    const Complex x1 = (*point)[0].second;
    const Complex x2 = (*point)[1].second;
    const Complex x3 = (*point)[2].second;
    const LaurentExpansion e12 = laurent(x1, x2);
    const LaurentExpansion e13 = laurent(x1, x3);
    const LaurentExpansion e23 = laurent(x2, x3);
    const auto residual_for = [&](int order) {
      return cybe_from_tensors(sl_project(e12.coefficients.at(order)),
                               sl_project(e13.coefficients.at(order)),
                               sl_project(e23.coefficients.at(order)))
          .rel;
    };
    out.residual_r0 = std::max(out.residual_r0, residual_for(0));
    out.residual_r1 = std::max(out.residual_r1, residual_for(1));
    ++out.samples_used;
  }
  const bool pass0 = out.samples_used > 0 && out.residual_r0 < tolerance;
  const bool pass1 = out.samples_used > 0 && out.residual_r1 < tolerance;
  if (pass0 == pass1) {
    std::ostringstream os;
    os << "cybe_source_select: expected exactly one passing Laurent order, got r0 residual "
       << out.residual_r0 << " and r1 residual " << out.residual_r1 << " at tolerance "
       << tolerance;
    throw SelectionError(os.str());
  }
  out.selected_order = pass0 ? 0 : 1;
  return out;
}

ResidualReport verify_cybe(const SolutionParams& params, const SampleScheme& scheme,
                           double tolerance) {
  ResidualReport report("cybe", params, tolerance, scheme.seed);
  try {
    const CybeSelection sel = cybe_source_select(params, scheme, tolerance);
    report.samples_used = sel.samples_used;
    report.max_rel = sel.selected_order == 0 ? sel.residual_r0 : sel.residual_r1;
    report.max_abs = report.max_rel;
    report.metrics = {{"selected_order", static_cast<double>(sel.selected_order)},
                      {"residual_r0", sel.residual_r0},
                      {"residual_r1", sel.residual_r1}};
    report.finalize();
  } catch (const SelectionError& e) {
    report.notes.emplace_back("error", e.what());
    report.max_rel = std::numeric_limits<double>::infinity();
    report.pass = false;
  }
  return report;
}

ResidualReport verify_qybe(const SolutionParams& params, const SampleScheme& scheme,
                           Complex base_point, double tolerance) {
  scheme.validate();
  const EllipticRMatrix closed(params);
  if (closed.v_pole_distance(base_point) < scheme.min_pole_distance) {
    std::ostringstream os;
    os << "verify_qybe: base point " << base_point << " is too close to the pole set";
    throw ParameterError(os.str());
  }
  Sampler sampler(scheme.seed);
  ResidualReport report("qybe", params, tolerance, scheme.seed);
  const TwoPointFunction R = [&closed, base_point](Complex a, Complex b) {
    return closed(base_point, a, b);
  };
  sweep(
      report, scheme, [&]() { return draw_three_points(sampler, scheme, params.tau()); },
      [&](const NamedPoint& p) { return qybe_residual(R, p[0].second, p[1].second, p[2].second); });
  report.notes.emplace_back("base_point", [&] {
    std::ostringstream os;
    os << base_point.real() << "," << base_point.imag();
    return os.str();
  }());
  report.finalize();
  return report;
}

ResidualReport theorem_main_check(const SolutionParams& params, const SampleScheme& scheme,
                                  const TheoremCheckOptions& options) {
  scheme.validate();
  const EllipticRMatrix closed(params);
  const Complex tau = params.tau();
  const Identification& id = options.identification;
  RMatrixFunction closed_fn = closed.as_function();
  if (options.closed_noise > 0.0) closed_fn = add_noise(closed_fn, options.closed_noise, scheme.seed);

  Sampler sampler(scheme.seed);
  ResidualReport report("theorem-main", params, options.tolerance, scheme.seed);
  std::vector<std::pair<TwoTensor, TwoTensor>> pairs;  // (closed, construction)
  std::vector<NamedPoint> points;

  const double ratio = static_cast<double>(params.d()) / static_cast<double>(params.n());
  const auto degenerate_distance = [&](Complex v) {
    double best = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= params.n(); ++k)
      for (int l = 1; l <= params.n(); ++l) {
        const Complex delta = ratio * (static_cast<double>(k) * tau - static_cast<double>(l));
        best = std::min(best, nearest_lattice_point(v - delta, tau).distance);
      }
    return best;
  };

  const long budget = 50L * scheme.count;
  for (long attempt = 0; attempt < budget && static_cast<int>(pairs.size()) < scheme.count;
       ++attempt) {
    const Complex v = sampler.draw(scheme.v_box);
    const Complex x = sampler.draw(scheme.x_box);
    const Complex y = sampler.draw(scheme.x_box);
    const Complex vc = id.negate_v ? -v : v;
    if (std::min(closed.pole_distance(vc, x, y), degenerate_distance(v)) <
        scheme.min_pole_distance) {
      ++report.samples_skipped;
      continue;
    }
    try {
      const TwoTensor r = id.swap_points ? closed_fn(vc, y, x) : closed_fn(vc, x, y);
      TwoTensor rho = apply_leg_transform(r, id.transform);
      TwoTensor gamma =
          r_from_construction(params, v, x, y, options.method, options.construction_faults);
      pairs.emplace_back(std::move(rho), std::move(gamma));
      points.push_back({{"v", v}, {"x", x}, {"y", y}});
    } catch (const PoleError&) {
      ++report.samples_skipped;
    } catch (const DegeneracyError&) {
      ++report.samples_skipped;
    }
  }

  Complex numerator{0.0, 0.0};
  double denominator = 0.0;
  for (const auto& [rho, gamma] : pairs) {
    numerator += frobenius_inner(rho, gamma);
    denominator += rho.op().squaredNorm();
  }
  if (pairs.empty() || !(denominator > 1e-300)) {
    throw DegeneracyError("theorem_main_check: least-squares fit is ill-conditioned");
  }
  const Complex c = numerator / denominator;
  if (std::abs(c) == 0.0) {
    throw DegeneracyError("theorem_main_check: fitted constant vanishes");
  }

  double spread = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [rho, gamma] = pairs[i];
    const Complex local = frobenius_inner(rho, gamma) / rho.op().squaredNorm();
    spread = std::max(spread, std::abs(local - c) / std::abs(c));
    const double scale = std::max(gamma.norm(), std::abs(c) * rho.norm());
    report.record(make_residual((gamma - c * rho).norm(), scale), points[i]);
  }
  report.metrics = {{"c_re", c.real()}, {"c_im", c.imag()}, {"c_spread", spread}};
  report.notes.emplace_back("identification", to_string(id));
  report.finalize(spread < options.tolerance);
  return report;
}

IdentificationSearch identify_construction(const SolutionParams& params,
                                           const SampleScheme& scheme, double tolerance) {
  IdentificationSearch search;
  for (const Identification& id : candidate_identifications()) {
    TheoremCheckOptions options;
    options.identification = id;
    options.tolerance = tolerance;
    const ResidualReport report = theorem_main_check(params, scheme, options);
    const double deviation = std::max(report.max_rel, report.metric("c_spread"));
    search.candidates.push_back(
        {id, deviation, Complex{report.metric("c_re"), report.metric("c_im")}});
    if (!search.best && deviation < tolerance) search.best = id;
  }
  return search;
}

}  // namespace aybe
