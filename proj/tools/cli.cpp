#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <optional>
#include <ostream>
#include <sstream>

#include "aybe/closed_form.hpp"
#include "aybe/errors.hpp"
#include "aybe/fixtures.hpp"
#include "aybe/geometric_construction.hpp"
#include "aybe/serialization.hpp"
#include "aybe/verifier.hpp"

namespace aybe::cli {
namespace {

struct RunConfig {
  int n = 2;
  int d = 1;
  std::string tau = "0,1";
  std::string v = "0.13,0.07";
  std::string x1 = "0.1,0";
  std::string x2 = "0.32,0";
  std::string u0 = "0.17,0.23";
  std::uint64_t seed = 1;
  int samples = 100;
  std::optional<double> tol;
  std::string format = "json";
  std::string normalization = "raw";
  bool no_timestamp = false;
  std::string fixtures;

  // eval
  std::string route = "closed";
  bool no_identify = false;
  // verify
  std::vector<std::string> which;
  bool all = false;
  // expand
  std::optional<double> radius;
  int circle_samples = 32;
};

Complex parse_complex(const std::string& text, const std::string& flag) {
  std::istringstream in(text);
  double re = 0.0;
  double im = 0.0;
  char sep = 0;
  if (!(in >> re)) throw ParameterError(flag + ": expected re,im but got '" + text + "'");
  if (in >> sep) {
    if (sep != ',' || !(in >> im)) {
      throw ParameterError(flag + ": expected re,im but got '" + text + "'");
    }
  }
  std::string rest;
  if (in >> rest) throw ParameterError(flag + ": trailing characters in '" + text + "'");
  return {re, im};
}

SolutionParams make_params(const RunConfig& cfg) {
  return SolutionParams(cfg.n, cfg.d, parse_complex(cfg.tau, "--tau"));
}

void check_common(const RunConfig& cfg) {
  if (cfg.tol && !(*cfg.tol > 0.0)) throw ParameterError("--tol must be positive");
  if (cfg.samples < 1) throw ParameterError("--samples must be at least 1");
}

// Measured 1/c from the order -1 Laurent coefficient at (x1, x2).
Complex unit_residue_factor(const SolutionParams& params, Complex x1, Complex x2) {
  const LaurentExpansion e =
      laurent_expand(params, x1, x2, default_laurent_radius(params), 32);
  return 1.0 / residue_diagnostic(e).c;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  check_common(cfg);
  const SolutionParams params = make_params(cfg);
  const Complex v = parse_complex(cfg.v, "--v");
  const Complex x1 = parse_complex(cfg.x1, "--x1");
  const Complex x2 = parse_complex(cfg.x2, "--x2");

  TwoTensor t(params.n());
  std::string route = cfg.route;
  if (cfg.route == "closed") {
    t = EllipticRMatrix(params)(v, x1, x2);
  } else if (cfg.no_identify) {
    t = r_from_construction(params, v, x1, x2);
    route = "construction-raw";
  } else {
    t = construction_function(params)(v, x1, x2);
  }
  if (cfg.normalization == "unit-residue") t = unit_residue_factor(params, x1, x2) * t;

  if (cfg.format == "csv") {
    out << to_csv(t);
  } else {
    out << evaluation_json(params, v, x1, x2, t, route) << '\n';
  }
  return kPass;
}

ResidualReport golden_report(const RunConfig& cfg, const SolutionParams& params) {
  const auto records = load_golden(cfg.fixtures);
  ResidualReport report("golden", params, cfg.tol.value_or(1e-12), cfg.seed);
  std::vector<std::pair<std::string, Complex>> worst;
  for (const GoldenRecord& rec : records) {
    const double err = golden_error(evaluate_record(rec), rec.value);
    report.record({err, err}, {{rec.name + "@" + std::to_string(rec.line), rec.value}});
  }
  report.notes.emplace_back("fixtures", cfg.fixtures);
  report.finalize();
  return report;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  check_common(cfg);
  const SolutionParams params = make_params(cfg);
  SampleScheme scheme;
  scheme.seed = cfg.seed;
  scheme.count = cfg.samples;

  std::vector<std::string> which = cfg.which;
  if (cfg.all || which.empty() || std::find(which.begin(), which.end(), "all") != which.end()) {
    which = {"aybe", "skew", "symmetry", "residue", "cybe", "qybe", "theorem-main"};
  }
  const auto tol = [&](double fallback) { return cfg.tol.value_or(fallback); };
  const bool stamp = !cfg.no_timestamp;
  const EllipticRMatrix closed(params);

  std::vector<ResidualReport> reports;
  for (const std::string& name : which) {
    if (name == "aybe") {
      reports.push_back(verify_aybe(closed.as_function(), params, scheme, tol(kAybeTolerance)));
    } else if (name == "skew") {
      reports.push_back(verify_skew(closed.as_function(), params, scheme, tol(kSkewTolerance)));
    } else if (name == "symmetry") {
      for (auto& r : verify_symmetries(params, scheme, tol(kSymmetryTolerance))) {
        reports.push_back(std::move(r));
      }
    } else if (name == "residue") {
      reports.push_back(verify_residue(params, scheme, tol(kResidueTolerance)));
    } else if (name == "cybe") {
      ResidualReport r = verify_cybe(params, scheme, tol(kCybeTolerance));
      if (r.pass) {
        r.notes.emplace_back("selected", r.metric("selected_order") == 0.0 ? "r0" : "r1");
      }
      reports.push_back(std::move(r));
    } else if (name == "qybe") {
      reports.push_back(
          verify_qybe(params, scheme, parse_complex(cfg.u0, "--u0"), tol(kQybeTolerance)));
    } else if (name == "theorem-main") {
      TheoremCheckOptions options;
      options.tolerance = tol(kTheoremTolerance);
      reports.push_back(theorem_main_check(params, scheme, options));
    } else {
      throw ParameterError("--which: unknown identity '" + name + "'");
    }
  }
  if (!cfg.fixtures.empty()) reports.push_back(golden_report(cfg, params));

  bool all_pass = true;
  for (const ResidualReport& r : reports) {
    out << to_json(r, stamp) << '\n';
    all_pass = all_pass && r.pass;
  }
  return all_pass ? kPass : kFail;
}

int cmd_expand(const RunConfig& cfg, std::ostream& out) {
  check_common(cfg);
  const SolutionParams params = make_params(cfg);
  const Complex x1 = parse_complex(cfg.x1, "--x1");
  const Complex x2 = parse_complex(cfg.x2, "--x2");
  const double radius = cfg.radius.value_or(default_laurent_radius(params));
  LaurentExpansion e = laurent_expand(params, x1, x2, radius, cfg.circle_samples);
  if (cfg.normalization == "unit-residue") {
    const Complex factor = 1.0 / residue_diagnostic(e).c;
    for (auto& [order, t] : e.coefficients) t = factor * t;
  }
  if (cfg.format == "csv") {
    out << to_csv(e);
  } else {
    out << to_json(e) << '\n';
  }
  return kPass;
}

void add_common(CLI::App* app, RunConfig& cfg) {
  app->add_option("--n", cfg.n, "matrix size n");
  app->add_option("--d", cfg.d, "degree d, coprime to n");
  app->add_option("--tau", cfg.tau, "modular parameter as re,im");
  app->add_option("--seed", cfg.seed, "sampling seed");
  app->add_option("--tol", cfg.tol, "tolerance override");
  app->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--normalization", cfg.normalization, "raw or unit-residue")
      ->check(CLI::IsMember({"raw", "unit-residue"}));
  app->add_flag("--no-timestamp", cfg.no_timestamp, "omit the timestamp field");
  app->add_option("--fixtures", cfg.fixtures, "golden-value file");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Elliptic solutions of the associative Yang-Baxter equation", "aybe"};
  app.require_subcommand(1);
  RunConfig cfg;

  CLI::App* eval = app.add_subcommand("eval", "evaluate r(v; x1, x2)");
  add_common(eval, cfg);
  eval->add_option("--v", cfg.v, "spectral parameter v as re,im");
  eval->add_option("--x1", cfg.x1, "point x1 as re,im");
  eval->add_option("--x2", cfg.x2, "point x2 as re,im");
  eval->add_option("--route", cfg.route, "closed or construction")
      ->check(CLI::IsMember({"closed", "construction"}));
  eval->add_flag("--no-identify", cfg.no_identify,
                 "with --route construction: print the raw constructed tensor");

  CLI::App* verify = app.add_subcommand("verify", "run identity checks");
  add_common(verify, cfg);
  verify->add_option("--which", cfg.which, "aybe, skew, symmetry, residue, cybe, qybe, theorem-main, all")
      ->delimiter(',');
  verify->add_flag("--all", cfg.all, "same as --which all");
  verify->add_option("--samples", cfg.samples, "sample points per identity");
  verify->add_option("--u0", cfg.u0, "base point for the quantum check as re,im");

  CLI::App* expand = app.add_subcommand("expand", "Laurent coefficients at v = 0");
  add_common(expand, cfg);
  expand->add_option("--x1", cfg.x1, "point x1 as re,im");
  expand->add_option("--x2", cfg.x2, "point x2 as re,im");
  expand->add_option("--radius", cfg.radius, "sampling circle radius");
  expand->add_option("--samples", cfg.circle_samples, "points on the circle");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParamError;
  }

  try {
    if (eval->parsed()) return cmd_eval(cfg, out);
    if (verify->parsed()) return cmd_verify(cfg, out);
    return cmd_expand(cfg, out);
  } catch (const PoleError& e) {
    err << "pole error: " << e.what() << '\n';
    return kPoleError;
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kParamError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kFail;
  }
}

}  // namespace aybe::cli
