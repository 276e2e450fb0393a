#include "aybe/serialization.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "aybe/errors.hpp"

namespace aybe {
namespace {

using nlohmann::json;

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json entries_json(const TwoTensor& t) {
  json out = json::array();
  for (const Complex& z : t.flat()) out.push_back(complex_json(z));
  return out;
}

json tensor_object(const TwoTensor& t) {
  return {{"schema", kSchemaVersion}, {"n", t.n()}, {"entries", entries_json(t)}};
}

json params_json(const SolutionParams& p) {
  return {{"n", p.n()}, {"d", p.d()}, {"tau", complex_json(p.tau())}};
}

std::string number(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

void csv_rows(std::ostringstream& os, const TwoTensor& t, const std::string& prefix) {
  const int n = t.n();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const Complex z = t(a, b, c, d);
          os << prefix << a + 1 << ',' << b + 1 << ',' << c + 1 << ',' << d + 1 << ','
             << number(z.real()) << ',' << number(z.imag()) << '\n';
        }
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string to_json(const TwoTensor& t) { return tensor_object(t).dump(); }

TwoTensor two_tensor_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string("two_tensor_from_json: ") + e.what());
  }
  try {
    if (j.at("schema").get<int>() != kSchemaVersion) {
      throw ParameterError("two_tensor_from_json: unsupported schema");
    }
    const int n = j.at("n").get<int>();
    const json& entries = j.at("entries");
    if (n < 1 || n > kMaxDimension || entries.size() != static_cast<std::size_t>(n * n * n * n)) {
      throw ParameterError("two_tensor_from_json: entry count does not match n");
    }
    std::vector<Complex> flat;
    flat.reserve(entries.size());
    for (const json& e : entries) {
      if (!e.is_array() || e.size() != 2) {
        throw ParameterError("two_tensor_from_json: entries must be [re, im] pairs");
      }
      flat.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return TwoTensor::from_flat(n, flat);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("two_tensor_from_json: ") + e.what());
  }
}

std::string to_csv(const TwoTensor& t) {
  std::ostringstream os;
  os << "a,b,c,d,re,im\n";
  csv_rows(os, t, "");
  return os.str();
}

std::string to_json(const LaurentExpansion& e) {
  json coeffs = json::object();
  for (const auto& [order, t] : e.coefficients) coeffs[std::to_string(order)] = entries_json(t);
  const int n = e.coefficients.empty() ? 0 : e.coefficients.begin()->second.n();
  json j = {{"schema", kSchemaVersion},
            {"n", n},
            {"x1", complex_json(e.x1)},
            {"x2", complex_json(e.x2)},
            {"circle_radius", e.circle_radius},
            {"sample_count", e.sample_count},
            {"est_error", e.est_error},
            {"coefficients", coeffs}};
  if (e.coefficients.count(-1) != 0) {
    const ResidueDiagnostic diag = residue_diagnostic(e);
    j["residue"] = {{"c", complex_json(diag.c)}, {"off_identity", diag.off_identity}};
  }
  return j.dump();
}

std::string to_csv(const LaurentExpansion& e) {
  std::ostringstream os;
  os << "order,a,b,c,d,re,im\n";
  for (const auto& [order, t] : e.coefficients) csv_rows(os, t, std::to_string(order) + ",");
  return os.str();
}

std::string to_json(const ResidualReport& report, bool with_timestamp) {
  json point = json::object();
  for (const auto& [name, z] : report.worst_point) point[name] = complex_json(z);
  json metrics = json::object();
  for (const auto& [name, value] : report.metrics) metrics[name] = value;
  json notes = json::object();
  for (const auto& [name, value] : report.notes) notes[name] = value;
  json j = {{"schema", kSchemaVersion},
            {"identity", report.identity_name},
            {"params", params_json(report.params)},
            {"max_abs", report.max_abs},
            {"max_rel", report.max_rel},
            {"worst_point", point},
            {"samples_used", report.samples_used},
            {"samples_skipped", report.samples_skipped},
            {"seed", report.seed},
            {"tolerance", report.tolerance},
            {"pass", report.pass}};
  if (!metrics.empty()) j["metrics"] = metrics;
  if (!notes.empty()) j["notes"] = notes;
  if (with_timestamp) j["timestamp"] = utc_now();
  return j.dump();
}

std::string evaluation_json(const SolutionParams& params, Complex v, Complex x1, Complex x2,
                            const TwoTensor& t, const std::string& route) {
  json j = tensor_object(t);
  j["params"] = params_json(params);
  j["route"] = route;
  j["v"] = complex_json(v);
  j["x1"] = complex_json(x1);
  j["x2"] = complex_json(x2);
  return j.dump();
}

}  // namespace aybe
