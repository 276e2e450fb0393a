#include "aybe/fixtures.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "aybe/closed_form.hpp"
#include "aybe/errors.hpp"
#include "aybe/geometric_construction.hpp"

namespace aybe {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, int line) {
  double out = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) {
    throw ParameterError("golden file line " + std::to_string(line) + ": bad number '" + field +
                         "'");
  }
  return out;
}

Complex arg(const GoldenRecord& r, std::size_t i) {
  return {r.inputs.at(i), r.inputs.at(i + 1)};
}

int int_arg(const GoldenRecord& r, std::size_t i) { return static_cast<int>(r.inputs.at(i)); }

void require_inputs(const GoldenRecord& r, std::size_t count) {
  if (r.inputs.size() != count) {
    throw ParameterError("golden record '" + r.name + "' on line " + std::to_string(r.line) +
                         ": expected " + std::to_string(count) + " inputs");
  }
}

}  // namespace

std::vector<GoldenRecord> parse_golden(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::vector<GoldenRecord> out;
  int line = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line;
    if (!header_seen) {
      if (trim(raw) != kGoldenHeader) {
        throw ParameterError("golden file: missing header line");
      }
      header_seen = true;
      continue;
    }
    const std::string content = trim(raw.substr(0, raw.find('#')));
    if (content.empty()) continue;

    std::vector<std::string> fields;
    std::stringstream row(content);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(trim(field));
    if (fields.size() < 3 || fields[0].empty()) {
      throw ParameterError("golden file line " + std::to_string(line) + ": too few fields");
    }
    GoldenRecord rec;
    rec.name = fields[0];
    rec.line = line;
    for (std::size_t i = 1; i + 2 < fields.size(); ++i) {
      rec.inputs.push_back(parse_double(fields[i], line));
    }
    rec.value = {parse_double(fields[fields.size() - 2], line),
                 parse_double(fields.back(), line)};
    out.push_back(std::move(rec));
  }
  if (!header_seen) throw ParameterError("golden file: empty");
  return out;
}

std::vector<GoldenRecord> load_golden(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ParameterError("cannot open golden file " + path);
  std::ostringstream buf;
  buf << file.rdbuf();
  return parse_golden(buf.str());
}

std::vector<GoldenRecord> select(const std::vector<GoldenRecord>& records,
                                 const std::string& name) {
  std::vector<GoldenRecord> out;
  for (const auto& r : records)
    if (r.name == name) out.push_back(r);
  return out;
}

std::complex<double> evaluate_record(const GoldenRecord& r) {
  const std::string& name = r.name;
  if (name == "nome") {
    require_inputs(r, 2);
    return nome(arg(r, 0));
  }
  if (name == "theta1" || name == "theta3") {
    require_inputs(r, 4);
    return name == "theta1" ? theta1(arg(r, 0), arg(r, 2)) : theta3(arg(r, 0), arg(r, 2));
  }
  if (name == "theta1_deriv_zero") {
    require_inputs(r, 2);
    return theta1_deriv_zero(arg(r, 0));
  }
  if (name == "theta3_deriv_half_period") {
    require_inputs(r, 2);
    return theta3_deriv_half_period(arg(r, 0));
  }
  if (name == "theta_shifted") {
    require_inputs(r, 6);
    return theta_shifted(arg(r, 0), arg(r, 2), arg(r, 4));
  }
  if (name == "theta1_multiplier" || name == "theta3_multiplier") {
    require_inputs(r, 4);
    const ThetaKind kind = name == "theta1_multiplier" ? ThetaKind::theta1 : ThetaKind::theta3;
    return reduce_argument(arg(r, 0), arg(r, 2), kind).multiplier;
  }
  if (name == "sigma") {
    require_inputs(r, 6);
    return kronecker_sigma(arg(r, 0), arg(r, 2), arg(r, 4));
  }
  if (name == "r_elliptic") {
    require_inputs(r, 14);
    const SolutionParams params(int_arg(r, 0), int_arg(r, 1), arg(r, 2));
    const TwoTensor t = r_elliptic(params, {arg(r, 4), arg(r, 6), arg(r, 8)});
    return t(int_arg(r, 10), int_arg(r, 11), int_arg(r, 12), int_arg(r, 13));
  }
  if (name == "res_map") {
    require_inputs(r, 12);
    const SolutionParams params(int_arg(r, 0), int_arg(r, 1), arg(r, 2));
    const SquareMatrix m =
        res_map(unit_element(params, arg(r, 4), arg(r, 6), int_arg(r, 8), int_arg(r, 9)));
    return m(int_arg(r, 10), int_arg(r, 11));
  }
  if (name == "ev_map") {
    require_inputs(r, 14);
    const SolutionParams params(int_arg(r, 0), int_arg(r, 1), arg(r, 2));
    const SquareMatrix m = ev_map(
        unit_element(params, arg(r, 4), arg(r, 6), int_arg(r, 10), int_arg(r, 11)), arg(r, 8));
    return m(int_arg(r, 12), int_arg(r, 13));
  }
  if (name == "alpha") {
    require_inputs(r, 12);
    const SolutionParams params(int_arg(r, 0), int_arg(r, 1), arg(r, 2));
    const LinearEndo a = alpha_endo(params, arg(r, 4), arg(r, 6), arg(r, 8));
    return a.matrix(int_arg(r, 10), int_arg(r, 11));
  }
  throw ParameterError("golden record '" + name + "' on line " + std::to_string(r.line) +
                       ": unknown name");
}

double golden_error(std::complex<double> got, std::complex<double> want) {
  const double diff = std::abs(got - want);
  const double scale = std::abs(want);
  return scale < 1e-8 ? diff : diff / scale;
}

}  // namespace aybe
