#pragma once

// Reader for golden-value files: one record per line,
//   name, input1, ..., inputK, re, im
// '#' starts a comment. Inputs are real numbers; names may repeat.

#include <complex>
#include <string>
#include <vector>

namespace aybe {

inline constexpr const char* kGoldenHeader = "# aybe golden values, format 1";

struct GoldenRecord {
  std::string name;
  std::vector<double> inputs;
  std::complex<double> value;
  int line = 0;
};

/// Throws ParameterError on a missing header or malformed record.
std::vector<GoldenRecord> parse_golden(const std::string& text);
std::vector<GoldenRecord> load_golden(const std::string& path);

/// All records with the given name, in file order.
std::vector<GoldenRecord> select(const std::vector<GoldenRecord>& records, const std::string& name);

/// Recomputes a record with the library. Known names: nome, theta1, theta3,
/// theta1_deriv_zero, theta3_deriv_half_period, theta_shifted, theta1_multiplier,
/// theta3_multiplier, sigma, r_elliptic, res_map, ev_map, alpha.
/// Throws ParameterError for anything else.
std::complex<double> evaluate_record(const GoldenRecord& record);

/// |got - want| relative to |want|, or absolute when |want| < 1e-8.
double golden_error(std::complex<double> got, std::complex<double> want);

}  // namespace aybe
