#pragma once

// JSON / CSV encodings for tensors, Laurent expansions and residual reports.
// Tensor entries are written as [re, im] pairs in flat row-major (a,b,c,d)
// order with 17 significant digits, so a parse round-trip is bit-exact.

#include <string>

#include "aybe/closed_form.hpp"
#include "aybe/verifier.hpp"

namespace aybe {

inline constexpr int kSchemaVersion = 1;

std::string to_json(const TwoTensor& t);
/// Throws ParameterError on malformed input or an unknown schema.
TwoTensor two_tensor_from_json(const std::string& text);

/// Header a,b,c,d,re,im; indices 1-based.
std::string to_csv(const TwoTensor& t);

/// Includes the residue diagnostic (c, off_identity) when order -1 is present.
std::string to_json(const LaurentExpansion& e);
/// Header order,a,b,c,d,re,im.
std::string to_csv(const LaurentExpansion& e);

/// Single JSON line. The timestamp field (UTC, ISO 8601) is omitted when
/// with_timestamp is false so outputs can be diffed.
std::string to_json(const ResidualReport& report, bool with_timestamp = true);

/// Evaluation record: parameters, point and tensor in one JSON object.
std::string evaluation_json(const SolutionParams& params, Complex v, Complex x1, Complex x2,
                            const TwoTensor& t, const std::string& route);

}  // namespace aybe
