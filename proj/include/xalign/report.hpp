#pragma once

#include <json.hpp>

#include "xalign/simulator.hpp"
#include "xalign/sweep.hpp"

namespace xalign {

inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::json;

// Quantize to 12 significant digits; every float that reaches a report goes
// through this, so reruns with the same inputs serialize byte-identically.
double round12(double x);

// FNV-1a (64-bit) of a byte string, as 16 lowercase hex digits.
std::string fnv1a64_hex(const std::string& bytes);

Json matrix_to_json(const Matrix& m);  // {"rows", "cols", "data": [[re, im]...]}
Json rational_json(const Rational& r);  // "p/q" string

Json region_to_json(const AntennaConfig& config);
Json plan_to_json(const BeamformingPlan& plan);
Json cognitive_to_json(const CognitivePlan& plan);
Json diagnostics_to_json(const AlignmentDiagnostics& diag);
Json curve_to_json(const RateCurve& curve);
Json slope_to_json(const SlopeEstimate& slope);
Json sweep_to_json(const std::vector<ConfigCheck>& checks);

// Report envelope: schema/tool/version, the echoed input object and its hash,
// and the command-specific body under "result".
Json make_report(const std::string& command, const Json& input, Json body);

// Canonical serialization: sorted keys (nlohmann default), two-space indent,
// trailing newline.
std::string dump_json(const Json& j);

// Header `snr_db,sum_rate,r11,r12,r21,r22`, one row per sweep point.
std::string curve_to_csv(const RateCurve& curve);

}  // namespace xalign
