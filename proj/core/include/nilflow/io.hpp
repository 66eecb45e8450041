#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nilflow/anomaly_flow.hpp"
#include "nilflow/exterior.hpp"
#include "nilflow/lie_nilpotent.hpp"
#include "nilflow/metric_coeffs.hpp"

namespace nilflow {

/// Input that cannot be parsed as a trajectory or configuration.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what)
      : std::runtime_error("parse error: " + what) {}
};

/// Header of the trajectory CSV format.
inline constexpr const char* kTrajectoryCsvHeader =
    "t,r2,s2,k2,u_re,u_im,tr2,ts2,tk2";

/// Formats a double with 17 significant digits ("%.17g"), which round-trips
/// every finite double.
[[nodiscard]] std::string format_double(double value);

/// Writes the header and one row per state. The bundle columns are left empty
/// for states without H. The v and z coefficients are not part of the format.
void write_trajectory_csv(std::ostream& os, const std::vector<FlowState>& states);

/// Reads the format written by write_trajectory_csv; v and z are zero in the
/// result. Throws ParseError on a malformed header or row.
[[nodiscard]] std::vector<FlowState> read_trajectory_csv(std::istream& is);

void to_json(nlohmann::json& j, const JParams& p);
/// Reads {"rho", "lambda", "x", "y"}; lambda and y default to 0.
[[nodiscard]] JParams params_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const MetricCoeffs& m);
void from_json(const nlohmann::json& j, MetricCoeffs& m);
void to_json(nlohmann::json& j, const BundleMetricCoeffs& h);
void from_json(const nlohmann::json& j, BundleMetricCoeffs& h);
void to_json(nlohmann::json& j, const ConservedConstants& c);
void to_json(nlohmann::json& j, const ModelConstants& m);
void to_json(nlohmann::json& j, const QualitativeClass& q);
void to_json(nlohmann::json& j, const FlowState& s);
void to_json(nlohmann::json& j, const HsiResiduals& r);
void to_json(nlohmann::json& j, const CollapseProfile& p);

/// Non-zero coefficients as [{"mask": 5, "re": .., "im": ..}, ...] in
/// increasing mask order (bit i-1 of the mask set for index i).
void to_json(nlohmann::json& j, const Form& f);
void from_json(const nlohmann::json& j, Form& f);

/// {"metadata": metadata, "states": [...]}.
[[nodiscard]] nlohmann::json trajectory_json(const std::vector<FlowState>& states,
                                             const nlohmann::json& metadata);

}  // namespace nilflow

/// JParams has no default constructor, so it is read through a serializer
/// specialization.
template <>
struct nlohmann::adl_serializer<nilflow::JParams> {
  static void to_json(json& j, const nilflow::JParams& p) { nilflow::to_json(j, p); }
  static nilflow::JParams from_json(const json& j) { return nilflow::params_from_json(j); }
};
