#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace nilflow {

struct VerifyOptions {
  int draws = 100;
  std::uint64_t seed = 20240601;
  /// Added to one closed-form coefficient (Omega^1_2 and A^1_2 on e^{13})
  /// before comparing. Non-zero values are a negative control.
  double perturbation = 0.0;
  /// Pass threshold on the relative errors.
  double tolerance = 1e-9;
  /// Pass threshold on trace components away from zeta^{12 1bar 2bar},
  /// relative to the main component.
  double off_component_tolerance = 1e-10;
};

/// Outcome of one identity checked over all draws.
struct CheckSummary {
  std::string name;
  double worst_error = 0.0;
  int worst_draw = -1;
  /// Human-readable location of the worst error, such as "Omega^3_5 e^{15}".
  std::string worst_entry;
  /// Informational checks are reported but never fail the suite.
  bool informational = false;
  bool passed = true;
};

struct DrawRecord {
  int index = 0;
  nlohmann::json inputs;
  /// Error per check name for this draw.
  nlohmann::json errors;
};

struct VerifyReport {
  std::string suite;
  std::vector<CheckSummary> checks;
  std::vector<DrawRecord> draws;
  double seconds = 0.0;

  [[nodiscard]] bool passed() const;
  /// The failing (or, if none fails, the largest relative to its threshold)
  /// non-informational check.
  [[nodiscard]] const CheckSummary* worst() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Tangent-bundle oracles on random draws of rho in {0, 1}, lambda in [0, 2),
/// x, y in [-2, 2), a positive definite metric and tau in [-3, 3):
/// connection forms and curvature (brute force against closed forms), the
/// trace coefficient, and the trace components off zeta^{12 1bar 2bar}.
/// The uncorrected curvature table is compared as an informational check.
[[nodiscard]] VerifyReport verify_tangent_oracles(const VerifyOptions& options);

/// Bundle oracles under the lambda = 0 gate with diagonal omega, a random
/// bundle metric and kappa in [-3, 3).
[[nodiscard]] VerifyReport verify_bundle_oracles(const VerifyOptions& options);

/// Exterior-calculus properties on random forms: d o d = 0, graded
/// commutativity of the wedge product, the Leibniz rule, reconstruction from
/// (p, q) components, and d mapping (p, q) into (p+1, q) + (p, q+1).
[[nodiscard]] VerifyReport verify_structural(const VerifyOptions& options);

}  // namespace nilflow
