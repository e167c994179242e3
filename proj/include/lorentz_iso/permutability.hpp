#pragma once

// End-to-end checks that polar, spectral and Darboux transforms commute as
// claimed, reported as lists of residual fields.

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lorentz_iso/integrability.hpp"
#include "lorentz_iso/transforms.hpp"

namespace lorentz_iso {

inline constexpr int kReportSchemaVersion = 1;

using ParamValue = std::variant<double, long long, bool, std::string>;

struct VerificationReport {
  std::string theorem_id;
  std::string surface_id;
  std::map<std::string, ParamValue> parameters;
  std::vector<ResidualField> checks;
  /// Hypothesis failures and masked nodes, in the order they were found.
  std::vector<std::string> notes;
  /// A hypothesis of the statement fails on this input (degenerate polar,
  /// non-isothermic input, singular lift), as opposed to a failed check.
  bool hypothesis_failure = false;
  long long runtime_ms = 0;

  /// pass iff there is at least one check, all checks pass and no hypothesis failed.
  bool passed() const;
};

struct VerifyOptions {
  AnalysisOptions analysis;
  /// Base tolerance of each check on analytic charts; checks without an
  /// entry use their defaults below.
  std::map<std::string, double> tolerances;
  /// Sampled charts scale every tolerance to max(tol, sampled_tol0 (h / sampled_h0)^2)
  /// with h the larger grid step.
  double sampled_tol0 = 1e-2;
  double sampled_h0 = 0.0982;
  IntegrationOptions spectral;
  IntegrationOptions darboux{8, 1e-4, {0, 0}};
  /// Darboux initial value at the base; default N(base).
  std::optional<Vec6> darboux_init;
  double singular_tol = 2e-2;
};

/// Default tolerances: polar and duality 1e-6, kappa_L reality 1e-7,
/// spectral Schwarzian shift 1e-5, Hopf and connection 1e-6, Darboux drifts
/// 1e-8, path 1e-6, span and envelope 1e-6, Y* isothermic 1e-5, L* agreement
/// 1e-6, lift pairing 1e-8, D^theta 1e-5.
double check_tolerance(const VerifyOptions& options, const SurfaceChart& chart, const std::string& check);

/// Both polar charts are isothermic in the source coordinate, kappa_L is
/// real, and the polars are mutually inverse.
VerificationReport verify_polar_isothermic(const SurfaceChart& surface, const VerifyOptions& options = {});

/// The left polar of the spectral transform Y^c has the invariants of the
/// left polar of Y with s shifted by c; compared at invariant level.
VerificationReport verify_spectral_commutes(const SurfaceChart& surface, double c, const VerifyOptions& options = {});

/// Darboux pair diagnostics and the commuting square: L* from the pair frame
/// against the left polar of Y*, the lift pairing and the D^theta relation.
VerificationReport verify_darboux_commutes(const SurfaceChart& surface, double theta,
                                           const VerifyOptions& options = {});

/// Right-of-left and left-of-right polar return Y; left-of-left is Yhat.
VerificationReport verify_duality(const SurfaceChart& surface, const VerifyOptions& options = {});

/// Theorem ids accepted by run_verification: polar-isothermic,
/// spectral-commutes, darboux-commutes, duality.
const std::vector<std::string>& theorem_ids();

/// Dispatch by id; parameter is c or theta where the check needs one.
VerificationReport run_verification(const std::string& theorem_id, const SurfaceChart& surface, double parameter,
                                    const VerifyOptions& options = {});

/// JSON with sorted keys and floats as %.17e. runtime_ms is written as 0
/// when reproducible is set so that reruns are byte-identical.
std::string report_json(const VerificationReport& report, bool reproducible = false);

/// Several reports under one object: {schema_version, reports: [...], verdict}.
std::string reports_json(const std::vector<VerificationReport>& reports, bool reproducible = false);

std::string report_summary(const VerificationReport& report);

}  // namespace lorentz_iso
