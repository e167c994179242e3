#pragma once

// Command-line front end. run_cli is the whole program minus main so that
// tests can drive it in-process.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lorentz_iso/permutability.hpp"

namespace lorentz_iso::cli {

enum ExitCode { kPass = 0, kInputError = 1, kHypothesisFailure = 2, kCheckFailure = 3 };

/// Surface source: "torus:t=2[,coords=adapted|angular]",
/// "rotational[:f=0/1,g=0/0/0.5,h=0,u0=1,u1=2]", "null-graph" or "csv:path".
struct SurfaceSpec {
  std::string kind;
  std::map<std::string, std::string> params;
  std::string path;
};

SurfaceSpec parse_surface_spec(const std::string& text);

struct RunConfig {
  std::string command;
  SurfaceSpec surface;
  std::optional<std::pair<int, int>> grid;
  GaugePolicy gauge = GaugePolicy::lambda2_half;
  std::map<std::string, double> tolerances;
  std::optional<PolarSide> polar;
  bool two_step = false;
  std::vector<double> spectral_c;
  std::vector<double> darboux_theta;
  std::optional<Vec6> darboux_init;
  std::vector<std::string> theorems;
  bool periodic_u = false, periodic_v = false;
  std::string output = ".";
  bool reproducible = false;
};

/// Builds the chart named by the config; throws Error(input) on bad specs.
SurfaceChart build_surface(const RunConfig& config);

/// Runs one subcommand; diagnostics go to err, progress to out.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (with optional --config INI file, flags override it) and runs.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lorentz_iso::cli
