#pragma once

// Residual checks of the structure equations and of the Gauss, Codazzi and
// Ricci conditions, and the isothermic certificate.

#include <cstdint>
#include <string>
#include <vector>

#include "lorentz_iso/conformal_frame.hpp"

namespace lorentz_iso {

/// Per-node residual with summaries over the nodes that carry a finite value.
/// NaN marks a node left out (skipped, umbilic-masked or lacking jet orders).
struct ResidualField {
  std::string name;
  Grid<double> values;
  double max = 0.0, mean = 0.0, l2 = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::size_t evaluated = 0;
};

/// Summaries (l2 is the root mean square) and pass = evaluated > 0 && max < tolerance.
ResidualField make_residual_field(std::string name, Grid<double> values, double tolerance);

/// Where derivatives of frame fields come from.
enum class DerivativeRoute {
  /// Exact derivatives of the jets behind each frame.
  jets,
  /// Second-order central differences of frame values across the grid
  /// (one-sided on non-periodic boundaries). Nodes whose stencil touches a
  /// lower_accuracy jet are left unevaluated.
  grid_differences,
};

/// Residual fields yzz, yzzbar, nz, lz, rz of a chart analysis.
std::vector<ResidualField> structure_residuals(const ChartAnalysis& analysis, double tolerance = 1e-8,
                                               DerivativeRoute route = DerivativeRoute::jets);

/// Same five fields with externally supplied invariants, checked against
/// frames recomputed from the chart jets at options.order.
std::vector<ResidualField> structure_residuals(const SurfaceChart& chart, const Grid<MovingFrame>& frames,
                                               const Grid<InvariantRecord>& inv, const AnalysisOptions& options,
                                               double tolerance = 1e-8);

/// Gauss, codazzi1, codazzi2 and ricci residuals with derivatives of the
/// invariants taken by grid differences.
std::vector<ResidualField> integrability_residuals(const Grid<InvariantRecord>& inv, double tolerance = 1e-6);

/// The same four fields from exact jet derivatives stored in the analysis.
std::vector<ResidualField> integrability_residuals(const ChartAnalysis& analysis, double tolerance = 1e-6);

/// |2(lambda1 conj(lambda2) - lambda2 conj(lambda1))|, the Ricci right side.
ResidualField ricci_right_side(const Grid<InvariantRecord>& inv, double tolerance = 1e-9);

struct IsothermicCertificate {
  bool is_isothermic = false;
  /// max over evaluated non-umbilic nodes of |Im lambda_i| / max(1, |lambda_i|).
  /// arg lambda_i is gauge invariant, Im lambda_i alone is not.
  double max_im_kappa = 0.0;
  std::vector<GridIndex> umbilic_points;
  double tolerance = 0.0;
  std::size_t evaluated = 0;
};

/// Reality test of the Hopf differential in the chart's own coordinate.
/// Nodes with NaN invariants are ignored. Throws degenerate_surface when no
/// non-umbilic node remains.
IsothermicCertificate isothermic_check(const Grid<InvariantRecord>& inv, const Grid<char>& umbilic, double tolerance);
IsothermicCertificate isothermic_check(const ChartAnalysis& analysis, double tolerance);

/// Independent Gaussian values for every invariant at every node: a grid that
/// cannot satisfy the compatibility conditions.
Grid<InvariantRecord> random_invariants(const GridSpec& grid, std::uint64_t seed, double amplitude = 1.0);

}  // namespace lorentz_iso
