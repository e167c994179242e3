#pragma once

// Surfaces in Q^4_1 presented as jet-valued charts over a parameter rectangle.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lorentz_iso/grid.hpp"
#include "lorentz_iso/jet.hpp"
#include "lorentz_iso/pseudo_euclidean.hpp"

namespace lorentz_iso {

/// Default jet order requested by the frame pipeline. The canonical-lift
/// rescaling consumes one order, the frame two more, the connection form a
/// fourth, and the integrability residuals need one derivative beyond that.
inline constexpr int kDefaultJetOrder = 5;

/// Taylor data of a lift Y: R^2 -> C^5 at one parameter point.
struct JetPoint {
  RJetVec y;
  /// Set when finite-difference stencils had to be shifted off-centre.
  bool lower_accuracy = false;

  int order() const { return lorentz_iso::order(y); }
  Vec6 value() const { return lorentz_iso::value(y); }
  /// d^{i+j} Y / du^i dv^j.
  Vec6 partial(int i, int j) const { return lorentz_iso::partial(y, i, j); }
};

enum class ChartKind { analytic, sampled, derived };

/// A local lift with derivative data. Continuous charts evaluate anywhere in
/// the domain; nodal charts (finite-difference or integrated data) only at
/// grid nodes.
class SurfaceChart {
 public:
  using PointEvaluator = std::function<JetPoint(double u, double v, int order)>;
  using NodeEvaluator = std::function<JetPoint(int i, int j, int order)>;

  static SurfaceChart continuous(std::string name, GridSpec grid, int max_order, PointEvaluator eval,
                                 ChartKind kind = ChartKind::analytic);
  static SurfaceChart nodal(std::string name, GridSpec grid, int max_order, NodeEvaluator eval,
                            ChartKind kind = ChartKind::derived);

  const std::string& name() const { return name_; }
  const GridSpec& grid() const { return grid_; }
  int max_order() const { return max_order_; }
  ChartKind kind() const { return kind_; }
  bool is_continuous() const { return static_cast<bool>(point_eval_); }

  JetPoint at(double u, double v, int order) const;
  JetPoint node(int i, int j, int order) const;

  /// Same continuous chart sampled on a different grid.
  SurfaceChart with_grid(const GridSpec& grid) const;
  SurfaceChart renamed(std::string name) const;
  /// Continuous chart precomposed with the rotation z -> e^{i angle} z about
  /// the domain's lower-left corner (used to build non-adapted controls).
  SurfaceChart rotated(double angle) const;

 private:
  std::string name_;
  GridSpec grid_;
  int max_order_ = 0;
  ChartKind kind_ = ChartKind::analytic;
  PointEvaluator point_eval_;
  NodeEvaluator node_eval_;
};

/// Values of a chart at all grid nodes.
Grid<Vec6> sample_values(const SurfaceChart& chart);

// ---------------------------------------------------------------------------
// Space forms and their conformal embeddings into the light cone of R^6_2.

struct SpaceFormPoint {
  /// R^4_1 (c = 0), R^5_1 (c = +1) or R^5_2 (c = -1) coordinates.
  Eigen::VectorXd coords;
  int curvature = 0;
};

PseudoVector embed_space_form(const SpaceFormPoint& p, double tol = 1e-10);

/// Flat embedding phi_0 applied to jets of a map into R^4_1 (x4 timelike).
RJetVec embed_flat(const std::array<RJet, 4>& x);

// ---------------------------------------------------------------------------
// Example families.

enum class TorusCoordinates {
  /// (u,v) with theta = (u+v)/sqrt2, phi = (v-u)/sqrt2: the Hopf differential is real.
  adapted,
  /// The angular parameters (theta, phi) themselves; doubly periodic.
  angular,
};

/// Homogeneous spacelike torus Y_t, t^2 > 1. For rational t = p/q the angular
/// chart is doubly periodic on [0, 2 pi sqrt(t^2-1) q) x [0, 2 pi); the adapted
/// chart uses a non-periodic rectangle with the same side lengths.
SurfaceChart homogeneous_torus(double t, TorusCoordinates coords = TorusCoordinates::adapted, int nu = 64,
                               int nv = 64);

/// Generating curve gamma(u) = (0, f, g, h) in R^4_1, h timelike. Each function
/// maps a jet in u to the jet of its value; fp, gp, hp are the derivatives.
struct ProfileCurve {
  std::function<RJet(const RJet&)> f, g, h;
  std::function<RJet(const RJet&)> fp, gp, hp;
  std::string description;

  /// Polynomial profile from ascending coefficient lists.
  static ProfileCurve polynomial(std::vector<double> f, std::vector<double> g, std::vector<double> h);
};

/// Rotational surface x(u,v) = (f cos v, f sin v, g, h) embedded by phi_0, with
/// u reparameterised by d(ut) = sqrt(f'^2 + g'^2 - h'^2)/|f| du so (ut, v) is
/// conformal. The chart domain is [0, ut(u_end)] x [0, 2 pi).
SurfaceChart rotational_surface(const ProfileCurve& profile, double u_begin, double u_end, int nu = 64,
                                int nv = 64);

/// Conformal parameter ut(u) of a rotational profile (exposed for testing).
double rotational_parameter(const ProfileCurve& profile, double u_begin, double u);

/// Graph x(u,v) = (u, v, phi, phi) over R^2 in R^4_1 with phi = (u^2 - v^2)/2.
/// Its Hopf differential points along the null normal (0,0,1,1), so one of
/// lambda1, lambda2 vanishes identically: a control for polar degeneracy.
SurfaceChart null_graph_surface(int nu = 32, int nv = 32);

// ---------------------------------------------------------------------------
// Sampled charts.

/// Second-order finite differences (Fornberg weights) of the requested
/// partials at every node, up to kMaxJetOrder. Periodic axes wrap; other axes
/// switch to one-sided windows of k + 2 nodes near the boundary and flag the
/// node as lower accuracy (same order, larger constant).
SurfaceChart jets_from_samples(const Grid<Vec6>& values, int order = kDefaultJetOrder,
                               std::string name = "sampled");

struct CsvChartOptions {
  bool periodic_u = false;
  bool periodic_v = false;
  double null_tolerance = 1e-8;
  int order = kDefaultJetOrder;
};

/// Reads `u,v,x1,...,x6` rows (v varying fastest) into a sampled chart.
SurfaceChart load_chart_csv(const std::string& path, const CsvChartOptions& options = {});

/// Writes grid values as `u,v,x1,...,x6`, optionally followed by extra columns.
void write_chart_csv(const std::string& path, const Grid<Vec6>& values,
                     const std::vector<std::string>& extra_names = {},
                     const std::vector<Grid<double>>& extra_columns = {});

}  // namespace lorentz_iso
