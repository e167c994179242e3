#pragma once

// Canonical lift, moving frame {Y, Y_z, Y_zbar, N, L, R} and the conformal
// invariants (s, lambda1, lambda2, alpha, beta, gamma1, gamma2) of a spacelike
// surface in Q^4_1.
//
// Everything is computed on jets, so derivatives of frame fields are exact
// derivatives of the composed map. Starting from a chart jet of order K the
// lift has order K-1, the frame and (s, lambda) order K-3, (alpha, gamma)
// order K-4 and their first derivatives order K-5.

#include <complex>
#include <limits>
#include <memory>
#include <optional>

#include "lorentz_iso/grid.hpp"
#include "lorentz_iso/pseudo_euclidean.hpp"
#include "lorentz_iso/surface_model.hpp"

namespace lorentz_iso {

using cplx = std::complex<double>;

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct CanonicalLift {
  JetPoint jet;
  double scale_log = 0.0;
  /// |<Y_z,Y_z>| / <Y_z,Y_zbar> of the input.
  double conformality_residual = 0.0;
};

/// Rescales a null lift so that <Y_z, Y_zbar> = 1/2. The rescaling factor is
/// itself a jet, so the output order is one below the input order.
CanonicalLift canonical_lift(const JetPoint& jet, double conformality_tol = 1e-6);

/// Jet data behind a frame; absent on frames restored from value grids.
struct FrameJets {
  RJetVec Y, Yu, Yv, N, L, R;
  CJetVec Yz, Yzz;
  /// Y_zzbar = beta Y + N/2.
  RJetVec W;
};

enum class GaugeKind { lambda2_half, lambda1_half, raw };

struct MovingFrame {
  Vec6 Y = Vec6::Constant(kNaN), N = Vec6::Constant(kNaN), L = Vec6::Constant(kNaN), R = Vec6::Constant(kNaN);
  CVec6 Yz = CVec6::Constant(cplx(kNaN, kNaN)), Yzbar = CVec6::Constant(cplx(kNaN, kNaN));
  /// Max deviation of the Gram matrix of (Y, Y_u, Y_v, N, L, R) from its normal form.
  double gram_residual = 0.0;
  GaugeKind gauge = GaugeKind::raw;
  std::shared_ptr<const FrameJets> jets;

  Vec6 Yu() const { return 2.0 * Yz.real(); }
  Vec6 Yv() const { return -2.0 * Yz.imag(); }
};

struct FrameOptions {
  /// Swap the roles of L and R (the opposite ambient orientation).
  bool reversed_orientation = false;
  double conformality_tol = 1e-6;
  /// Used instead on sampled charts, whose difference jets are conformal
  /// only to O(h^2).
  double sampled_conformality_tol = 5e-2;
};

/// options with the conformality tolerance that applies to chart's kind.
FrameOptions frame_options_for(const SurfaceChart& chart, FrameOptions options);

/// Frame of a canonical lift with N in V = span{Y, Y_u, Y_v, Y_zzbar} from a
/// 4x4 Gram solve, and (L, R) a null basis of the orthogonal complement with
/// det(Y, Y_u, Y_v, N, R, L) > 0.
MovingFrame moving_frame(const CanonicalLift& lift, const FrameOptions& options = {});

/// Conformal invariants of a frame. Fields that need more jet orders than the
/// frame carries are NaN and flagged unavailable.
struct InvariantRecord {
  cplx s{kNaN, kNaN};
  cplx lambda1{kNaN, kNaN}, lambda2{kNaN, kNaN};
  cplx alpha{kNaN, kNaN};
  double beta = kNaN;
  cplx gamma1{kNaN, kNaN}, gamma2{kNaN, kNaN};
  /// alpha_z and alpha_zbar, used by the closed-form polar invariants.
  cplx alpha_z{kNaN, kNaN}, alpha_zbar{kNaN, kNaN};
  /// -<kappa, kappa-bar> from the frame, the second route to beta.
  double beta_direct = kNaN;
  /// Euclidean size of the Hopf vector kappa = Y_zz + (s/2) Y.
  double kappa_norm = kNaN;
  /// Gauge-invariant sizes |lambda1| |L| and |lambda2| |R| of the two Hopf parts.
  double kappa_l_part = kNaN, kappa_r_part = kNaN;
  bool has_alpha = false;
  bool has_alpha_z = false;
  GaugeKind gauge = GaugeKind::raw;
};

/// Invariants of a frame in its current gauge.
InvariantRecord invariants(const MovingFrame& frame);

enum class GaugePolicy {
  /// lambda2 = 1/2 where lambda2 does not vanish, else lambda1 = 1/2, else raw.
  lambda2_half,
  /// lambda1 = 1/2 where lambda1 does not vanish, else lambda2 = 1/2, else raw.
  lambda1_half,
  raw,
};

/// Rescales (L, R) -> (rho L, R / rho) with the real jet rho chosen by the policy.
MovingFrame fix_gauge(const MovingFrame& frame, GaugePolicy policy);

InvariantRecord invariants(const MovingFrame& frame, GaugePolicy policy);

/// (L, R) -> (e^g L, e^{-g} R), optionally followed by the swap L <-> R.
/// Frame jets are transformed when present, so invariants of the result equal
/// the transformed record.
std::pair<MovingFrame, InvariantRecord> gauge_transform(const MovingFrame& frame, const InvariantRecord& inv,
                                                        const RJet& g);

/// Pointwise residuals of the structure equations, Euclidean norms of
/// left minus right side.
struct StructureResiduals {
  double yzz = kNaN, yzzbar = kNaN, nz = kNaN, lz = kNaN, rz = kNaN;
};

/// Gauss, two Codazzi and Ricci residuals from exact jet derivatives.
struct CompatibilityResiduals {
  double gauss = kNaN, codazzi1 = kNaN, codazzi2 = kNaN, ricci = kNaN;
  /// |2(lambda1 conj(lambda2) - lambda2 conj(lambda1))|, the normal curvature.
  double normal_curvature = kNaN;
};

/// Jets of the invariants of a gauge-fixed frame.
struct InvariantJets {
  CJet s, lambda1, lambda2, alpha, gamma1, gamma2;
  RJet beta;
};

InvariantJets invariant_jets(const MovingFrame& frame);

StructureResiduals structure_residuals(const MovingFrame& frame);
/// Residuals of the frame's jets against externally supplied invariants.
StructureResiduals structure_residuals(const MovingFrame& frame, const InvariantRecord& inv);
CompatibilityResiduals compatibility_residuals(const MovingFrame& frame);

struct PointAnalysis {
  CanonicalLift lift;
  MovingFrame frame;
  InvariantRecord inv;
};

PointAnalysis analyze_point(const JetPoint& jet, GaugePolicy policy = GaugePolicy::lambda2_half,
                            const FrameOptions& options = {});

struct AnalysisOptions {
  int order = kDefaultJetOrder;
  GaugePolicy gauge = GaugePolicy::lambda2_half;
  FrameOptions frame;
  /// Relative umbilic threshold against the grid median of |kappa|.
  double umbilic_tol = 1e-8;
  bool residuals = true;
  /// Nodes to leave out (for instance degenerate points of a transform).
  std::shared_ptr<const Grid<char>> skip;
};

/// Frames, invariants and pointwise residuals over the chart grid. Frame
/// jets are dropped to keep memory bounded.
struct ChartAnalysis {
  GridSpec grid;
  Grid<MovingFrame> frames;
  Grid<InvariantRecord> inv;
  Grid<StructureResiduals> structure;
  Grid<CompatibilityResiduals> compatibility;
  Grid<char> umbilic;
  Grid<char> lower_accuracy;
  /// Nodes excluded through AnalysisOptions::skip; their records are NaN.
  Grid<char> skipped;
  double max_conformality = 0.0;
  double max_gram = 0.0;
  /// min over non-umbilic nodes of |lambda1| + |lambda2|.
  double min_lambda_sum = kNaN;
  GaugePolicy policy = GaugePolicy::lambda2_half;
  int order = kDefaultJetOrder;
};

ChartAnalysis analyze_chart(const SurfaceChart& chart, const AnalysisOptions& options = {});

/// Real connection matrices of F = (Y, Y_u, Y_v, N, L, R): dF/du = F A_u,
/// dF/dv = F A_v, with the columns assembled from the structure equations.
using Mat6x6 = Eigen::Matrix<double, 6, 6>;
struct Connection {
  Mat6x6 Au, Av;
};

Connection connection_matrices(const InvariantRecord& inv);

/// The same matrices with jet entries, from invariant jets.
struct ConnectionJets {
  std::array<std::array<RJet, 6>, 6> Au, Av;
};

ConnectionJets connection_jets(const InvariantJets& inv);

/// Frame matrix with columns (Y, Y_u, Y_v, N, L, R).
Mat6x6 frame_matrix(const MovingFrame& f);

/// Gram matrix of (Y, Y_u, Y_v, N, L, R) for a canonical, normalized frame.
Mat6x6 frame_gram_normal_form();

}  // namespace lorentz_iso
