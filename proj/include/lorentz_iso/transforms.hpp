#pragma once

// Polar, two-step polar, spectral and Darboux transforms of a surface chart.
// Every result is again a SurfaceChart in the source's coordinate, so the
// frame pipeline and the integrability checks apply unchanged.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lorentz_iso/conformal_frame.hpp"

namespace lorentz_iso {

enum class PolarSide { left, right };

std::string_view to_string(PolarSide side);

/// Lift of the polar surface from a source jet of order K: the gauge-fixed L
/// (lambda2 = 1/2) for the left side, R (lambda1 = 1/2) for the right side,
/// as a jet of order K - 3. Throws degenerate_transform where the defining
/// Hopf component vanishes.
RJetVec polar_lift(const JetPoint& source, PolarSide side, const FrameOptions& options = {});

/// Polar surface as a chart (continuous if the source is), without any
/// degeneracy scan.
SurfaceChart polar_chart(const SurfaceChart& source, PolarSide side, const FrameOptions& options = {});

struct PolarOptions {
  AnalysisOptions analysis;
  /// Relative threshold for the vanishing Hopf component against the grid
  /// median of |kappa| (as |lambda_i| times the size of its null vector).
  double degeneracy_tol = 1e-8;
};

struct PolarResult {
  SurfaceChart surface;
  PolarSide side = PolarSide::left;
  Grid<char> degenerate_mask;
  std::size_t degenerate_count = 0;
  /// Left side only: invariants of [L] predicted from those of [Y].
  std::optional<Grid<InvariantRecord>> closed_form_invariants;
  /// Analysis of the source the result was derived from.
  ChartAnalysis source;

  /// Analysis options for the polar chart with degenerate nodes skipped.
  AnalysisOptions analysis_options(const AnalysisOptions& base = {}) const;
};

/// Throws degenerate_transform when every node is degenerate.
PolarResult polar(const SurfaceChart& source, PolarSide side, const PolarOptions& options = {});

/// Invariants of the left polar [L] in its lambda1 = 1/2 gauge from a
/// lambda2 = 1/2 record of [Y]: s_L = s - 4 alpha_z, Hopf components
/// (1/2, conj(alpha)_z + lambda1), alpha_L = alpha. NaN where unavailable.
InvariantRecord polar_invariants_closed_form(const InvariantRecord& source);
Grid<InvariantRecord> polar_invariants_closed_form(const ChartAnalysis& source);

/// Yhat = N + 2 alpha Y_zbar + 2 conj(alpha) Y_z + 2|alpha|^2 Y - 2(alpha_z - alpha^2 - s/2) L
/// in the lambda2 = 1/2 gauge, from a source jet of order K (result order K - 5).
/// The coefficient of L is real on isothermic surfaces; the real part of the
/// whole expression is returned.
RJetVec two_step_lift(const JetPoint& source, const FrameOptions& options = {});
SurfaceChart two_step_polar(const SurfaceChart& source, const FrameOptions& options = {});

// ---------------------------------------------------------------------------
// Integrated transforms.

struct IntegrationOptions {
  /// Taylor order of the connection series used per grid step.
  int series_order = 6;
  /// Path-independence residual above which the input is declared
  /// non-integrable.
  double max_path_residual = 1e-4;
  /// Node the integration starts from.
  GridIndex base{0, 0};
  /// Project the base frame and every integrated frame onto the canonical
  /// Gram matrix. gram_drift still measures the frames before projection.
  bool repair_gram = false;
};

struct SpectralOptions {
  IntegrationOptions integration;
  /// Frame matrix (Y, Y_u, Y_v, N, L, R) at the base; default is the source
  /// frame there in the lambda2 = 1/2 gauge, projected onto the canonical
  /// Gram matrix for sampled sources.
  std::optional<Mat6x6> base_frame;
  FrameOptions frame;
};

struct SpectralResult {
  /// Lift Y^c (first frame column); a nodal chart.
  SurfaceChart surface;
  /// Y^c at each node p moved by the conformal motion F0 F(p)^{-1}, F0 the
  /// base frame. Same invariants as surface; its jets stay well conditioned
  /// where F itself grows (|F|^2 eps cancellation in the global jets).
  SurfaceChart local;
  double c = 0.0;
  Grid<Mat6x6> frames;
  Grid<MovingFrame> frame_grid;
  /// Max over nodes of |F^T J F - G| / max(1, |F|^2), G the canonical Gram
  /// matrix and |F| the largest entry.
  double gram_drift = 0.0;
  /// The same without the scale, and the largest |F|.
  double gram_drift_abs = 0.0;
  double frame_scale = 0.0;
  double path_residual = 0.0;
};

/// F (G^{-1} F^T J F)^{-1/2}: the nearby frame with the canonical Gram
/// matrix G. Throws initial_condition when F is far from it.
Mat6x6 project_to_gram(const Mat6x6& F);

/// Integrates dF = F A^c where A^c is the connection of the source with s
/// replaced by s + c. Throws non_integrable when the path residual exceeds
/// the configured bound.
SpectralResult spectral_transform(const SurfaceChart& source, double c, const SpectralOptions& options = {});

struct DarbouxOptions {
  IntegrationOptions integration{8, 1e-4, {0, 0}};
  /// Null vector at the base with <Y, init> = -1; default N(base).
  std::optional<Vec6> init;
  /// Validation tolerance for init, relative to |init|^2.
  double init_tol = 1e-8;
  /// Nodes with the scale-free immersion measure below this are reported as
  /// non-immersed.
  double immersion_tol = 1e-10;
  /// Nodes with |<Y, W>| < singular_tol |Y| |W| lie near the locus where Y*
  /// touches the light cone of Y; they are masked out of pair-frame checks.
  double singular_tol = 2e-2;
  FrameOptions frame;
};

struct DarbouxState {
  /// [Y*] as a nodal chart, lifted by the flow solution W (bounded where the
  /// normalised Y* is not).
  SurfaceChart surface;
  /// Y* normalised by <Y, Y*> = -1.
  Grid<Vec6> Ystar;
  double theta = 0.0;
  Grid<cplx> mu;
  Grid<double> f1, f2;
  /// max |<W, W>| / |W|^2.
  double nullity_drift = 0.0;
  double normalization_drift = 0.0;
  double path_residual = 0.0;
  /// min over nodes of <X_z, X_zbar> for X = W / |W|.
  double min_immersion = 0.0;
  /// |<Y, W>| / (|Y| |W|) per node and the nodes where it is below singular_tol.
  Grid<double> pairing;
  Grid<char> singular_mask;
  std::size_t singular_count = 0;
  std::vector<std::string> warnings;
  GridIndex base;
  Vec6 init;
  /// Integrated flow, for jets of Y* at nodes.
  std::shared_ptr<const void> flow;

  /// Analysis options for the Y* chart with singular nodes skipped.
  AnalysisOptions analysis_options(const AnalysisOptions& base = {}) const;
};

/// D^theta transform: Y*_z = (mu/2) Y* + theta (Y_zbar + (conj(mu)/2) Y) with
/// mu = 2 <Y_z, Y*>. Integrated as the linear flow W_z = theta (<Y_zbar, W> Y - <Y, W> Y_zbar),
/// Y* = -W / <Y, W>; nullity of W is preserved exactly by the flow.
DarbouxState darboux_transform(const SurfaceChart& source, double theta, const DarbouxOptions& options = {});

/// Four vectors spanning a Lorentzian 4-space of R^6_2.
struct RoundTwoSphere {
  std::array<Vec6, 4> basis;
  /// Eigenvalue signs of the Gram matrix (positive, negative).
  std::pair<int, int> signature() const;
};

/// Pointwise data of the Darboux pair frame {Y, Y*, P, Pbar, xi, eta}.
struct DarbouxFramePoint {
  Vec6 Y, Ystar, xi, eta, Nstar, Lstar, Rstar;
  CVec6 P;
  cplx mu;
  double f1 = 0.0, f2 = 0.0;
  cplx lambda1, lambda2;
  RoundTwoSphere sphere;
  /// Residuals of the six lines of the structure system in the pair frame,
  /// relative to max(1, |lhs|). xi and eta carry the normal connection terms
  /// alpha xi and -alpha eta.
  std::array<double, 6> structure{};
  /// |<xi,xi>|, |<eta,eta>|, |<xi,eta> + 1|.
  std::array<double, 3> null_pair{};
  /// Distance of Y*_z from Span_C{Y*, Y, Y_zbar}, relative to |Y*_z|.
  double span_residual = 0.0;
  /// Largest principal-angle sine between Span{Y, Y*, Y_u, Y_v} and Span{Y, Y*, Y*_u, Y*_v}.
  double envelope_angle = 0.0;
  /// |<l, l*> + 1| for l = L/(2 lambda2), l* = -(theta / 2 f2) L*.
  double lift_pairing = 0.0;
  /// D^theta residual of (l, l*), relative to |l*_z| + |theta l_zbar|.
  double dtheta_residual = 0.0;
  /// f2 vanishes here (relative to |Y*|), so l* is undefined.
  bool lift_singular = false;
  /// Node is in DarbouxState::singular_mask.
  bool pair_singular = false;
};

DarbouxFramePoint darboux_frame_point(const SurfaceChart& source, const DarbouxState& state, int i, int j,
                                      const FrameOptions& options = {});

/// darboux_frame_point at every node.
Grid<DarbouxFramePoint> darboux_frame(const SurfaceChart& source, const DarbouxState& state,
                                      const FrameOptions& options = {});

}  // namespace lorentz_iso
