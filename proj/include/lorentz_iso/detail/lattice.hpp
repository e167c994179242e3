#pragma once

// Integration of linear systems X_u = X A_u, X_v = X A_v over a grid, where X
// has six columns and A_u, A_v are known as jets at every node.

#include <functional>
#include <utility>
#include <vector>

#include "lorentz_iso/grid.hpp"
#include "lorentz_iso/jet.hpp"
#include "lorentz_iso/pseudo_euclidean.hpp"

namespace lorentz_iso::detail {

using JetMatrix6 = std::array<std::array<RJet, 6>, 6>;
using Block = Eigen::Matrix<double, Eigen::Dynamic, 6>;

/// (A_u, A_v) with entries of at least the requested order at node (i, j).
using ConnectionSource = std::function<std::pair<JetMatrix6, JetMatrix6>(int i, int j, int order)>;

/// Taylor coefficients a[k] of A along one axis; returns x Phi(h) for
/// Phi' = Phi A(t), Phi(0) = I. The series of the truncated A is summed to
/// round-off, so the only error is the truncation of A.
Block transfer(const Block& x, const std::vector<Mat6>& a, double h);

struct LatticeSolution {
  /// Values integrated along the base row first, then along columns.
  Grid<Block> values;
  /// Max over nodes of |X_uv - X_vu| / max(1, |X_uv|) (max norms) between the
  /// two path orders.
  double path_residual = 0.0;
};

/// Integrates from x0 at the base node. Steps between neighbouring nodes
/// meet in the middle: X_b = X_a Phi_a(h/2) Phi_b(-h/2)^{-1}.
LatticeSolution integrate_lattice(const GridSpec& grid, GridIndex base, const Block& x0,
                                  const ConnectionSource& source, int series_order);

/// Taylor coefficients of X at a node (flat jet index) from its value and
/// the connection jets there; entries of au, av need order >= order - 1.
std::vector<Block> node_taylor(const Block& x, const JetMatrix6& au, const JetMatrix6& av, int order);

}  // namespace lorentz_iso::detail
