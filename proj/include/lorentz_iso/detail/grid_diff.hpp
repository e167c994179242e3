#pragma once

// Second-order finite differences of node fields over a GridSpec.

#include <vector>

#include "lorentz_iso/grid.hpp"

namespace lorentz_iso::detail {

struct Tap {
  int index;
  double weight;
};
using Stencil = std::vector<Tap>;

/// Weights for the deriv-th derivative (0, 1 or 2) at node k of an axis with
/// n nodes and spacing h: central, wrapped when periodic, one-sided at the
/// ends otherwise.
inline Stencil axis_stencil(int n, bool periodic, double h, int k, int deriv) {
  if (deriv == 0) return {{k, 1.0}};
  const int need = deriv == 1 ? 3 : (periodic ? 3 : 4);
  if (n < need) throw Error(ErrorKind::stencil, "grid axis too short for a second-order difference");
  auto wrap = [&](int m) { return ((m % n) + n) % n; };
  if (deriv == 1) {
    const double c = 1.0 / (2.0 * h);
    if (periodic || (k > 0 && k < n - 1)) return {{wrap(k - 1), -c}, {wrap(k + 1), c}};
    if (k == 0) return {{0, -3.0 * c}, {1, 4.0 * c}, {2, -c}};
    return {{n - 1, 3.0 * c}, {n - 2, -4.0 * c}, {n - 3, c}};
  }
  const double c = 1.0 / (h * h);
  if (periodic || (k > 0 && k < n - 1)) return {{wrap(k - 1), c}, {k, -2.0 * c}, {wrap(k + 1), c}};
  if (k == 0) return {{0, 2.0 * c}, {1, -5.0 * c}, {2, 4.0 * c}, {3, -c}};
  return {{n - 1, 2.0 * c}, {n - 2, -5.0 * c}, {n - 3, 4.0 * c}, {n - 4, -c}};
}

class GridDiff {
 public:
  explicit GridDiff(const GridSpec& g) : g_(g) {}

  /// d^{a+b} f / du^a dv^b at node (i, j), a + b <= 2, for f(i, j) -> T.
  template <class F>
  auto partial(int i, int j, int a, int b, F&& f) const {
    const Stencil su = axis_stencil(g_.nu, g_.periodic_u, g_.hu(), i, a);
    const Stencil sv = axis_stencil(g_.nv, g_.periodic_v, g_.hv(), j, b);
    using T = std::decay_t<decltype(f(0, 0))>;
    T out = su[0].weight * sv[0].weight * f(su[0].index, sv[0].index);
    for (std::size_t p = 0; p < su.size(); ++p)
      for (std::size_t q = 0; q < sv.size(); ++q)
        if (p != 0 || q != 0) out = out + su[p].weight * sv[q].weight * f(su[p].index, sv[q].index);
    return out;
  }

 private:
  GridSpec g_;
};

}  // namespace lorentz_iso::detail
