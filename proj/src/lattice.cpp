#include "lorentz_iso/detail/lattice.hpp"

#include <algorithm>
#include <cmath>

namespace lorentz_iso::detail {

namespace {

using Series = std::vector<Mat6>;

double max_abs(const Block& b) { return b.cwiseAbs().maxCoeff(); }

Mat6 coeff_matrix(const JetMatrix6& m, int a, int b) {
  Mat6 out;
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) out(r, c) = m[r][c].coeff(a, b);
  return out;
}

}  // namespace

Block transfer(const Block& x, const std::vector<Mat6>& a, double h) {
  const int p = static_cast<int>(a.size()) - 1;
  std::vector<Block> xs{x};
  Block sum = x;
  double hk = 1.0;
  int small = 0;
  for (int k = 0; k < 400; ++k) {
    Block next = Block::Zero(x.rows(), 6);
    for (int l = std::max(0, k - p); l <= k; ++l) next += xs[l] * a[k - l];
    next /= static_cast<double>(k + 1);
    xs.push_back(next);
    hk *= h;
    const double term = max_abs(next) * std::abs(hk);
    sum += next * hk;
    small = term <= 1e-18 * std::max(1.0, max_abs(sum)) ? small + 1 : 0;
    if (k >= p && small >= 2) return sum;
  }
  throw Error(ErrorKind::non_integrable, "transfer series did not converge; grid step too large");
}

LatticeSolution integrate_lattice(const GridSpec& g, GridIndex base, const Block& x0, const ConnectionSource& source,
                                  int series_order) {
  if (base.i < 0 || base.j < 0 || base.i >= g.nu || base.j >= g.nv)
    throw Error(ErrorKind::parameter, "base point outside the grid");
  Grid<std::pair<Series, Series>> series(g);
  parallel_for(g.size(), [&](std::size_t k) {
    const int i = static_cast<int>(k / g.nv), j = static_cast<int>(k % g.nv);
    const auto [au, av] = source(i, j, series_order);
    Series su, sv;
    for (int d = 0; d <= series_order; ++d) {
      su.push_back(coeff_matrix(au, d, 0));
      sv.push_back(coeff_matrix(av, 0, d));
    }
    series[k] = {std::move(su), std::move(sv)};
  });

  const Block eye = Mat6::Identity();
  auto step = [&](const Block& x, int i0, int j0, int i1, int j1) -> Block {
    const bool along_u = i1 != i0;
    const double h = along_u ? (i1 - i0) * g.hu() : (j1 - j0) * g.hv();
    const auto& a0 = along_u ? series.at(i0, j0).first : series.at(i0, j0).second;
    const auto& a1 = along_u ? series.at(i1, j1).first : series.at(i1, j1).second;
    const Block mid = transfer(x, a0, 0.5 * h);
    const Mat6 back = transfer(eye, a1, -0.5 * h);
    return back.transpose().partialPivLu().solve(mid.transpose()).transpose();
  };
  // Fills a line through the base of each sweep, then sweeps across it.
  auto sweep = [&](bool u_first) {
    Grid<Block> out(g);
    out.at(base.i, base.j) = x0;
    if (u_first) {
      for (int i = base.i + 1; i < g.nu; ++i) out.at(i, base.j) = step(out.at(i - 1, base.j), i - 1, base.j, i, base.j);
      for (int i = base.i - 1; i >= 0; --i) out.at(i, base.j) = step(out.at(i + 1, base.j), i + 1, base.j, i, base.j);
      parallel_for(g.nu, [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        for (int j = base.j + 1; j < g.nv; ++j) out.at(i, j) = step(out.at(i, j - 1), i, j - 1, i, j);
        for (int j = base.j - 1; j >= 0; --j) out.at(i, j) = step(out.at(i, j + 1), i, j + 1, i, j);
      });
    } else {
      for (int j = base.j + 1; j < g.nv; ++j) out.at(base.i, j) = step(out.at(base.i, j - 1), base.i, j - 1, base.i, j);
      for (int j = base.j - 1; j >= 0; --j) out.at(base.i, j) = step(out.at(base.i, j + 1), base.i, j + 1, base.i, j);
      parallel_for(g.nv, [&](std::size_t jj) {
        const int j = static_cast<int>(jj);
        for (int i = base.i + 1; i < g.nu; ++i) out.at(i, j) = step(out.at(i - 1, j), i - 1, j, i, j);
        for (int i = base.i - 1; i >= 0; --i) out.at(i, j) = step(out.at(i + 1, j), i + 1, j, i, j);
      });
    }
    return out;
  };

  LatticeSolution sol;
  sol.values = sweep(true);
  const Grid<Block> other = sweep(false);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double d = max_abs(sol.values[k] - other[k]) / std::max(1.0, max_abs(sol.values[k]));
    sol.path_residual = std::max(sol.path_residual, d);
  }
  return sol;
}

std::vector<Block> node_taylor(const Block& x, const JetMatrix6& au, const JetMatrix6& av, int order) {
  using jet_detail::index;
  const int n = jet_detail::count(order);
  std::vector<Block> c(n, Block::Zero(x.rows(), 6));
  c[index(0, 0)] = x;
  if (order == 0) return c;
  std::vector<Mat6> mu(jet_detail::count(order - 1)), mv(jet_detail::count(order - 1));
  for (int d = 0; d < order; ++d)
    for (int b = 0; b <= d; ++b) {
      mu[index(d - b, b)] = coeff_matrix(au, d - b, b);
      mv[index(d - b, b)] = coeff_matrix(av, d - b, b);
    }
  for (int j = 0; j < order; ++j) {
    Block acc = Block::Zero(x.rows(), 6);
    for (int l = 0; l <= j; ++l) acc += c[index(0, l)] * mv[index(0, j - l)];
    c[index(0, j + 1)] = acc / static_cast<double>(j + 1);
  }
  for (int i = 0; i < order; ++i)
    for (int j = 0; i + 1 + j <= order; ++j) {
      Block acc = Block::Zero(x.rows(), 6);
      for (int a = 0; a <= i; ++a)
        for (int b = 0; b <= j; ++b) acc += c[index(a, b)] * mu[index(i - a, j - b)];
      c[index(i + 1, j)] = acc / static_cast<double>(i + 1);
    }
  return c;
}

}  // namespace lorentz_iso::detail
