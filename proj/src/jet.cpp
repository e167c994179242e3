#include "lorentz_iso/jet.hpp"

#include <algorithm>

namespace lorentz_iso::jet_detail {

const std::array<Exponent, count(kMaxJetOrder)>& exponents() {
  static const auto table = [] {
    std::array<Exponent, count(kMaxJetOrder)> ex{};
    for (int d = 0; d <= kMaxJetOrder; ++d)
      for (int j = 0; j <= d; ++j) ex[index(d - j, j)] = {d - j, j};
    return ex;
  }();
  return table;
}

const ProductTable& product_table() {
  static const ProductTable table = [] {
    ProductTable t;
    const auto& ex = exponents();
    const int n = count(kMaxJetOrder);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const int i = ex[a].i + ex[b].i, j = ex[a].j + ex[b].j;
        if (i + j > kMaxJetOrder) continue;
        t.entries.push_back({static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                             static_cast<std::uint8_t>(index(i, j))});
      }
    std::stable_sort(t.entries.begin(), t.entries.end(), [&](const auto& x, const auto& y) {
      return ex[x[2]].i + ex[x[2]].j < ex[y[2]].i + ex[y[2]].j;
    });
    for (int k = 0; k <= kMaxJetOrder; ++k)
      t.prefix[k] = static_cast<int>(std::count_if(t.entries.begin(), t.entries.end(), [&](const auto& e) {
        return ex[e[2]].i + ex[e[2]].j <= k;
      }));
    return t;
  }();
  return table;
}

double factorial(int n) {
  static const auto table = [] {
    std::array<double, 2 * kMaxJetOrder + 2> f{};
    f[0] = 1.0;
    for (std::size_t k = 1; k < f.size(); ++k) f[k] = f[k - 1] * static_cast<double>(k);
    return f;
  }();
  return table[n];
}

}  // namespace lorentz_iso::jet_detail
