#pragma once

// Null basis of a Lorentzian plane, shared by the double and jet code paths.

#include <cmath>
#include <type_traits>
#include <utility>

#include "lorentz_iso/error.hpp"
#include "lorentz_iso/jet.hpp"

namespace lorentz_iso::detail {

inline double scalar_value(double x) { return x; }
inline double scalar_value(const RJet& x) { return x.value(); }

/// Returns (L, R) spanning span{b1, b2} with <L,L> = <R,R> = 0 and <L,R> = -1.
/// Requires the Gram determinant of (b1, b2) to be below -min_det.
template <class Vec, class Inner>
std::pair<Vec, Vec> null_pair(const Vec& b1, const Vec& b2, Inner&& inner, double min_det) {
  using std::sqrt;
  const auto g11 = inner(b1, b1);
  const auto g12 = inner(b1, b2);
  const auto g22 = inner(b2, b2);
  const double a = scalar_value(g11), b = scalar_value(g12), c = scalar_value(g22);
  if (!(a * c - b * b < -min_det)) throw Error(ErrorKind::signature, "plane is not Lorentzian");

  const double sgn = b >= 0.0 ? 1.0 : -1.0;
  const auto disc = sqrt(g12 * g12 - g11 * g22);
  // -g12 - sgn*sqrt(disc) has no cancellation; the second root follows from
  // the product of roots.
  const auto stable = -1.0 * g12 - sgn * disc;
  Vec n1, n2;
  if (std::abs(a) <= 1e-300 && std::abs(c) <= 1e-300) {
    n1 = b1;
    n2 = b2;
  } else if (std::abs(c) >= std::abs(a)) {
    n1 = b1 + (stable / g22) * b2;
    n2 = b1 + (g11 / stable) * b2;
  } else {
    n1 = b2 + (stable / g11) * b1;
    n2 = b2 + (g22 / stable) * b1;
  }
  const auto pairing = inner(n1, n2);
  const double p = scalar_value(pairing);
  // L = n1 / sqrt|p|, R = -n2 sqrt|p| / p keeps both vectors of comparable size.
  const double k = 1.0 / std::sqrt(std::abs(p));
  Vec L = k * n1;
  Vec R = (-1.0 / (p * k)) * n2;
  if constexpr (!std::is_same_v<std::decay_t<decltype(pairing)>, double>) {
    // Jets: rescale by the full pairing jet so <L,R> = -1 holds identically.
    const auto corr = pairing * (1.0 / p);
    R = recip(corr) * R;
  }
  return {L, R};
}

}  // namespace lorentz_iso::detail
