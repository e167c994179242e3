#pragma once

// Truncated bivariate Taylor arithmetic.
//
// A Jet<T> holds the Taylor coefficients c(i,j) of a smooth function of two
// real variables (u,v) around a base point, f(u0+du, v0+dv) = sum c(i,j) du^i dv^j
// for i+j <= order. Arithmetic truncates to the smaller operand order, so a
// computation carried out on jets yields exact partial derivatives of the
// composed map up to the surviving order. T is double or std::complex<double>.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <type_traits>
#include <vector>

#include "lorentz_iso/error.hpp"

namespace lorentz_iso {

inline constexpr int kMaxJetOrder = 12;

namespace jet_detail {

constexpr int count(int order) { return order < 0 ? 0 : (order + 1) * (order + 2) / 2; }
constexpr int index(int i, int j) { return (i + j) * (i + j + 1) / 2 + j; }

struct Exponent {
  int i;
  int j;
};

/// Exponent pair for each flat coefficient index.
const std::array<Exponent, count(kMaxJetOrder)>& exponents();

/// Product triples (a, b, out) sorted by the total degree of out; the first
/// prefix[k] entries are exactly those needed for a product truncated at order k.
struct ProductTable {
  std::vector<std::array<std::uint8_t, 3>> entries;
  std::array<int, kMaxJetOrder + 1> prefix{};
};
const ProductTable& product_table();

double factorial(int n);

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

}  // namespace jet_detail

template <class T>
class Jet {
 public:
  static constexpr int kCapacity = jet_detail::count(kMaxJetOrder);
  using value_type = T;

  Jet() : order_(0) { c_[0] = T(0); }

  explicit Jet(int order) : order_(order) {
    check_order(order);
    std::fill_n(c_.begin(), size(), T(0));
  }

  Jet(T value, int order) : Jet(order) { c_[0] = value; }

  Jet(const Jet& other) : order_(other.order_) { std::copy_n(other.c_.begin(), size(), c_.begin()); }

  Jet& operator=(const Jet& other) {
    order_ = other.order_;
    std::copy_n(other.c_.begin(), size(), c_.begin());
    return *this;
  }

  template <class U, class = std::enable_if_t<!std::is_same_v<U, T> && std::is_convertible_v<U, T>>>
  Jet(const Jet<U>& other) : order_(other.order()) {  // NOLINT: real -> complex promotion
    for (int k = 0; k < size(); ++k) c_[k] = T(other[k]);
  }

  /// The coordinate function u (base value u0) as a jet.
  static Jet variable_u(double u0, int order) {
    Jet j(T(u0), order);
    if (order >= 1) j.coeff(1, 0) = T(1);
    return j;
  }

  static Jet variable_v(double v0, int order) {
    Jet j(T(v0), order);
    if (order >= 1) j.coeff(0, 1) = T(1);
    return j;
  }

  int order() const { return order_; }
  int size() const { return jet_detail::count(order_); }

  T value() const { return c_[0]; }

  T operator[](int k) const { return c_[k]; }
  T& operator[](int k) { return c_[k]; }

  T coeff(int i, int j) const { return c_[jet_detail::index(i, j)]; }
  T& coeff(int i, int j) { return c_[jet_detail::index(i, j)]; }

  /// d^{i+j} f / du^i dv^j at the base point.
  T partial(int i, int j) const {
    return coeff(i, j) * T(jet_detail::factorial(i) * jet_detail::factorial(j));
  }

  Jet truncated(int order) const {
    Jet out(*this);
    out.order_ = std::min(order_, order);
    return out;
  }

  /// Evaluates the truncated Taylor polynomial at offset (du, dv).
  T evaluate(double du, double dv) const {
    const auto& ex = jet_detail::exponents();
    T sum(0);
    for (int k = 0; k < size(); ++k) sum += c_[k] * T(std::pow(du, ex[k].i) * std::pow(dv, ex[k].j));
    return sum;
  }

  Jet& operator+=(const Jet& o) {
    order_ = std::min(order_, o.order_);
    for (int k = 0; k < size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    order_ = std::min(order_, o.order_);
    for (int k = 0; k < size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(T s) {
    for (int k = 0; k < size(); ++k) c_[k] *= s;
    return *this;
  }
  Jet& operator+=(T s) {
    c_[0] += s;
    return *this;
  }
  Jet& operator-=(T s) {
    c_[0] -= s;
    return *this;
  }

  Jet operator-() const {
    Jet out(*this);
    for (int k = 0; k < size(); ++k) out.c_[k] = -out.c_[k];
    return out;
  }

 private:
  static void check_order(int order) {
    if (order < 0 || order > kMaxJetOrder) throw Error(ErrorKind::jet_order, "jet order out of range");
  }

  int order_;
  std::array<T, kCapacity> c_;
};

using RJet = Jet<double>;
using CJet = Jet<std::complex<double>>;

template <class A, class B>
using JetProduct = Jet<std::common_type_t<A, B>>;

template <class A, class B>
JetProduct<A, B> operator*(const Jet<A>& a, const Jet<B>& b) {
  const int order = std::min(a.order(), b.order());
  JetProduct<A, B> out(order);
  const auto& table = jet_detail::product_table();
  const int n = table.prefix[order];
  for (int k = 0; k < n; ++k) {
    const auto& e = table.entries[k];
    out[e[2]] += a[e[0]] * b[e[1]];
  }
  return out;
}

template <class A, class B>
JetProduct<A, B> operator+(const Jet<A>& a, const Jet<B>& b) {
  JetProduct<A, B> out(a);
  out += JetProduct<A, B>(b);
  return out;
}

template <class A, class B>
JetProduct<A, B> operator-(const Jet<A>& a, const Jet<B>& b) {
  JetProduct<A, B> out(a);
  out -= JetProduct<A, B>(b);
  return out;
}

template <class T, class S, class = std::enable_if_t<std::is_arithmetic_v<S> || jet_detail::is_complex<S>::value>>
Jet<std::common_type_t<T, S>> operator*(const Jet<T>& a, S s) {
  Jet<std::common_type_t<T, S>> out(a);
  out *= std::common_type_t<T, S>(s);
  return out;
}

template <class T, class S, class = std::enable_if_t<std::is_arithmetic_v<S> || jet_detail::is_complex<S>::value>>
Jet<std::common_type_t<T, S>> operator*(S s, const Jet<T>& a) {
  return a * s;
}

template <class T, class S, class = std::enable_if_t<std::is_arithmetic_v<S> || jet_detail::is_complex<S>::value>>
Jet<std::common_type_t<T, S>> operator+(const Jet<T>& a, S s) {
  Jet<std::common_type_t<T, S>> out(a);
  out += std::common_type_t<T, S>(s);
  return out;
}

template <class T, class S, class = std::enable_if_t<std::is_arithmetic_v<S> || jet_detail::is_complex<S>::value>>
Jet<std::common_type_t<T, S>> operator+(S s, const Jet<T>& a) {
  return a + s;
}

template <class T, class S, class = std::enable_if_t<std::is_arithmetic_v<S> || jet_detail::is_complex<S>::value>>
Jet<std::common_type_t<T, S>> operator-(const Jet<T>& a, S s) {
  Jet<std::common_type_t<T, S>> out(a);
  out -= std::common_type_t<T, S>(s);
  return out;
}

template <class T, class S, class = std::enable_if_t<std::is_arithmetic_v<S> || jet_detail::is_complex<S>::value>>
Jet<std::common_type_t<T, S>> operator-(S s, const Jet<T>& a) {
  return -a + s;
}

/// f(x) from the Taylor coefficients taylor[k] = f^(k)(x0)/k! of f at x0 = x.value().
template <class T>
Jet<T> compose(const Jet<T>& x, const std::vector<T>& taylor) {
  Jet<T> delta(x);
  delta[0] = T(0);
  const int n = std::min<int>(x.order(), static_cast<int>(taylor.size()) - 1);
  Jet<T> acc(taylor[n], x.order());
  for (int k = n - 1; k >= 0; --k) {
    acc = acc * delta;
    acc[0] += taylor[k];
  }
  return acc;
}

template <class T>
Jet<T> exp(const Jet<T>& x) {
  const T e = std::exp(x.value());
  std::vector<T> t(x.order() + 1);
  for (int k = 0; k <= x.order(); ++k) t[k] = e / T(jet_detail::factorial(k));
  return compose(x, t);
}

template <class T>
Jet<T> sin(const Jet<T>& x) {
  const T s = std::sin(x.value()), c = std::cos(x.value());
  const T cyc[4] = {s, c, -s, -c};
  std::vector<T> t(x.order() + 1);
  for (int k = 0; k <= x.order(); ++k) t[k] = cyc[k % 4] / T(jet_detail::factorial(k));
  return compose(x, t);
}

template <class T>
Jet<T> cos(const Jet<T>& x) {
  const T s = std::sin(x.value()), c = std::cos(x.value());
  const T cyc[4] = {c, -s, -c, s};
  std::vector<T> t(x.order() + 1);
  for (int k = 0; k <= x.order(); ++k) t[k] = cyc[k % 4] / T(jet_detail::factorial(k));
  return compose(x, t);
}

/// (x0 + d)^p expanded with generalized binomial coefficients.
template <class T>
Jet<T> pow(const Jet<T>& x, double p) {
  const T x0 = x.value();
  if (x0 == T(0)) throw Error(ErrorKind::degenerate_input, "jet power at zero base value");
  std::vector<T> t(x.order() + 1);
  T binom(1);
  for (int k = 0; k <= x.order(); ++k) {
    t[k] = binom * std::pow(x0, T(p - k));
    binom *= T((p - k) / (k + 1));
  }
  return compose(x, t);
}

template <class T>
Jet<T> sqrt(const Jet<T>& x) {
  return pow(x, 0.5);
}

template <class T>
Jet<T> recip(const Jet<T>& x) {
  const T x0 = x.value();
  if (x0 == T(0)) throw Error(ErrorKind::degenerate_input, "jet reciprocal of zero");
  std::vector<T> t(x.order() + 1);
  T p = T(1) / x0;
  for (int k = 0; k <= x.order(); ++k) {
    t[k] = (k % 2 == 0 ? p : -p);
    p /= x0;
  }
  return compose(x, t);
}

template <class T>
Jet<T> log(const Jet<T>& x) {
  const T x0 = x.value();
  std::vector<T> t(x.order() + 1);
  t[0] = std::log(x0);
  T p(1);
  for (int k = 1; k <= x.order(); ++k) {
    p /= x0;
    t[k] = (k % 2 == 1 ? p : -p) / T(k);
  }
  return compose(x, t);
}

template <class A, class B>
JetProduct<A, B> operator/(const Jet<A>& a, const Jet<B>& b) {
  return a * recip(JetProduct<A, B>(b));
}

// Partial derivatives. Each lowers the order by one; differentiating an
// order-0 jet is an error because the result is unknown.

template <class T>
Jet<T> d_u(const Jet<T>& f) {
  if (f.order() < 1) throw Error(ErrorKind::jet_order, "d/du of an order-0 jet");
  Jet<T> out(f.order() - 1);
  for (int d = 0; d < f.order(); ++d)
    for (int j = 0; j <= d; ++j) {
      const int i = d - j;
      out.coeff(i, j) = T(i + 1) * f.coeff(i + 1, j);
    }
  return out;
}

template <class T>
Jet<T> d_v(const Jet<T>& f) {
  if (f.order() < 1) throw Error(ErrorKind::jet_order, "d/dv of an order-0 jet");
  Jet<T> out(f.order() - 1);
  for (int d = 0; d < f.order(); ++d)
    for (int j = 0; j <= d; ++j) {
      const int i = d - j;
      out.coeff(i, j) = T(j + 1) * f.coeff(i, j + 1);
    }
  return out;
}

/// Wirtinger derivatives for z = u + iv: d/dz = (d/du - i d/dv)/2.
template <class T>
CJet d_z(const Jet<T>& f) {
  const std::complex<double> half_i(0.0, 0.5);
  return CJet(d_u(f)) * 0.5 - CJet(d_v(f)) * half_i;
}

template <class T>
CJet d_zbar(const Jet<T>& f) {
  const std::complex<double> half_i(0.0, 0.5);
  return CJet(d_u(f)) * 0.5 + CJet(d_v(f)) * half_i;
}

inline CJet conj(const CJet& f) {
  CJet out(f);
  for (int k = 0; k < out.size(); ++k) out[k] = std::conj(out[k]);
  return out;
}

inline RJet real(const CJet& f) {
  RJet out(f.order());
  for (int k = 0; k < f.size(); ++k) out[k] = f[k].real();
  return out;
}

inline RJet imag(const CJet& f) {
  RJet out(f.order());
  for (int k = 0; k < f.size(); ++k) out[k] = f[k].imag();
  return out;
}

/// Modulus of a complex jet; the value must be nonzero.
inline RJet abs(const CJet& f) {
  const RJet re = real(f), im = imag(f);
  return sqrt(re * re + im * im);
}

}  // namespace lorentz_iso
