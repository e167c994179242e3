#pragma once

// Linear algebra over pseudo-Euclidean spaces R^n_s, specialised to R^6_2.
//
// The form is <x,x> = x_1^2 + ... + x_{n-s}^2 - x_{n-s+1}^2 - ... - x_n^2.
// On complex vectors it is extended bilinearly (no conjugation); callers
// conjugate explicitly.

#include <array>
#include <complex>
#include <span>

#include <Eigen/Dense>

#include "lorentz_iso/error.hpp"
#include "lorentz_iso/jet.hpp"

namespace lorentz_iso {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using CVec6 = Eigen::Matrix<std::complex<double>, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

struct Signature {
  int positive_count = 4;
  int negative_count = 2;

  int dimension() const { return positive_count + negative_count; }
  bool operator==(const Signature&) const = default;

  /// Validated constructor; both counts non-negative.
  static Signature make(int positive, int negative);
  static Signature r62() { return {4, 2}; }
  static Signature r41() { return {3, 1}; }
  static Signature r51() { return {4, 1}; }
  static Signature r52() { return {3, 2}; }
};

class PseudoVector {
 public:
  PseudoVector(Eigen::VectorXd coords, Signature signature);
  /// Element of R^6_2.
  explicit PseudoVector(const Vec6& coords) : PseudoVector(Eigen::VectorXd(coords), Signature::r62()) {}

  const Eigen::VectorXd& coords() const { return coords_; }
  const Signature& signature() const { return signature_; }
  int dimension() const { return signature_.dimension(); }
  double operator[](int k) const { return coords_[k]; }

  /// Coordinates as an R^6_2 vector; throws unless the signature is (4,2).
  Vec6 as_vec6() const;

  PseudoVector operator+(const PseudoVector& o) const;
  PseudoVector operator-(const PseudoVector& o) const;
  PseudoVector operator*(double s) const;

 private:
  Eigen::VectorXd coords_;
  Signature signature_;
};

class ComplexPseudoVector {
 public:
  ComplexPseudoVector(PseudoVector real_part, PseudoVector imag_part);
  explicit ComplexPseudoVector(const CVec6& v);

  const PseudoVector& real_part() const { return re_; }
  const PseudoVector& imag_part() const { return im_; }
  ComplexPseudoVector conj() const;

 private:
  PseudoVector re_;
  PseudoVector im_;
};

/// A point of real projective space; equality is up to nonzero real scale.
class ProjectivePoint {
 public:
  explicit ProjectivePoint(PseudoVector representative);
  const PseudoVector& representative() const { return rep_; }

 private:
  PseudoVector rep_;
};

double inner(const PseudoVector& x, const PseudoVector& y);
std::complex<double> inner(const ComplexPseudoVector& x, const ComplexPseudoVector& y);

struct NullPair {
  PseudoVector L;
  PseudoVector R;
};

/// Null basis (L, R) of the Lorentzian plane span{b1, b2} with <L,R> = -1.
NullPair null_basis_of_lorentzian_plane(const PseudoVector& b1, const PseudoVector& b2, double tol = 1e-12);

/// Determinant of the matrix whose columns are the six vectors.
double orientation_det(std::span<const PseudoVector> vectors);

/// Sine of the Euclidean angle between the lines spanned by the representatives.
double projective_distance(const ProjectivePoint& p, const ProjectivePoint& q);

// ---------------------------------------------------------------------------
// Fixed-size R^6_2 helpers used by the geometry pipeline.

inline constexpr std::array<double, 6> kMetric62 = {1.0, 1.0, 1.0, 1.0, -1.0, -1.0};

inline Mat6 metric62() { return Vec6(1.0, 1.0, 1.0, 1.0, -1.0, -1.0).asDiagonal(); }

inline double inner(const Vec6& x, const Vec6& y) {
  return x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3] - x[4] * y[4] - x[5] * y[5];
}

inline std::complex<double> inner(const CVec6& x, const CVec6& y) {
  return x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3] - x[4] * y[4] - x[5] * y[5];
}

inline std::complex<double> inner(const CVec6& x, const Vec6& y) { return inner(x, CVec6(y.cast<std::complex<double>>())); }
inline std::complex<double> inner(const Vec6& x, const CVec6& y) { return inner(y, x); }

double projective_distance(const Vec6& p, const Vec6& q);
double orientation_det(const std::array<Vec6, 6>& vectors);

// ---------------------------------------------------------------------------
// Jet-valued vectors of R^6_2.

template <class T>
using JetVec = std::array<Jet<T>, 6>;
using RJetVec = JetVec<double>;
using CJetVec = JetVec<std::complex<double>>;

template <class A, class B>
JetProduct<A, B> inner(const JetVec<A>& x, const JetVec<B>& y) {
  JetProduct<A, B> acc = x[0] * y[0];
  for (int k = 1; k < 6; ++k) {
    if (kMetric62[k] > 0)
      acc += x[k] * y[k];
    else
      acc -= x[k] * y[k];
  }
  return acc;
}

template <class A, class B>
JetVec<std::common_type_t<A, B>> operator+(const JetVec<A>& x, const JetVec<B>& y) {
  JetVec<std::common_type_t<A, B>> out;
  for (int k = 0; k < 6; ++k) out[k] = x[k] + y[k];
  return out;
}

template <class A, class B>
JetVec<std::common_type_t<A, B>> operator-(const JetVec<A>& x, const JetVec<B>& y) {
  JetVec<std::common_type_t<A, B>> out;
  for (int k = 0; k < 6; ++k) out[k] = x[k] - y[k];
  return out;
}

/// Scalar-jet times vector-jet.
template <class A, class B>
JetVec<std::common_type_t<A, B>> operator*(const Jet<A>& s, const JetVec<B>& x) {
  JetVec<std::common_type_t<A, B>> out;
  for (int k = 0; k < 6; ++k) out[k] = s * x[k];
  return out;
}

template <class T, class S, class = std::enable_if_t<std::is_arithmetic_v<S> || jet_detail::is_complex<S>::value>>
JetVec<std::common_type_t<T, S>> operator*(S s, const JetVec<T>& x) {
  JetVec<std::common_type_t<T, S>> out;
  for (int k = 0; k < 6; ++k) out[k] = x[k] * s;
  return out;
}

template <class T>
JetVec<T> d_u(const JetVec<T>& x) {
  JetVec<T> out;
  for (int k = 0; k < 6; ++k) out[k] = d_u(x[k]);
  return out;
}

template <class T>
JetVec<T> d_v(const JetVec<T>& x) {
  JetVec<T> out;
  for (int k = 0; k < 6; ++k) out[k] = d_v(x[k]);
  return out;
}

template <class T>
CJetVec d_z(const JetVec<T>& x) {
  CJetVec out;
  for (int k = 0; k < 6; ++k) out[k] = d_z(x[k]);
  return out;
}

template <class T>
CJetVec d_zbar(const JetVec<T>& x) {
  CJetVec out;
  for (int k = 0; k < 6; ++k) out[k] = d_zbar(x[k]);
  return out;
}

template <class T>
JetVec<T> truncated(const JetVec<T>& x, int order) {
  JetVec<T> out;
  for (int k = 0; k < 6; ++k) out[k] = x[k].truncated(order);
  return out;
}

template <class T>
int order(const JetVec<T>& x) {
  int o = x[0].order();
  for (int k = 1; k < 6; ++k) o = std::min(o, x[k].order());
  return o;
}

inline Vec6 value(const RJetVec& x) {
  Vec6 out;
  for (int k = 0; k < 6; ++k) out[k] = x[k].value();
  return out;
}

inline CVec6 value(const CJetVec& x) {
  CVec6 out;
  for (int k = 0; k < 6; ++k) out[k] = x[k].value();
  return out;
}

/// Value of the partial d^{i+j}/du^i dv^j of a vector jet.
inline Vec6 partial(const RJetVec& x, int i, int j) {
  Vec6 out;
  for (int k = 0; k < 6; ++k) out[k] = x[k].partial(i, j);
  return out;
}

inline RJetVec real(const CJetVec& x) {
  RJetVec out;
  for (int k = 0; k < 6; ++k) out[k] = real(x[k]);
  return out;
}

inline RJetVec imag(const CJetVec& x) {
  RJetVec out;
  for (int k = 0; k < 6; ++k) out[k] = imag(x[k]);
  return out;
}

inline CJetVec conj(const CJetVec& x) {
  CJetVec out;
  for (int k = 0; k < 6; ++k) out[k] = conj(x[k]);
  return out;
}

/// Constant vector jet of the given order.
inline RJetVec constant_jet(const Vec6& v, int order) {
  RJetVec out;
  for (int k = 0; k < 6; ++k) out[k] = RJet(v[k], order);
  return out;
}

}  // namespace lorentz_iso
