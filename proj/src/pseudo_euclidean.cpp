#include "lorentz_iso/pseudo_euclidean.hpp"

#include <cmath>

#include "lorentz_iso/detail/null_pair.hpp"

namespace lorentz_iso {

Signature Signature::make(int positive, int negative) {
  if (positive < 0 || negative < 0) throw Error(ErrorKind::signature, "negative signature count");
  return {positive, negative};
}

PseudoVector::PseudoVector(Eigen::VectorXd coords, Signature signature)
    : coords_(std::move(coords)), signature_(signature) {
  if (signature_.positive_count < 0 || signature_.negative_count < 0)
    throw Error(ErrorKind::signature, "negative signature count");
  if (coords_.size() != signature_.dimension())
    throw Error(ErrorKind::dimension, "coordinate count does not match signature dimension");
}

Vec6 PseudoVector::as_vec6() const {
  if (!(signature_ == Signature::r62())) throw Error(ErrorKind::dimension, "vector is not in R^6_2");
  return Vec6(coords_);
}

PseudoVector PseudoVector::operator+(const PseudoVector& o) const {
  if (!(signature_ == o.signature_)) throw Error(ErrorKind::dimension, "signature mismatch");
  return {coords_ + o.coords_, signature_};
}

PseudoVector PseudoVector::operator-(const PseudoVector& o) const {
  if (!(signature_ == o.signature_)) throw Error(ErrorKind::dimension, "signature mismatch");
  return {coords_ - o.coords_, signature_};
}

PseudoVector PseudoVector::operator*(double s) const { return {coords_ * s, signature_}; }

ComplexPseudoVector::ComplexPseudoVector(PseudoVector real_part, PseudoVector imag_part)
    : re_(std::move(real_part)), im_(std::move(imag_part)) {
  if (!(re_.signature() == im_.signature()))
    throw Error(ErrorKind::dimension, "real and imaginary parts have different signatures");
}

ComplexPseudoVector::ComplexPseudoVector(const CVec6& v)
    : ComplexPseudoVector(PseudoVector(Vec6(v.real())), PseudoVector(Vec6(v.imag()))) {}

ComplexPseudoVector ComplexPseudoVector::conj() const { return {re_, im_ * -1.0}; }

ProjectivePoint::ProjectivePoint(PseudoVector representative) : rep_(std::move(representative)) {
  if (!(rep_.coords().norm() > 0.0)) throw Error(ErrorKind::degenerate_input, "zero projective representative");
}

double inner(const PseudoVector& x, const PseudoVector& y) {
  if (!(x.signature() == y.signature())) throw Error(ErrorKind::dimension, "signature mismatch in inner product");
  const int p = x.signature().positive_count;
  const auto& a = x.coords();
  const auto& b = y.coords();
  return a.head(p).dot(b.head(p)) - a.tail(a.size() - p).dot(b.tail(b.size() - p));
}

std::complex<double> inner(const ComplexPseudoVector& x, const ComplexPseudoVector& y) {
  const double rr = inner(x.real_part(), y.real_part());
  const double ii = inner(x.imag_part(), y.imag_part());
  const double ri = inner(x.real_part(), y.imag_part());
  const double ir = inner(x.imag_part(), y.real_part());
  return {rr - ii, ri + ir};
}

NullPair null_basis_of_lorentzian_plane(const PseudoVector& b1, const PseudoVector& b2, double tol) {
  if (!(b1.signature() == b2.signature())) throw Error(ErrorKind::dimension, "signature mismatch");
  const Signature sig = b1.signature();
  auto ip = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return inner(PseudoVector(x, sig), PseudoVector(y, sig));
  };
  auto [L, R] = detail::null_pair(Eigen::VectorXd(b1.coords()), Eigen::VectorXd(b2.coords()), ip, tol * tol);
  return {PseudoVector(L, sig), PseudoVector(R, sig)};
}

double orientation_det(std::span<const PseudoVector> vectors) {
  if (vectors.empty()) throw Error(ErrorKind::dimension, "no vectors");
  const int n = vectors.front().dimension();
  if (static_cast<int>(vectors.size()) != n) throw Error(ErrorKind::dimension, "need as many vectors as dimensions");
  Eigen::MatrixXd m(n, n);
  for (int k = 0; k < n; ++k) {
    if (vectors[k].dimension() != n) throw Error(ErrorKind::dimension, "dimension mismatch");
    m.col(k) = vectors[k].coords();
  }
  return m.determinant();
}

namespace {

double line_sine(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  const double np = p.norm(), nq = q.norm();
  if (!(np > 0.0) || !(nq > 0.0)) throw Error(ErrorKind::degenerate_input, "zero projective representative");
  const Eigen::VectorXd a = p / np, b = q / nq;
  // |a - (a.b) b| is the sine of the angle, accurate for small angles.
  const double s = (a - a.dot(b) * b).norm();
  return std::min(1.0, s);
}

}  // namespace

double projective_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
  if (p.representative().dimension() != q.representative().dimension())
    throw Error(ErrorKind::dimension, "dimension mismatch");
  return line_sine(p.representative().coords(), q.representative().coords());
}

double projective_distance(const Vec6& p, const Vec6& q) { return line_sine(p, q); }

double orientation_det(const std::array<Vec6, 6>& vectors) {
  Mat6 m;
  for (int k = 0; k < 6; ++k) m.col(k) = vectors[k];
  return m.determinant();
}

}  // namespace lorentz_iso
