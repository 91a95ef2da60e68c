#include "owshift/hvector.hpp"

#include <algorithm>

namespace ows {

HVector HVector::basis(Index dim, Index i) {
  Vector v = Vector::Zero(dim);
  v(i) = 1.0;
  return HVector(std::move(v));
}

HVector HVector::unit_at(Index index) {
  Vector v(1);
  v(0) = 1.0;
  return HVector(std::move(v), index);
}

bool HVector::is_zero() const {
  for (Index i = 0; i < coeffs.size(); ++i)
    if (coeffs(i) != Complex(0.0)) return false;
  return true;
}

Complex HVector::at(Index i) const {
  if (i < offset || i >= last()) return 0.0;
  return coeffs(i - offset);
}

namespace {

template <class Op>
HVector combine(const HVector& a, const HVector& b, Op op) {
  if (a.size() == 0) return op(HVector(Vector::Zero(b.size()), b.offset), b);
  if (b.size() == 0) return op(a, HVector(Vector::Zero(a.size()), a.offset));
  const Index lo = std::min(a.offset, b.offset);
  const Index hi = std::max(a.last(), b.last());
  Vector out = Vector::Zero(hi - lo);
  for (Index i = lo; i < hi; ++i) out(i - lo) = op.apply(a.at(i), b.at(i));
  return HVector(std::move(out), lo);
}

struct Plus {
  Complex apply(Complex x, Complex y) const { return x + y; }
  HVector operator()(const HVector& a, const HVector& b) const { return combine(a, b, *this); }
};
struct Minus {
  Complex apply(Complex x, Complex y) const { return x - y; }
  HVector operator()(const HVector& a, const HVector& b) const { return combine(a, b, *this); }
};

}  // namespace

HVector operator+(const HVector& a, const HVector& b) { return combine(a, b, Plus{}); }
HVector operator-(const HVector& a, const HVector& b) { return combine(a, b, Minus{}); }

HVector operator*(Complex c, const HVector& a) { return HVector(c * a.coeffs, a.offset); }

Complex inner(const HVector& a, const HVector& b) {
  const Index lo = std::max(a.offset, b.offset);
  const Index hi = std::min(a.last(), b.last());
  Complex s = 0.0;
  for (Index i = lo; i < hi; ++i) s += a.at(i) * std::conj(b.at(i));
  return s;
}

HVector trimmed(const HVector& a) {
  Index first = 0;
  Index end = a.size();
  while (first < end && a.coeffs(first) == Complex(0.0)) ++first;
  while (end > first && a.coeffs(end - 1) == Complex(0.0)) --end;
  if (first == end) return HVector(Vector(0), a.offset);
  return HVector(a.coeffs.segment(first, end - first), a.offset + first);
}

ScaledVector ScaledVector::from(HVector v) {
  ScaledVector s;
  s.unit = std::move(v);
  s.log_scale = 0.0;
  s.renormalize();
  return s;
}

void ScaledVector::renormalize() {
  const double n = unit.norm();
  if (n == 0.0 || !std::isfinite(n)) {
    if (n == 0.0) {
      log_scale = -std::numeric_limits<double>::infinity();
      return;
    }
    // Overflowed coordinates: rescale by the largest modulus first.
    const double m = unit.coeffs.cwiseAbs().maxCoeff();
    unit.coeffs /= m;
    log_scale += std::log(m);
    renormalize();
    return;
  }
  unit.coeffs /= n;
  log_scale += std::log(n);
}

HVector ScaledVector::materialize() const {
  if (is_zero()) return HVector(Vector::Zero(unit.size()), unit.offset);
  return HVector(std::exp(log_scale) * unit.coeffs, unit.offset);
}

double log_add(double a, double b) {
  if (std::isinf(a) && a < 0) return b;
  if (std::isinf(b) && b < 0) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

ScaledVector add(const ScaledVector& a, const ScaledVector& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const double m = std::max(a.log_scale, b.log_scale);
  ScaledVector out;
  out.unit = std::exp(a.log_scale - m) * a.unit + std::exp(b.log_scale - m) * b.unit;
  out.log_scale = m;
  out.renormalize();
  return out;
}

ScaledVector scale(const ScaledVector& a, Complex c) {
  if (c == Complex(0.0) || a.is_zero()) {
    ScaledVector z;
    z.unit = HVector(Vector::Zero(a.unit.size()), a.unit.offset);
    return z;
  }
  ScaledVector out = a;
  out.unit.coeffs *= c / std::abs(c);
  out.log_scale += std::log(std::abs(c));
  return out;
}

}  // namespace ows
