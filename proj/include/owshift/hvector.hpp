#pragma once

#include <cmath>
#include <limits>

#include "owshift/types.hpp"

namespace ows {

/// Finitely supported vector of the coefficient space H.
///
/// For matrix-backed weights H = C^d and `offset` is 0. For the bilateral
/// shift backend H = l2(Z) and coeffs[i] is the coordinate at basis index
/// offset + i.
struct HVector {
  Index offset = 0;
  Vector coeffs;

  HVector() = default;
  explicit HVector(Vector c, Index off = 0) : offset(off), coeffs(std::move(c)) {}

  static HVector basis(Index dim, Index i);
  static HVector unit_at(Index index);

  Index size() const { return coeffs.size(); }
  Index last() const { return offset + coeffs.size(); }  // one past
  double norm() const { return coeffs.norm(); }
  bool is_zero() const;

  /// Coordinate at absolute basis index `i`, zero outside the support.
  Complex at(Index i) const;
};

HVector operator+(const HVector& a, const HVector& b);
HVector operator-(const HVector& a, const HVector& b);
HVector operator*(Complex c, const HVector& a);

/// <a, b>, linear in the first argument.
Complex inner(const HVector& a, const HVector& b);

/// Drops leading and trailing zero coordinates.
HVector trimmed(const HVector& a);

/// exp(log_scale) * unit, with unit.norm() == 1 (or unit == 0 and
/// log_scale == -inf).
struct ScaledVector {
  HVector unit;
  double log_scale = -std::numeric_limits<double>::infinity();

  static ScaledVector from(HVector v);
  double log_norm() const { return log_scale; }
  bool is_zero() const { return std::isinf(log_scale) && log_scale < 0; }

  /// Plain vector; may overflow for large log_scale.
  HVector materialize() const;
  /// Renormalizes after an in-place change of `unit`.
  void renormalize();
};

/// a + b computed without materializing either operand.
ScaledVector add(const ScaledVector& a, const ScaledVector& b);
ScaledVector scale(const ScaledVector& a, Complex c);

/// log(exp(a) + exp(b)) for a, b possibly -inf.
double log_add(double a, double b);

}  // namespace ows
