#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "owshift/hvector.hpp"
#include "owshift/types.hpp"

namespace ows {

enum class Backend {
  ConstantMatrix,
  PeriodicMatrices,
  ListedMatricesWithTail,
  ConstantDiagonal,
  BilateralShiftScalar,
  ScalarSequence,
};

std::string_view to_string(Backend b);
std::optional<Backend> backend_from_string(std::string_view s);

/// Declared uniform bounds (sup ||A_n||, sup ||A_n^-1||).
struct DeclaredBounds {
  double sup_norm = 0.0;
  double sup_inverse_norm = 0.0;
};

enum class TailKind { Constant, Periodic };

struct ConstantMatrixData {
  Matrix t;
};

struct PeriodicMatricesData {
  std::vector<Matrix> period;
};

/// A_n = listed[n] for n < listed.size(). Past the list, a Constant tail
/// repeats the last listed matrix and a Periodic tail cycles through the
/// last `tail_period` listed matrices.
struct ListedMatricesData {
  std::vector<Matrix> listed;
  TailKind tail = TailKind::Constant;
  Index tail_period = 1;
};

/// A_n = diag(entries) for every n.
struct ConstantDiagonalData {
  std::vector<double> entries;
};

struct WeightBlock {
  double value = 1.0;
  Index length = 1;
};

/// A_n = T for every n, where T e_m = w_m e_{m+1} on l2(Z). The blocks lay
/// out w_0, w_1, ... consecutively; with `mirror` the negative indices are
/// w_{-1-m} = w_m, otherwise only indices >= 0 are stored.
struct BilateralShiftData {
  std::vector<WeightBlock> blocks;
  bool mirror = true;
};

/// Scalar weights w_n = weights[n] for n < weights.size(). A Constant tail
/// continues with `tail_value`; a Periodic tail repeats the listed array.
struct ScalarSequenceData {
  std::vector<double> weights;
  TailKind tail = TailKind::Constant;
  double tail_value = 1.0;
};

using WeightData = std::variant<ConstantMatrixData, PeriodicMatricesData, ListedMatricesData,
                                ConstantDiagonalData, BilateralShiftData, ScalarSequenceData>;

/// The bilateral weighted shift T restricted to its stored index window
/// [lo, hi): weights[i] is w_{lo + i}.
struct ShiftOperator {
  Index lo = 0;
  Index hi = 0;
  std::shared_ptr<const std::vector<double>> weights;
};

using WeightOperator = std::variant<Matrix, ShiftOperator>;

namespace detail {
class WeightModel;
}

/// Immutable description of the weight sequence (A_n). Copies share the
/// evaluated model, so a spec may be used from several threads.
class WeightSpec {
 public:
  explicit WeightSpec(WeightData data, std::optional<DeclaredBounds> bounds = std::nullopt);

  static WeightSpec constant_matrix(Matrix t);
  static WeightSpec periodic_matrices(std::vector<Matrix> period);
  static WeightSpec listed_matrices(std::vector<Matrix> listed, TailKind tail, Index tail_period = 1);
  static WeightSpec constant_diagonal(std::vector<double> entries);
  static WeightSpec bilateral_shift(std::vector<WeightBlock> blocks, bool mirror = true);
  static WeightSpec scalar_sequence(std::vector<double> weights, TailKind tail, double tail_value = 1.0);
  static WeightSpec constant_scalar(double w);

  Backend backend() const;
  /// Dimension of H; 0 for the bilateral shift, whose H is l2(Z).
  Index dim() const;
  const WeightData& data() const { return data_; }
  const std::optional<DeclaredBounds>& declared_bounds() const { return bounds_; }

  /// Spec with every A_n replaced by c * A_n (c > 0). It shares this
  /// spec's evaluated model, so log quantities shift by exactly n log c.
  WeightSpec scaled(double c) const;

  const detail::WeightModel& model() const { return *model_; }

 private:
  WeightData data_;
  std::optional<DeclaredBounds> bounds_;
  std::shared_ptr<const detail::WeightModel> model_;
};

/// B_{k+n} B_k^{-1} = A_{k+n-1} ... A_k held as exp(log_scale) * core.
struct ProductWindow {
  Index start = 0;
  Index length = 0;
  double log_scale = 0.0;
  std::variant<Matrix, ShiftOperator> core;
};

/// One nonzero coordinate block of an element of the direct sum.
struct SlotEntry {
  Index slot = 0;
  HVector component;
};

/// Finitely supported element of the direct sum of copies of H. Slots are
/// kept strictly increasing.
class EmbeddedVector {
 public:
  EmbeddedVector() = default;
  explicit EmbeddedVector(std::vector<SlotEntry> entries);

  /// x at `slot` and zero elsewhere.
  static EmbeddedVector single(Index slot, HVector x);

  const std::vector<SlotEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  bool is_zero() const;
  double norm_squared() const;
  double norm() const;
  const HVector* find(Index slot) const;

 private:
  std::vector<SlotEntry> entries_;
};

EmbeddedVector operator-(const EmbeddedVector& a, const EmbeddedVector& b);
EmbeddedVector operator*(Complex c, const EmbeddedVector& a);
Complex inner(const EmbeddedVector& a, const EmbeddedVector& b);

/// A_n.
WeightOperator weight_at(const WeightSpec& spec, Index n);

/// B_{k+n} B_k^{-1} in log-scaled form.
ProductWindow window(const WeightSpec& spec, Index k, Index n);

/// B_{k+n} B_k^{-1} x, renormalized at every step.
ScaledVector window_apply(const WeightSpec& spec, Index k, Index n, const HVector& x);

/// log ||B_{k+n} B_k^{-1}||.
double window_norm(const WeightSpec& spec, Index k, Index n);

/// log (1 / ||B_k B_{k+n}^{-1}||), the log of the smallest singular value
/// of the window.
double window_conorm(const WeightSpec& spec, Index k, Index n);

/// (B_n^*)^{-1} x.
ScaledVector inverse_adjoint_apply(const WeightSpec& spec, Index n, const HVector& x);

/// B_n^{-1} x.
ScaledVector inverse_apply(const WeightSpec& spec, Index n, const HVector& x);

/// S_u^n x, materialized.
EmbeddedVector shift_apply(const WeightSpec& spec, const EmbeddedVector& x, Index times);

/// S_u^* x.
EmbeddedVector adjoint_apply(const WeightSpec& spec, const EmbeddedVector& x);

/// Log of ||S_u^n x|| for n = 0..n_hi, stepping S_u one application at a
/// time with renormalization of the whole vector.
std::vector<double> shift_orbit_log_norms(const WeightSpec& spec, const EmbeddedVector& x, Index n_hi);

}  // namespace ows
