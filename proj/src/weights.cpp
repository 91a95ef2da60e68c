#include "owshift/weights.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "model.hpp"
#include "owshift/traces.hpp"

namespace ows {

namespace {

constexpr std::array<std::pair<Backend, std::string_view>, 6> kBackendNames{{
    {Backend::ConstantMatrix, "ConstantMatrix"},
    {Backend::PeriodicMatrices, "PeriodicMatrices"},
    {Backend::ListedMatricesWithTail, "ListedMatricesWithTail"},
    {Backend::ConstantDiagonal, "ConstantDiagonal"},
    {Backend::BilateralShiftScalar, "BilateralShiftScalar"},
    {Backend::ScalarSequence, "ScalarSequence"},
}};

constexpr Index kMaxDim = 64;
constexpr Index kMaxBilateralLength = Index{1} << 26;
constexpr double kSingularRatio = 1e-12;

struct NormPair {
  double norm = 0.0;
  double inverse_norm = 0.0;
};

NormPair check_matrix(const Matrix& m, Index d, const std::string& path) {
  if (m.rows() != d || m.cols() != d)
    throw SpecError(path, "expected a " + std::to_string(d) + "x" + std::to_string(d) + " matrix");
  if (!m.allFinite()) throw SpecError(path, "non-finite entry");
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  const double hi = s(0);
  const double lo = s(s.size() - 1);
  if (!(lo >= kSingularRatio * hi) || hi == 0.0)
    throw SingularWeight(path + ": smallest singular value " + std::to_string(lo) + " below 1e-12 x largest");
  return {hi, 1.0 / lo};
}

Index check_dim(Index d, const std::string& path) {
  if (d < 1 || d > kMaxDim) throw SpecError(path, "dimension must be in [1, 64]");
  return d;
}

NormPair check_positive(double v, const std::string& path) {
  if (!std::isfinite(v)) throw SpecError(path, "non-finite value");
  if (v == 0.0) throw SingularWeight(path + ": zero weight");
  if (v < 0.0) throw SpecError(path, "weight must be positive");
  return {v, 1.0 / v};
}

// Validates the payload and returns the largest ||A_n||, ||A_n^-1|| over
// the stored weights.
NormPair validate(const WeightData& data) {
  NormPair acc;
  auto fold = [&acc](NormPair p) {
    acc.norm = std::max(acc.norm, p.norm);
    acc.inverse_norm = std::max(acc.inverse_norm, p.inverse_norm);
  };
  struct V {
    decltype(fold)& f;
    void operator()(const ConstantMatrixData& d) const {
      const Index n = check_dim(d.t.rows(), "dim");
      f(check_matrix(d.t, n, "data.matrix"));
    }
    void operator()(const PeriodicMatricesData& d) const {
      if (d.period.empty()) throw SpecError("data.matrices", "period must contain at least one matrix");
      const Index n = check_dim(d.period.front().rows(), "dim");
      for (std::size_t i = 0; i < d.period.size(); ++i)
        f(check_matrix(d.period[i], n, "data.matrices[" + std::to_string(i) + "]"));
    }
    void operator()(const ListedMatricesData& d) const {
      if (d.listed.empty()) throw SpecError("data.matrices", "at least one matrix is required");
      const Index n = check_dim(d.listed.front().rows(), "dim");
      for (std::size_t i = 0; i < d.listed.size(); ++i)
        f(check_matrix(d.listed[i], n, "data.matrices[" + std::to_string(i) + "]"));
      if (d.tail == TailKind::Periodic &&
          (d.tail_period < 1 || d.tail_period > static_cast<Index>(d.listed.size())))
        throw SpecError("data.tail.period", "must be between 1 and the number of listed matrices");
    }
    void operator()(const ConstantDiagonalData& d) const {
      if (d.entries.empty()) throw SpecError("data.diagonal", "at least one entry is required");
      check_dim(static_cast<Index>(d.entries.size()), "dim");
      for (std::size_t i = 0; i < d.entries.size(); ++i)
        f(check_positive(d.entries[i], "data.diagonal[" + std::to_string(i) + "]"));
    }
    void operator()(const BilateralShiftData& d) const {
      if (d.blocks.empty()) throw SpecError("data.blocks", "at least one block is required");
      Index total = 0;
      for (std::size_t i = 0; i < d.blocks.size(); ++i) {
        const std::string at = "data.blocks[" + std::to_string(i) + "]";
        f(check_positive(d.blocks[i].value, at + ".value"));
        if (d.blocks[i].length < 1) throw SpecError(at + ".length", "must be at least 1");
        total += d.blocks[i].length;
        if (total > kMaxBilateralLength) throw SpecError(at + ".length", "total stored length exceeds 2^26");
      }
    }
    void operator()(const ScalarSequenceData& d) const {
      for (std::size_t i = 0; i < d.weights.size(); ++i)
        f(check_positive(d.weights[i], "data.weights[" + std::to_string(i) + "]"));
      if (d.tail == TailKind::Periodic) {
        if (d.weights.empty()) throw SpecError("data.weights", "a periodic tail needs at least one weight");
      } else {
        f(check_positive(d.tail_value, "data.tail.value"));
      }
    }
  };
  std::visit(V{fold}, data);
  return acc;
}

void check_nonzero(const HVector& x) {
  if (x.is_zero()) throw ZeroVector();
}

}  // namespace

std::string_view to_string(Backend b) {
  for (const auto& [k, name] : kBackendNames)
    if (k == b) return name;
  return "unknown";
}

std::optional<Backend> backend_from_string(std::string_view s) {
  for (const auto& [k, name] : kBackendNames)
    if (name == s) return k;
  return std::nullopt;
}

WeightSpec::WeightSpec(WeightData data, std::optional<DeclaredBounds> bounds)
    : data_(std::move(data)), bounds_(bounds) {
  const NormPair observed = validate(data_);
  if (bounds_) {
    const double slack = 1.0 + 1e-12;
    if (!(bounds_->sup_norm > 0.0) || !(bounds_->sup_inverse_norm > 0.0))
      throw SpecError("declared_bounds", "bounds must be positive");
    if (observed.norm > bounds_->sup_norm * slack)
      throw SpecError("declared_bounds.sup_norm",
                      "max ||A_n|| = " + std::to_string(observed.norm) + " exceeds the declared bound");
    if (observed.inverse_norm > bounds_->sup_inverse_norm * slack)
      throw SpecError("declared_bounds.sup_inverse_norm",
                      "max ||A_n^-1|| = " + std::to_string(observed.inverse_norm) + " exceeds the declared bound");
  }
  model_ = detail::make_model(data_);
}

WeightSpec WeightSpec::constant_matrix(Matrix t) { return WeightSpec(ConstantMatrixData{std::move(t)}); }

WeightSpec WeightSpec::periodic_matrices(std::vector<Matrix> period) {
  return WeightSpec(PeriodicMatricesData{std::move(period)});
}

WeightSpec WeightSpec::listed_matrices(std::vector<Matrix> listed, TailKind tail, Index tail_period) {
  return WeightSpec(ListedMatricesData{std::move(listed), tail, tail_period});
}

WeightSpec WeightSpec::constant_diagonal(std::vector<double> entries) {
  return WeightSpec(ConstantDiagonalData{std::move(entries)});
}

WeightSpec WeightSpec::bilateral_shift(std::vector<WeightBlock> blocks, bool mirror) {
  return WeightSpec(BilateralShiftData{std::move(blocks), mirror});
}

WeightSpec WeightSpec::scalar_sequence(std::vector<double> weights, TailKind tail, double tail_value) {
  return WeightSpec(ScalarSequenceData{std::move(weights), tail, tail_value});
}

WeightSpec WeightSpec::constant_scalar(double w) { return scalar_sequence({}, TailKind::Constant, w); }

Backend WeightSpec::backend() const { return static_cast<Backend>(data_.index()); }

Index WeightSpec::dim() const { return model_->dim(); }

WeightSpec WeightSpec::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw Error("scale factor must be positive and finite");
  struct V {
    double c;
    WeightData operator()(ConstantMatrixData d) const {
      d.t *= c;
      return d;
    }
    WeightData operator()(PeriodicMatricesData d) const {
      for (auto& m : d.period) m *= c;
      return d;
    }
    WeightData operator()(ListedMatricesData d) const {
      for (auto& m : d.listed) m *= c;
      return d;
    }
    WeightData operator()(ConstantDiagonalData d) const {
      for (auto& v : d.entries) v *= c;
      return d;
    }
    WeightData operator()(BilateralShiftData d) const {
      for (auto& b : d.blocks) b.value *= c;
      return d;
    }
    WeightData operator()(ScalarSequenceData d) const {
      for (auto& v : d.weights) v *= c;
      d.tail_value *= c;
      return d;
    }
  };
  std::optional<DeclaredBounds> b;
  if (bounds_) b = DeclaredBounds{bounds_->sup_norm * c, bounds_->sup_inverse_norm / c};
  WeightSpec out(*this);
  out.data_ = std::visit(V{c}, data_);
  out.bounds_ = b;
  out.model_ = detail::scale_model(model_, c);
  return out;
}

// ---------------------------------------------------------------------------

EmbeddedVector::EmbeddedVector(std::vector<SlotEntry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].slot < 0) throw Error("slot indices must be non-negative");
    if (i > 0 && entries_[i].slot <= entries_[i - 1].slot) throw Error("slots must be strictly increasing");
  }
}

EmbeddedVector EmbeddedVector::single(Index slot, HVector x) { return EmbeddedVector({SlotEntry{slot, std::move(x)}}); }

bool EmbeddedVector::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const SlotEntry& e) { return e.component.is_zero(); });
}

double EmbeddedVector::norm_squared() const {
  double s = 0.0;
  for (const auto& e : entries_) s += e.component.coeffs.squaredNorm();
  return s;
}

double EmbeddedVector::norm() const { return std::sqrt(norm_squared()); }

const HVector* EmbeddedVector::find(Index slot) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), slot,
                             [](const SlotEntry& e, Index s) { return e.slot < s; });
  if (it == entries_.end() || it->slot != slot) return nullptr;
  return &it->component;
}

EmbeddedVector operator-(const EmbeddedVector& a, const EmbeddedVector& b) {
  std::vector<SlotEntry> out;
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < ea.size() || j < eb.size()) {
    if (j == eb.size() || (i < ea.size() && ea[i].slot < eb[j].slot)) {
      out.push_back(ea[i++]);
    } else if (i == ea.size() || eb[j].slot < ea[i].slot) {
      out.push_back({eb[j].slot, Complex(-1.0) * eb[j].component});
      ++j;
    } else {
      out.push_back({ea[i].slot, ea[i].component - eb[j].component});
      ++i;
      ++j;
    }
  }
  return EmbeddedVector(std::move(out));
}

EmbeddedVector operator*(Complex c, const EmbeddedVector& a) {
  std::vector<SlotEntry> out;
  for (const auto& e : a.entries()) out.push_back({e.slot, c * e.component});
  return EmbeddedVector(std::move(out));
}

Complex inner(const EmbeddedVector& a, const EmbeddedVector& b) {
  Complex s = 0.0;
  for (const auto& e : a.entries())
    if (const HVector* y = b.find(e.slot)) s += inner(e.component, *y);
  return s;
}

// ---------------------------------------------------------------------------

WeightOperator weight_at(const WeightSpec& spec, Index n) {
  if (n < 0) throw IndexOutOfRange("weight index must be non-negative");
  return spec.model().weight_at(n);
}

ProductWindow window(const WeightSpec& spec, Index k, Index n) {
  if (k < 0 || n < 0) throw IndexOutOfRange("window start and length must be non-negative");
  return spec.model().window(k, n);
}

ScaledVector window_apply(const WeightSpec& spec, Index k, Index n, const HVector& x) {
  if (k < 0 || n < 0) throw IndexOutOfRange("window start and length must be non-negative");
  const auto& m = spec.model().unscaled();
  m.check_vector(x);
  check_nonzero(x);
  ScaledVector v = ScaledVector::from(x);
  for (Index j = k; j < k + n; ++j) {
    v.unit = m.step(j, v.unit);
    v.renormalize();
  }
  v.log_scale += static_cast<double>(n) * spec.model().log_gain();
  return v;
}

double window_norm(const WeightSpec& spec, Index k, Index n) {
  if (k < 0 || n < 0) throw IndexOutOfRange("window start and length must be non-negative");
  return spec.model().window_log_norm(k, n);
}

double window_conorm(const WeightSpec& spec, Index k, Index n) {
  if (k < 0 || n < 0) throw IndexOutOfRange("window start and length must be non-negative");
  return spec.model().window_log_conorm(k, n);
}

ScaledVector inverse_adjoint_apply(const WeightSpec& spec, Index n, const HVector& x) {
  if (n < 0) throw IndexOutOfRange("length must be non-negative");
  const auto& m = spec.model().unscaled();
  m.check_vector(x);
  check_nonzero(x);
  // (B_n^*)^{-1} = (A_{n-1}^*)^{-1} ... (A_0^*)^{-1}
  ScaledVector v = ScaledVector::from(x);
  for (Index j = 0; j < n; ++j) {
    v.unit = m.step_inverse_adjoint(j, v.unit);
    v.renormalize();
  }
  v.log_scale -= static_cast<double>(n) * spec.model().log_gain();
  return v;
}

ScaledVector inverse_apply(const WeightSpec& spec, Index n, const HVector& x) {
  if (n < 0) throw IndexOutOfRange("length must be non-negative");
  const auto& m = spec.model().unscaled();
  m.check_vector(x);
  check_nonzero(x);
  ScaledVector v = ScaledVector::from(x);
  for (Index j = n - 1; j >= 0; --j) {
    v.unit = m.step_inverse(j, v.unit);
    v.renormalize();
  }
  v.log_scale -= static_cast<double>(n) * spec.model().log_gain();
  return v;
}

EmbeddedVector shift_apply(const WeightSpec& spec, const EmbeddedVector& x, Index times) {
  if (times < 0) throw IndexOutOfRange("shift power must be non-negative");
  if (times == 0) return x;
  std::vector<SlotEntry> out;
  for (const auto& e : x.entries()) {
    if (e.component.is_zero()) continue;
    out.push_back({e.slot + times, window_apply(spec, e.slot, times, e.component).materialize()});
  }
  return EmbeddedVector(std::move(out));
}

EmbeddedVector adjoint_apply(const WeightSpec& spec, const EmbeddedVector& x) {
  const auto& m = spec.model();
  std::vector<SlotEntry> out;
  for (const auto& e : x.entries()) {
    if (e.slot == 0) continue;
    m.check_vector(e.component);
    out.push_back({e.slot - 1, m.step_adjoint(e.slot - 1, e.component)});
  }
  return EmbeddedVector(std::move(out));
}

std::vector<double> shift_orbit_log_norms(const WeightSpec& spec, const EmbeddedVector& x, Index n_hi) {
  if (x.is_zero()) throw ZeroVector();
  const auto& m = spec.model().unscaled();
  const double gain = spec.model().log_gain();
  std::vector<SlotEntry> cur;
  for (const auto& e : x.entries()) {
    m.check_vector(e.component);
    if (!e.component.is_zero()) cur.push_back(e);
  }
  double log_scale = 0.0;
  auto renormalize = [&] {
    double s = 0.0;
    for (const auto& e : cur) s += e.component.coeffs.squaredNorm();
    const double nrm = std::sqrt(s);
    for (auto& e : cur) e.component.coeffs /= nrm;
    log_scale += std::log(nrm);
  };
  renormalize();
  std::vector<double> out{log_scale};
  for (Index n = 1; n <= n_hi; ++n) {
    for (auto& e : cur) {
      e.component = m.step(e.slot, e.component);
      ++e.slot;
    }
    renormalize();
    out.push_back(log_scale + static_cast<double>(n) * gain);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> orbit_log_norms(const WeightSpec& spec, Index k, const HVector& x, Index n_hi) {
  if (k < 0 || n_hi < 0) throw IndexOutOfRange("window start and length must be non-negative");
  const auto& m = spec.model().unscaled();
  const long double gain = spec.model().log_gain();
  m.check_vector(x);
  check_nonzero(x);
  ScaledVector v = ScaledVector::from(x);
  long double acc = v.log_scale;
  std::vector<double> out{v.log_scale};
  out.reserve(static_cast<std::size_t>(n_hi) + 1);
  for (Index j = k; j < k + n_hi; ++j) {
    v.unit = m.step(j, v.unit);
    v.log_scale = 0.0;
    v.renormalize();
    acc += v.log_scale + gain;
    out.push_back(static_cast<double>(acc));
  }
  return out;
}

std::vector<double> inverse_adjoint_log_norms(const WeightSpec& spec, const HVector& x, Index n_hi) {
  if (n_hi < 0) throw IndexOutOfRange("length must be non-negative");
  const auto& m = spec.model().unscaled();
  const double gain = spec.model().log_gain();
  m.check_vector(x);
  check_nonzero(x);
  ScaledVector v = ScaledVector::from(x);
  std::vector<double> out{v.log_scale};
  out.reserve(static_cast<std::size_t>(n_hi) + 1);
  for (Index j = 0; j < n_hi; ++j) {
    v.unit = m.step_inverse_adjoint(j, v.unit);
    v.renormalize();
    out.push_back(v.log_scale - static_cast<double>(j + 1) * gain);
  }
  return out;
}

std::vector<double> sup_window_log_norms(const WeightSpec& spec, Index n_lo, Index n_hi, Index k_max) {
  if (n_lo < 0 || n_hi < n_lo || k_max < 0) throw IndexOutOfRange("invalid window range");
  return spec.model().sup_window_log_norms(n_lo, n_hi, k_max);
}

std::vector<double> inf_window_log_conorms(const WeightSpec& spec, Index n_lo, Index n_hi, Index k_max) {
  if (n_lo < 0 || n_hi < n_lo || k_max < 0) throw IndexOutOfRange("invalid window range");
  return spec.model().inf_window_log_conorms(n_lo, n_hi, k_max);
}

std::vector<double> forward_log_norms(const WeightSpec& spec, Index n_hi) {
  if (n_hi < 0) throw IndexOutOfRange("length must be non-negative");
  return spec.model().forward_log_norms(n_hi);
}

std::vector<double> inverse_log_norms(const WeightSpec& spec, Index n_hi) {
  if (n_hi < 0) throw IndexOutOfRange("length must be non-negative");
  return spec.model().inverse_log_norms(n_hi);
}

}  // namespace ows
