#include "owshift/radii.hpp"

#include <algorithm>
#include <cmath>

#include "model.hpp"
#include "owshift/traces.hpp"

namespace ows {

namespace {

void require_horizon(Index horizon) {
  if (horizon < 8) throw Error("horizon must be at least 8");
}

std::optional<std::pair<double, double>> exact_range(const WeightSpec& spec, const EstimatorOptions& opts) {
  if (!opts.exact_paths) return std::nullopt;
  return spec.model().constant_modulus_range();
}

// Drops entries below the reporting window; `full` starts at n = 0.
std::vector<double> tail_of(const std::vector<double>& full, Index n_lo) {
  return std::vector<double>(full.begin() + n_lo, full.end());
}

LimitEstimate normalized_rate(std::vector<double> trace, Index horizon, bool negate, LimitMethod method,
                              const EstimatorOptions& opts) {
  const double base = trace.front();
  for (auto& v : trace) v = negate ? base - v : v - base;
  const Index n_lo = tail_start(horizon, opts.tail_fraction);
  return estimate_from_log_trace(tail_of(trace, n_lo), n_lo, method, opts);
}

template <class Rate>
CandidateBounds candidate_extremes(const WeightSpec& spec, Index horizon, int samples, std::uint64_t seed,
                                   const EstimatorOptions& opts, Rate rate) {
  require_horizon(horizon);
  CandidateBounds out;
  if (auto range = exact_range(spec, opts)) {
    out.minus = LimitEstimate::exact(range->first, horizon);
    out.plus = LimitEstimate::exact(range->second, horizon);
    out.argmin = out.argmax = "eigenvalue_modulus";
    out.exact = true;
    return out;
  }
  const auto cands = spec.model().candidates(horizon, samples, seed);
  bool first = true;
  for (const auto& c : cands) {
    LimitEstimate e = rate(spec, c.x, horizon, opts);
    if (first || e.value < out.minus.value) {
      out.minus = e;
      out.argmin = c.label;
      out.argmin_vector = c.x;
    }
    if (first || e.value > out.plus.value) {
      out.plus = e;
      out.argmax = c.label;
      out.argmax_vector = c.x;
    }
    first = false;
  }
  out.candidate_count = cands.size();
  return out;
}

}  // namespace

ResolvedConfig resolve(const WeightSpec& spec, const AnalysisConfig& config) {
  const auto& m = spec.model();
  ResolvedConfig r;
  r.horizon = config.horizon.value_or(m.default_horizon());
  require_horizon(r.horizon);
  r.k_max = config.k_max.value_or(m.default_k_max(r.horizon));
  if (r.k_max < 0) throw Error("k_max must be non-negative");
  if (config.samples < 0) throw Error("samples must be non-negative");
  r.samples = config.samples;
  r.seed = config.seed;
  r.chain_tol = config.chain_tol;
  r.refute_tol = config.refute_tol.value_or(m.default_refute_tol());
  r.estimator = config.estimator;
  return r;
}

LimitEstimate spectral_radius(const WeightSpec& spec, Index horizon, Index k_max, const EstimatorOptions& opts) {
  require_horizon(horizon);
  if (auto range = exact_range(spec, opts)) return LimitEstimate::exact(range->second, horizon);
  const Index n_lo = tail_start(horizon, opts.tail_fraction);
  return estimate_from_log_trace(sup_window_log_norms(spec, n_lo, horizon, k_max), n_lo, LimitMethod::TailMin,
                                 opts);
}

LimitEstimate lower_radius_r1(const WeightSpec& spec, Index horizon, Index k_max, const EstimatorOptions& opts) {
  require_horizon(horizon);
  if (auto range = exact_range(spec, opts)) return LimitEstimate::exact(range->first, horizon);
  const Index n_lo = tail_start(horizon, opts.tail_fraction);
  return estimate_from_log_trace(inf_window_log_conorms(spec, n_lo, horizon, k_max), n_lo, LimitMethod::TailMax,
                                 opts);
}

LimitEstimate r2(const WeightSpec& spec, Index horizon, const EstimatorOptions& opts) {
  require_horizon(horizon);
  if (auto range = exact_range(spec, opts)) return LimitEstimate::exact(range->first, horizon);
  return normalized_rate(inverse_log_norms(spec, horizon), horizon, true, LimitMethod::TailMin, opts);
}

LimitEstimate r3(const WeightSpec& spec, Index horizon, const EstimatorOptions& opts) {
  require_horizon(horizon);
  if (auto range = exact_range(spec, opts)) return LimitEstimate::exact(range->first, horizon);
  return normalized_rate(inverse_log_norms(spec, horizon), horizon, true, LimitMethod::TailMax, opts);
}

LimitEstimate adjoint_rate(const WeightSpec& spec, const HVector& x, Index horizon, const EstimatorOptions& opts) {
  require_horizon(horizon);
  return normalized_rate(inverse_adjoint_log_norms(spec, x, horizon), horizon, true, LimitMethod::TailMin, opts);
}

LimitEstimate forward_rate(const WeightSpec& spec, const HVector& x, Index horizon, const EstimatorOptions& opts) {
  require_horizon(horizon);
  return normalized_rate(orbit_log_norms(spec, 0, x, horizon), horizon, false, LimitMethod::TailMax, opts);
}

CandidateBounds r2_bounds(const WeightSpec& spec, Index horizon, int samples, std::uint64_t seed,
                          const EstimatorOptions& opts) {
  return candidate_extremes(spec, horizon, samples, seed, opts, adjoint_rate);
}

CandidateBounds r3_bounds(const WeightSpec& spec, Index horizon, int samples, std::uint64_t seed,
                          const EstimatorOptions& opts) {
  return candidate_extremes(spec, horizon, samples, seed, opts, forward_rate);
}

bool leq_tol(double a, double b, double tol) { return a <= b + tol * std::max({std::abs(a), std::abs(b), 1e-300}); }

double chain_tolerance(const LimitEstimate& a, const LimitEstimate& b, const std::optional<double>& configured) {
  if (configured) return *configured;
  const bool exact = a.method == LimitMethod::Exact && b.method == LimitMethod::Exact;
  return exact ? 1e-6 : 0.05;
}

RadiiReport radii_report(const WeightSpec& spec, const AnalysisConfig& config) {
  const ResolvedConfig rc = resolve(spec, config);
  const auto& opts = rc.estimator;
  RadiiReport rep;
  rep.horizon = rc.horizon;
  rep.k_max = rc.k_max;
  rep.r = spectral_radius(spec, rc.horizon, rc.k_max, opts);
  rep.r1 = lower_radius_r1(spec, rc.horizon, rc.k_max, opts);
  rep.r2 = r2(spec, rc.horizon, opts);
  rep.r3 = r3(spec, rc.horizon, opts);
  const CandidateBounds b2 = r2_bounds(spec, rc.horizon, rc.samples, rc.seed, opts);
  const CandidateBounds b3 = r3_bounds(spec, rc.horizon, rc.samples, rc.seed, opts);
  rep.R2_minus = b2.minus;
  rep.R2_plus = b2.plus;
  rep.R3_minus = b3.minus;
  rep.R3_plus = b3.plus;
  rep.R2_minus_at = b2.argmin;
  rep.R2_plus_at = b2.argmax;
  rep.R3_minus_at = b3.argmin;
  rep.R3_plus_at = b3.argmax;
  rep.candidate_count = b2.candidate_count;

  auto exact = [](const LimitEstimate& e) { return e.method == LimitMethod::Exact; };
  rep.fast_path = {exact(rep.r), exact(rep.r1), exact(rep.r2), exact(rep.r3), b2.exact, b3.exact};

  auto check = [&](const char* lo_name, const LimitEstimate& lo, const char* hi_name, const LimitEstimate& hi) {
    const double tol = chain_tolerance(lo, hi, rc.chain_tol);
    if (leq_tol(lo.value, hi.value, tol)) return true;
    rep.violations.push_back({lo_name, hi_name, lo.value, hi.value, tol});
    return false;
  };
  bool left = check("r1", rep.r1, "r2", rep.r2);
  left = check("r2", rep.r2, "R2_minus", rep.R2_minus) && left;
  left = check("R2_minus", rep.R2_minus, "R2_plus", rep.R2_plus) && left;
  bool right = check("r3", rep.r3, "R3_minus", rep.R3_minus);
  right = check("R3_minus", rep.R3_minus, "R3_plus", rep.R3_plus) && right;
  right = check("R3_plus", rep.R3_plus, "r", rep.r) && right;
  rep.chain_ok_left = left;
  rep.chain_ok_right = right;

  if (spec.dim() == 1) {
    auto same = [](const LimitEstimate& a, const LimitEstimate& b) {
      return std::abs(a.value - b.value) <= 1e-9 * std::max(1.0, std::max(a.value, b.value));
    };
    rep.scalar_equalities_ok = same(rep.r2, rep.R2_minus) && same(rep.R2_minus, rep.R2_plus) &&
                               same(rep.r3, rep.R3_minus) && same(rep.R3_minus, rep.R3_plus);
  }
  return rep;
}

}  // namespace ows
