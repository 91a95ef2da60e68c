#include "owshift/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "model.hpp"
#include "owshift/localspec.hpp"
#include "owshift/traces.hpp"

namespace ows {

namespace {

std::string describe(const HVector& x) {
  const HVector t = trimmed(x);
  std::ostringstream os;
  os.precision(17);
  if (t.size() == 1 && t.coeffs(0) == Complex(1.0)) {
    if (t.offset < 0)
      os << "e(" << t.offset << ")";
    else
      os << "e" << t.offset;
    return os.str();
  }
  os << "[";
  for (Index i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x.offset + i << ": (" << x.coeffs(i).real() << "," << x.coeffs(i).imag() << ")";
  }
  os << "]";
  return os.str();
}

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({a, b, std::numeric_limits<double>::min()});
}

struct RatioData {
  std::vector<double> L;  // log ||B_j x||, j = 0..k_max + horizon
  std::optional<std::vector<Index>> breaks;
  Index k_max = 0;
};

RatioData orbit_for_ratios(const WeightSpec& spec, const HVector& x, Index horizon, Index k_max) {
  if (horizon < 8) throw Error("horizon must be at least 8");
  if (k_max < 0) throw Error("k_max must be non-negative");
  if (x.is_zero()) throw ZeroVector();
  const auto& m = spec.model();
  m.check_vector(x);
  if (auto avail = m.max_forward_steps(x)) {
    if (*avail < horizon) throw IndexOutOfRange("horizon exceeds the stored weight range for this vector");
    k_max = std::min(k_max, *avail - horizon);
  }
  RatioData d;
  d.k_max = k_max;
  d.L = orbit_log_norms(spec, 0, x, k_max + horizon);
  d.breaks = m.orbit_breakpoints(x, k_max + horizon);
  return d;
}

// sup_k and inf_k over [0, k_max] of L[k+n] - L[k]. With breakpoints the
// map k -> L[k+n] - L[k] is affine between points of {b, b - n}, so only
// those and the ends are visited.
void ratio_extremes(const RatioData& d, Index n, double& sup, double& inf) {
  sup = -std::numeric_limits<double>::infinity();
  inf = std::numeric_limits<double>::infinity();
  auto visit = [&](Index k) {
    if (k < 0 || k > d.k_max) return;
    const double v = d.L[k + n] - d.L[k];
    sup = std::max(sup, v);
    inf = std::min(inf, v);
  };
  if (d.breaks && static_cast<Index>(2 * d.breaks->size() + 2) < d.k_max + 1) {
    visit(0);
    visit(d.k_max);
    for (Index b : *d.breaks) {
      visit(b);
      visit(b - n);
    }
  } else {
    for (Index k = 0; k <= d.k_max; ++k) visit(k);
  }
}

struct RatioEstimates {
  LimitEstimate forward;
  LimitEstimate sup_ratio;
  LimitEstimate inf_ratio;
  Index k_max = 0;
};

RatioEstimates ratio_estimates(const WeightSpec& spec, const HVector& x, Index horizon, Index k_max,
                               const EstimatorOptions& opts) {
  const RatioData d = orbit_for_ratios(spec, x, horizon, k_max);
  const Index n_lo = tail_start(horizon, opts.tail_fraction);
  std::vector<double> fwd, sup, inf;
  for (Index n = n_lo; n <= horizon; ++n) {
    fwd.push_back(d.L[n] - d.L[0]);
    double s, i;
    ratio_extremes(d, n, s, i);
    sup.push_back(s);
    inf.push_back(i);
  }
  RatioEstimates out;
  out.forward = estimate_from_log_trace(fwd, n_lo, LimitMethod::TailMax, opts);
  out.sup_ratio = estimate_from_log_trace(sup, n_lo, LimitMethod::TailMin, opts);
  out.inf_ratio = estimate_from_log_trace(inf, n_lo, LimitMethod::TailMax, opts);
  out.k_max = d.k_max;
  return out;
}

ConditionReport make_report(ConditionKind kind, LimitEstimate lhs, LimitEstimate rhs, double tol, std::string witness,
                            Index k_max) {
  ConditionReport r;
  r.condition = kind;
  r.holds = close_rel(lhs.value, rhs.value, tol);
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  r.tolerance = tol;
  r.witness = std::move(witness);
  r.k_max = k_max;
  return r;
}

}  // namespace

std::string_view to_string(ConditionKind k) {
  switch (k) {
    case ConditionKind::DunfordDdcc:
      return "dunford_ddcc";
    case ConditionKind::BishopBbishop:
      return "bishop_bbishop";
    case ConditionKind::BishopR1R2:
      return "bishop_r1r2";
    case ConditionKind::DccRR3Plus:
      return "dcc_r_R3plus";
  }
  return "unknown";
}

ConditionReport dunford_check(const WeightSpec& spec, const HVector& x, Index horizon, Index k_max, double tol,
                              const EstimatorOptions& opts) {
  RatioEstimates e = ratio_estimates(spec, x, horizon, k_max, opts);
  return make_report(ConditionKind::DunfordDdcc, std::move(e.forward), std::move(e.sup_ratio), tol, describe(x),
                     e.k_max);
}

ConditionReport dunford_check(const WeightSpec& spec, const HVector& x, const AnalysisConfig& config) {
  const ResolvedConfig rc = resolve(spec, config);
  return dunford_check(spec, x, rc.horizon, rc.k_max, rc.refute_tol, rc.estimator);
}

ConditionReport bishop_check(const WeightSpec& spec, const HVector& x, Index horizon, Index k_max, double tol,
                             const EstimatorOptions& opts) {
  RatioEstimates e = ratio_estimates(spec, x, horizon, k_max, opts);
  return make_report(ConditionKind::BishopBbishop, std::move(e.inf_ratio), std::move(e.sup_ratio), tol, describe(x),
                     e.k_max);
}

ConditionReport bishop_check(const WeightSpec& spec, const HVector& x, const AnalysisConfig& config) {
  const ResolvedConfig rc = resolve(spec, config);
  return bishop_check(spec, x, rc.horizon, rc.k_max, rc.refute_tol, rc.estimator);
}

std::pair<ConditionReport, ConditionReport> bishop_radii_check(const WeightSpec& spec, const AnalysisConfig& config) {
  const ResolvedConfig rc = resolve(spec, config);
  const auto& opts = rc.estimator;
  LimitEstimate r1 = lower_radius_r1(spec, rc.horizon, rc.k_max, opts);
  LimitEstimate r2v = r2(spec, rc.horizon, opts);
  LimitEstimate r = spectral_radius(spec, rc.horizon, rc.k_max, opts);
  CandidateBounds b3 = r3_bounds(spec, rc.horizon, rc.samples, rc.seed, opts);
  std::string cand = b3.exact ? std::string("exact eigenvalue moduli")
                              : "max over " + std::to_string(b3.candidate_count) + " candidates, attained at " +
                                    b3.argmax;
  return {make_report(ConditionKind::BishopR1R2, std::move(r1), std::move(r2v), rc.refute_tol, "operator radii",
                      rc.k_max),
          make_report(ConditionKind::DccRR3Plus, std::move(b3.plus), std::move(r), rc.refute_tol, cand, rc.k_max)};
}

SpectrumDescriptor svep_spectrum_report(const WeightSpec& spec, const AnalysisConfig& config) {
  return svep_spectrum_report(spec, radii_report(spec, config), config);
}

SpectrumDescriptor svep_spectrum_report(const WeightSpec& spec, const RadiiReport& radii,
                                        const AnalysisConfig& config) {
  const ResolvedConfig rc = resolve(spec, config);
  SpectrumDescriptor s;
  s.full_disc_radius = radii.r.value;
  s.ap_min_modulus = radii.r1.value;
  s.adjoint_point_inner_radius = radii.R2_plus.value;
  if (radii.R2_plus.method == LimitMethod::Exact) {
    s.adjoint_point_outer_radius = radii.R2_plus.value;
  } else {
    // ||x|| <= ||B_n|| ||(B_n^*)^{-1} x|| bounds every candidate rate by
    // ||B_n||^{1/n} at each n.
    auto full = forward_log_norms(spec, rc.horizon);
    const Index n_lo = tail_start(rc.horizon, rc.estimator.tail_fraction);
    const LimitEstimate outer = estimate_from_log_trace(std::vector<double>(full.begin() + n_lo, full.end()), n_lo,
                                                        LimitMethod::TailMin, rc.estimator);
    s.adjoint_point_outer_radius = std::max(outer.value, s.adjoint_point_inner_radius);
  }
  s.svep_adjoint_defect_radius = radii.R2_plus.value;
  s.adjoint_has_svep = radii.R2_plus.value == 0.0;

  const Backend b = spec.backend();
  const bool annulus_backend = b == Backend::ConstantDiagonal ||
                               (b == Backend::ConstantMatrix && spec.model().constant_normal());
  if (annulus_backend) s.ap_annulus = Annulus{radii.r1.value, radii.r.value};

  // Spot check at 0.9 R2+, using the candidate with the largest rate.
  EstimatorOptions generic = rc.estimator;
  generic.exact_paths = false;
  const CandidateBounds b2 = r2_bounds(spec, rc.horizon, rc.samples, rc.seed, generic);
  const double rate = std::min(b2.plus.value, radii.R2_plus.value);
  if (rate > 0.0) {
    EigvecSpotCheck sc;
    sc.lambda = 0.9 * rate;
    sc.x0_label = b2.argmax;
    try {
      sc.residual_64 = eigvec_candidate(spec, sc.lambda, b2.argmax_vector, 64, rc.horizon).residual;
      sc.residual_128 = eigvec_candidate(spec, sc.lambda, b2.argmax_vector, 128, rc.horizon).residual;
      sc.decays = sc.residual_128 < sc.residual_64;
      s.spot_check = sc;
    } catch (const OutsideDisc&) {
    }
  }

  const double tol = chain_tolerance(radii.r1, radii.r, rc.chain_tol);
  if (close_rel(radii.r1.value, radii.r.value, tol))
    s.beta_note = "r1 = r within tolerance: either Bishop's property (beta) holds or sigma_beta is the circle |lambda| = r";
  return s;
}

}  // namespace ows
