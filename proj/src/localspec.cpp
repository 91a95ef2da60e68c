#include "owshift/localspec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "model.hpp"
#include "owshift/traces.hpp"

namespace ows {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LimitEstimate normalized_tail_max(std::vector<double> trace, Index horizon, const EstimatorOptions& opts) {
  const double base = trace.front();
  for (auto& v : trace) v -= base;
  const Index n_lo = tail_start(horizon, opts.tail_fraction);
  return estimate_from_log_trace(std::vector<double>(trace.begin() + n_lo, trace.end()), n_lo, LimitMethod::TailMax,
                                 opts);
}

std::vector<SlotEntry> nonzero_entries(const EmbeddedVector& x) {
  std::vector<SlotEntry> out;
  for (const auto& e : x.entries())
    if (!e.component.is_zero()) out.push_back(e);
  if (out.empty()) throw ZeroVector();
  return out;
}

// lambda^j * v without forming lambda^j.
ScaledVector times_power(ScaledVector v, Complex lambda, Index j) {
  if (v.is_zero() || j == 0) return v;
  v.log_scale += static_cast<double>(j) * std::log(std::abs(lambda));
  v.unit.coeffs *= std::polar(1.0, static_cast<double>(j) * std::arg(lambda));
  return v;
}

double least_squares_slope(const std::vector<std::pair<Index, double>>& pts) {
  const double m = static_cast<double>(pts.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [n, y] : pts) {
    sx += static_cast<double>(n);
    sy += y;
  }
  const double mx = sx / m;
  const double my = sy / m;
  double num = 0.0, den = 0.0;
  for (const auto& [n, y] : pts) {
    num += (static_cast<double>(n) - mx) * (y - my);
    den += (static_cast<double>(n) - mx) * (static_cast<double>(n) - mx);
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace

LimitEstimate local_radius_slot(const WeightSpec& spec, Index k, const HVector& x, Index horizon,
                                const EstimatorOptions& opts) {
  if (horizon < 8) throw Error("horizon must be at least 8");
  return normalized_tail_max(orbit_log_norms(spec, k, x, horizon), horizon, opts);
}

LocalReport local_radius(const WeightSpec& spec, const EmbeddedVector& x, Index horizon, const EstimatorOptions& opts,
                         double cross_check_tol) {
  if (horizon < 8) throw Error("horizon must be at least 8");
  LocalReport rep;
  rep.x = x;
  bool first = true;
  for (const auto& e : nonzero_entries(x)) {
    LimitEstimate est = local_radius_slot(spec, e.slot, e.component, horizon, opts);
    if (first || est.value > rep.local_radius.value) rep.local_radius = est;
    first = false;
    rep.per_slot_radii.push_back({e.slot, std::move(est)});
  }
  rep.direct_radius = normalized_tail_max(shift_orbit_log_norms(spec, x, horizon), horizon, opts);
  rep.cross_check_tol = cross_check_tol;
  rep.cross_check_ok = std::abs(rep.direct_radius.value - rep.local_radius.value) <=
                       cross_check_tol * std::max(rep.direct_radius.value, rep.local_radius.value);
  rep.R_A = kInf;
  rep.finite_support = true;
  return rep;
}

double r_a(const WeightSpec&, const EmbeddedVector& x) {
  if (x.is_zero()) throw ZeroVector();
  // Only finitely many x_n are non-zero, so the limsup defining 1/R_A is 0.
  return kInf;
}

LowerBoundReport local_lower_bounds(const WeightSpec& spec, const EmbeddedVector& x, const AnalysisConfig& config) {
  const auto entries = nonzero_entries(x);
  const ResolvedConfig rc = resolve(spec, config);
  const auto& opts = rc.estimator;

  const LimitEstimate r1 = lower_radius_r1(spec, rc.horizon, rc.k_max, opts);
  const LimitEstimate r3v = r3(spec, rc.horizon, opts);
  const CandidateBounds b2 = r2_bounds(spec, rc.horizon, rc.samples, rc.seed, opts);
  const CandidateBounds b3 = r3_bounds(spec, rc.horizon, rc.samples, rc.seed, opts);
  double R2m = b2.minus.value;
  double R3m = b3.minus.value;
  if (!b2.exact || !b3.exact) {
    // B_k^{-1} x_k joins the candidate sets: its rates sit below the slot
    // radius of x_k, which keeps the candidate bounds under r(x).
    for (const auto& e : entries) {
      HVector y;
      try {
        y = inverse_apply(spec, e.slot, e.component).unit;
      } catch (const IndexOutOfRange&) {
        continue;
      }
      if (!b2.exact) R2m = std::min(R2m, adjoint_rate(spec, y, rc.horizon, opts).value);
      if (!b3.exact) R3m = std::min(R3m, forward_rate(spec, y, rc.horizon, opts).value);
    }
  }

  LowerBoundReport rep;
  rep.considered = {
      {"r1_disc", r1.value},
      {"R2_minus_disc", R2m},
      {"min_RA_r3_disc", std::min(r_a(spec, x), r3v.value)},
      {"R3_minus_disc_finite_support", R3m},
  };
  for (const auto& c : rep.considered) {
    if (rep.provenance.empty() || c.radius > rep.radius) {
      rep.radius = c.radius;
      rep.provenance = c.provenance;
    }
  }
  rep.local_radius = local_radius(spec, x, rc.horizon, opts).local_radius.value;
  rep.within_local_radius = leq_tol(rep.radius, rep.local_radius, rc.chain_tol.value_or(0.05));
  return rep;
}

EigvecResult eigvec_candidate(const WeightSpec& spec, Complex lambda, const HVector& x0, Index N,
                              std::optional<Index> rate_horizon) {
  if (x0.is_zero()) throw ZeroVector();
  if (N < 0) throw Error("truncation degree must be non-negative");
  EigvecResult res;
  const Index h = rate_horizon.value_or(spec.model().default_horizon());
  res.rate = adjoint_rate(spec, x0, h).value;
  if (lambda != Complex(0.0) && !(std::abs(lambda) < res.rate))
    throw OutsideDisc("|lambda| = " + std::to_string(std::abs(lambda)) + " is not below the rate " +
                      std::to_string(res.rate));

  std::vector<SlotEntry> slots;
  ScaledVector v = ScaledVector::from(x0);
  const Index last = lambda == Complex(0.0) ? 0 : N;
  for (Index n = 0; n <= last; ++n) {
    if (n > 0) {
      v.unit = spec.model().step_inverse_adjoint(n - 1, v.unit);
      v.renormalize();
    }
    slots.push_back({n, times_power(v, lambda, n).materialize()});
  }
  res.vector = EmbeddedVector(std::move(slots));
  const double knorm = res.vector.norm();
  const EmbeddedVector r = adjoint_apply(spec, res.vector) - lambda * res.vector;
  res.residual = r.norm() / knorm;
  res.tail_bound = lambda == Complex(0.0)
                       ? 0.0
                       : std::exp(static_cast<double>(last + 1) * std::log(std::abs(lambda)) + v.log_scale) / knorm;
  return res;
}

std::string_view to_string(ResolventVerdict v) {
  switch (v) {
    case ResolventVerdict::Diverges:
      return "diverges";
    case ResolventVerdict::Converges:
      return "converges";
    case ResolventVerdict::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

ResolventTrace resolvent_trace(const WeightSpec& spec, const EmbeddedVector& x, Complex lambda, Index N) {
  if (lambda == Complex(0.0)) throw ZeroLambda();
  const auto entries = nonzero_entries(x);
  for (const auto& e : entries) spec.model().check_vector(e.component);
  const auto& m = spec.model();
  const Index first = entries.front().slot;
  if (N < first) throw Error("N must reach the first non-zero slot");

  ResolventTrace tr;
  tr.lambda = lambda;
  const Complex inv_lambda = 1.0 / lambda;

  ScaledVector f;  // direct recursion: F_{n+1} = (A_n F_n - x_{n+1}) / lambda
  ScaledVector g;  // G_n = sum_{j <= n} lambda^j B_j^{-1} x_j
  for (Index n = 0; n <= N; ++n) {
    if (n > 0 && !f.is_zero()) {
      f.unit = m.step(n - 1, f.unit);
      f.renormalize();
    }
    const HVector* xn = x.find(n);
    if (xn && !xn->is_zero()) {
      f = add(f, scale(ScaledVector::from(*xn), -1.0));
      g = add(g, times_power(inverse_apply(spec, n, *xn), lambda, n));
      tr.G_values.push_back({n, g.materialize()});
    }
    f = scale(f, inv_lambda);
    if (n < first) continue;

    // Product form -(1/lambda^{n+1}) B_n G_n.
    ScaledVector p;
    if (!g.is_zero()) {
      p = window_apply(spec, 0, n, g.unit);
      p.log_scale += g.log_scale;
      p = times_power(p, inv_lambda, n + 1);
      p = scale(p, -1.0);
    }
    tr.F_norms.push_back({n, p.log_scale});
    tr.F_norms_direct.push_back({n, f.log_scale});
    if (!f.is_zero()) {
      const ScaledVector gap = add(f, scale(p, -1.0));
      const double rel = gap.is_zero() ? 0.0 : std::exp(gap.log_scale - f.log_scale);
      tr.max_relative_gap = std::max(tr.max_relative_gap, rel);
    }
  }

  const std::size_t count = tr.F_norms.size();
  const std::size_t take = std::max<std::size_t>(2, count / 3);
  std::vector<std::pair<Index, double>> tail(tr.F_norms.end() - static_cast<std::ptrdiff_t>(std::min(take, count)),
                                             tr.F_norms.end());
  tr.G_norm = g.is_zero() ? 0.0 : std::exp(g.log_scale);
  const bool g_collapsed = g.is_zero() || g.log_scale < std::log(1e-10 * x.norm());
  const bool finite = std::all_of(tail.begin(), tail.end(), [](const auto& p) { return std::isfinite(p.second); });
  if (g_collapsed || !finite || tail.size() < 2) {
    tr.verdict = ResolventVerdict::Inconclusive;
    return tr;
  }
  tr.slope = least_squares_slope(tail);
  if (tr.slope > 1e-3)
    tr.verdict = ResolventVerdict::Diverges;
  else if (tr.slope < -1e-3)
    tr.verdict = ResolventVerdict::Converges;
  else
    tr.verdict = ResolventVerdict::Inconclusive;
  return tr;
}

std::vector<GridPoint> resolvent_grid(const WeightSpec& spec, const EmbeddedVector& x,
                                      const std::vector<double>& radii, int angles, Index N) {
  std::vector<GridPoint> out;
  for (double rho : radii) {
    if (!(rho > 0.0)) continue;
    for (int a = 0; a < angles; ++a) {
      const Complex lambda = std::polar(rho, 2.0 * std::numbers::pi * a / angles);
      const ResolventTrace tr = resolvent_trace(spec, x, lambda, N);
      out.push_back({lambda, tr.verdict, tr.slope});
    }
  }
  return out;
}

std::vector<double> subspace_weights(const WeightSpec& spec, const HVector& x, Index horizon) {
  const auto L = orbit_log_norms(spec, 0, x, horizon);
  std::vector<double> out(static_cast<std::size_t>(horizon));
  for (Index n = 0; n < horizon; ++n) out[n] = std::exp(L[n + 1] - L[n]);
  return out;
}

namespace {

FatLocalCertificate certify(LimitEstimate r, LimitEstimate R2m, const std::optional<double>& chain_tol) {
  FatLocalCertificate c;
  c.r = std::move(r);
  c.R2_minus = std::move(R2m);
  c.tolerance = chain_tolerance(c.r, c.R2_minus, chain_tol);
  c.certified = std::abs(c.r.value - c.R2_minus.value) <= c.tolerance * std::max(c.r.value, c.R2_minus.value);
  return c;
}

}  // namespace

FatLocalCertificate fat_local_certificate(const WeightSpec& spec, const AnalysisConfig& config) {
  const ResolvedConfig rc = resolve(spec, config);
  return certify(spectral_radius(spec, rc.horizon, rc.k_max, rc.estimator),
                 r2_bounds(spec, rc.horizon, rc.samples, rc.seed, rc.estimator).minus, rc.chain_tol);
}

FatLocalCertificate fat_local_certificate(const RadiiReport& radii, const std::optional<double>& chain_tol) {
  return certify(radii.r, radii.R2_minus, chain_tol);
}

}  // namespace ows
