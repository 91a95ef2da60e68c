// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "owshift/canonical.hpp"
#include "owshift/commands.hpp"
#include "owshift/conditions.hpp"
#include "owshift/localspec.hpp"
#include "owshift/radii.hpp"

using namespace ows;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool near(double v, double want, double tol) { return std::abs(v - want) <= tol; }
bool within(double v, double lo, double hi) { return v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12); }

std::vector<std::pair<const char*, const LimitEstimate*>> eight(const RadiiReport& r) {
  return {{"r1", &r.r1},       {"r2", &r.r2},           {"r3", &r.r3},           {"R2-", &r.R2_minus},
          {"R2+", &r.R2_plus}, {"R3-", &r.R3_minus}, {"R3+", &r.R3_plus}, {"r", &r.r}};
}

oracle::TestSpec diag_half_one() {
  Matrix t = Matrix::Zero(2, 2);
  t(0, 0) = 0.5;
  t(1, 1) = 1.0;
  return {WeightSpec::constant_matrix(t), 2, [t](Index) { return t; }, "diag(1/2,1)"};
}

Outcome ac1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  AnalysisConfig c;
  c.horizon = 2048;
  const RadiiReport r = radii_report(WeightSpec::constant_scalar(2.0), c);
  const double secs = seconds_since(t0);
  for (const auto& [name, e] : eight(r))
    o.require(near(e->value, 2.0, 1e-9), std::string(name) + " = " + std::to_string(e->value));
  o.require(secs < 1.0, "took " + std::to_string(secs) + " s");
  if (o.pass) o.detail << "all eight radii 2 within 1e-9 in " << secs << " s";
  return o;
}

Outcome ac2() {
  Outcome o;
  const auto t = diag_half_one();
  // Oracle: eigenvalue moduli of the raw matrix.
  const double top = oracle::max_abs_eigenvalue(t.A(0)), bottom = oracle::min_abs_eigenvalue(t.A(0));
  const RadiiReport fast = radii_report(t.spec, {});
  AnalysisConfig g;
  g.horizon = 512;
  g.estimator.exact_paths = false;
  const RadiiReport gen = radii_report(t.spec, g);
  o.require(fast.fast_path.r && fast.fast_path.r1 && fast.fast_path.R2 && fast.fast_path.R3, "fast path not taken");
  for (const auto& [rep, tol, tag] : {std::tuple{&fast, 1e-6, "fast"}, std::tuple{&gen, 0.05, "generic"}}) {
    const bool rel = std::string(tag) == "generic";
    auto ok = [&](double v, double want) { return near(v, want, rel ? tol * want : tol); };
    o.require(ok(rep->r.value, top), std::string(tag) + " r = " + std::to_string(rep->r.value));
    o.require(ok(rep->R3_plus.value, top), std::string(tag) + " R3+ = " + std::to_string(rep->R3_plus.value));
    o.require(ok(rep->r1.value, bottom), std::string(tag) + " r1 = " + std::to_string(rep->r1.value));
    o.require(ok(rep->r2.value, bottom), std::string(tag) + " r2 = " + std::to_string(rep->r2.value));
    o.require(ok(rep->R2_minus.value, bottom), std::string(tag) + " R2- = " + std::to_string(rep->R2_minus.value));
  }
  if (o.pass)
    o.detail << "fast r=R3+=" << fast.r.value << " r1=r2=R2-=" << fast.r1.value << "; generic r=" << gen.r.value
             << " R3+=" << gen.R3_plus.value << " r1=" << gen.r1.value << " r2=" << gen.r2.value
             << " R2-=" << gen.R2_minus.value;
  return o;
}

Outcome ac3() {
  Outcome o;
  const auto t = diag_half_one();
  const double a0 = local_radius_slot(t.spec, 0, HVector::basis(2, 0), 2048).value;
  const double a1 = local_radius_slot(t.spec, 0, HVector::basis(2, 1), 2048).value;
  // Oracle: |<e_k, T^n e_k>|^{1/n} read off the raw diagonal.
  o.require(near(a0, std::abs(t.A(0)(0, 0)), 1e-6), "r(e0) = " + std::to_string(a0));
  o.require(near(a1, std::abs(t.A(0)(1, 1)), 1e-6), "r(e1) = " + std::to_string(a1));
  const FatLocalCertificate fat = fat_local_certificate(t.spec);
  o.require(!fat.certified, "fat local spectra certified");
  const SpectrumDescriptor s = svep_spectrum_report(t.spec, AnalysisConfig{});
  o.require(s.ap_annulus.has_value(), "no annulus");
  if (s.ap_annulus) {
    o.require(near(s.ap_annulus->inner, 0.5, 0.025), "inner " + std::to_string(s.ap_annulus->inner));
    o.require(near(s.ap_annulus->outer, 1.0, 0.05), "outer " + std::to_string(s.ap_annulus->outer));
  }
  if (o.pass)
    o.detail << "r(e0)=" << a0 << " r(e1)=" << a1 << ", not_certified, annulus [" << s.ap_annulus->inner << ", "
             << s.ap_annulus->outer << "]";
  return o;
}

Outcome ac4() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  AnalysisConfig c;
  c.horizon = Index{1} << 14;
  const WeightSpec kim = canonical_spec("kim");
  const ConditionReport d = dunford_check(kim, HVector::unit_at(0), c);
  const ConditionReport b = bishop_check(kim, HVector::unit_at(0), c);
  const double secs = seconds_since(t0);
  o.require(within(d.lhs.value, 1.31, 1.51), "lhs " + std::to_string(d.lhs.value));
  o.require(within(d.rhs.value, 1.9, 2.0), "rhs " + std::to_string(d.rhs.value));
  o.require(!d.holds, "dunford identity holds");
  o.require(!b.holds, "bishop identity holds");
  o.require(secs < 10.0, "took " + std::to_string(secs) + " s");
  // Oracle: brute-force log-sum scan over windows rebuilt from the block rule.
  const oracle::KimRates want = oracle::kim_rates(oracle::kim_scan(), *c.horizon, d.k_max);
  o.require(near(d.lhs.value, want.forward, 1e-10), "lhs vs scan " + std::to_string(want.forward));
  o.require(near(d.rhs.value, want.sup_ratio, 1e-10), "rhs vs scan " + std::to_string(want.sup_ratio));
  o.require(near(b.lhs.value, want.inf_ratio, 1e-10), "bishop lhs vs scan " + std::to_string(want.inf_ratio));
  if (o.pass) {
    o.detail.precision(10);
    o.detail << "lhs=" << d.lhs.value << " rhs=" << d.rhs.value << " bishop " << b.lhs.value << " vs " << b.rhs.value
             << ", both refuted, scan agrees, " << secs << " s";
  }
  return o;
}

Outcome ac5() {
  Outcome o;
  std::mt19937_64 rng(5150);
  AnalysisConfig c;
  c.horizon = 1024;
  c.chain_tol = 0.05;
  int held = 0;
  for (int i = 0; i < 50; ++i) {
    const auto t = i % 2 ? oracle::random_periodic(rng, 2, 10.0) : oracle::random_scalar(rng);
    const RadiiReport r = radii_report(t.spec, c);
    // Chains re-evaluated here rather than trusting the report's booleans.
    const bool left = leq_tol(r.r1.value, r.r2.value, 0.05) && leq_tol(r.r2.value, r.R2_minus.value, 0.05) &&
                      leq_tol(r.R2_minus.value, r.R2_plus.value, 0.05);
    const bool right = leq_tol(r.r3.value, r.R3_minus.value, 0.05) &&
                       leq_tol(r.R3_minus.value, r.R3_plus.value, 0.05) && leq_tol(r.R3_plus.value, r.r.value, 0.05);
    o.require(left && right && r.chain_ok_left && r.chain_ok_right, t.name + " #" + std::to_string(i));
    held += left && right;
  }
  o.detail << (o.pass ? "" : "; ") << held << "/50 specs satisfy both chains";
  return o;
}

Outcome ac6() {
  Outcome o;
  std::mt19937_64 rng(6);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto t = oracle::random_dense(rng, i, 4);
    const oracle::Slots x = oracle::random_slots(rng, t.dim);
    const Index N = x.rbegin()->first + 32 + 1;
    const Matrix m = oracle::dense_truncation(t, N);
    Vector v = oracle::flatten(x, t.dim, N);
    const EmbeddedVector ex = oracle::embed(x);
    for (Index n = 0; n <= 32; ++n) {
      if (n > 0) v = m * v;
      const double got = shift_apply(t.spec, ex, n).norm();
      worst = std::max(worst, std::abs(got - v.norm()) / v.norm());
    }
  }
  o.require(worst <= 1e-8, "dense truncation gap " + std::to_string(worst));

  double worst_rule = 0.0;
  std::mt19937_64 rng2(606);
  for (int i = 0; i < 20; ++i) {
    const auto t = oracle::random_dense(rng2, i, 4);
    const oracle::Slots x = oracle::random_slots(rng2, t.dim);
    const Index H = 1024;
    const LocalReport r = local_radius(t.spec, oracle::embed(x), H);
    auto orbit = oracle::shift_orbit(t, x, H);
    for (auto& v : orbit) v -= orbit.front();
    const double direct = oracle::tail_max_rate(orbit, H);
    double slot_max = 0.0;
    for (const auto& s : r.per_slot_radii) slot_max = std::max(slot_max, s.radius.value);
    worst_rule = std::max(worst_rule, std::abs(slot_max - direct) / direct);
  }
  o.require(worst_rule <= 0.02, "max rule gap " + std::to_string(worst_rule));
  if (o.pass) o.detail << "dense gap " << worst << " (n <= 32), max rule gap " << worst_rule << " at horizon 1024";
  return o;
}

Outcome ac7() {
  Outcome o;
  std::mt19937_64 rng(708);
  int ok = 0;
  for (int i = 0; i < 10; ++i) {
    const Index d = 1 + i % 3;
    oracle::TestSpec t = i % 2 ? oracle::random_diagonal(rng, d) : oracle::random_scalar(rng);
    if (i % 2 == 0) {
      const double w = oracle::uniform(rng, 0.5, 2.0);
      t = {WeightSpec::constant_scalar(w), 1, [w](Index) { return Matrix::Constant(1, 1, w); }, "scalar"};
    }
    Vector x0(t.dim);
    for (Index j = 0; j < t.dim; ++j) x0(j) = oracle::gauss_c(rng);
    const double rate = eigvec_candidate(t.spec, 0.0, HVector(x0), 0).rate;
    const double ratio = oracle::uniform(rng, 0.8, 0.9);
    const Complex lambda = std::polar(ratio * rate, oracle::uniform(rng, 0.0, 6.28));
    const double r64 = eigvec_candidate(t.spec, lambda, HVector(x0), 64).residual;
    const double r128 = eigvec_candidate(t.spec, lambda, HVector(x0), 128).residual;
    const bool good = r64 <= std::pow(std::abs(lambda) / rate, 64) * 10 && r128 < r64;
    o.require(good, "triple " + std::to_string(i) + " residuals " + std::to_string(r64) + ", " +
                        std::to_string(r128));
    ok += good;
  }
  o.detail << (o.pass ? "" : "; ") << ok << "/10 triples decay at the series rate";
  return o;
}

Outcome ac8() {
  Outcome o;
  std::mt19937_64 rng(809);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto t = oracle::random_dense(rng, i, 3);
    const oracle::Slots x = oracle::random_slots(rng, t.dim, 3, 4);
    const Complex lambda = std::polar(oracle::uniform(rng, 0.5, 2.5), oracle::uniform(rng, 0.0, 6.28));
    const Index N = 64;
    const ResolventTrace tr = resolvent_trace(t.spec, oracle::embed(x), lambda, N);
    const Index first = x.begin()->first;
    for (Index n = first; n <= N; ++n) {
      Vector f = Vector::Zero(t.dim);
      for (const auto& [j, xj] : x)
        if (j <= n) f -= std::pow(lambda, static_cast<double>(j - n - 1)) * (oracle::product(t, j, n - j) * xj);
      const double got = std::exp(tr.F_norms[n - first].second);
      worst = std::max(worst, std::abs(got - f.norm()) / f.norm());
    }
  }
  o.require(worst <= 1e-8, "gap " + std::to_string(worst));
  if (o.pass) o.detail << "largest relative gap " << worst << " over 10 triples, n <= 64";
  return o;
}

Outcome ac9() {
  Outcome o;
  std::mt19937_64 rng(909);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto t = oracle::random_dense(rng, i, 3);
    AnalysisConfig c;
    c.horizon = 256;
    const RadiiReport a = radii_report(t.spec, c);
    const RadiiReport b = radii_report(t.spec.scaled(3.0), c);
    const auto ea = eight(a), eb = eight(b);
    for (std::size_t j = 0; j < ea.size(); ++j)
      worst = std::max(worst, std::abs(eb[j].second->value - 3.0 * ea[j].second->value) / eb[j].second->value);
  }
  o.require(worst <= 1e-9, "gap " + std::to_string(worst));

  // Not part of the criterion: the same matrices tripled by hand and parsed
  // as a fresh spec. Window radii still match to rounding; candidate R2/R3
  // rates only to a few percent (they follow a slow direction of B_n).
  std::mt19937_64 rng2(910);
  double window_gap = 0.0, candidate_gap = 0.0;
  for (int i = 0; i < 6; ++i) {
    const auto t = i % 2 ? oracle::random_periodic(rng2, 2) : oracle::random_scalar(rng2);
    WeightSpec rebuilt = t.spec;
    if (const auto* p = std::get_if<PeriodicMatricesData>(&t.spec.data())) {
      std::vector<Matrix> tripled;
      for (const auto& m : p->period) tripled.push_back(3.0 * m);
      rebuilt = WeightSpec::periodic_matrices(tripled);
    } else {
      auto d = std::get<ScalarSequenceData>(t.spec.data());
      for (auto& v : d.weights) v *= 3.0;
      d.tail_value *= 3.0;
      rebuilt = WeightSpec(d);
    }
    AnalysisConfig c;
    c.horizon = 256;
    const auto a = radii_report(t.spec, c), b = radii_report(rebuilt, c);
    const auto ea = eight(a), eb = eight(b);
    for (std::size_t j = 0; j < ea.size(); ++j) {
      const double gap = std::abs(eb[j].second->value - 3.0 * ea[j].second->value) / eb[j].second->value;
      const std::string n = ea[j].first;
      (n[0] == 'R' ? candidate_gap : window_gap) = std::max(n[0] == 'R' ? candidate_gap : window_gap, gap);
    }
  }
  if (o.pass)
    o.detail << "largest relative gap " << worst << " over 10 specs, eight radii each (hand-tripled specs: r, r1, r2, r3 gap "
             << window_gap << ", R2/R3 candidate gap " << candidate_gap << ")";
  return o;
}

Outcome ac10() {
  Outcome o;
  const std::string dir = OWSHIFT_SPECS_DIR;
  for (const char* f : {"scalar_w2.spec", "diag_half_one.spec", "kim_blocks.spec"}) {
    RunConfig c;
    c.analysis.horizon = 1024;
    c.analysis.samples = 6;
    c.analysis.seed = 2024;
    for (const char* fmt : {"json", "csv"}) {
      c.format = fmt;
      const std::string a = render(cmd_report(dir + "/" + f, c).document, fmt);
      const std::string b = render(cmd_report(dir + "/" + f, c).document, fmt);
      o.require(a == b && !a.empty(), std::string(f) + " " + fmt + " differs");
    }
  }
  if (o.pass) o.detail << "three bundled specs, json and csv, byte-identical";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AC1 geometric radii", ac1},        {"AC2 constant-matrix identities", ac2},
      {"AC3 diagonal example structure", ac3}, {"AC4 block-weight refutation", ac4},
      {"AC5 inequality chains", ac5},      {"AC6 oracle equivalence", ac6},
      {"AC7 eigenvector series", ac7},     {"AC8 resolvent product form", ac8},
      {"AC9 scaling covariance", ac9},     {"AC10 determinism", ac10},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "threw: " << e.what();
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.str().c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
