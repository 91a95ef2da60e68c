#include "owshift/commands.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "model.hpp"
#include "owshift/canonical.hpp"
#include "owshift/conditions.hpp"
#include "owshift/localspec.hpp"
#include "owshift/vector_literal.hpp"

namespace ows {

namespace {

Json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Json estimate_json(const LimitEstimate& e) {
  Json tail = Json::array();
  for (const auto& s : e.tail) tail.push_back(Json::array({s.n, num(s.value)}));
  return Json{{"value", num(e.value)},   {"method", std::string(to_string(e.method))},
              {"horizon", e.horizon},    {"spread", num(e.spread)},
              {"converged", e.converged}, {"tail", tail}};
}

Json shape(const char* kind, const char* label, double inner, double outer) {
  return Json{{"kind", kind},
              {"label", label},
              {"center", Json::array({0, 0})},
              {"inner_radius", num(inner)},
              {"outer_radius", num(outer)}};
}

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json config_echo(const char* command, const std::string& spec_label, const WeightSpec& spec,
                 const ResolvedConfig& rc, const RunConfig& config) {
  Json e;
  e["command"] = command;
  e["spec"] = spec_label;
  e["backend"] = std::string(to_string(spec.backend()));
  e["horizon"] = rc.horizon;
  e["k_max"] = rc.k_max;
  e["samples"] = rc.samples;
  e["seed"] = rc.seed;
  e["chain_tol"] = rc.chain_tol ? Json(*rc.chain_tol) : Json("default");
  e["refute_tol"] = rc.refute_tol;
  e["tail_fraction"] = rc.estimator.tail_fraction;
  e["converge_tol"] = rc.estimator.converge_tol;
  e["format"] = config.format;
  return e;
}

Json document(Json echo, Json results, Json verdicts) {
  Json d;
  d["tool_version"] = kToolVersion;
  d["config_echo"] = std::move(echo);
  d["results"] = std::move(results);
  d["verdicts"] = std::move(verdicts);
  return d;
}

Json condition_json(const ConditionReport& c) {
  return Json{{"condition", std::string(to_string(c.condition))},
              {"lhs", estimate_json(c.lhs)},
              {"rhs", estimate_json(c.rhs)},
              {"holds", c.holds},
              {"refuted", !c.holds},
              {"tolerance", c.tolerance},
              {"witness", c.witness},
              {"direction", c.direction},
              {"k_max", c.k_max}};
}

struct ReportParts {
  RadiiReport radii;
  SpectrumDescriptor spectrum;
  FatLocalCertificate fat;
  Json results;
  Json verdicts;
  bool consistent = true;
};

ReportParts build_report(const WeightSpec& spec, const AnalysisConfig& analysis) {
  ReportParts p;
  p.radii = radii_report(spec, analysis);
  p.spectrum = svep_spectrum_report(spec, p.radii, analysis);
  p.fat = fat_local_certificate(p.radii, analysis.chain_tol);
  const auto& r = p.radii;
  const auto& s = p.spectrum;

  Json radii{{"r1", estimate_json(r.r1)},
             {"r2", estimate_json(r.r2)},
             {"r3", estimate_json(r.r3)},
             {"R2_minus", estimate_json(r.R2_minus)},
             {"R2_plus", estimate_json(r.R2_plus)},
             {"R3_minus", estimate_json(r.R3_minus)},
             {"R3_plus", estimate_json(r.R3_plus)},
             {"r", estimate_json(r.r)}};
  Json candidates{{"count", r.candidate_count},
                  {"R2_minus_at", r.R2_minus_at},
                  {"R2_plus_at", r.R2_plus_at},
                  {"R3_minus_at", r.R3_minus_at},
                  {"R3_plus_at", r.R3_plus_at},
                  {"caveat", "R2/R3 bounds are extremes over the candidate set only, except on exact paths"}};
  Json fast{{"r", r.fast_path.r},   {"r1", r.fast_path.r1}, {"r2", r.fast_path.r2},
            {"r3", r.fast_path.r3}, {"R2", r.fast_path.R2}, {"R3", r.fast_path.R3}};
  Json violations = Json::array();
  for (const auto& v : r.violations)
    violations.push_back({{"lower", v.lower},
                          {"upper", v.upper},
                          {"lower_value", num(v.lower_value)},
                          {"upper_value", num(v.upper_value)},
                          {"tolerance", v.tolerance}});
  Json scalar_eq = r.scalar_equalities_ok ? Json(*r.scalar_equalities_ok) : Json(nullptr);
  Json chains{{"left", r.chain_ok_left},
              {"right", r.chain_ok_right},
              {"scalar_equalities", scalar_eq},
              {"violations", violations}};

  Json spectrum{{"full_disc_radius", num(s.full_disc_radius)},
                {"ap_min_modulus", num(s.ap_min_modulus)},
                {"adjoint_point_inner_radius", num(s.adjoint_point_inner_radius)},
                {"adjoint_point_outer_radius", num(s.adjoint_point_outer_radius)},
                {"svep_adjoint_defect_radius", num(s.svep_adjoint_defect_radius)},
                {"adjoint_has_svep", s.adjoint_has_svep},
                {"point_spectrum_empty", s.point_spectrum_empty}};
  if (s.ap_annulus)
    spectrum["ap_annulus"] = {{"inner_radius", num(s.ap_annulus->inner)}, {"outer_radius", num(s.ap_annulus->outer)}};
  else
    spectrum["ap_annulus"] = nullptr;
  if (s.spot_check)
    spectrum["eigvec_spot_check"] = {{"lambda", complex_json(s.spot_check->lambda)},
                                     {"x0", s.spot_check->x0_label},
                                     {"residual_64", num(s.spot_check->residual_64)},
                                     {"residual_128", num(s.spot_check->residual_128)},
                                     {"decays", s.spot_check->decays}};
  else
    spectrum["eigvec_spot_check"] = nullptr;
  spectrum["beta_note"] = s.beta_note ? Json(*s.beta_note) : Json(nullptr);
  spectrum["fat_local"] = {{"verdict", p.fat.certified ? "certified" : "not_certified"},
                           {"r", num(p.fat.r.value)},
                           {"R2_minus", num(p.fat.R2_minus.value)},
                           {"tolerance", p.fat.tolerance}};

  Json geometry = Json::array();
  geometry.push_back(shape("disc", "spectrum", 0.0, s.full_disc_radius));
  if (s.ap_annulus) geometry.push_back(shape("annulus", "approximate_point_spectrum", s.ap_annulus->inner,
                                             s.ap_annulus->outer));
  geometry.push_back(shape("disc", "adjoint_point_spectrum_inner", 0.0, s.adjoint_point_inner_radius));
  geometry.push_back(shape("disc", "adjoint_point_spectrum_outer", 0.0, s.adjoint_point_outer_radius));
  geometry.push_back(shape("disc", "adjoint_svep_defect", 0.0, s.svep_adjoint_defect_radius));

  bool all_converged = true;
  for (const auto* e : {&r.r1, &r.r2, &r.r3, &r.R2_minus, &r.R2_plus, &r.R3_minus, &r.R3_plus, &r.r})
    all_converged = all_converged && e->converged;

  p.results = Json{{"spec", spec_to_json(spec)}, {"radii", radii},     {"candidates", candidates},
                   {"fast_path", fast},          {"chains", chains},   {"spectrum", spectrum},
                   {"geometry", geometry}};
  p.verdicts = Json{{"chain_ok_left", r.chain_ok_left},
                    {"chain_ok_right", r.chain_ok_right},
                    {"scalar_equalities_ok", scalar_eq},
                    {"fat_local_spectra", p.fat.certified ? "certified" : "not_certified"},
                    {"all_converged", all_converged}};
  p.consistent = r.chain_ok_left && r.chain_ok_right && r.scalar_equalities_ok.value_or(true);
  return p;
}

// Single-slot H-vector for the condition checks. A vector at slot k is
// moved to slot 0 as B_k^{-1} x, which has the same local radius.
HVector condition_vector(const WeightSpec& spec, const EmbeddedVector& x) {
  std::vector<const SlotEntry*> nz;
  for (const auto& e : x.entries())
    if (!e.component.is_zero()) nz.push_back(&e);
  if (nz.empty()) throw ZeroVector();
  if (nz.size() > 1) throw VectorLiteralError(0, "check expects a vector with a single non-zero slot");
  if (nz[0]->slot == 0) return nz[0]->component;
  return inverse_apply(spec, nz[0]->slot, nz[0]->component).unit;
}

void csv_walk(const Json& j, std::vector<std::string>& path, std::ostringstream& os);

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

void csv_row(const std::vector<std::string>& path, const std::string& n, const std::string& value,
             std::ostringstream& os) {
  const std::string section = path.empty() ? "" : path.front();
  std::string key;
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (!key.empty() && path[i].front() != '[') key += '.';
    key += path[i];
  }
  os << csv_field(section) << ',' << csv_field(key) << ',' << n << ',' << csv_field(value) << '\n';
}

void csv_walk(const Json& j, std::vector<std::string>& path, std::ostringstream& os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      path.push_back(it.key());
      if (it.key() == "tail" && it->is_array()) {
        for (const auto& s : *it) csv_row(path, s[0].dump(), scalar_text(s[1]), os);
      } else {
        csv_walk(*it, path, os);
      }
      path.pop_back();
    }
  } else if (j.is_array()) {
    const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
    if (flat) {
      std::string v;
      for (std::size_t i = 0; i < j.size(); ++i) v += (i ? " " : "") + scalar_text(j[i]);
      csv_row(path, "", v, os);
      return;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      path.push_back("[" + std::to_string(i) + "]");
      csv_walk(j[i], path, os);
      path.pop_back();
    }
  } else {
    csv_row(path, "", scalar_text(j), os);
  }
}

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

// Interval ends get a rounding allowance: an exact rate of 2 comes back as
// exp(n log 2 / n), a few ulps away from 2.
bool within(double v, double lo, double hi) {
  constexpr double ulp_slack = 1e-12;
  return v >= lo * (1 - ulp_slack) && v <= hi * (1 + ulp_slack);
}

}  // namespace

CommandResult cmd_report(const WeightSpec& spec, const RunConfig& config, const std::string& spec_label) {
  const ResolvedConfig rc = resolve(spec, config.analysis);
  ReportParts p = build_report(spec, config.analysis);
  CommandResult res;
  res.document = document(config_echo("report", spec_label, spec, rc, config), std::move(p.results),
                          std::move(p.verdicts));
  res.exit_code = p.consistent ? exit_code::ok : exit_code::inconsistent;
  return res;
}

CommandResult cmd_report(const std::string& spec_file, const RunConfig& config) {
  return cmd_report(load_spec(spec_file), config, spec_file);
}

CommandResult cmd_local(const std::string& spec_file, const std::string& vector_literal, const RunConfig& config) {
  const WeightSpec spec = load_spec(spec_file);
  const EmbeddedVector x = parse_embedded_vector(vector_literal, spec);
  if (x.is_zero()) throw ZeroVector();
  const ResolvedConfig rc = resolve(spec, config.analysis);
  const LocalReport lr = local_radius(spec, x, rc.horizon, rc.estimator);
  const LowerBoundReport lb = local_lower_bounds(spec, x, config.analysis);

  Json per_slot = Json::array();
  for (const auto& s : lr.per_slot_radii) per_slot.push_back({{"slot", s.slot}, {"radius", estimate_json(s.radius)}});
  Json considered = Json::array();
  for (const auto& c : lb.considered) considered.push_back({{"provenance", c.provenance}, {"radius", num(c.radius)}});

  Json results;
  results["vector"] = vector_literal;
  results["local_radius"] = estimate_json(lr.local_radius);
  results["direct_radius"] = estimate_json(lr.direct_radius);
  results["cross_check"] = {{"ok", lr.cross_check_ok}, {"tolerance", lr.cross_check_tol}};
  results["per_slot_radii"] = per_slot;
  results["R_A"] = num(lr.R_A);
  results["finite_support"] = lr.finite_support;
  results["lower_bound"] = {{"radius", num(lb.radius)},
                            {"provenance", lb.provenance},
                            {"considered", considered},
                            {"within_local_radius", lb.within_local_radius}};
  if (config.grid > 0) {
    std::vector<double> radii;
    for (int i = 1; i <= config.grid; ++i) radii.push_back(1.5 * lr.local_radius.value * i / config.grid);
    Json grid = Json::array();
    for (const auto& g : resolvent_grid(spec, x, radii, 8, 128))
      grid.push_back({{"lambda", complex_json(g.lambda)},
                      {"verdict", std::string(to_string(g.verdict))},
                      {"slope", num(g.slope)}});
    results["resolvent_grid"] = grid;
  }
  Json geometry = Json::array();
  geometry.push_back(shape("disc", "local_spectrum_lower_bound", 0.0, lb.radius));
  geometry.push_back(shape("disc", "local_spectrum_hull", 0.0, lr.local_radius.value));
  results["geometry"] = geometry;

  Json echo = config_echo("local", spec_file, spec, rc, config);
  echo["vector"] = vector_literal;
  echo["grid"] = config.grid;
  CommandResult res;
  res.document = document(std::move(echo), std::move(results),
                          {{"cross_check_ok", lr.cross_check_ok}, {"lower_bound_within_local_radius", lb.within_local_radius}});
  res.exit_code = lr.cross_check_ok && lb.within_local_radius ? exit_code::ok : exit_code::inconsistent;
  return res;
}

CommandResult cmd_check(const std::string& spec_file, const std::string& which, const std::string& vector_literal,
                        const RunConfig& config) {
  if (which != "dunford" && which != "bishop")
    throw VectorLiteralError(0, "unknown condition \"" + which + "\" (expected dunford or bishop)");
  const WeightSpec spec = load_spec(spec_file);
  const HVector x = condition_vector(spec, parse_embedded_vector(vector_literal, spec));
  const ResolvedConfig rc = resolve(spec, config.analysis);

  std::vector<ConditionReport> reports;
  const auto radii_pair = [&] { return bishop_radii_check(spec, config.analysis); };
  if (which == "dunford") {
    reports.push_back(dunford_check(spec, x, config.analysis));
    reports.push_back(radii_pair().second);
  } else {
    reports.push_back(bishop_check(spec, x, config.analysis));
    auto [r1r2, rr3] = radii_pair();
    reports.push_back(r1r2);
    reports.push_back(rr3);
  }
  Json list = Json::array();
  Json refuted = Json::array();
  bool holds = true;
  for (const auto& r : reports) {
    list.push_back(condition_json(r));
    if (!r.holds) refuted.push_back(std::string(to_string(r.condition)));
    holds = holds && r.holds;
  }
  Json echo = config_echo("check", spec_file, spec, rc, config);
  echo["condition"] = which;
  echo["vector"] = vector_literal;
  CommandResult res;
  res.document = document(std::move(echo), Json{{"checks", list}},
                          {{"holds", holds}, {"refuted", refuted}, {"direction", "necessary_only"}});
  res.exit_code = holds ? exit_code::ok : exit_code::refuted;
  return res;
}

CommandResult cmd_examples(const std::string& name, const RunConfig& config) {
  const WeightSpec spec = canonical_spec(name);
  RunConfig cfg = config;
  if (name == "kim" && !cfg.analysis.horizon) cfg.analysis.horizon = Index{1} << 14;
  const ResolvedConfig rc = resolve(spec, cfg.analysis);
  if (config.write_spec) save_spec(*config.write_spec, spec);

  ReportParts p = build_report(spec, cfg.analysis);
  const RadiiReport& r = p.radii;
  std::vector<Check> checks;

  if (name == "geometric") {
    bool all = true;
    std::string detail;
    for (const auto* e : {&r.r1, &r.r2, &r.r3, &r.R2_minus, &r.R2_plus, &r.R3_minus, &r.R3_plus, &r.r}) {
      all = all && std::abs(e->value - 2.0) <= 1e-9;
      detail += fmt(e->value) + " ";
    }
    checks.push_back({"all eight radii equal 2 within 1e-9", all, detail});
    checks.push_back({"both inequality chains hold", r.chain_ok_left && r.chain_ok_right, ""});
    checks.push_back({"fat local spectra certified", p.fat.certified, ""});
  } else if (name == "diagonal") {
    const bool ids = near(r.r.value, 1.0, 1e-6) && near(r.R3_plus.value, 1.0, 1e-6) && near(r.r1.value, 0.5, 1e-6) &&
                     near(r.r2.value, 0.5, 1e-6) && near(r.R2_minus.value, 0.5, 1e-6);
    checks.push_back({"r = R3+ = 1 and r1 = r2 = R2- = 1/2 within 1e-6", ids,
                      "r=" + fmt(r.r.value) + " R3+=" + fmt(r.R3_plus.value) + " r1=" + fmt(r.r1.value) +
                          " r2=" + fmt(r.r2.value) + " R2-=" + fmt(r.R2_minus.value)});
    checks.push_back({"r1 = 1/2 < r = 1", r.r1.value < r.r.value, ""});
    const Index h = rc.horizon;
    const double s0 = local_radius_slot(spec, 0, HVector::basis(2, 0), h).value;
    const double s1 = local_radius_slot(spec, 0, HVector::basis(2, 1), h).value;
    checks.push_back({"local radii of e0 and e1 at slot 0 are 1/2 and 1 within 1e-6",
                      near(s0, 0.5, 1e-6) && near(s1, 1.0, 1e-6), fmt(s0) + " " + fmt(s1)});
    checks.push_back({"fat local spectra not certified", !p.fat.certified, ""});
    const auto& a = p.spectrum.ap_annulus;
    checks.push_back({"approximate point spectrum annulus [1/2, 1] within 5%",
                      a && near(a->inner, 0.5, 0.05) && near(a->outer, 1.0, 0.05),
                      a ? fmt(a->inner) + " " + fmt(a->outer) : "not emitted"});
  } else {
    const HVector e0 = HVector::unit_at(0);
    const ConditionReport d = dunford_check(spec, e0, cfg.analysis);
    const ConditionReport b = bishop_check(spec, e0, cfg.analysis);
    checks.push_back({"dunford identity refuted at e0 with lhs in [1.31, 1.51] and rhs in [1.9, 2.0]",
                      !d.holds && within(d.lhs.value, 1.31, 1.51) && within(d.rhs.value, 1.9, 2.0),
                      "lhs=" + fmt(d.lhs.value) + " rhs=" + fmt(d.rhs.value)});
    checks.push_back({"bishop identity refuted at e0", !b.holds,
                      "inf=" + fmt(b.lhs.value) + " sup=" + fmt(b.rhs.value)});
    checks.push_back({"r near 2 and r1 near 1/2 within 0.1",
                      std::abs(r.r.value - 2.0) <= 0.1 && std::abs(r.r1.value - 0.5) <= 0.1,
                      "r=" + fmt(r.r.value) + " r1=" + fmt(r.r1.value)});
    p.results["conditions"] = Json::array({condition_json(d), condition_json(b)});
  }

  CommandResult res;
  Json list = Json::array();
  bool all = true;
  for (const auto& c : checks) {
    const std::string line = std::string(c.pass ? "PASS" : "FAIL") + " " + name + ": " + c.name +
                             (c.detail.empty() ? "" : " (" + c.detail + ")");
    res.lines.push_back(line);
    list.push_back({{"name", c.name}, {"status", c.pass ? "PASS" : "FAIL"}, {"detail", c.detail}});
    all = all && c.pass;
  }
  Json results{{"example", name}, {"report", std::move(p.results)}, {"checks", list}};
  Json echo = config_echo("examples", name, spec, rc, cfg);
  echo["example"] = name;
  Json verdicts = std::move(p.verdicts);
  verdicts["all_checks_pass"] = all;
  res.document = document(std::move(echo), std::move(results), std::move(verdicts));
  res.exit_code = all ? exit_code::ok : exit_code::inconsistent;
  return res;
}

std::string render(const Json& doc, const std::string& format) {
  if (format == "csv") {
    std::ostringstream os;
    os << "section,key,n,value\n";
    std::vector<std::string> path;
    csv_walk(doc, path, os);
    return os.str();
  }
  return doc.dump(2) + "\n";
}

int run_command(const std::function<CommandResult()>& command, const RunConfig& config, std::ostream& out,
                std::ostream& err) {
  CommandResult res;
  try {
    res = command();
  } catch (const SpecError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_code::parse_error;
  } catch (const VectorLiteralError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_code::parse_error;
  } catch (const SingularWeight& e) {
    err << "singular weight: " << e.what() << "\n";
    return exit_code::singular_weight;
  } catch (const ZeroVector& e) {
    err << "zero vector: " << e.what() << "\n";
    return exit_code::zero_vector;
  } catch (const Error& e) {
    err << "analysis error: " << e.what() << "\n";
    return exit_code::inconsistent;
  }
  const std::string text = render(res.document, config.format);
  if (config.out) {
    std::ofstream f(*config.out, std::ios::binary);
    if (!f) {
      err << "cannot write " << *config.out << "\n";
      return exit_code::inconsistent;
    }
    f << text;
  } else {
    out << text;
  }
  for (const auto& l : res.lines) err << l << "\n";
  return res.exit_code;
}

}  // namespace ows
