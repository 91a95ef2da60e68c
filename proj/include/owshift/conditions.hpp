#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "owshift/radii.hpp"

namespace ows {

enum class ConditionKind { DunfordDdcc, BishopBbishop, BishopR1R2, DccRR3Plus };
std::string_view to_string(ConditionKind k);

/// lhs/rhs of a necessary identity. `holds == false` refutes the property;
/// `holds == true` proves nothing.
struct ConditionReport {
  LimitEstimate lhs;
  LimitEstimate rhs;
  bool holds = false;
  double tolerance = 0.0;
  std::string witness;
  ConditionKind condition = ConditionKind::DunfordDdcc;
  std::string direction = "necessary_only";
  Index k_max = 0;
};

/// limsup ||B_n x||^{1/n} against lim [sup_k ||B_{n+k} x|| / ||B_k x||]^{1/n}.
ConditionReport dunford_check(const WeightSpec& spec, const HVector& x, Index horizon, Index k_max, double tol,
                              const EstimatorOptions& opts = {});
ConditionReport dunford_check(const WeightSpec& spec, const HVector& x, const AnalysisConfig& config = {});

/// lim [inf_k ratio]^{1/n} against lim [sup_k ratio]^{1/n}; lhs is the inf side.
ConditionReport bishop_check(const WeightSpec& spec, const HVector& x, Index horizon, Index k_max, double tol,
                             const EstimatorOptions& opts = {});
ConditionReport bishop_check(const WeightSpec& spec, const HVector& x, const AnalysisConfig& config = {});

/// (r1 vs r2, r vs R3+ candidate).
std::pair<ConditionReport, ConditionReport> bishop_radii_check(const WeightSpec& spec,
                                                               const AnalysisConfig& config = {});

struct Annulus {
  double inner = 0.0;
  double outer = 0.0;
};

struct EigvecSpotCheck {
  Complex lambda;
  std::string x0_label;
  double residual_64 = 0.0;
  double residual_128 = 0.0;
  bool decays = false;
};

struct SpectrumDescriptor {
  double full_disc_radius = 0.0;
  double ap_min_modulus = 0.0;
  double adjoint_point_inner_radius = 0.0;
  double adjoint_point_outer_radius = 0.0;
  double svep_adjoint_defect_radius = 0.0;
  bool adjoint_has_svep = false;
  bool point_spectrum_empty = true;
  std::optional<Annulus> ap_annulus;
  std::optional<EigvecSpotCheck> spot_check;
  std::optional<std::string> beta_note;
};

SpectrumDescriptor svep_spectrum_report(const WeightSpec& spec, const AnalysisConfig& config = {});
/// Same, reusing an existing radii report.
SpectrumDescriptor svep_spectrum_report(const WeightSpec& spec, const RadiiReport& radii,
                                        const AnalysisConfig& config = {});

}  // namespace ows
