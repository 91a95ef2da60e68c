#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "owshift/limits.hpp"
#include "owshift/weights.hpp"

namespace ows {

struct AnalysisConfig {
  std::optional<Index> horizon;  // backend default when unset
  std::optional<Index> k_max;    // backend default when unset
  int samples = 8;
  std::uint64_t seed = 12345;
  std::optional<double> chain_tol;
  std::optional<double> refute_tol;
  EstimatorOptions estimator;
};

/// Config with the backend defaults filled in.
struct ResolvedConfig {
  Index horizon = 0;
  Index k_max = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  std::optional<double> chain_tol;
  double refute_tol = 0.0;
  EstimatorOptions estimator;
};

ResolvedConfig resolve(const WeightSpec& spec, const AnalysisConfig& config);

LimitEstimate spectral_radius(const WeightSpec& spec, Index horizon, Index k_max, const EstimatorOptions& opts = {});
LimitEstimate lower_radius_r1(const WeightSpec& spec, Index horizon, Index k_max, const EstimatorOptions& opts = {});
LimitEstimate r2(const WeightSpec& spec, Index horizon, const EstimatorOptions& opts = {});
LimitEstimate r3(const WeightSpec& spec, Index horizon, const EstimatorOptions& opts = {});

/// 1 / limsup ||(B_n^*)^{-1} x||^{1/n} for one vector.
LimitEstimate adjoint_rate(const WeightSpec& spec, const HVector& x, Index horizon, const EstimatorOptions& opts = {});
/// limsup ||B_n x||^{1/n} for one vector.
LimitEstimate forward_rate(const WeightSpec& spec, const HVector& x, Index horizon, const EstimatorOptions& opts = {});

/// Extremes of a per-vector rate over a finite candidate set. On exact
/// paths the candidate fields are empty and `exact` is set.
struct CandidateBounds {
  LimitEstimate minus;
  LimitEstimate plus;
  std::string argmin;
  std::string argmax;
  HVector argmin_vector;
  HVector argmax_vector;
  std::size_t candidate_count = 0;
  bool exact = false;
};

CandidateBounds r2_bounds(const WeightSpec& spec, Index horizon, int samples, std::uint64_t seed,
                          const EstimatorOptions& opts = {});
CandidateBounds r3_bounds(const WeightSpec& spec, Index horizon, int samples, std::uint64_t seed,
                          const EstimatorOptions& opts = {});

struct FastPathFlags {
  bool r = false;
  bool r1 = false;
  bool r2 = false;
  bool r3 = false;
  bool R2 = false;
  bool R3 = false;
};

struct ChainViolation {
  std::string lower;
  std::string upper;
  double lower_value = 0.0;
  double upper_value = 0.0;
  double tolerance = 0.0;
};

struct RadiiReport {
  LimitEstimate r1, r2, r3, R2_minus, R2_plus, R3_minus, R3_plus, r;
  std::string R2_minus_at, R2_plus_at, R3_minus_at, R3_plus_at;
  std::size_t candidate_count = 0;
  bool chain_ok_left = false;
  bool chain_ok_right = false;
  std::optional<bool> scalar_equalities_ok;
  FastPathFlags fast_path;
  std::vector<ChainViolation> violations;
  Index horizon = 0;
  Index k_max = 0;
};

RadiiReport radii_report(const WeightSpec& spec, const AnalysisConfig& config = {});

/// Tolerance used when a chain pair is compared: the configured value, or
/// 1e-6 when both sides are exact and 5% otherwise.
double chain_tolerance(const LimitEstimate& a, const LimitEstimate& b, const std::optional<double>& configured);

/// a <= b within tol relative to the larger side.
bool leq_tol(double a, double b, double tol);

}  // namespace ows
