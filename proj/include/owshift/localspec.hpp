#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "owshift/radii.hpp"

namespace ows {

struct SlotRadius {
  Index slot = 0;
  LimitEstimate radius;
};

struct LocalReport {
  EmbeddedVector x;
  LimitEstimate local_radius;
  /// limsup ||S_u^n x||^{1/n} from the whole-vector orbit.
  LimitEstimate direct_radius;
  bool cross_check_ok = false;
  double cross_check_tol = 0.0;
  double R_A = 0.0;
  bool finite_support = true;
  std::vector<SlotRadius> per_slot_radii;
};

/// limsup ||B_{n+k} B_k^{-1} x||^{1/n}.
LimitEstimate local_radius_slot(const WeightSpec& spec, Index k, const HVector& x, Index horizon,
                                const EstimatorOptions& opts = {});

LocalReport local_radius(const WeightSpec& spec, const EmbeddedVector& x, Index horizon,
                         const EstimatorOptions& opts = {}, double cross_check_tol = 0.02);

/// +inf for every finitely supported non-zero x.
double r_a(const WeightSpec& spec, const EmbeddedVector& x);

struct BoundCandidate {
  std::string provenance;
  double radius = 0.0;
};

struct LowerBoundReport {
  double radius = 0.0;
  std::string provenance;
  std::vector<BoundCandidate> considered;
  double local_radius = 0.0;
  bool within_local_radius = false;
};

/// Largest disc radius known to lie in the local spectrum of x.
LowerBoundReport local_lower_bounds(const WeightSpec& spec, const EmbeddedVector& x, const AnalysisConfig& config = {});

struct EigvecResult {
  EmbeddedVector vector;
  double residual = 0.0;
  /// |lambda|^{N+1} ||(B_N^*)^{-1} x0|| / ||k||, the exact size of the
  /// truncation defect.
  double tail_bound = 0.0;
  double rate = 0.0;
};

/// Degree-N truncation of sum_n lambda^n (B_n^*)^{-1} x0 placed at slot n.
/// Throws OutsideDisc when |lambda| is not below the numeric rate of x0.
EigvecResult eigvec_candidate(const WeightSpec& spec, Complex lambda, const HVector& x0, Index N,
                              std::optional<Index> rate_horizon = std::nullopt);

enum class ResolventVerdict { Diverges, Converges, Inconclusive };
std::string_view to_string(ResolventVerdict v);

struct ResolventTrace {
  Complex lambda;
  /// (n, log ||F_n||) from the product form -(1/lambda^{n+1}) B_n G_n.
  std::vector<std::pair<Index, double>> F_norms;
  /// (n, log ||F_n||) from the direct recursion.
  std::vector<std::pair<Index, double>> F_norms_direct;
  std::vector<std::pair<Index, HVector>> G_values;
  double slope = 0.0;
  double G_norm = 0.0;
  /// Largest ||F_direct - F_product|| / ||F_direct|| over n.
  double max_relative_gap = 0.0;
  ResolventVerdict verdict = ResolventVerdict::Inconclusive;
};

ResolventTrace resolvent_trace(const WeightSpec& spec, const EmbeddedVector& x, Complex lambda, Index N);

struct GridPoint {
  Complex lambda;
  ResolventVerdict verdict = ResolventVerdict::Inconclusive;
  double slope = 0.0;
};

/// Resolvent verdicts on radii x `angles` points.
std::vector<GridPoint> resolvent_grid(const WeightSpec& spec, const EmbeddedVector& x,
                                      const std::vector<double>& radii, int angles, Index N);

/// exp(log ||B_{n+1} x|| - log ||B_n x||) for n < horizon.
std::vector<double> subspace_weights(const WeightSpec& spec, const HVector& x, Index horizon);

struct FatLocalCertificate {
  bool certified = false;
  LimitEstimate r;
  LimitEstimate R2_minus;
  double tolerance = 0.0;
};

FatLocalCertificate fat_local_certificate(const WeightSpec& spec, const AnalysisConfig& config = {});
FatLocalCertificate fat_local_certificate(const RadiiReport& radii, const std::optional<double>& chain_tol);

}  // namespace ows
