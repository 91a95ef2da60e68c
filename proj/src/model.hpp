#pragma once

// Backend evaluation models behind WeightSpec. Internal header.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "owshift/weights.hpp"

namespace ows::detail {

struct Candidate {
  std::string label;
  HVector x;
};

class WeightModel {
 public:
  virtual ~WeightModel() = default;

  virtual Index dim() const = 0;
  virtual WeightOperator weight_at(Index n) const = 0;

  // Single-step actions: A_j y, A_j^{-1} y, A_j^* y, (A_j^*)^{-1} y.
  virtual HVector step(Index j, const HVector& y) const = 0;
  virtual HVector step_inverse(Index j, const HVector& y) const = 0;
  virtual HVector step_adjoint(Index j, const HVector& y) const = 0;
  virtual HVector step_inverse_adjoint(Index j, const HVector& y) const = 0;

  virtual ProductWindow window(Index k, Index n) const = 0;
  virtual double window_log_norm(Index k, Index n) const = 0;
  virtual double window_log_conorm(Index k, Index n) const = 0;

  // The sup/inf over all k >= 0 of any window quantity equals the sup/inf
  // over k < window_classes().
  virtual Index window_classes() const = 0;

  // Entry i corresponds to n = n_lo + i; k ranges over [0, k_max] clipped
  // to the window classes.
  virtual std::vector<double> sup_window_log_norms(Index n_lo, Index n_hi, Index k_max) const = 0;
  virtual std::vector<double> inf_window_log_conorms(Index n_lo, Index n_hi, Index k_max) const = 0;

  // log ||B_n|| and log ||B_n^{-1}|| for n = 0..n_hi.
  virtual std::vector<double> forward_log_norms(Index n_hi) const = 0;
  virtual std::vector<double> inverse_log_norms(Index n_hi) const = 0;

  virtual Index default_horizon() const = 0;
  virtual Index default_k_max(Index horizon) const { return horizon; }
  virtual double default_refute_tol() const { return 0.05; }

  virtual std::vector<Candidate> candidates(Index horizon, int samples, std::uint64_t seed) const = 0;

  // (min |lambda|, max |lambda|) over the spectrum of T when A_n = T.
  virtual std::optional<std::pair<double, double>> constant_modulus_range() const { return std::nullopt; }
  virtual bool constant_normal() const { return false; }

  // Sorted n-values between which n -> log ||B_n x|| is affine, when the
  // backend can certify that.
  virtual std::optional<std::vector<Index>> orbit_breakpoints(const HVector&, Index) const {
    return std::nullopt;
  }

  // Largest m such that B_m x stays inside the stored data; unbounded when
  // unset.
  virtual std::optional<Index> max_forward_steps(const HVector&) const { return std::nullopt; }

  // Throws if x is not an element of H for this backend.
  virtual void check_vector(const HVector& x) const = 0;

  // A model may be c times another one. Vector traces then run on the
  // unscaled model and add log c per step, so the scaled spec reproduces
  // the base rounding exactly.
  virtual const WeightModel& unscaled() const { return *this; }
  virtual double log_gain() const { return 0.0; }
};

std::shared_ptr<const WeightModel> make_model(const WeightData& data);

// c * base, sharing the evaluated base model.
std::shared_ptr<const WeightModel> scale_model(std::shared_ptr<const WeightModel> base, double c);

// Largest singular value; exact for 1x1.
double top_singular_value(const Matrix& m);

}  // namespace ows::detail
