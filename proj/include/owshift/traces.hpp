#pragma once

#include <vector>

#include "owshift/weights.hpp"

// Bulk log-norm sequences. Entry i of every result is the value at n = i
// (or n = n_lo + i where a lower end is taken).

namespace ows {

/// log ||B_{k+n} B_k^{-1} x|| for n = 0..n_hi.
std::vector<double> orbit_log_norms(const WeightSpec& spec, Index k, const HVector& x, Index n_hi);

/// log ||(B_n^*)^{-1} x|| for n = 0..n_hi.
std::vector<double> inverse_adjoint_log_norms(const WeightSpec& spec, const HVector& x, Index n_hi);

/// max over k in [0, k_max] of log ||B_{k+n} B_k^{-1}||, n = n_lo..n_hi.
std::vector<double> sup_window_log_norms(const WeightSpec& spec, Index n_lo, Index n_hi, Index k_max);

/// min over k in [0, k_max] of the window log co-norm, n = n_lo..n_hi.
std::vector<double> inf_window_log_conorms(const WeightSpec& spec, Index n_lo, Index n_hi, Index k_max);

/// log ||B_n|| and log ||B_n^{-1}||, n = 0..n_hi.
std::vector<double> forward_log_norms(const WeightSpec& spec, Index n_hi);
std::vector<double> inverse_log_norms(const WeightSpec& spec, Index n_hi);

}  // namespace ows
