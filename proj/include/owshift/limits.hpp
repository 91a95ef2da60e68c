#pragma once

#include <string_view>
#include <vector>

#include "owshift/types.hpp"

namespace ows {

enum class LimitMethod { Exact, TailMax, TailMin, TailLast };

std::string_view to_string(LimitMethod m);

struct TailSample {
  Index n = 0;
  double value = 0.0;
};

/// n-th root limit estimate. For the tail methods `tail` holds the samples
/// a_n^{1/n} of the reporting window and `value` is one of them.
struct LimitEstimate {
  double value = 0.0;
  std::vector<TailSample> tail;
  LimitMethod method = LimitMethod::Exact;
  Index horizon = 0;
  double spread = 0.0;
  bool converged = true;

  static LimitEstimate exact(double value, Index horizon);
};

struct EstimatorOptions {
  double tail_fraction = 0.25;
  double converge_tol = 0.05;
  bool exact_paths = true;
};

/// First n of the reporting window for horizon H.
Index tail_start(Index horizon, double tail_fraction);

/// Estimate from log a_n, where log_a[i] is the value at n = n_first + i and
/// the last entry is n = horizon. Entries with n < tail_start are ignored.
LimitEstimate estimate_from_log_trace(const std::vector<double>& log_a, Index n_first, LimitMethod method,
                                      const EstimatorOptions& opts);

}  // namespace ows
