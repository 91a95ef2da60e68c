#include "owshift/limits.hpp"

#include <algorithm>
#include <cmath>

namespace ows {

std::string_view to_string(LimitMethod m) {
  switch (m) {
    case LimitMethod::Exact:
      return "exact";
    case LimitMethod::TailMax:
      return "tail_max";
    case LimitMethod::TailMin:
      return "tail_min";
    case LimitMethod::TailLast:
      return "tail_last";
  }
  return "unknown";
}

LimitEstimate LimitEstimate::exact(double value, Index horizon) {
  LimitEstimate e;
  e.value = value;
  e.method = LimitMethod::Exact;
  e.horizon = horizon;
  return e;
}

Index tail_start(Index horizon, double tail_fraction) {
  const Index width = std::max<Index>(1, static_cast<Index>(std::floor(static_cast<double>(horizon) * tail_fraction)));
  return std::max<Index>(1, horizon - width + 1);
}

LimitEstimate estimate_from_log_trace(const std::vector<double>& log_a, Index n_first, LimitMethod method,
                                      const EstimatorOptions& opts) {
  if (log_a.empty()) throw Error("empty trace");
  const Index horizon = n_first + static_cast<Index>(log_a.size()) - 1;
  const Index start = std::max(n_first, tail_start(horizon, opts.tail_fraction));
  LimitEstimate e;
  e.method = method;
  e.horizon = horizon;
  for (Index n = start; n <= horizon; ++n) {
    const double la = log_a[static_cast<std::size_t>(n - n_first)];
    e.tail.push_back({n, std::exp(la / static_cast<double>(n))});
  }
  double lo = e.tail.front().value;
  double hi = lo;
  for (const auto& s : e.tail) {
    lo = std::min(lo, s.value);
    hi = std::max(hi, s.value);
  }
  switch (method) {
    case LimitMethod::TailMax:
      e.value = hi;
      break;
    case LimitMethod::TailMin:
      e.value = lo;
      break;
    case LimitMethod::TailLast:
      e.value = e.tail.back().value;
      break;
    case LimitMethod::Exact:
      throw Error("exact estimates are not built from traces");
  }
  e.spread = (std::isfinite(hi) && std::isfinite(lo)) ? hi - lo : 0.0;
  e.converged = e.value > 0.0 ? e.spread <= opts.converge_tol * e.value : e.spread == 0.0;
  return e;
}

}  // namespace ows
