#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "owshift/weights.hpp"

namespace ows {

/// Forward blocks of the two-valued bilateral weight. Level j contributes
/// 1/2 repeated 2^j times, then 2 repeated 2^(j+1) times, then 2 repeated
/// 2^j times. log2 of the prefix product is n/2 at the end of every level
/// and never exceeds it, so ||T^n e_0||^(1/n) has limsup sqrt(2), while the
/// 2-runs of length 3 * 2^j push the window norms to 2 and the 1/2-runs
/// pull the window co-norms to 1/2.
std::vector<WeightBlock> kim_blocks(int levels = 16);

/// "geometric" (scalar w = 2), "diagonal" (T = diag(1/2, 1)), "kim".
const std::vector<std::string>& canonical_names();
WeightSpec canonical_spec(std::string_view name);

}  // namespace ows
