#include "owshift/canonical.hpp"

namespace ows {

std::vector<WeightBlock> kim_blocks(int levels) {
  std::vector<WeightBlock> out;
  for (int j = 0; j < levels; ++j) {
    const Index len = Index{1} << j;
    out.push_back({0.5, len});
    out.push_back({2.0, 2 * len});
    out.push_back({2.0, len});
  }
  return out;
}

const std::vector<std::string>& canonical_names() {
  static const std::vector<std::string> names{"geometric", "diagonal", "kim"};
  return names;
}

WeightSpec canonical_spec(std::string_view name) {
  if (name == "geometric") return WeightSpec::constant_scalar(2.0);
  if (name == "diagonal") {
    Matrix t = Matrix::Zero(2, 2);
    t(0, 0) = 0.5;
    t(1, 1) = 1.0;
    return WeightSpec::constant_matrix(t);
  }
  if (name == "kim") return WeightSpec::bilateral_shift(kim_blocks(), true);
  throw Error("unknown example \"" + std::string(name) + "\"");
}

}  // namespace ows
