#include <gtest/gtest.h>

#include <filesystem>

#include "oracles.hpp"
#include "owshift/canonical.hpp"
#include "owshift/spec_io.hpp"
#include "owshift/vector_literal.hpp"

using namespace ows;

namespace {

std::string path_of(const std::string& text) {
  try {
    parse_spec(text);
  } catch (const SpecError& e) {
    return e.path();
  }
  return "<no error>";
}

void expect_same_weights(const WeightSpec& a, const WeightSpec& b, Index upto) {
  ASSERT_EQ(a.backend(), b.backend());
  ASSERT_EQ(a.dim(), b.dim());
  for (Index n = 0; n < upto; ++n) {
    const auto wa = weight_at(a, n);
    const auto wb = weight_at(b, n);
    if (const auto* m = std::get_if<Matrix>(&wa)) {
      EXPECT_EQ(*m, std::get<Matrix>(wb)) << n;
    } else {
      const auto& sa = std::get<ShiftOperator>(wa);
      const auto& sb = std::get<ShiftOperator>(wb);
      EXPECT_EQ(sa.lo, sb.lo);
      EXPECT_EQ(sa.hi, sb.hi);
      EXPECT_EQ(*sa.weights, *sb.weights);
    }
  }
}

}  // namespace

TEST(SpecIo, RoundTripEveryBackend) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 20; ++i) {
    const auto t = oracle::random_dense(rng, i, 4);
    const WeightSpec back = spec_from_json(spec_to_json(t.spec));
    expect_same_weights(t.spec, back, 40);
    EXPECT_EQ(spec_to_json(back).dump(), spec_to_json(t.spec).dump());
  }
  const WeightSpec kim = canonical_spec("kim");
  expect_same_weights(kim, parse_spec(spec_to_json(kim).dump()), 1);
}

TEST(SpecIo, BundledSpecFilesParse) {
  const std::string dir = OWSHIFT_SPECS_DIR;
  const WeightSpec s = load_spec(dir + "/scalar_w2.spec");
  EXPECT_EQ(s.backend(), Backend::ScalarSequence);
  EXPECT_EQ(std::get<Matrix>(weight_at(s, 1000))(0, 0), Complex(2.0));
  const WeightSpec d = load_spec(dir + "/diag_half_one.spec");
  EXPECT_EQ(d.dim(), 2);
  const WeightSpec k = load_spec(dir + "/kim_blocks.spec");
  EXPECT_EQ(k.backend(), Backend::BilateralShiftScalar);
  expect_same_weights(k, canonical_spec("kim"), 1);
}

TEST(SpecIo, SaveAndLoad) {
  const auto file = std::filesystem::temp_directory_path() / "owshift_roundtrip.spec";
  const WeightSpec s = WeightSpec::listed_matrices({Matrix::Identity(2, 2), 2.0 * Matrix::Identity(2, 2)},
                                                   TailKind::Periodic, 2);
  save_spec(file.string(), s);
  expect_same_weights(s, load_spec(file.string()), 10);
  std::filesystem::remove(file);
}

TEST(SpecIo, HandWrittenDocument) {
  const WeightSpec s = parse_spec(R"j({
    "backend": "ListedMatricesWithTail", "dim": 1,
    "data": {"matrices": [[[2, 0]], [[0.5, 0]], [[3, 1]]], "tail": {"kind": "periodic", "period": 2}},
    "declared_bounds": {"sup_norm": 4, "sup_inverse_norm": 2}
  })j");
  EXPECT_EQ(std::get<Matrix>(weight_at(s, 3))(0, 0), Complex(0.5));
  EXPECT_EQ(std::get<Matrix>(weight_at(s, 4))(0, 0), Complex(3.0, 1.0));
  ASSERT_TRUE(s.declared_bounds().has_value());
}

TEST(SpecIo, ErrorsCiteFieldPath) {
  EXPECT_EQ(path_of("{"), "<document>");
  EXPECT_EQ(path_of("[]"), "<document>");
  EXPECT_EQ(path_of(R"j({"dim": 1, "data": {}})j"), "backend");
  EXPECT_EQ(path_of(R"j({"backend": "Nope", "dim": 1, "data": {}})j"), "backend");
  EXPECT_EQ(path_of(R"j({"backend": "ConstantMatrix", "dim": 2, "data": {"matrix": [[1,0],[0,0],[0,0]]}})j"),
            "data.matrix");
  EXPECT_EQ(path_of(R"j({"backend": "ConstantMatrix", "dim": 1, "data": {"matrix": [[1,"x"]]}})j"),
            "data.matrix[0][1]");
  EXPECT_EQ(path_of(R"j({"backend": "PeriodicMatrices", "dim": 1, "data": {"matrices": [[[1,0]], [[1]]]}})j"),
            "data.matrices[1][0]");
  EXPECT_EQ(path_of(R"j({"backend": "ScalarSequence", "data": {"weights": [1, 2], "tail": {"kind": "odd"}}})j"),
            "data.tail.kind");
  EXPECT_EQ(path_of(R"j({"backend": "ScalarSequence", "data": {"weights": [1, 2], "tail": {"kind": "constant"}}})j"),
            "data.tail.value");
  EXPECT_EQ(path_of(R"j({"backend": "BilateralShiftScalar", "dim": "l2(Z)", "data": {"blocks": [{"value": 2}]}})j"),
            "data.blocks[0].length");
  EXPECT_EQ(path_of(R"j({"backend": "ConstantDiagonal", "dim": 3, "data": {"diagonal": [1, 2]}})j"), "data.diagonal");
  EXPECT_EQ(path_of(R"j({"backend": "ConstantDiagonal", "dim": 0, "data": {"diagonal": []}})j"), "dim");
  EXPECT_EQ(path_of(R"j({"backend": "ConstantDiagonal", "dim": 1, "data": {"diagonal": [4]},
                        "declared_bounds": {"sup_norm": 2, "sup_inverse_norm": 1}})j"),
            "declared_bounds.sup_norm");
  EXPECT_THROW(load_spec("/nonexistent/owshift.spec"), SpecError);
}

TEST(SpecIo, SingularWeightsRaiseSingularWeight) {
  EXPECT_THROW(parse_spec(R"j({"backend": "ConstantMatrix", "dim": 2, "data": {"matrix": [[1,0],[2,0],[2,0],[4,0]]}})j"),
               SingularWeight);
  EXPECT_THROW(parse_spec(R"j({"backend": "ConstantDiagonal", "dim": 2, "data": {"diagonal": [1, 0]}})j"),
               SingularWeight);
}

TEST(VectorLiteral, ParsesTermsAndSlots) {
  const auto slots = parse_vector_literal("[2: (0.5-2i)*e1 + e0, 0: 1]");
  ASSERT_EQ(slots.size(), 2u);
  EXPECT_EQ(slots[0].slot, 0);
  ASSERT_EQ(slots[0].terms.size(), 1u);
  EXPECT_EQ(slots[0].terms[0].basis, 0);
  EXPECT_EQ(slots[0].terms[0].coeff, Complex(1.0));
  EXPECT_EQ(slots[1].slot, 2);
  ASSERT_EQ(slots[1].terms.size(), 2u);
  EXPECT_EQ(slots[1].terms[0].coeff, Complex(0.5, -2.0));
  EXPECT_EQ(slots[1].terms[0].basis, 1);
  EXPECT_EQ(slots[1].terms[1].basis, 0);
}

TEST(VectorLiteral, SignsExponentsAndNegativeBasis) {
  const auto s = parse_vector_literal("[0: -2.5E-1*e3 - e(-4) + 2i]");
  ASSERT_EQ(s[0].terms.size(), 3u);
  EXPECT_EQ(s[0].terms[0].coeff, Complex(-0.25));
  EXPECT_EQ(s[0].terms[0].basis, 3);
  EXPECT_EQ(s[0].terms[1].coeff, Complex(-1.0));
  EXPECT_EQ(s[0].terms[1].basis, -4);
  EXPECT_EQ(s[0].terms[2].coeff, Complex(0.0, 2.0));
  EXPECT_EQ(s[0].terms[2].basis, 0);
  EXPECT_TRUE(parse_vector_literal("[]").empty());
}

TEST(VectorLiteral, ErrorsCarryColumn) {
  auto column = [](const char* text) -> std::size_t {
    try {
      parse_vector_literal(text);
    } catch (const VectorLiteralError& e) {
      return e.position();
    }
    return 999;
  };
  EXPECT_EQ(column("0: e0]"), 0u);
  EXPECT_EQ(column("[0 e0]"), 3u);
  EXPECT_NE(column("[0: e0, 0: e1]"), 999u);
  EXPECT_NE(column("[0: e0"), 999u);
  EXPECT_NE(column("[0: 2*]"), 999u);
  EXPECT_NE(column("[-1: e0]"), 999u);
}

TEST(VectorLiteral, EmbeddingChecksDimension) {
  const WeightSpec d = WeightSpec::constant_diagonal({0.5, 1.0});
  const EmbeddedVector x = parse_embedded_vector("[0: e0, 1: 3*e1 + e0]", d);
  ASSERT_EQ(x.entries().size(), 2u);
  EXPECT_EQ(x.entries()[1].component.coeffs(1), Complex(3.0));
  EXPECT_EQ(x.entries()[1].component.coeffs(0), Complex(1.0));
  EXPECT_THROW(parse_embedded_vector("[0: e2]", d), VectorLiteralError);
  EXPECT_THROW(parse_embedded_vector("[0: e(-1)]", d), VectorLiteralError);

  const WeightSpec k = WeightSpec::bilateral_shift({{2.0, 8}});
  const EmbeddedVector y = parse_embedded_vector("[0: e(-3) + 2*e2]", k);
  EXPECT_EQ(y.entries()[0].component.at(-3), Complex(1.0));
  EXPECT_EQ(y.entries()[0].component.at(2), Complex(2.0));
  EXPECT_THROW(parse_embedded_vector("[0: e(-9)]", k), VectorLiteralError);
}
