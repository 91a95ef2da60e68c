#include <gtest/gtest.h>

#include "oracles.hpp"
#include "owshift/localspec.hpp"

using namespace ows;

namespace {

WeightSpec diag_half_one() {
  Matrix t = Matrix::Zero(2, 2);
  t(0, 0) = 0.5;
  t(1, 1) = 1.0;
  return WeightSpec::constant_matrix(t);
}

// S^* y on raw matrices: (S^* y)_n = A_n^* y_{n+1}.
oracle::Slots adjoint(const oracle::TestSpec& t, const oracle::Slots& y) {
  oracle::Slots out;
  for (const auto& [slot, v] : y)
    if (slot > 0) out[slot - 1] = t.A(slot - 1).adjoint() * v;
  return out;
}

double norm(const oracle::Slots& s) {
  double q = 0.0;
  for (const auto& [k, v] : s) q += v.squaredNorm();
  return std::sqrt(q);
}

oracle::Slots to_slots(const EmbeddedVector& e) {
  oracle::Slots s;
  for (const auto& x : e.entries()) s[x.slot] = x.component.coeffs;
  return s;
}

}  // namespace

TEST(LocalRadius, DiagonalPerSlotRates) {
  const WeightSpec s = diag_half_one();
  EXPECT_NEAR(local_radius_slot(s, 0, HVector::basis(2, 0), 512).value, 0.5, 1e-6);
  EXPECT_NEAR(local_radius_slot(s, 0, HVector::basis(2, 1), 512).value, 1.0, 1e-6);
  EXPECT_NEAR(local_radius_slot(s, 7, HVector::basis(2, 0), 512).value, 0.5, 1e-6);
}

TEST(LocalRadius, MaxRuleAcrossSlots) {
  const WeightSpec s = diag_half_one();
  const EmbeddedVector x({{0, HVector::basis(2, 0)}, {1, HVector::basis(2, 1)}});
  const LocalReport r = local_radius(s, x, 512);
  EXPECT_NEAR(r.local_radius.value, 1.0, 1e-6);
  ASSERT_EQ(r.per_slot_radii.size(), 2u);
  EXPECT_NEAR(r.per_slot_radii[0].radius.value, 0.5, 1e-6);
  EXPECT_NEAR(r.per_slot_radii[1].radius.value, 1.0, 1e-6);
  EXPECT_TRUE(r.cross_check_ok);
  EXPECT_TRUE(std::isinf(r.R_A));
}

TEST(LocalRadius, ScalarGeometric) {
  const WeightSpec s = WeightSpec::constant_scalar(2.0);
  const LocalReport r = local_radius(s, EmbeddedVector::single(0, HVector::basis(1, 0)), 2048);
  EXPECT_NEAR(r.local_radius.value, 2.0, 1e-12);
}

TEST(LocalRadius, MaxRuleAgainstStructuredOracle) {
  std::mt19937_64 rng(606);
  for (int i = 0; i < 20; ++i) {
    const auto t = oracle::random_dense(rng, i, 4);
    const oracle::Slots x = oracle::random_slots(rng, t.dim);
    const Index H = 1024;
    const LocalReport r = local_radius(t.spec, oracle::embed(x), H);
    auto orbit = oracle::shift_orbit(t, x, H);
    for (auto& v : orbit) v -= orbit.front();
    const double direct = oracle::tail_max_rate(orbit, H);
    EXPECT_NEAR(r.local_radius.value, direct, 0.02 * direct) << t.name << " #" << i;
    EXPECT_TRUE(r.cross_check_ok) << t.name << " #" << i;
  }
}

TEST(LocalRadius, ZeroVectorRejected) {
  const WeightSpec s = diag_half_one();
  EXPECT_THROW(local_radius(s, EmbeddedVector::single(0, HVector(Vector::Zero(2))), 64), ZeroVector);
  EXPECT_THROW(r_a(s, EmbeddedVector()), ZeroVector);
}

TEST(LowerBounds, DiagonalE0) {
  const LowerBoundReport b = local_lower_bounds(diag_half_one(), EmbeddedVector::single(0, HVector::basis(2, 0)));
  EXPECT_NEAR(b.radius, 0.5, 1e-9);
  EXPECT_EQ(b.provenance, "r1_disc");
  EXPECT_EQ(b.considered.size(), 4u);
  EXPECT_TRUE(b.within_local_radius);
}

TEST(LowerBounds, NeverExceedLocalRadiusOnSeededSpecs) {
  std::mt19937_64 rng(607);
  for (int i = 0; i < 15; ++i) {
    const auto t = oracle::random_dense(rng, i, 3);
    const oracle::Slots x = oracle::random_slots(rng, t.dim);
    AnalysisConfig c;
    c.horizon = 512;
    const LowerBoundReport b = local_lower_bounds(t.spec, oracle::embed(x), c);
    EXPECT_TRUE(b.within_local_radius) << t.name << " #" << i << " bound " << b.radius << " (" << b.provenance
                                       << ") radius " << b.local_radius;
  }
}

TEST(Eigvec, ResidualDecaysAtTheSeriesRate) {
  std::mt19937_64 rng(708);
  for (int i = 0; i < 10; ++i) {
    const Index d = 1 + i % 3;
    oracle::TestSpec t = i % 2 ? oracle::random_diagonal(rng, d) : oracle::random_scalar(rng);
    if (i % 2 == 0) {
      const double w = oracle::uniform(rng, 0.5, 2.0);
      t = {WeightSpec::constant_scalar(w), 1, [w](Index) { return Matrix::Constant(1, 1, w); }, "scalar"};
    }
    Vector x0(t.dim);
    for (Index j = 0; j < t.dim; ++j) x0(j) = oracle::gauss_c(rng);
    const double rate = eigvec_candidate(t.spec, 0.0, HVector(x0), 0).rate;
    const double ratio = oracle::uniform(rng, 0.8, 0.9);
    const Complex lambda = std::polar(ratio * rate, oracle::uniform(rng, 0.0, 6.28));
    const EigvecResult r64 = eigvec_candidate(t.spec, lambda, HVector(x0), 64);
    const EigvecResult r128 = eigvec_candidate(t.spec, lambda, HVector(x0), 128);
    EXPECT_LE(r64.residual, std::pow(std::abs(lambda) / rate, 64) * 10) << i;
    EXPECT_LT(r128.residual, r64.residual) << i;

    // Residual recomputed with raw matrices.
    const oracle::Slots k = to_slots(r64.vector);
    oracle::Slots res = adjoint(t, k);
    for (const auto& [slot, v] : k) {
      if (res.count(slot))
        res[slot] -= lambda * v;
      else
        res[slot] = -lambda * v;
    }
    EXPECT_NEAR(norm(res) / norm(k), r64.residual, 1e-6 * r64.residual + 1e-15) << i;
  }
}

TEST(Eigvec, OutsideDiscThrows) {
  EXPECT_THROW(eigvec_candidate(WeightSpec::constant_scalar(2.0), 2.5, HVector::basis(1, 0), 16), OutsideDisc);
  EXPECT_THROW(eigvec_candidate(WeightSpec::constant_scalar(2.0), 1.0, HVector(Vector::Zero(1)), 16), ZeroVector);
}

TEST(Resolvent, ProductFormMatchesDirectRecursion) {
  std::mt19937_64 rng(809);
  for (int i = 0; i < 10; ++i) {
    const auto t = oracle::random_dense(rng, i, 3);
    const oracle::Slots x = oracle::random_slots(rng, t.dim, 3, 4);
    const Complex lambda = std::polar(oracle::uniform(rng, 0.5, 2.5), oracle::uniform(rng, 0.0, 6.28));
    const Index N = 64;
    const ResolventTrace tr = resolvent_trace(t.spec, oracle::embed(x), lambda, N);
    EXPECT_LE(tr.max_relative_gap, 1e-8) << i;

    // Independent direct summation: F_n = -sum_{j <= n} lambda^{j-n-1} A_{n-1}..A_j x_j.
    const Index first = x.begin()->first;
    ASSERT_EQ(tr.F_norms.size(), static_cast<std::size_t>(N - first + 1));
    for (Index n = first; n <= N; ++n) {
      Vector f = Vector::Zero(t.dim);
      for (const auto& [j, xj] : x)
        if (j <= n) f -= std::pow(lambda, static_cast<double>(j - n - 1)) * (oracle::product(t, j, n - j) * xj);
      const double got = std::exp(tr.F_norms[n - first].second);
      EXPECT_NEAR(got, f.norm(), 1e-8 * f.norm()) << i << " n=" << n;
    }
  }
}

TEST(Resolvent, VerdictsInsideAndOutsideTheLocalDisc) {
  const WeightSpec s = WeightSpec::constant_scalar(2.0);
  const EmbeddedVector x = EmbeddedVector::single(0, HVector::basis(1, 0));
  EXPECT_EQ(resolvent_trace(s, x, 1.0, 200).verdict, ResolventVerdict::Diverges);
  EXPECT_EQ(resolvent_trace(s, x, Complex(0.0, 3.0), 200).verdict, ResolventVerdict::Converges);
  EXPECT_THROW(resolvent_trace(s, x, 0.0, 10), ZeroLambda);
  const auto grid = resolvent_grid(s, x, {1.0, 3.0}, 4, 128);
  ASSERT_EQ(grid.size(), 8u);
  for (int a = 0; a < 4; ++a) {
    EXPECT_EQ(grid[a].verdict, ResolventVerdict::Diverges);
    EXPECT_EQ(grid[4 + a].verdict, ResolventVerdict::Converges);
  }
}

TEST(SubspaceWeights, DiagonalBasisVector) {
  const auto w = subspace_weights(diag_half_one(), HVector::basis(2, 0), 32);
  ASSERT_EQ(w.size(), 32u);
  for (double v : w) EXPECT_NEAR(v, 0.5, 1e-14);
}

TEST(FatLocal, ScalarCertifiedDiagonalNot) {
  EXPECT_TRUE(fat_local_certificate(WeightSpec::constant_scalar(2.0)).certified);
  EXPECT_FALSE(fat_local_certificate(diag_half_one()).certified);
}
