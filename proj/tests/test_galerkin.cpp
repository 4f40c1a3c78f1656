#include <gtest/gtest.h>

#include <cmath>

#include "dirlab/galerkin.hpp"

using namespace dirlab;

namespace {
CuspProfile canonical() { return CuspProfile::from_decay(DecaySequence::dyadic(8), 1.0 / 200.0); }
}  // namespace

TEST(MomentMatrix, FullDiskIsIdentity) {
  for (int K : {1, 7, 32, 100}) {
    const auto mm = moment_matrix_disk(K);
    for (int j = 0; j < K; ++j)
      for (int k = 0; k < K; ++k) EXPECT_NEAR(mm.t(j, k), j == k ? 1.0 : 0.0, 1e-10) << K << ":" << j << "," << k;
  }
}

TEST(MomentMatrix, MatchesScalarMoments) {
  const auto prof = canonical();
  const auto mm = moment_matrix(prof, 6);
  for (int j = 0; j < 6; ++j)
    for (int k = 0; k < 6; ++k) {
      const double ref = cusp_moment(prof, j, k).value;
      EXPECT_NEAR(mm.mu_hat(j, k), ref, 1e-12 * mm.mu_hat(0, 0)) << j << "," << k;
    }
  EXPECT_LE(mm.max_doubling_change, 1e-8);
}

TEST(MomentMatrix, SymmetricPsdAndTrace) {
  const auto mm = moment_matrix(canonical(), 24);
  EXPECT_TRUE(mm.t.is_hermitian(1e-12));
  EXPECT_GE(mm.eigenvalues.back(), -1e-12 * mm.trace_moments());
  EXPECT_NEAR(mm.trace_eigen(), mm.trace_moments(), 1e-10 * mm.trace_moments());
}

TEST(MomentMatrix, NestedInterlacing) {
  const auto prof = canonical();
  const auto small = moment_matrix(prof, 16);
  const auto large = moment_matrix(prof, 32);
  const double tol = 1e-13 * large.trace_moments();
  for (std::size_t n = 0; n < 16; ++n) EXPECT_GE(large.eigenvalues[n], small.eigenvalues[n] - tol) << n;
  // the leading block of the larger matrix is the smaller matrix
  for (std::size_t j = 0; j < 16; ++j)
    for (std::size_t k = 0; k < 16; ++k)
      EXPECT_NEAR(large.t(j, k), small.t(j, k), 1e-14 * large.t(0, 0));
}

TEST(MomentMatrix, Validation) {
  EXPECT_THROW(moment_matrix(canonical(), 0), ValidationError);
  EXPECT_THROW(moment_matrix(canonical(), 401), ValidationError);
}

TEST(GalerkinRows, CrossingReport) {
  const auto eps = DecaySequence::dyadic(8);
  const auto mm = moment_matrix(canonical(), 16);
  const auto rows = galerkin_rows(mm, eps, 8);
  ASSERT_EQ(rows.size(), 8u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.K, 16);
    EXPECT_DOUBLE_EQ(r.floor, eps(r.n) * eps(r.n) / 64.0);
    EXPECT_EQ(r.crossed, r.lambda >= r.floor);
  }
}
