#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dirlab/spectra.hpp"
#include "oracles.hpp"

using namespace dirlab;

namespace {

RealMatrix from_dense(const oracle::Dense& a) {
  RealMatrix m(a.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) m(i, j) = a[i][j];
  return m;
}

}  // namespace

TEST(Eigh, SmallCases) {
  const std::vector<double> d{1.0, 2.0, 3.0};
  EXPECT_EQ(eigh(RealMatrix::diagonal(d)), (std::vector<double>{3.0, 2.0, 1.0}));
  const auto e = eigh(RealMatrix{{2.0, 1.0}, {1.0, 2.0}});
  EXPECT_NEAR(e[0], 3.0, 1e-15);
  EXPECT_NEAR(e[1], 1.0, 1e-15);
}

TEST(Eigh, RandomAgainstSturm) {
  const auto a = oracle::random_symmetric(50, 42);
  const auto ref = oracle::sturm_eigenvalues(a);
  const auto got = eigh(from_dense(a));
  ASSERT_EQ(got.size(), ref.size());
  for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_NEAR(got[k], ref[k], 1e-10) << k;
}

TEST(Eigh, OrthogonalSimilarityInvariance) {
  const auto a = oracle::random_symmetric(30, 9);
  const auto q = oracle::random_orthogonal(30, 10);
  const auto b = oracle::multiply(oracle::multiply(q, a), oracle::transpose(q));
  auto bs = b;
  for (std::size_t i = 0; i < 30; ++i)
    for (std::size_t j = 0; j < i; ++j) bs[i][j] = bs[j][i] = 0.5 * (b[i][j] + b[j][i]);
  const auto ea = eigh(from_dense(a)), eb = eigh(from_dense(bs));
  for (std::size_t k = 0; k < 30; ++k) EXPECT_NEAR(ea[k], eb[k], 1e-10);
}

TEST(Eigh, GradedMatrixKeepsTinyEigenvalues) {
  // D H D with H well conditioned and D spanning 20 orders of magnitude
  const std::size_t n = 8;
  RealMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = i == j ? 1.0 : 0.1 / (1.0 + std::abs(double(i) - double(j)));
  RealMatrix a(n, n);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = std::pow(10.0, -3.0 * i);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = d[i] * h(i, j) * d[j];
  const auto e = eigh(a);
  // each eigenvalue is within a modest factor of the corresponding d_i^2
  for (std::size_t k = 0; k < n; ++k) {
    EXPECT_GT(e[k], 0.5 * d[k] * d[k]);
    EXPECT_LT(e[k], 1.5 * d[k] * d[k]);
  }
}

TEST(Eigh, ComplexHermitian) {
  using cplx = std::complex<double>;
  ComplexMatrix a{{cplx(2, 0), cplx(0, 1)}, {cplx(0, -1), cplx(2, 0)}};
  const auto e = eigh(a);
  EXPECT_NEAR(e[0], 3.0, 1e-14);
  EXPECT_NEAR(e[1], 1.0, 1e-14);
}

TEST(Eigh, Validation) {
  EXPECT_THROW(eigh(RealMatrix(2, 3)), ValidationError);
  EXPECT_THROW(eigh(RealMatrix{{1.0, 2.0}, {0.0, 1.0}}), ValidationError);
  EXPECT_THROW(eigh(RealMatrix{{NAN, 0.0}, {0.0, 1.0}}), ValidationError);
}

TEST(Eigh, CauchyInterlacing) {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto b = oracle::random_symmetric(20, 100 + trial);
    const auto a = from_dense(oracle::multiply(b, oracle::transpose(b)));  // PSD
    const auto full = eigh(a);
    const auto sub = eigh(a.leading(15));
    for (std::size_t k = 0; k < 15; ++k) {
      EXPECT_LE(sub[k], full[k] + 1e-10);
      EXPECT_GE(sub[k], full[k + 5] - 1e-10);
    }
  }
}

TEST(SingularValues, Basics) {
  EXPECT_EQ(singular_values(RealMatrix::identity(4)), std::vector<double>(4, 1.0));
  const auto s = singular_values(RealMatrix{{3.0, 0.0}, {0.0, -4.0}});
  EXPECT_NEAR(s[0], 4.0, 1e-15);
  EXPECT_NEAR(s[1], 3.0, 1e-15);
}

TEST(SchurBound, ExactCases) {
  const double a = 0.7;
  EXPECT_NEAR(schur_bound(RealMatrix{{0.0, a}, {a, 0.0}}).bound, a, 1e-16);
  RealMatrix ones(5, 5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) ones(i, j) = 1.0;
  EXPECT_NEAR(schur_bound(ones).bound, 5.0, 1e-14);
  EXPECT_NEAR(singular_values(ones)[0], 5.0, 1e-12);
}

TEST(SchurBound, Soundness) {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng() % 12, m = 2 + rng() % 12;
    RealMatrix a(n, m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) a(i, j) = u(rng);
    EXPECT_GE(schur_bound(a).bound * (1 + 1e-12), singular_values(a)[0]);
  }
}

TEST(NeumannLower, Cases) {
  const std::vector<double> d{4.0, 3.0, 2.0, 1.0};
  const auto zero = neumann_lower(d, 0.0);
  ASSERT_TRUE(zero.applicable);
  EXPECT_EQ(zero.bounds, d);
  const auto half = neumann_lower(d, 0.5);
  EXPECT_EQ(half.bounds.back(), 0.5);
  EXPECT_FALSE(neumann_lower(d, 1.0).applicable);
  EXPECT_THROW(neumann_lower(std::vector<double>{1.0, -1.0}, 0.1), ValidationError);
}

TEST(NeumannLower, APosterioriOnRandomInstances) {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 6;
    std::vector<double> d(n);
    for (double& x : d) x = std::pow(10.0, -4.0 * (u(rng) + 1.0));
    // symmetric M = D^{1/2}(I + S)D^{1/2} with small S, then N = D^-1 (M - D)
    RealMatrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s(i, j) = s(j, i) = 0.05 * u(rng);
    RealMatrix m(n, n), nmat(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) = (i == j ? d[i] : std::sqrt(d[i] * d[j]) * s(i, j));
        if (i != j) nmat(i, j) = m(i, j) / d[i];
      }
    const double q = singular_values(nmat)[0];
    if (!(q < 1.0)) continue;
    const auto lam = eigh(m);
    const double dmin = *std::min_element(d.begin(), d.end());
    EXPECT_GE(lam.back(), dmin * (1.0 - q) * (1 - 1e-10));
  }
}
