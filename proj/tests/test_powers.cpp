#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dirlab/powers.hpp"
#include "oracles.hpp"

using namespace dirlab;

TEST(Norms, Monomials) {
  const auto z = norms(CoefficientSeries::monomial(1));
  EXPECT_DOUBLE_EQ(z.dirichlet, 1.0);
  EXPECT_DOUBLE_EQ(z.bergman, 1.0 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(z.hardy, 1.0);
  for (int p = 1; p <= 20; ++p) EXPECT_DOUBLE_EQ(norms(CoefficientSeries::monomial(p)).dirichlet, std::sqrt(p));
}

TEST(Norms, DerivativeIdentityOnRandomPolynomials) {
  std::mt19937 rng(8);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cplx> c(1 + rng() % 15);
    for (auto& v : c) v = cplx(g(rng), g(rng));
    const CoefficientSeries f(c);
    const auto n = norms(f);
    const double b = norms(f.derivative()).bergman;
    EXPECT_NEAR(n.dirichlet * n.dirichlet, b * b + std::norm(c[0]), 1e-12 * n.dirichlet * n.dirichlet);
    EXPECT_LE(n.hardy, n.dirichlet * (1 + 1e-15));
  }
}

TEST(PowerNormSeries, Monomials) {
  EXPECT_NEAR(power_norm_series(CoefficientSeries::monomial(1), 9), 3.0, 1e-15);
  EXPECT_NEAR(power_norm_series(CoefficientSeries::monomial(2), 4), std::sqrt(8.0), 1e-15);
  EXPECT_THROW(power_norm_series(CoefficientSeries::monomial(1), 0), ValidationError);
  EXPECT_THROW(power_norm_series(CoefficientSeries::monomial(4), 10, 20), ValidationError);
}

TEST(PowerNormSeries, RationalOracle) {
  using oracle::Rational;
  const std::vector<Rational> phi{Rational(0), Rational(1, 2), Rational(1, 2)};
  const CoefficientSeries s({0.0, 0.5, 0.5});
  for (int p = 1; p <= 12; ++p) {
    const Rational exact = oracle::dirichlet_sq(oracle::rational_power(phi, p));
    const double got = power_norm_series(s, p);
    EXPECT_NEAR(got * got, exact.value(), 1e-14 * exact.value()) << p;
  }
  EXPECT_EQ(oracle::dirichlet_sq(oracle::rational_power(phi, 3)), Rational(90, 64));
}

TEST(PowerNormSeries, PowerBoundForContractions) {
  // ||phi^n||_D <= n ||phi||_D when sup |phi| <= 1
  const CoefficientSeries phi({0.1, 0.3, 0.2, -0.25});
  const double base = norms(phi).dirichlet;
  for (int n = 1; n <= 30; ++n) EXPECT_LE(power_norm_series(phi, n), n * base * (1 + 1e-12));
}

TEST(PowerNormRegion, FullDiskCalibration) {
  const auto D = full_disk_strip();
  for (int p = 1; p <= 50; ++p) {
    EXPECT_NEAR(power_norm_region(D, p), p, 1e-13 * p);
    const double series = power_norm_series(CoefficientSeries::monomial(1), p);
    EXPECT_NEAR(std::sqrt(power_norm_region(D, p)), series, 1e-13 * series);
  }
}

TEST(PowerNormRegion, SingleBoxClosedForm) {
  const RectilinearDomain B({box(0, 2, RectKind::BaseBox)});
  for (int p : {1, 3, 17, 400}) {
    const double pd = p;
    const double oracle_value =
        pd / (2.0 * std::numbers::pi) * (std::numbers::pi / 2.0) *
        (std::exp(-2.0 * pd * strip_edge(3)) - std::exp(-2.0 * pd * strip_edge(2)));
    EXPECT_NEAR(power_norm_region(B, p), oracle_value, 1e-13 * oracle_value) << p;
  }
}

TEST(PowerNormRegion, QuadratureAgreement) {
  const auto F = RectilinearDomain::eksy(GrowthSequence::log2(), 10);
  for (int p : {1, 2, 7, 64, 333, 1000}) {
    const double exact = power_norm_region(F, p);
    EXPECT_NEAR(power_norm_region_quadrature(F, p), exact, 1e-10 * exact) << p;
  }
}

TEST(PowerNormRegion, MonotoneInRectangles) {
  const auto F = RectilinearDomain::eksy(GrowthSequence::log2(), 8);
  std::vector<Rect> partial;
  double prev = 0.0;
  for (const Rect& r : F.rects()) {
    partial.push_back(r);
    const double v = power_norm_region(RectilinearDomain(partial), 5);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(PowerNormRegion, CuspMatchesMoments) {
  const auto prof = CuspProfile::from_decay(DecaySequence::dyadic(8), 1.0 / 200.0);
  EXPECT_NEAR(power_norm_region(prof, 1), cusp_area(prof), 1e-12 * cusp_area(prof));
  const double m11 = cusp_moment(prof, 1, 1).value;
  EXPECT_NEAR(power_norm_region(prof, 2), 4.0 * m11, 1e-10 * m11);
}

TEST(Growth, GridShape) {
  const auto g = growth_grid(1000);
  EXPECT_EQ(g.front(), 1);
  EXPECT_EQ(g[127], 128);
  EXPECT_EQ(g[128], 256);
  EXPECT_EQ(g.back(), 1000);
  EXPECT_EQ(growth_grid(5).size(), 5u);
}

TEST(Growth, Log2InstanceBoundedByMp) {
  const auto M = GrowthSequence::log2();
  const auto F = RectilinearDomain::eksy(M, 24);
  const auto r1 = eksy_growth_report(F, M, std::int64_t{1} << 20);
  const auto r2 = eksy_growth_report(F, M, std::int64_t{1} << 21);
  EXPECT_TRUE(std::isfinite(r1.C));
  EXPECT_NEAR(r2.C, r1.C, 0.05 * r1.C);
  EXPECT_TRUE(std::isfinite(r1.K));
  for (const auto& row : r1.rows) {
    EXPECT_GT(row.norm, 0.0);
    EXPECT_GT(row.majorant, 0.0);
    EXPECT_LE(row.norm_sq, r1.K * (row.majorant + row.tail) * (1 + 1e-12));
  }
}

TEST(Growth, ConstantTowersBounded) {
  const auto M = GrowthSequence::constant(1);
  const auto F = RectilinearDomain::eksy(M, 24);
  const auto r1 = eksy_growth_report(F, M, std::int64_t{1} << 20);
  const auto r2 = eksy_growth_report(F, M, std::int64_t{1} << 21);
  EXPECT_LT(r1.max_norm, 1.0);
  EXPECT_NEAR(r2.max_norm, r1.max_norm, 0.05 * r1.max_norm);
}

TEST(Jensen, RectilinearAndCusp) {
  const auto F = RectilinearDomain::eksy(GrowthSequence::log2(), 12);
  for (int p = 1; p <= 200; p += (p < 20 ? 1 : 17)) {
    const auto b = jensen_lower(F, p);
    EXPECT_LE(b.lower, b.actual * (1 + 1e-8)) << p;
  }
  const auto b1 = jensen_lower(F, 1);
  EXPECT_NEAR(b1.lower, b1.actual, 1e-15 * b1.actual);
  EXPECT_NEAR(b1.lower, b1.mass, 1e-15 * b1.mass);
  const auto b2 = jensen_lower(F, 2);
  EXPECT_NEAR(b2.lower, 4.0 * b2.m2, 1e-14 * b2.m2);

  const auto prof = CuspProfile::from_decay(DecaySequence::dyadic(8), 1.0 / 200.0);
  for (int p : {1, 2, 3, 10, 40}) {
    const auto c = jensen_lower(prof, p);
    EXPECT_LE(c.lower, c.actual * (1 + 1e-8)) << p;
  }
  // log-linear decay of the lower bound
  const auto c10 = jensen_lower(prof, 10), c11 = jensen_lower(prof, 11);
  const double ratio = c10.m2 / c10.mass;
  EXPECT_NEAR(c11.lower / c10.lower, ratio * (11.0 * 11.0) / 100.0, 1e-12);
}

TEST(FWeight, Facts) {
  double prev = 0.0;
  for (int k = 1; k <= 1000; ++k) {
    const double x = k / 1001.0;
    const double v = f_weight(x);
    EXPECT_GT(v, prev);
    prev = v;
  }
  for (int k = 0; k < 2000; ++k) {
    const double x = std::pow(10.0, -4.0 + 8.0 * k / 2000.0);
    EXPECT_LE(f_weight(x), std::min(x * x, 1.35 / x));
  }
  EXPECT_NEAR(27.0 * std::exp(-3.0), 1.344, 1e-3);
}

TEST(FWeight, SeriesSupStable) {
  double sup40 = 0.0, sup80 = 0.0;
  for (double p : f_grid(1e6)) {
    sup40 = std::max(sup40, f_series(p, 40));
    sup80 = std::max(sup80, f_series(p, 80));
  }
  EXPECT_TRUE(std::isfinite(sup40));
  EXPECT_NEAR(sup80, sup40, 1e-12 * sup40);
  EXPECT_LT(sup40, 2.0);
}
