#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dirlab/seqs.hpp"

using namespace dirlab;

namespace {
double p2(int e) { return std::ldexp(1.0, e); }
}  // namespace

TEST(ClampMonotone, AlreadyRegularIsUnchanged) {
  const std::vector<double> raw{p2(-9), p2(-10), p2(-11)};
  EXPECT_EQ(clamp_monotone(raw), raw);
}

TEST(ClampMonotone, CeilingApplies) {
  std::vector<double> raw;
  for (int k = 0; k <= 10; ++k) raw.push_back(p2(-k));
  const auto out = clamp_monotone(raw);
  // 1, 1/2, ..., 2^-8 are all >= 2^-8
  for (int i = 0; i <= 8; ++i) EXPECT_EQ(out[i], p2(-8)) << i;
  EXPECT_EQ(out[9], p2(-9));
  EXPECT_EQ(out[10], p2(-10));
}

TEST(ClampMonotone, SuffixSupremum) {
  const std::vector<double> raw{p2(-10), p2(-9), p2(-12)};
  const std::vector<double> want{p2(-9), p2(-9), p2(-12)};
  EXPECT_EQ(clamp_monotone(raw), want);
}

TEST(ClampMonotone, RejectsBadInput) {
  EXPECT_THROW(clamp_monotone(std::vector<double>{}), ValidationError);
  EXPECT_THROW(clamp_monotone(std::vector<double>{1.0, 0.0}), ValidationError);
  EXPECT_THROW(clamp_monotone(std::vector<double>{NAN}), ValidationError);
}

TEST(SlowDecay, ForcedRecursion) {
  std::vector<double> seq;
  for (int i = 0; i < 10; ++i) seq.push_back(p2(-8) * std::pow(4.0, -i));
  const auto out = slow_decay_values(seq, 0.5);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(out[i], p2(-8 - i));
}

TEST(SlowDecay, ConstantUnchanged) {
  const std::vector<double> seq(6, p2(-8));
  EXPECT_EQ(slow_decay_values(seq), seq);
}

TEST(SlowDecay, HandRecursion) {
  const double a = p2(-8);
  const std::vector<double> seq{a, a / 3.0, a / 3.0};
  const auto out = slow_decay_values(seq);
  EXPECT_EQ(out[0], a);
  EXPECT_EQ(out[1], a / 2.0);
  EXPECT_EQ(out[2], a / 3.0);
}

TEST(SlowDecay, InvariantsOnRandomInput) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> raw(30);
    for (double& v : raw) v = std::pow(10.0, -12.0 * u(rng));
    const auto seq = clamp_monotone(raw);
    const auto out = slow_decay_values(seq);
    for (std::size_t i = 0; i < out.size(); ++i) {
      EXPECT_GE(out[i], seq[i]);
      if (i + 1 < out.size()) {
        EXPECT_LE(out[i + 1], out[i]);
        EXPECT_GE(out[i + 1], out[i] / 2.0);
      }
    }
    EXPECT_EQ(slow_decay_values(out), out);  // idempotent
    EXPECT_NO_THROW(DecaySequence{out});
  }
}

TEST(SlowDecay, Validation) {
  EXPECT_THROW(slow_decay_values(std::vector<double>{1.0}, 1.0), ValidationError);
  EXPECT_THROW(slow_decay_values(std::vector<double>{1.0, 2.0}), ValidationError);
  // rho < 1/2 can break the ratio invariant
  EXPECT_THROW(slow_decay(std::vector<double>{p2(-8), p2(-12)}, 0.25), ValidationError);
}

TEST(DecaySequence, DyadicAndInvariants) {
  const auto eps = DecaySequence::dyadic(8);
  ASSERT_EQ(eps.size(), 8u);
  for (std::size_t i = 1; i <= 8; ++i) EXPECT_EQ(eps(i), p2(-7 - static_cast<int>(i)));
  EXPECT_THROW(DecaySequence(std::vector<double>{p2(-7)}), ValidationError);
  EXPECT_THROW(DecaySequence(std::vector<double>{p2(-8), p2(-10)}), ValidationError);
  EXPECT_THROW(DecaySequence(std::vector<double>{p2(-9), p2(-8)}), ValidationError);
}

TEST(Regularize, Pipeline) {
  std::vector<double> harmonic;
  for (int k = 1; k <= 20; ++k) harmonic.push_back(1.0 / k);
  const auto eps = regularize(harmonic);
  // 1/k >= 2^-8 for k <= 256, so every entry clamps to the ceiling
  for (std::size_t i = 1; i <= eps.size(); ++i) EXPECT_EQ(eps(i), p2(-8));
}
