#pragma once

// Regularization of null sequences into the slowly decaying form used by the
// cusp construction: first clamp to a non-increasing sequence bounded by
// 2^-8, then enforce eps_{i+1} >= rho * eps_i.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dirlab/errors.hpp"

namespace dirlab {

inline constexpr double kEpsCeiling = 0.00390625;  // 2^-8

/// Finite, positive, non-increasing sequence with eps_1 <= 2^-8 and
/// eps_{i+1} >= eps_i / 2. Indexing through operator() is 1-based to match
/// the construction; values() exposes the raw 0-based storage.
class DecaySequence {
 public:
  explicit DecaySequence(std::vector<double> values) : values_(std::move(values)) {
    detail::require(!values_.empty(), "DecaySequence: empty sequence");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      detail::require(std::isfinite(values_[i]) && values_[i] > 0.0,
                      "DecaySequence: entries must be finite and positive");
      if (i + 1 < values_.size()) {
        detail::require(values_[i + 1] <= values_[i],
                        "DecaySequence: entries must be non-increasing");
        detail::require(values_[i + 1] >= values_[i] / 2.0,
                        "DecaySequence: ratio eps_{i+1}/eps_i below 1/2 at index " +
                            std::to_string(i + 1));
      }
    }
    detail::require(values_.front() <= kEpsCeiling, "DecaySequence: eps_1 exceeds 2^-8");
  }

  /// eps_j for j = 1..size().
  double operator()(std::size_t j) const { return values_.at(j - 1); }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }

  /// eps_i = 2^(-7-i), i = 1..n.
  static DecaySequence dyadic(std::size_t n) {
    detail::require(n >= 1, "dyadic: n must be >= 1");
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = std::ldexp(1.0, -8 - static_cast<int>(i));
    return DecaySequence(std::move(v));
  }

 private:
  std::vector<double> values_;
};

/// out[i] = min(2^-8, max_{k >= i} raw[k]), the suffix supremum over the
/// finite list followed by the ceiling.
inline std::vector<double> clamp_monotone(std::span<const double> raw) {
  detail::require(!raw.empty(), "clamp_monotone: empty input");
  for (double v : raw)
    detail::require(std::isfinite(v) && v > 0.0, "clamp_monotone: entries must be positive");
  std::vector<double> out(raw.size());
  double running = 0.0;
  for (std::size_t i = raw.size(); i-- > 0;) {
    running = std::max(running, raw[i]);
    out[i] = std::min(kEpsCeiling, running);
  }
  return out;
}

/// Slowly decaying majorant: out_1 = seq_1, out_{i+1} = max(rho out_i, seq_{i+1}).
/// Returns the raw list; wrap it in DecaySequence when rho = 1/2.
inline std::vector<double> slow_decay_values(std::span<const double> seq, double rho = 0.5) {
  detail::require(rho > 0.0 && rho < 1.0, "slow_decay: rho must lie in (0,1)");
  detail::require(!seq.empty(), "slow_decay: empty input");
  for (std::size_t i = 0; i + 1 < seq.size(); ++i)
    detail::require(seq[i + 1] <= seq[i], "slow_decay: input must be non-increasing");
  std::vector<double> out(seq.size());
  out[0] = seq[0];
  for (std::size_t i = 1; i < seq.size(); ++i) out[i] = std::max(rho * out[i - 1], seq[i]);
  return out;
}

/// slow_decay with the invariant-checked result type. Validation fails when
/// rho < 1/2 produces ratios below 1/2 or when seq_1 > 2^-8.
inline DecaySequence slow_decay(std::span<const double> seq, double rho = 0.5) {
  return DecaySequence(slow_decay_values(seq, rho));
}

/// Full preprocessing pipeline: clamp, then slow decay with rho = 1/2.
inline DecaySequence regularize(std::span<const double> raw) {
  const auto clamped = clamp_monotone(raw);
  return slow_decay(clamped, 0.5);
}

}  // namespace dirlab
