#pragma once

// Finite compressions of the Toeplitz operator T_mu on the Bergman space in
// the orthonormal basis e_k = sqrt(k+1) z^k:
//   t_jk = sqrt((j+1)(k+1)) integral w^k conj(w)^j dmu.
// For conjugation-symmetric mu the moments are real, and depend only on
// j + k and |k - j| through r^{j+k} cos((k - j) arg w).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "dirlab/errors.hpp"
#include "dirlab/geometry.hpp"
#include "dirlab/quad.hpp"
#include "dirlab/spectra.hpp"

namespace dirlab {

inline constexpr int kMaxGalerkinSize = 400;

struct MomentMatrix {
  int K = 0;
  RealMatrix mu_hat;              // integral w^k conj(w)^j dmu
  RealMatrix t;                   // sqrt((j+1)(k+1)) mu_hat
  std::vector<double> eigenvalues;  // non-increasing
  double max_doubling_change = 0.0;  // |delta mu_jk| / sqrt(mu_jj mu_kk)
  int order = 0;

  double trace_moments() const {
    std::vector<double> d;
    for (int k = 0; k < K; ++k) d.push_back((k + 1.0) * mu_hat(static_cast<std::size_t>(k), static_cast<std::size_t>(k)));
    return pairwise_sum(d);
  }
  double trace_eigen() const { return pairwise_sum(eigenvalues); }
};

namespace detail {

/// Upper-triangular moment accumulator fed node by node, with one partial
/// sum per panel combined pairwise at the end.
class MomentAccumulator {
 public:
  explicit MomentAccumulator(int K) : K_(K), acc_(static_cast<std::size_t>(K * K), 0.0), wr_(2 * K), c_(K) {}

  void add(double r, double angle, double weight) {
    double rp = weight;
    for (int s = 0; s < 2 * K_ - 1; ++s) {
      wr_[static_cast<std::size_t>(s)] = rp;
      rp *= r;
    }
    for (int d = 0; d < K_; ++d) c_[static_cast<std::size_t>(d)] = std::cos(d * angle);
    for (int j = 0; j < K_; ++j) {
      double* row = acc_.data() + static_cast<std::size_t>(j * K_);
      const double* wr = wr_.data() + 2 * j;
      const double* c = c_.data();
      for (int d = 0; d < K_ - j; ++d) row[j + d] += wr[d] * c[d];
    }
  }

  void close_panel() {
    panels_.push_back(acc_);
    std::fill(acc_.begin(), acc_.end(), 0.0);
  }

  RealMatrix result() {
    if (std::any_of(acc_.begin(), acc_.end(), [](double v) { return v != 0.0; })) close_panel();
    RealMatrix out(static_cast<std::size_t>(K_), static_cast<std::size_t>(K_));
    std::vector<double> column(panels_.size());
    for (int j = 0; j < K_; ++j)
      for (int k = j; k < K_; ++k) {
        const std::size_t idx = static_cast<std::size_t>(j * K_ + k);
        for (std::size_t p = 0; p < panels_.size(); ++p) column[p] = panels_[p][idx];
        const double v = pairwise_sum(column);
        out(static_cast<std::size_t>(j), static_cast<std::size_t>(k)) = v;
        out(static_cast<std::size_t>(k), static_cast<std::size_t>(j)) = v;
      }
    return out;
  }

 private:
  int K_;
  std::vector<double> acc_;
  std::vector<double> wr_, c_;
  std::vector<std::vector<double>> panels_;
};

inline RealMatrix cusp_moments(const CuspProfile& profile, int K, int m_t) {
  MomentAccumulator acc(K);
  const int m_y = std::max(4, 2 * ((m_t / 4 + 1) / 2));
  for_each_cusp_node(
      profile, m_t, m_y,
      [&](double t, double y, double w) {
        const double x = 1.0 - t;
        acc.add(std::hypot(x, y), std::atan2(y, x), w);
      },
      [&] { acc.close_panel(); });
  return acc.result();
}

inline MomentMatrix finish_moment_matrix(RealMatrix mu_hat, int K, int order, double change) {
  MomentMatrix mm;
  mm.K = K;
  mm.order = order;
  mm.max_doubling_change = change;
  mm.t = RealMatrix(static_cast<std::size_t>(K), static_cast<std::size_t>(K));
  for (std::size_t j = 0; j < static_cast<std::size_t>(K); ++j)
    for (std::size_t k = 0; k < static_cast<std::size_t>(K); ++k)
      mm.t(j, k) = std::sqrt((j + 1.0) * (k + 1.0)) * mu_hat(j, k);
  mm.mu_hat = std::move(mu_hat);
  mm.eigenvalues = eigh(mm.t);
  double trace = 0.0;
  for (std::size_t k = 0; k < static_cast<std::size_t>(K); ++k) trace += mm.t(k, k);
  if (!mm.eigenvalues.empty() && mm.eigenvalues.back() < -1e-12 * trace)
    throw NumericIntegrityError("moment_matrix: PSD violation beyond -1e-12 * trace");
  return mm;
}

}  // namespace detail

/// moment_matrix: K x K compression for mu = 1_Omega dA. Moments are taken at
/// strip order m and 2m; the finer set is kept.
inline MomentMatrix moment_matrix(const CuspProfile& profile, int K, int m = 64) {
  detail::require(K >= 1 && K <= kMaxGalerkinSize, "moment_matrix: K must lie in [1, 400]");
  detail::require(m >= 2 && 2 * m <= 4 * kMaxOrder, "moment_matrix: order out of range");
  const RealMatrix coarse = detail::cusp_moments(profile, K, m);
  RealMatrix fine = detail::cusp_moments(profile, K, 2 * m);
  double change = 0.0;
  for (std::size_t j = 0; j < static_cast<std::size_t>(K); ++j)
    for (std::size_t k = j; k < static_cast<std::size_t>(K); ++k) {
      const double scale = std::sqrt(fine(j, j) * fine(k, k));
      if (scale > 0.0) change = std::max(change, std::abs(fine(j, k) - coarse(j, k)) / scale);
    }
  return detail::finish_moment_matrix(std::move(fine), K, 2 * m, change);
}

/// Full-disk calibration: mu = dA on the unit disk with the polar rule of
/// order K/2 + 1, exact for every moment of degree < K.
inline MomentMatrix moment_matrix_disk(int K) {
  detail::require(K >= 1 && K <= kMaxGalerkinSize, "moment_matrix: K must lie in [1, 400]");
  const DiskRule rule = unit_disk_rule(K / 2 + 1);
  detail::MomentAccumulator acc(K);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    acc.add(std::abs(rule.nodes[q]), std::arg(rule.nodes[q]), rule.weights[q]);
    if ((q + 1) % static_cast<std::size_t>(4 * rule.order) == 0) acc.close_panel();
  }
  return detail::finish_moment_matrix(acc.result(), K, rule.order, 0.0);
}

struct GalerkinRow {
  int n = 0;
  int K = 0;
  double lambda = 0.0;
  double floor = 0.0;  // eps_n^2 / 64
  bool crossed = false;
};

/// Leading eigenvalues against the certified floor eps_n^2/64, n = 1..levels.
inline std::vector<GalerkinRow> galerkin_rows(const MomentMatrix& mm, const DecaySequence& eps, std::size_t levels) {
  std::vector<GalerkinRow> rows;
  const std::size_t count = std::min({levels, eps.size(), mm.eigenvalues.size()});
  for (std::size_t n = 1; n <= count; ++n) {
    GalerkinRow r;
    r.n = static_cast<int>(n);
    r.K = mm.K;
    r.lambda = mm.eigenvalues[n - 1];
    r.floor = eps(n) * eps(n) / 64.0;
    r.crossed = r.lambda >= r.floor;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace dirlab
