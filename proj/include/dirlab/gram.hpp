#pragma once

// Gram matrix of the normalized disk indicators f_j = 1_{Delta_j} / r_j
// under I_mu^*, and the inequality chain that bounds its smallest
// eigenvalue from below:
//
//   m_ij = (1 / (r_i r_j)) int_{Delta_i} int_{Delta_j} (1 - w conj(z))^-2 dA(z) dA(w)
//
// M = D (I + N) with D = diag(M) and N = D^-1 (M - D); a Schur bound
// ||N|| <= beta < 1 gives lambda_min(M) >= (1 - beta) min_i m_ii.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dirlab/errors.hpp"
#include "dirlab/geometry.hpp"
#include "dirlab/parallel.hpp"
#include "dirlab/quad.hpp"
#include "dirlab/report.hpp"
#include "dirlab/spectra.hpp"

namespace dirlab {

struct GramMatrix {
  DiskFamily family;
  RealMatrix entries;               // m_ij, i, j = 0..n-1 (0-based storage)
  int order = 0;                    // quadrature order of `entries`
  RealMatrix doubling_change;       // |m(2m) - m(m)| / |m(2m)| per entry
  double max_doubling_change = 0.0;
  bool stable = true;               // max_doubling_change <= 1e-8
  std::vector<double> eigenvalues;  // non-increasing

  std::size_t size() const { return family.size(); }
  /// 1-based access m_{i,j}.
  double operator()(std::size_t i, std::size_t j) const { return entries(i - 1, j - 1); }
  double lambda_min() const { return eigenvalues.back(); }
};

namespace detail {

/// Disk rule in structure-of-arrays form for the inner Gram loop.
struct SplitDiskRule {
  std::vector<double> re, im, w;
  explicit SplitDiskRule(const DiskRule& rule) {
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      re.push_back(rule.nodes[q].real());
      im.push_back(rule.nodes[q].imag());
      w.push_back(rule.weights[q]);
    }
  }
  std::size_t size() const { return w.size(); }
};

/// m_ij for i <= j with one disk rule for both variables.
inline double gram_entry(const DiskFamily& family, std::size_t i, std::size_t j, const SplitDiskRule& rule) {
  const KernelPair pair(family, i, j);
  const std::size_t q_count = rule.size();
  std::vector<double> outer_re(q_count), outer_im(q_count), inner_re(q_count), inner_im(q_count);
  const double floor = pair.floor * (1.0 - 1e-8);
  for (std::size_t a = 0; a < q_count; ++a) {
    // 1 - w conj(z) = A - B zeta with conj(xi) = (xr, -xi)
    const double xr = rule.re[a], xim = -rule.im[a];
    const double ar = pair.s - pair.cj_ri * xr, ai = -pair.cj_ri * xim;
    const double br = pair.ci_rj + pair.ri_rj * xr, bi = pair.ri_rj * xim;
    // |A - B zeta| >= |A| - |B| for |zeta| <= 1; check nodes one by one only
    // when this bound is inconclusive.
    const bool bounded = std::hypot(ar, ai) - std::hypot(br, bi) >= floor;
    for (std::size_t b = 0; b < q_count; ++b) {
      const double zr = rule.re[b], zi = rule.im[b];
      const double dr = ar - (br * zr - bi * zi);
      const double di = ai - (br * zi + bi * zr);
      const double pr = dr * dr - di * di, pi2 = 2.0 * dr * di;
      const double scale = rule.w[b] / (pr * pr + pi2 * pi2);  // |d|^-4
      inner_re[b] = pr * scale;
      inner_im[b] = -pi2 * scale;
    }
    if (!bounded) {
      for (std::size_t b = 0; b < q_count; ++b) {
        const double zr = rule.re[b], zi = rule.im[b];
        if (std::hypot(ar - (br * zr - bi * zi), ai - (br * zi + bi * zr)) < floor)
          throw NumericIntegrityError("build_gram: |1 - w conj(z)| fell below delta^i for (" + std::to_string(i) +
                                      ", " + std::to_string(j) + ")");
      }
    }
    outer_re[a] = rule.w[a] * pairwise_sum(inner_re);
    outer_im[a] = rule.w[a] * pairwise_sum(inner_im);
  }
  const double re = pair.ri_rj * pairwise_sum(outer_re);
  const double im = pair.ri_rj * pairwise_sum(outer_im);
  if (std::abs(im) > 1e-12 * std::abs(re))
    throw NumericIntegrityError("build_gram: imaginary residue in m_" + std::to_string(i) + std::to_string(j));
  return re;
}

inline RealMatrix gram_entries(const DiskFamily& family, int m) {
  const SplitDiskRule rule(unit_disk_rule(m));
  const std::size_t n = family.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i; j <= n; ++j) pairs.emplace_back(i, j);
  std::vector<double> values(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t p) {
    values[p] = gram_entry(family, pairs[p].first, pairs[p].second, rule);
  });
  RealMatrix out(n, n);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    out(i - 1, j - 1) = out(j - 1, i - 1) = values[p];
  }
  return out;
}

}  // namespace detail

/// build_gram: entries at order m (disk rule with m radial and 4m angular
/// nodes per variable). With `check_doubling`, the order is doubled until
/// every entry moves by at most 1e-8 relative (cap 512); the returned entries
/// are those of the finest order computed.
inline GramMatrix build_gram(const DiskFamily& family, int m = 32, bool check_doubling = true) {
  detail::require(m >= 1 && m <= kMaxOrder, "build_gram: order must lie in [1, 512]");
  GramMatrix g{family, detail::gram_entries(family, m), m, RealMatrix(family.size(), family.size()), 0.0, true, {}};
  if (check_doubling) {
    for (int order = m; order < kMaxOrder; order *= 2) {
      RealMatrix fine = detail::gram_entries(family, 2 * order);
      double worst = 0.0;
      for (std::size_t i = 0; i < fine.rows(); ++i)
        for (std::size_t j = 0; j < fine.cols(); ++j) {
          const double change = std::abs(fine(i, j) - g.entries(i, j)) / std::abs(fine(i, j));
          g.doubling_change(i, j) = change;
          worst = std::max(worst, change);
        }
      g.max_doubling_change = worst;
      g.stable = worst <= kDoublingTolerance;
      if (g.stable) break;
      g.entries = std::move(fine);
      g.order = 2 * order;
    }
  }
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!(g.entries(i, i) > 0.0)) throw NumericIntegrityError("build_gram: non-positive diagonal entry");
  g.eigenvalues = eigh(g.entries);
  double trace = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) trace += g.entries(i, i);
  if (g.eigenvalues.back() < -1e-14 * trace)
    throw NumericIntegrityError("build_gram: Gram matrix is not positive semidefinite");
  return g;
}

/// Closed form of m_ij from the mean-value property: the kernel is analytic
/// in w and anti-analytic in z on the disks, so each disk average equals the
/// value at the center, m_ij = r_i r_j / (1 - c_i c_j)^2.
inline double gram_entry_mean_value(const DiskFamily& family, std::size_t i, std::size_t j) {
  const double s = family.one_minus_cc(std::min(i, j), std::max(i, j));
  return family.radius(i) * family.radius(j) / (s * s);
}

/// N = D^-1 R, nu_ij = m_ij / m_ii off the diagonal, zero on it.
inline RealMatrix nu_matrix(const GramMatrix& g) {
  const std::size_t n = g.size();
  RealMatrix nu(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) nu(i, j) = g.entries(i, j) / g.entries(i, i);
  return nu;
}

struct DominanceReport {
  CertificateReport checks;
  std::vector<double> eps_prime;  // eps'_i = r_i / (1 - c_i^2), i = 1..n
  RealMatrix nu;
  RealMatrix nu_bound;            // 32 delta^{j-i} above, 32 (2 delta)^{i-j} below the diagonal
  std::vector<double> row_sums, col_sums;
  bool all_pass() const { return checks.all_pass(); }
};

/// dominance_report: the diagonal lower bound, the diagonal perturbation bound, the
/// off-diagonal decay, the nu-entry bounds, and row/column sums of |nu|.
inline DominanceReport dominance_report(const GramMatrix& g) {
  const DiskFamily& f = g.family;
  const std::size_t n = g.size();
  const double delta = f.delta();
  DominanceReport r;
  r.nu = nu_matrix(g);
  r.nu_bound = RealMatrix(n, n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double eps = f.eps(i);
    const double one_minus_c = f.distance_to_one(i);
    // 1 - c_i^2 = (1 - c_i)(1 + c_i) = 2 delta^i (2 - 2 delta^i)
    const double one_minus_c2 = one_minus_c * (2.0 - one_minus_c);
    const double ep = f.radius(i) / one_minus_c2;
    r.eps_prime.push_back(ep);
    const std::string tag = "[" + std::to_string(i) + "]";
    r.checks.add(check_lower("eps'" + tag + " >= eps/4", ep, eps / 4.0));
    r.checks.add(check_upper("eps'" + tag + " <= eps/2", ep, eps / 2.0));
    r.checks.add(check_lower("m" + tag + tag + " >= eps^2/32", g(i, i), eps * eps / 32.0));
    r.checks.add(check_upper("|m" + tag + tag + " - eps'^2| <= 32r^3/(1-c)^3", std::abs(g(i, i) - ep * ep),
                             32.0 * std::pow(f.radius(i) / one_minus_c, 3)));
  }
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j) {
      const double bound = f.eps(i) * f.eps(j) * std::pow(delta, static_cast<double>(j - i));
      r.checks.add(check_upper("|m[" + std::to_string(i) + "][" + std::to_string(j) + "]| <= e_i e_j d^(j-i)",
                               std::abs(g(i, j)), bound));
    }
  r.row_sums.assign(n, 0.0);
  r.col_sums.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double bound = i < j ? 32.0 * std::pow(delta, static_cast<double>(j - i))
                                 : 32.0 * std::pow(2.0 * delta, static_cast<double>(i - j));
      r.nu_bound(i, j) = bound;
      r.checks.add(check_upper("|nu[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]|",
                               std::abs(r.nu(i, j)), bound));
      r.row_sums[i] += std::abs(r.nu(i, j));
      r.col_sums[j] += std::abs(r.nu(i, j));
    }
  for (std::size_t i = 0; i < n; ++i) {
    r.checks.add(check_upper("row sum |nu|[" + std::to_string(i + 1) + "]", r.row_sums[i], 0.5));
    r.checks.add(check_upper("col sum |nu|[" + std::to_string(i + 1) + "]", r.col_sums[i], 0.5));
  }
  r.checks.add(check_upper("32 * 3 delta / (1 - 2 delta)", 96.0 * delta / (1.0 - 2.0 * delta), 0.5));
  return r;
}

struct BernsteinCertificate {
  SchurBound schur;                // Schur test on N
  double spectral_norm_nu = 0.0;   // ||N||, for soundness
  bool applicable = false;         // schur.bound < 1
  double certified_lower = 0.0;    // (1 - beta) min_i m_ii
  double lambda_min = 0.0;
  double min_diagonal = 0.0;
  double target_sq = 0.0;          // eps_n^2 / 64
  double target = 0.0;             // eps_n / 8
  NeumannBound neumann;            // with q = schur bound
  NeumannBound neumann_half;       // with q = 1/2
  std::vector<double> singular;    // sigma_k(M)
  CertificateReport report;
};

/// bernstein_certificate: Schur bound on N, the certified floor it implies,
/// the direct lambda_min, and the targets eps_n^2 / 64 and eps_n / 8.
inline BernsteinCertificate bernstein_certificate(const GramMatrix& g) {
  const std::size_t n = g.size();
  BernsteinCertificate c;
  const RealMatrix nu = nu_matrix(g);
  c.schur = schur_bound(nu);
  c.spectral_norm_nu = singular_values(nu).front();
  c.applicable = c.schur.bound < 1.0;
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = g.entries(i, i);
  c.min_diagonal = *std::min_element(diag.begin(), diag.end());
  c.lambda_min = g.lambda_min();
  c.singular = g.eigenvalues;  // PSD: sigma_k = lambda_k
  const double eps_n = g.family.eps(n);
  c.target_sq = eps_n * eps_n / 64.0;
  c.target = eps_n / 8.0;
  c.neumann = neumann_lower(diag, c.schur.bound);
  c.neumann_half = neumann_lower(diag, 0.5);

  auto& rep = c.report;
  rep.add(check_upper("schur bound of N", c.schur.bound, 0.5, "||D^-1 R|| <= 1/2"));
  rep.add(check_upper("||N||_2 <= schur bound", c.spectral_norm_nu, c.schur.bound, "Schur test soundness"));
  if (c.applicable) {
    c.certified_lower = (1.0 - c.schur.bound) * c.min_diagonal;
    rep.add(check_lower("certified floor >= eps_n^2/64", c.certified_lower, c.target_sq, "a_n(S_mu) floor"));
    rep.add(check_lower("lambda_min >= certified floor", c.lambda_min, c.certified_lower, "certificate soundness"));
  } else {
    rep.add(CertificateEntry{"certificate applicable (schur < 1)", c.schur.bound, 1.0, false, false, ""});
  }
  rep.add(check_upper("lambda_min <= min diagonal", c.lambda_min, c.min_diagonal, "Rayleigh quotient"));
  rep.add(check_lower("lambda_min >= eps_n^2/64", c.lambda_min, c.target_sq, "a_n(S_mu) floor"));
  rep.add(check_lower("sqrt(lambda_min) >= eps_n/8", std::sqrt(std::max(c.lambda_min, 0.0)), c.target,
                      "a_n(I_mu) floor"));
  for (std::size_t k = 0; k < n && c.neumann_half.applicable; ++k)
    rep.add(check_lower("b_" + std::to_string(k + 1) + "(M) >= m_(" + std::to_string(k + 1) + ")/2", c.singular[k],
                        c.neumann_half.bounds[k], "Neumann series, ||N|| <= 1/2"));
  return c;
}

}  // namespace dirlab
