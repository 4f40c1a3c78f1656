// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dirlab/carleson.hpp"
#include "dirlab/galerkin.hpp"
#include "dirlab/gram.hpp"
#include "dirlab/powers.hpp"

using namespace dirlab;

namespace {

constexpr double kDelta = 1.0 / 200.0;
constexpr std::size_t kLevels = 8;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

/// Smallest relative margin over a report (negative when something fails).
double min_margin(const CertificateReport& r) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : r.entries) m = std::min(m, e.margin());
  return m;
}

struct Canonical {
  DiskFamily family{DecaySequence::dyadic(kLevels), kDelta, kLevels};
  GramMatrix gram = build_gram(family, 32);
  BernsteinCertificate cert = bernstein_certificate(gram);
};

Outcome criterion1(const Canonical& c) {
  const auto dom = dominance_report(c.gram);
  // the three inequality families named by the criterion
  CertificateReport core;
  for (const auto& e : dom.checks.entries)
    if (e.name.rfind("m[", 0) == 0 || e.name.rfind("|m[", 0) == 0) core.add(e);
  const bool stable = c.gram.order == 32 && c.gram.max_doubling_change <= kDoublingTolerance;
  return {core.all_pass() && dom.all_pass() && stable && core.entries.size() == 8 + 8 + 28,
          std::to_string(core.entries.size()) + " inequalities, min margin " + num(min_margin(core)) +
              ", all dominance checks " + (dom.all_pass() ? "pass" : "FAIL") + ", order 32->64 change " +
              num(c.gram.max_doubling_change)};
}

Outcome criterion2(const Canonical& c) {
  const double beta = c.cert.schur.bound, norm = c.cert.spectral_norm_nu;
  return {beta <= 0.5 && norm <= beta, "schur " + num(beta) + " <= 0.5, ||N||_2 " + num(norm) + " <= schur"};
}

Outcome criterion3(const Canonical& c) {
  const double eps8 = c.family.eps(kLevels);
  const double lam = c.cert.lambda_min;
  bool ok = lam >= eps8 * eps8 / 64.0 && std::sqrt(lam) >= eps8 / 8.0;
  ok = ok && c.cert.neumann_half.applicable;
  for (std::size_t k = 0; ok && k < kLevels; ++k) ok = c.cert.singular[k] >= c.cert.neumann_half.bounds[k];
  const double floor = (1.0 - c.cert.schur.bound) * c.cert.min_diagonal;
  ok = ok && lam >= floor;
  return {ok, "lambda_min " + num(lam) + " >= eps_8^2/64 = " + num(eps8 * eps8 / 64.0) + ", sqrt " +
                  num(std::sqrt(lam)) + " >= " + num(eps8 / 8.0) + ", (1-beta) min diag " + num(floor)};
}

Outcome criterion4() {
  const auto eps = DecaySequence::dyadic(kLevels);
  const auto profile = CuspProfile::from_decay(eps, kDelta);
  const auto rep = cusp_window_report(profile, kDelta, kLevels);
  const auto idx = boundedness_index(rep);
  const auto lens = boundedness_index(cusp_window_report(CuspProfile::lens(), kDelta, kLevels));
  const double lens_floor = 0.2;
  return {idx.within_bound && idx.strictly_decreasing && lens.min_index >= lens_floor,
          "cusp index " + num(idx.sequence.front()) + " -> " + num(idx.sequence.back()) +
              (idx.strictly_decreasing ? " strictly decreasing" : " NOT decreasing") +
              (idx.within_bound ? ", <= eps_j/delta" : ", bound violated") + "; lens min index " +
              num(lens.min_index) + " >= " + num(lens_floor)};
}

Outcome criterion5() {
  const auto F = RectilinearDomain::eksy(GrowthSequence::log2(), 24);
  const auto w1 = eksy_window_measure(F, 1);
  const auto q1 = eksy_window_measure_quadrature(F, 1);
  const double exact = 13.0 / 256.0;
  bool ok = w1.l == 1 && std::abs(w1.mu_half - exact) <= 1e-10 * exact && std::abs(q1.first - exact) <= 1e-10 * exact;
  double worst_box = 0.0, worst_lower = std::numeric_limits<double>::infinity();
  for (int N = 1; N <= F.n_max(); ++N) {
    const auto w = eksy_window_measure(F, N);
    const double h = std::ldexp(1.0, -2 * N);
    const double box = static_cast<double>(w.l) * h * h * (1.0 - 0.75 * h);
    worst_box = std::max(worst_box, std::abs(w.mu_half - box) / box);
    const double lower = static_cast<double>(w.l) * half_window_area(2 * N);
    // equality in exact arithmetic: relative slack 1e-12
    worst_lower = std::min(worst_lower, (w.mu_half - lower) / lower);
    ok = ok && w.mu_half >= lower * (1.0 - 1e-12);
  }
  ok = ok && worst_box <= 1e-12;
  return {ok, "mu(W'_2) = " + num(w1.mu_half) + " (quadrature " + num(q1.first) + ", 13/256 = " + num(exact) +
                  "), box part rel. error " + num(worst_box) + ", min (mu - l A)/(l A) " + num(worst_lower)};
}

Outcome criterion6() {
  const auto F = RectilinearDomain::eksy(GrowthSequence::log2(), 24);
  const auto series = eksy_window_series(F);
  int first = 0;
  bool monotone = true;
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (!first && series[k].index > 10.0) first = series[k].N;
    if (k > 0 && series[k].index < series[k - 1].index) monotone = false;
  }
  return {first > 0 && first <= 24 && monotone,
          "index " + num(series.front().index) + " -> " + num(series.back().index) +
              (first ? ", exceeds 10 at N = " + std::to_string(first) : std::string(", never exceeds 10")) +
              (monotone ? ", non-decreasing" : ", NOT monotone")};
}

Outcome criterion7() {
  const auto M = GrowthSequence::log2();
  const auto F = RectilinearDomain::eksy(M, 24);
  const auto a = eksy_growth_report(F, M, std::int64_t{1} << 20);
  const auto b = eksy_growth_report(F, M, std::int64_t{1} << 21);
  const double drift = std::abs(b.C - a.C) / a.C;
  bool ok = drift <= 0.05;
  for (const auto& r : b.rows) ok = ok && r.ratio <= b.C;
  const auto one = GrowthSequence::constant(1);
  const auto F1 = RectilinearDomain::eksy(one, 24);
  const auto c = eksy_growth_report(F1, one, std::int64_t{1} << 20);
  const auto d = eksy_growth_report(F1, one, std::int64_t{1} << 21);
  ok = ok && d.max_norm <= c.max_norm * 1.05;
  double worst = 0.0;
  for (int p : {1, 2, 3, 7, 10, 64, 100, 500, 1000}) {
    const double exact = power_norm_region(F, p), quad = power_norm_region_quadrature(F, p);
    worst = std::max(worst, std::abs(exact - quad) / exact);
  }
  ok = ok && worst <= 1e-10;
  return {ok, "C = " + num(a.C) + " (p_max 2^20), " + num(b.C) + " (2^21), drift " + num(drift) +
                  "; l = 1: max norm " + num(c.max_norm) + " -> " + num(d.max_norm) +
                  "; closed form vs quadrature " + num(worst)};
}

Outcome criterion8() {
  bool ok = true;
  double worst_pow = 0.0;
  const auto z = CoefficientSeries::monomial(1);
  const auto disk = full_disk_strip();
  for (int p = 1; p <= 2048; p = p < 64 ? p + 1 : 2 * p) {
    const double target = std::sqrt(static_cast<double>(p));
    worst_pow = std::max(worst_pow, std::abs(power_norm_series(z, p) - target) / target);
    worst_pow = std::max(worst_pow, std::abs(std::sqrt(power_norm_region(disk, p)) - target) / target);
  }
  ok = ok && worst_pow <= 1e-12;
  double worst_id = 0.0;
  for (int K : {8, 32, 128}) {
    const auto mm = moment_matrix_disk(K);
    for (int j = 0; j < K; ++j)
      for (int k = 0; k < K; ++k)
        worst_id = std::max(worst_id, std::abs(mm.t(j, k) - (j == k ? 1.0 : 0.0)));
  }
  ok = ok && worst_id <= 1e-10;
  double worst_gl = 0.0;
  for (int m = 1; m <= 64; ++m) {
    const auto rule = gauss_legendre(m);
    for (int k = 0; k <= 2 * m - 1; ++k) {
      std::vector<double> terms;
      for (int i = 0; i < m; ++i) terms.push_back(rule.weights[i] * std::pow(rule.nodes[i], k));
      const double exact = k % 2 ? 0.0 : 2.0 / (k + 1.0);
      worst_gl = std::max(worst_gl, std::abs(pairwise_sum(terms) - exact) / std::max(exact, 1.0));
    }
  }
  ok = ok && worst_gl <= 1e-12;
  const auto F = RectilinearDomain::eksy(GrowthSequence::log2(), 24);
  const auto cusp = CuspProfile::from_decay(DecaySequence::dyadic(kLevels), kDelta);
  int jensen_checked = 0;
  bool jensen_ok = true;
  for (int p = 1; p <= 1000; p = p < 32 ? p + 1 : 2 * p) {
    const auto a = jensen_lower(F, p);
    const auto b = jensen_lower(cusp, p);
    // equality at p = 1, 2 in exact arithmetic
    jensen_ok = jensen_ok && a.lower <= a.actual * (1 + 1e-12) && b.lower <= b.actual * (1 + 1e-12);
    jensen_checked += 2;
  }
  ok = ok && jensen_ok;
  return {ok, "||z^p|| rel. error " + num(worst_pow) + ", disk identity " + num(worst_id) + ", GL exactness " +
                  num(worst_gl) + ", Jensen " + (jensen_ok ? "holds" : "FAILS") + " in " +
                  std::to_string(jensen_checked) + " cases"};
}

Outcome criterion9() {
  const auto eps = DecaySequence::dyadic(kLevels);
  const auto profile = CuspProfile::from_decay(eps, kDelta);
  std::vector<MomentMatrix> mats;
  for (int K : {32, 64, 128}) mats.push_back(moment_matrix(profile, K));
  bool ok = true;
  double worst_trace = 0.0;
  for (const auto& mm : mats) worst_trace = std::max(worst_trace, std::abs(mm.trace_eigen() - mm.trace_moments()) / mm.trace_moments());
  ok = worst_trace <= 1e-10;
  for (std::size_t n = 0; n < kLevels; ++n)
    for (std::size_t s = 1; s < mats.size(); ++s) ok = ok && mats[s].eigenvalues[n] >= mats[s - 1].eigenvalues[n];
  std::string crossing;
  for (std::size_t n = 1; n <= kLevels; ++n) {
    int at = 0;
    for (const auto& mm : mats)
      if (!at && mm.eigenvalues[n - 1] >= eps(n) * eps(n) / 64.0) at = mm.K;
    crossing += (n > 1 ? " " : "") + (at ? std::to_string(at) : std::string("-"));
  }
  return {ok, "monotone in K for n <= 8, trace error " + num(worst_trace) + ", floor crossed at K = [" + crossing + "]"};
}

Outcome criterion10() {
  bool increasing = true;
  for (int k = 1; k < 1000; ++k) increasing = increasing && f_weight((k + 1) / 1001.0) > f_weight(k / 1001.0);
  bool below = true;
  for (int k = 0; k <= 2000; ++k) {
    const double x = std::pow(10.0, -6.0 + 10.0 * k / 2000.0);
    below = below && f_weight(x) <= std::min(x * x, 1.35 / x);
  }
  double sup_a = 0.0, sup_b = 0.0;
  for (double p : f_grid(1e6)) {
    sup_a = std::max(sup_a, f_series(p, 20));
    sup_b = std::max(sup_b, f_series(p, 40));
  }
  const double drift = std::abs(sup_b - sup_a) / sup_b;
  return {increasing && below && std::isfinite(sup_b) && drift <= 1e-10,
          std::string("increasing ") + (increasing ? "yes" : "NO") + ", F <= min(x^2, 1.35/x) " +
              (below ? "yes" : "NO") + ", sup series " + num(sup_a) + " (20 terms) vs " + num(sup_b) +
              " (40 terms)"};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const std::function<Outcome()>& f) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += o.pass ? 0 : 1;
    std::printf("%s  criterion %2d  %s  [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str(), secs);
    std::fflush(stdout);
  };
  std::optional<Canonical> canonical;
  auto with_canonical = [&](auto fn) {
    return [&, fn]() {
      if (!canonical) canonical.emplace();
      return fn(*canonical);
    };
  };
  report(1, with_canonical(criterion1));
  report(2, with_canonical(criterion2));
  report(3, with_canonical(criterion3));
  report(4, criterion4);
  report(5, criterion5);
  report(6, criterion6);
  report(7, criterion7);
  report(8, criterion8);
  report(9, criterion9);
  report(10, criterion10);
  std::printf("%d of 10 criteria pass\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
