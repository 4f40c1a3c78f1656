#pragma once

// Dirichlet norms of symbol powers.
//
// Series route: coefficients of phi^p by repeated convolution.
// Region route: ||phi^p||_D^2 - |phi(0)|^{2p} = p^2 integral |w|^{2p-2} n_phi dA
// over the image. For the rectilinear domain the substitution w = e^{-u}
// (Jacobian e^{-2x}) turns every rectangle into a closed form.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <variant>
#include <vector>

#include "dirlab/errors.hpp"
#include "dirlab/geometry.hpp"
#include "dirlab/quad.hpp"

namespace dirlab {

/// Taylor coefficients c_0..c_d of a polynomial.
class CoefficientSeries {
 public:
  CoefficientSeries() : c_{cplx(0.0)} {}
  explicit CoefficientSeries(std::vector<cplx> c) : c_(std::move(c)) {
    detail::require(!c_.empty(), "CoefficientSeries: need at least c_0");
    for (const cplx& v : c_)
      detail::require(std::isfinite(v.real()) && std::isfinite(v.imag()), "CoefficientSeries: non-finite coefficient");
  }
  static CoefficientSeries monomial(std::size_t k, cplx a = 1.0) {
    std::vector<cplx> c(k + 1, cplx(0.0));
    c[k] = a;
    return CoefficientSeries(std::move(c));
  }

  std::size_t degree() const { return c_.size() - 1; }
  const cplx& operator[](std::size_t n) const { return c_[n]; }
  std::span<const cplx> coefficients() const { return c_; }

  /// Formal derivative.
  CoefficientSeries derivative() const {
    if (c_.size() == 1) return CoefficientSeries();
    std::vector<cplx> d(c_.size() - 1);
    for (std::size_t n = 1; n < c_.size(); ++n) d[n - 1] = static_cast<double>(n) * c_[n];
    return CoefficientSeries(std::move(d));
  }

  friend CoefficientSeries operator*(const CoefficientSeries& a, const CoefficientSeries& b) {
    std::vector<cplx> out(a.c_.size() + b.c_.size() - 1, cplx(0.0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == cplx(0.0)) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return CoefficientSeries(std::move(out));
  }

 private:
  std::vector<cplx> c_;
};

struct SeriesNorms {
  double dirichlet = 0.0;
  double bergman = 0.0;
  double hardy = 0.0;
};

/// norms: Dirichlet, Bergman and Hardy norms from the coefficients.
inline SeriesNorms norms(const CoefficientSeries& f) {
  std::vector<double> d, b, h;
  const auto c = f.coefficients();
  for (std::size_t n = 0; n < c.size(); ++n) {
    const double a2 = std::norm(c[n]);
    d.push_back(n == 0 ? a2 : static_cast<double>(n) * a2);
    b.push_back(a2 / static_cast<double>(n + 1));
    h.push_back(a2);
  }
  return {std::sqrt(pairwise_sum(d)), std::sqrt(pairwise_sum(b)), std::sqrt(pairwise_sum(h))};
}

inline constexpr std::size_t kMaxSeriesDegree = std::size_t{1} << 20;

/// phi^p by repeated squaring of the coefficient series.
inline CoefficientSeries series_power(const CoefficientSeries& phi, int p, std::size_t degree_cap = kMaxSeriesDegree) {
  detail::require(p >= 1, "power_norm_series: p must be >= 1");
  detail::require(phi.degree() * static_cast<std::size_t>(p) <= degree_cap,
                  "power_norm_series: degree of phi^p exceeds the cap");
  CoefficientSeries result = CoefficientSeries::monomial(0);
  CoefficientSeries base = phi;
  for (int e = p; e > 0; e >>= 1) {
    if (e & 1) result = result * base;
    if (e > 1) base = base * base;
  }
  return result;
}

/// power_norm_series: ||phi^p||_D from the coefficients of phi^p.
inline double power_norm_series(const CoefficientSeries& phi, int p, std::size_t degree_cap = kMaxSeriesDegree) {
  return norms(series_power(phi, p, degree_cap)).dirichlet;
}

// ---------------------------------------------------------------------------
// Region route
// ---------------------------------------------------------------------------

/// Integral of e^{-2 s x} dx dy / pi over a rectangle, s > 0. Handles
/// x2 = +inf.
inline double rect_exp_integral(const Rect& r, double s) {
  if (!(r.x2 > r.x1) || !(r.y2 > r.y1)) return 0.0;
  const double dx = r.x2 - r.x1;
  return std::exp(-2.0 * s * r.x1) * (-std::expm1(-2.0 * s * dx)) / (2.0 * s) * (r.y2 - r.y1) / std::numbers::pi;
}

/// integral |w|^{2q} dmu for mu = n_phi dA and phi(D) = e^{-F}, q >= 0.
inline double region_moment(const RectilinearDomain& F, double q) {
  detail::require(q >= 0.0, "region_moment: q must be >= 0");
  std::vector<double> parts;
  for (const Rect& r : F.rects()) parts.push_back(rect_exp_integral(r, q + 1.0));
  return pairwise_sum(parts);
}

/// integral |w|^{2q} 1_Omega dA for the cusp, checked by order doubling.
inline CheckedValue region_moment(const CuspProfile& profile, double q, int m = 64) {
  detail::require(q >= 0.0, "region_moment: q must be >= 0");
  return integrate_cusp_checked(
      profile, [q](double t, double y) { return std::pow((1.0 - t) * (1.0 - t) + y * y, q); }, m);
}

/// power_norm_region: p^2 integral |w|^{2p-2} n_phi dA = ||phi^p||_D^2 minus
/// the constant term |phi(0)|^{2p} (at most 1, not included).
inline double power_norm_region(const RectilinearDomain& F, int p) {
  detail::require(p >= 1, "power_norm_region: p must be >= 1");
  const double pd = p;
  return pd * pd * region_moment(F, pd - 1.0);
}

inline double power_norm_region(const CuspProfile& profile, int p) {
  detail::require(p >= 1, "power_norm_region: p must be >= 1");
  const double pd = p;
  return pd * pd * region_moment(profile, pd - 1.0).value;
}

/// Same quantity for F by tensor Gauss quadrature of p^2 e^{-2px}/pi on each
/// rectangle, with enough x panels to resolve the exponential.
inline double power_norm_region_quadrature(const RectilinearDomain& F, int p, int m = 16) {
  detail::require(p >= 1, "power_norm_region_quadrature: p must be >= 1");
  const double pd = p;
  std::vector<double> parts;
  for (const Rect& r : F.rects()) {
    const int panels = std::max(1, static_cast<int>(std::ceil(pd * (r.x2 - r.x1))));
    parts.push_back(integrate_rect([pd](double x, double) { return std::exp(-2.0 * pd * x) / std::numbers::pi; },
                                   Box2{r.x1, r.x2, r.y1, r.y2}, m, panels));
  }
  return pd * pd * pairwise_sum(parts);
}

/// The rectangle [0, x_max] x [-pi, pi], whose image under e^{-u} covers the
/// punctured disk once outside |w| <= e^{-x_max}.
inline RectilinearDomain full_disk_strip(double x_max = 40.0) {
  return RectilinearDomain({Rect{0.0, x_max, -std::numbers::pi, std::numbers::pi, RectKind::Custom, 0, 0}});
}

// ---------------------------------------------------------------------------
// Growth report
// ---------------------------------------------------------------------------

/// Dense for p <= 128, then doubling up to p_max (p_max itself always included).
inline std::vector<std::int64_t> growth_grid(std::int64_t p_max) {
  detail::require(p_max >= 1, "growth grid: p_max must be >= 1");
  std::vector<std::int64_t> grid;
  for (std::int64_t p = 1; p <= std::min<std::int64_t>(p_max, 128); ++p) grid.push_back(p);
  for (std::int64_t p = 256; p <= p_max; p *= 2) grid.push_back(p);
  if (grid.back() != p_max) grid.push_back(p_max);
  return grid;
}

struct GrowthRow {
  std::int64_t p = 0;
  double norm_sq = 0.0;   // ||phi^p||_D^2 without the constant term
  double norm = 0.0;
  double majorant = 0.0;  // p^2 sum_{n <= n_max} l_n 16^-n e^{-p 4^-n}
  double tail = 0.0;      // p^2 sum_{n > n_max} l_n 16^-n
  std::int64_t Mp = 0;
  double ratio = 0.0;     // norm / M_p
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  double K = 0.0;         // grid sup of norm_sq / (majorant + tail)
  double C = 0.0;         // grid sup of norm / M_p
  std::int64_t C_at = 0;  // p attaining C
  double max_norm = 0.0;
};

/// p^2 sum_{n=1}^{n_max} l_n 16^-n e^{-p 4^-n}.
inline double growth_majorant(const RectilinearDomain& F, double p) {
  std::vector<double> parts;
  for (int n = 1; n <= F.n_max(); ++n) {
    const double q = std::ldexp(1.0, -2 * n);
    parts.push_back(static_cast<double>(F.tower_height(n)) * q * q * std::exp(-p * q));
  }
  return p * p * pairwise_sum(parts);
}

/// eksy_growth_report over growth_grid(p_max).
inline GrowthReport eksy_growth_report(const RectilinearDomain& F, const GrowthSequence& M, std::int64_t p_max) {
  detail::require(F.is_eksy(), "eksy_growth_report: domain must come from eksy_build");
  detail::require(p_max >= 1 && p_max <= (std::int64_t{1} << 40), "eksy_growth_report: p_max out of range");
  GrowthReport out;
  for (std::int64_t p : growth_grid(p_max)) {
    GrowthRow row;
    const double pd = static_cast<double>(p);
    row.p = p;
    row.norm_sq = pd * pd * region_moment(F, pd - 1.0);
    row.norm = std::sqrt(row.norm_sq);
    row.majorant = growth_majorant(F, pd);
    row.tail = pd * pd * F.tail_bound();
    row.Mp = M(p);
    row.ratio = row.norm / static_cast<double>(row.Mp);
    out.K = std::max(out.K, row.norm_sq / (row.majorant + row.tail));
    if (row.ratio > out.C) {
      out.C = row.ratio;
      out.C_at = p;
    }
    out.max_norm = std::max(out.max_norm, row.norm);
    out.rows.push_back(row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Jensen lower bound
// ---------------------------------------------------------------------------

struct JensenBound {
  double lower = 0.0;
  double actual = 0.0;
  double mass = 0.0;  // mu(D)
  double m2 = 0.0;    // integral |w|^2 dmu
};

/// jensen_lower: p^2 mu(D) (m2 / mu(D))^{p-1} <= p^2 integral |w|^{2p-2} dmu.
inline JensenBound jensen_lower(const RectilinearDomain& F, int p) {
  detail::require(p >= 1, "jensen_lower: p must be >= 1");
  JensenBound b;
  b.mass = region_moment(F, 0.0);
  b.m2 = region_moment(F, 1.0);
  const double pd = p;
  b.lower = pd * pd * b.mass * std::pow(b.m2 / b.mass, pd - 1.0);
  b.actual = power_norm_region(F, p);
  return b;
}

inline JensenBound jensen_lower(const CuspProfile& profile, int p) {
  detail::require(p >= 1, "jensen_lower: p must be >= 1");
  JensenBound b;
  b.mass = region_moment(profile, 0.0).value;
  b.m2 = region_moment(profile, 1.0).value;
  const double pd = p;
  b.lower = pd * pd * b.mass * std::pow(b.m2 / b.mass, pd - 1.0);
  b.actual = power_norm_region(profile, p);
  return b;
}

// ---------------------------------------------------------------------------
// The function F(x) = x^2 e^{-x}
// ---------------------------------------------------------------------------

inline double f_weight(double x) { return x * x * std::exp(-x); }

/// sum_{n=1}^{terms} F(p / 4^n).
inline double f_series(double p, int terms) {
  detail::require(terms >= 1 && terms <= 500, "f_series: terms out of range");
  std::vector<double> parts;
  for (int n = 1; n <= terms; ++n) parts.push_back(f_weight(std::ldexp(p, -2 * n)));
  return pairwise_sum(parts);
}

/// Integers 1..dense followed by a log-spaced grid up to p_max.
inline std::vector<double> f_grid(double p_max, int dense = 1000, int per_decade = 50) {
  std::vector<double> grid;
  for (int p = 1; p <= dense && p <= p_max; ++p) grid.push_back(p);
  const double start = std::log10(static_cast<double>(dense));
  const double stop = std::log10(p_max);
  const int steps = static_cast<int>(std::ceil((stop - start) * per_decade));
  for (int s = 1; s <= steps; ++s) grid.push_back(std::round(std::pow(10.0, start + (stop - start) * s / steps)));
  return grid;
}

}  // namespace dirlab
