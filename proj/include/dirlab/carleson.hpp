#pragma once

// Window measures for the two constructions.
//
// Cusp: S(xi, h) = D(xi, h) intersected with the disk, measured against
// mu = 1_Omega dA. In the local coordinates 1 - t + iy the window is a disk
// of radius h around (a, b) = (2 sin^2(alpha/2), sin alpha), xi = e^{i alpha},
// so S(xi, h) cap Omega reduces to a 1D integral of a y-interval length.
//
// Rectilinear: W(1, h) = {1 - h <= |z| < 1, |arg z| < pi h} and the half
// windows W'_n. Under w = e^{-u} their preimages are unions of rectangles
// {x-range} x {|y - 2k pi| < pi h}, so mu(W) is an exact sum over F's
// rectangles of clipped integrals of e^{-2x} dx dy / pi.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "dirlab/errors.hpp"
#include "dirlab/geometry.hpp"
#include "dirlab/quad.hpp"

namespace dirlab {

struct WindowArea {
  double value = 0.0;
  int resolution = 0;  // panels of the 1D rule; 0 for the exact xi = 1 path
};

namespace detail {

/// (1/pi) * 2 * integral_0^h min(theta(t), sqrt(h^2 - t^2)) dt, with the
/// crossing point located by bisection on the increasing difference.
inline double window_area_at_one(const CuspProfile& profile, double h) {
  auto diff = [&](double t) { return profile.eval(t) - std::sqrt(std::max(0.0, h * h - t * t)); };
  double lo = 0.0, hi = h;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (diff(mid) < 0.0 ? lo : hi) = mid;
  }
  const double cross = lo;
  // theta part: exact on each linear piece (two-point Gauss is exact)
  const QuadratureRule g2 = gauss_legendre(2);
  std::vector<double> cuts{0.0};
  for (double k : profile.knots())
    if (k > 0.0 && k < cross) cuts.push_back(k);
  cuts.push_back(cross);
  std::vector<double> parts;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p)
    parts.push_back(integrate_interval([&](double t) { return profile.eval(t); }, cuts[p], cuts[p + 1], g2));
  // circular cap: t = h cos(phi), phi in [0, phi*], integrand h^2 sin^2(phi)
  const double phi_star = 2.0 * std::asin(std::sqrt(std::max(0.0, (h - cross) / (2.0 * h))));
  if (phi_star > 0.0) {
    const QuadratureRule g16 = gauss_legendre(16);
    parts.push_back(integrate_interval(
        [&](double phi) {
          const double s = std::sin(phi);
          return h * h * s * s;
        },
        0.0, phi_star, g16));
  }
  return 2.0 * pairwise_sum(parts) / std::numbers::pi;
}

/// General window center. With t = a - h cos(phi) the chord of the window at
/// t is [b - h sin(phi), b + h sin(phi)] and dt = h sin(phi) dphi. The phi
/// range is split into `panels` equal pieces, refined at profile knots and at
/// every located kink of the clipped length, then integrated by 8-point Gauss.
inline double window_area_general(const CuspProfile& profile, double h, double alpha, int panels) {
  const double a = 2.0 * std::pow(std::sin(0.5 * alpha), 2);
  const double b = std::sin(alpha);
  const double phi_lo = a >= h ? 0.0 : std::acos(a / h);
  const double phi_hi = a - 1.0 <= -h ? std::numbers::pi : std::acos((a - 1.0) / h);
  if (!(phi_hi > phi_lo)) return 0.0;
  auto t_of = [&](double phi) { return a - h * std::cos(phi); };
  auto length = [&](double phi) {
    const double c = h * std::sin(phi);
    const double th = profile.eval(t_of(phi));
    return std::max(0.0, std::min(th, b + c) - std::max(-th, b - c));
  };
  // sign changes of these locate the kinks of length()
  auto kink = [&](int which, double phi) {
    const double c = h * std::sin(phi);
    const double th = profile.eval(t_of(phi));
    switch (which) {
      case 0: return th - (b + c);
      case 1: return -th - (b - c);
      case 2: return th - (b - c);
      default: return -th - (b + c);
    }
  };
  std::vector<double> cuts;
  for (int p = 0; p <= panels; ++p) cuts.push_back(phi_lo + (phi_hi - phi_lo) * p / panels);
  for (double k : profile.knots()) {
    const double u = (a - k) / h;
    if (u > -1.0 && u < 1.0) {
      const double phi = std::acos(u);
      if (phi > phi_lo && phi < phi_hi) cuts.push_back(phi);
    }
  }
  const std::size_t uniform = static_cast<std::size_t>(panels);
  for (std::size_t p = 0; p < uniform; ++p) {
    for (int which = 0; which < 4; ++which) {
      double lo = cuts[p], hi = cuts[p + 1];
      const double f_lo = kink(which, lo), f_hi = kink(which, hi);
      if (!(f_lo * f_hi < 0.0)) continue;
      const bool rising = f_lo < 0.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        ((kink(which, mid) < 0.0) == rising ? lo : hi) = mid;
      }
      cuts.push_back(lo);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const QuadratureRule g8 = gauss_legendre(8);
  auto integrand = [&](double phi) { return length(phi) * h * std::sin(phi); };
  std::vector<double> parts;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) parts.push_back(integrate_interval(integrand, cuts[p], cuts[p + 1], g8));
  return pairwise_sum(parts) / std::numbers::pi;
}

}  // namespace detail

/// window_area_cusp: A[S(xi, h) cap Omega_theta] under dA.
inline WindowArea window_area_cusp(const CuspProfile& profile, double h, cplx xi, int panels = 512) {
  detail::require(h > 0.0 && h < 1.0, "window_area_cusp: h must lie in (0,1)");
  detail::require(std::abs(std::abs(xi) - 1.0) < 1e-12, "window_area_cusp: xi must be unimodular");
  detail::require(panels >= 1, "window_area_cusp: panels must be >= 1");
  if (xi == cplx(1.0, 0.0)) return {detail::window_area_at_one(profile, h), 0};
  return {detail::window_area_general(profile, h, std::arg(xi), panels), panels};
}

/// Deterministic boundary grid: xi = 1, xi = e^{+-i alpha} for alpha in
/// {h/4, h/2, h, 2h}, and `count` equally spaced points.
inline std::vector<cplx> default_xi_grid(double h, int count = 16) {
  std::vector<cplx> xis{cplx(1.0, 0.0)};
  for (double f : {0.25, 0.5, 1.0, 2.0}) {
    xis.push_back(std::polar(1.0, f * h));
    xis.push_back(std::polar(1.0, -f * h));
  }
  for (int k = 1; k < count; ++k) xis.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / count));
  return xis;
}

struct RhoEstimate {
  double value = 0.0;
  cplx argmax{1.0, 0.0};
  std::size_t grid_size = 0;
};

/// rho: max of window_area_cusp over the grid (mu = 1_Omega dA).
inline RhoEstimate rho(const CuspProfile& profile, double h, const std::vector<cplx>& xis, int panels = 512) {
  detail::require(!xis.empty(), "rho: empty xi grid");
  detail::require(std::find(xis.begin(), xis.end(), cplx(1.0, 0.0)) != xis.end(), "rho: grid must contain xi = 1");
  RhoEstimate out;
  out.grid_size = xis.size();
  out.value = -1.0;
  for (const cplx& xi : xis) {
    const double v = window_area_cusp(profile, h, xi, panels).value;
    if (v > out.value) {
      out.value = v;
      out.argmax = xi;
    }
  }
  return out;
}

/// Per-h window data on a strictly decreasing grid.
struct WindowMeasureReport {
  std::vector<double> h;
  std::vector<double> rho;
  std::vector<double> index;  // rho / h^2
  std::vector<double> bound;  // eps_j / delta when known, else NaN
  std::size_t xi_grid_size = 0;
};

/// Window report on h_j = delta^j, j = 1..levels.
inline WindowMeasureReport cusp_window_report(const CuspProfile& profile, double delta, std::size_t levels,
                                              int xi_count = 16) {
  detail::require(delta > 0.0 && delta < 1.0, "cusp_window_report: delta must lie in (0,1)");
  detail::require(levels >= 1, "cusp_window_report: need at least one level");
  WindowMeasureReport r;
  for (std::size_t j = 1; j <= levels; ++j) {
    const double h = std::pow(delta, static_cast<double>(j));
    const auto xis = default_xi_grid(h, xi_count);
    const RhoEstimate est = rho(profile, h, xis);
    r.h.push_back(h);
    r.rho.push_back(est.value);
    r.index.push_back(est.value / (h * h));
    const auto& eps = profile.eps();
    r.bound.push_back(eps && j <= eps->size() ? (*eps)(j) / delta : std::numeric_limits<double>::quiet_NaN());
    r.xi_grid_size = xis.size();
  }
  return r;
}

struct BoundednessIndex {
  double max_index = 0.0;
  std::vector<double> sequence;
  bool within_bound = true;       // index_j <= bound_j wherever a bound is known
  bool strictly_decreasing = true;
  double min_index = 0.0;
};

/// boundedness_index: sup of h^-2 rho(h) on the grid plus the finite-grid
/// little-o diagnostic.
inline BoundednessIndex boundedness_index(const WindowMeasureReport& report) {
  BoundednessIndex out;
  out.sequence = report.index;
  if (report.index.empty()) return out;
  out.max_index = *std::max_element(report.index.begin(), report.index.end());
  out.min_index = *std::min_element(report.index.begin(), report.index.end());
  for (std::size_t j = 0; j < report.index.size(); ++j) {
    if (j < report.bound.size() && !std::isnan(report.bound[j]) && !(report.index[j] <= report.bound[j]))
      out.within_bound = false;
    if (j > 0 && !(report.index[j] < report.index[j - 1])) out.strictly_decreasing = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rectilinear domain
// ---------------------------------------------------------------------------

struct EksyWindow {
  int N = 0;
  double h = 0.0;            // 2^-2N
  std::int64_t l = 0;        // l_N
  double mu_half = 0.0;      // mu(W'_{2N})
  double mu_window = 0.0;    // mu(W(1, h)) on the truncated domain
  double mu_tail = 0.0;      // contribution of levels n_max < n <= n_max + 40
  double index = 0.0;        // h^-2 (mu_window + mu_tail)
  double box_part = 0.0;     // l_N 4^{-2N} (1 - (3/4) 2^{-2N})
  double half_area = 0.0;    // A(W'_{2N})
};

namespace detail {

/// Exact integral of e^{-2x} dx dy / pi over [x1, x2] x [y1, y2].
inline double exp_rect_measure(double x1, double x2, double y1, double y2) {
  if (!(x2 > x1) || !(y2 > y1)) return 0.0;
  return std::exp(-2.0 * x1) * (-std::expm1(-2.0 * (x2 - x1))) * 0.5 * (y2 - y1) / std::numbers::pi;
}

/// Clips every rectangle of F with {x_lo < x < x_hi} x {|y - 2k pi| < pi h}
/// and applies `measure` to each non-empty piece.
template <class Measure>
double clipped_strip_sum(const RectilinearDomain& F, double x_lo, double x_hi, double h, Measure&& measure) {
  std::vector<double> parts;
  const double half = std::numbers::pi * h;
  for (const Rect& r : F.rects()) {
    const double x1 = std::max(r.x1, x_lo), x2 = std::min(r.x2, x_hi);
    if (!(x2 > x1)) continue;
    // strip centers in the rectangle's local y coordinate
    const int d_lo = static_cast<int>(std::floor((r.y1 - half) / (2.0 * std::numbers::pi)));
    const int d_hi = static_cast<int>(std::ceil((r.y2 + half) / (2.0 * std::numbers::pi)));
    for (int d = std::max(-r.anchor, d_lo); d <= d_hi; ++d) {
      const double c = 2.0 * std::numbers::pi * d;
      const double y1 = std::max(r.y1, c - half), y2 = std::min(r.y2, c + half);
      if (y2 > y1) parts.push_back(measure(x1, x2, y1, y2));
    }
  }
  return pairwise_sum(parts);
}

}  // namespace detail

/// Normalized area of W'_n = {1 - 2^-n < |z| < 1 - 2^-n-1, |arg z| < pi 2^-n}
/// by polar quadrature (independent of the rectangle closed forms).
inline double half_window_area(int n) {
  const double r1 = 1.0 - std::ldexp(1.0, -n), r2 = 1.0 - std::ldexp(1.0, -n - 1);
  const double a = std::ldexp(std::numbers::pi, -n);
  return integrate_rect([](double r, double) { return r / std::numbers::pi; }, Box2{r1, r2, -a, a}, 4);
}

/// eksy_window_measure: exact mu(W'_{2N}) and mu(W(1, h_N)), h_N = 2^-2N.
inline EksyWindow eksy_window_measure(const RectilinearDomain& F, int N) {
  detail::require(F.is_eksy(), "eksy_window_measure: domain must come from eksy_build");
  detail::require(N >= 1 && N <= F.n_max(), "eksy_window_measure: N must lie in [1, n_max]");
  EksyWindow w;
  w.N = N;
  w.h = std::ldexp(1.0, -2 * N);
  w.l = F.tower_height(N);
  w.mu_half = detail::clipped_strip_sum(F, strip_edge(2 * N + 1), strip_edge(2 * N), w.h, detail::exp_rect_measure);
  w.mu_window = detail::clipped_strip_sum(F, 0.0, strip_edge(2 * N), w.h, detail::exp_rect_measure);
  // levels past the truncation lie inside every window W(1, h_N), N <= n_max
  std::vector<Rect> deeper;
  for (int n = F.n_max() + 1; n <= F.n_max() + 40; ++n) {
    const auto level = RectilinearDomain::level_rects(*F.growth(), n);
    deeper.insert(deeper.end(), level.begin(), level.end());
  }
  w.mu_tail = detail::clipped_strip_sum(RectilinearDomain(std::move(deeper)), 0.0, strip_edge(2 * N), w.h,
                                        detail::exp_rect_measure);
  w.index = (w.mu_window + w.mu_tail) / (w.h * w.h);
  w.box_part = static_cast<double>(w.l) * w.h * w.h * (1.0 - 0.75 * w.h);
  w.half_area = half_window_area(2 * N);
  return w;
}

/// Same two measures by tensor Gauss quadrature of e^{-2x}/pi on the clipped
/// pieces, used to cross-check the closed forms.
inline std::pair<double, double> eksy_window_measure_quadrature(const RectilinearDomain& F, int N, int m = 16) {
  detail::require(N >= 1 && N <= F.n_max(), "eksy_window_measure_quadrature: N out of range");
  const double h = std::ldexp(1.0, -2 * N);
  auto quad = [m](double x1, double x2, double y1, double y2) {
    const int panels = std::max(1, static_cast<int>(std::ceil(2.0 * (x2 - x1))));
    return integrate_rect([](double x, double) { return std::exp(-2.0 * x) / std::numbers::pi; },
                          Box2{x1, x2, y1, y2}, m, panels);
  };
  return {detail::clipped_strip_sum(F, strip_edge(2 * N + 1), strip_edge(2 * N), h, quad),
          detail::clipped_strip_sum(F, 0.0, strip_edge(2 * N), h, quad)};
}

/// eksy_window_measure for N = 1..n_max.
inline std::vector<EksyWindow> eksy_window_series(const RectilinearDomain& F) {
  std::vector<EksyWindow> out;
  for (int N = 1; N <= F.n_max(); ++N) out.push_back(eksy_window_measure(F, N));
  return out;
}

}  // namespace dirlab
