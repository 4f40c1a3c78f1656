#pragma once

// Quadrature engines.
//
// All area integrals use the normalized measure dA = dx dy / pi, so the unit
// disk has mass 1 and D(c, r) has mass r^2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "dirlab/errors.hpp"
#include "dirlab/geometry.hpp"

namespace dirlab {

inline constexpr int kMaxOrder = 512;
inline constexpr double kDoublingTolerance = 1e-8;

/// Pairwise (cascade) summation; the result depends only on the term order.
template <class T>
T pairwise_sum(std::span<const T> terms) {
  constexpr std::size_t kLeaf = 16;
  if (terms.size() <= kLeaf) {
    T acc{};
    for (const T& v : terms) acc += v;
    return acc;
  }
  const std::size_t half = terms.size() / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

template <class T>
T pairwise_sum(const std::vector<T>& terms) {
  return pairwise_sum(std::span<const T>(terms));
}

/// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order() const { return static_cast<int>(nodes.size()); }
};

namespace detail {

/// (P_m(x), P_m'(x)) by the three-term recurrence; valid for |x| < 1.
inline std::pair<double, double> legendre_with_derivative(int m, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= m; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, m * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace detail

/// gauss_nodes: Newton iteration on P_m from the Tricomi initial guesses;
/// nodes ascending, symmetric pairs filled from one half.
inline QuadratureRule gauss_legendre(int m) {
  detail::require(m >= 1, "gauss_nodes: order must be >= 1");
  detail::require(m <= 4 * kMaxOrder, "gauss_nodes: order too large");
  QuadratureRule rule;
  rule.nodes.assign(static_cast<std::size_t>(m), 0.0);
  rule.weights.assign(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    const bool middle = (m % 2 == 1) && (i == m / 2);
    double x = middle ? 0.0 : std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    for (int iter = 0; iter < 100 && !middle; ++iter) {
      const auto [p, dp] = detail::legendre_with_derivative(m, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16) break;
    }
    const double dp = detail::legendre_with_derivative(m, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(m - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(m - 1 - i)] = w;
  }
  return rule;
}

/// Composite Gauss-Legendre integral of a real or complex f over [a, b] split
/// into `panels` equal pieces.
template <class F>
auto integrate_interval(F&& f, double a, double b, const QuadratureRule& rule, int panels = 1) {
  using R = std::decay_t<decltype(f(a))>;
  std::vector<R> parts;
  parts.reserve(static_cast<std::size_t>(panels));
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double half = 0.5 * width, mid = lo + half;
    R acc{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    parts.push_back(acc * half);
  }
  return pairwise_sum(parts);
}

/// Axis-parallel rectangle [x1, x2] x [y1, y2] (Lebesgue measure dx dy).
struct Box2 {
  double x1, x2, y1, y2;
};

/// integrate_rect: tensor Gauss-Legendre rule of order m with `x_panels`
/// equal splits in x. Returns the plain integral of f(x, y) dx dy.
template <class F>
auto integrate_rect(F&& f, const Box2& rect, int m, int x_panels = 1) {
  using R = std::decay_t<decltype(f(0.0, 0.0))>;
  detail::require(x_panels >= 1, "integrate_rect: x_panels must be >= 1");
  if (!(rect.x2 > rect.x1) || !(rect.y2 > rect.y1)) return R{};
  const QuadratureRule rule = gauss_legendre(m);
  return integrate_interval(
      [&](double x) {
        return integrate_interval([&](double y) { return f(x, y); }, rect.y1, rect.y2, rule);
      },
      rect.x1, rect.x2, rule, x_panels);
}

/// Polar rule on the unit disk with respect to dA: Gauss-Legendre in s = r^2
/// (order m) times the trapezoidal rule in angle (4m points). Weights sum to 1.
struct DiskRule {
  std::vector<cplx> nodes;
  std::vector<double> weights;
  int order = 0;
};

inline DiskRule unit_disk_rule(int m) {
  detail::require(m >= 1 && m <= kMaxOrder, "disk rule: order must lie in [1, 512]");
  const QuadratureRule radial = gauss_legendre(m);
  const int angles = 4 * m;
  DiskRule rule;
  rule.order = m;
  rule.nodes.reserve(static_cast<std::size_t>(m * angles));
  rule.weights.reserve(static_cast<std::size_t>(m * angles));
  for (int i = 0; i < m; ++i) {
    const double s = 0.5 * (1.0 + radial.nodes[static_cast<std::size_t>(i)]);
    const double r = std::sqrt(s);
    const double w = radial.weights[static_cast<std::size_t>(i)] / (2.0 * angles);
    for (int k = 0; k < angles; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / angles;
      rule.nodes.push_back(std::polar(r, phi));
      rule.weights.push_back(w);
    }
  }
  return rule;
}

/// integrate_disk: integral of f over D(center, radius) against dA.
template <class F>
auto integrate_disk(F&& f, cplx center, double radius, int m) {
  using R = std::decay_t<decltype(f(center))>;
  detail::require(radius > 0.0, "integrate_disk: radius must be positive");
  const DiskRule rule = unit_disk_rule(m);
  std::vector<R> terms(rule.nodes.size());
  for (std::size_t q = 0; q < terms.size(); ++q) terms[q] = rule.weights[q] * f(center + radius * rule.nodes[q]);
  return (radius * radius) * pairwise_sum(terms);
}

// ---------------------------------------------------------------------------
// Reproducing kernel between two disks of a family
// ---------------------------------------------------------------------------

/// Coefficients of 1 - w conj(z) for z = c_i + r_i xi, w = c_j + r_j zeta:
///   s_ij - c_i r_j zeta - c_j r_i conj(xi) - r_i r_j conj(xi) zeta.
struct KernelPair {
  double s;      // 1 - c_i c_j
  double ci_rj;
  double cj_ri;
  double ri_rj;
  double floor;  // delta^i, lower bound of |1 - w conj(z)|

  KernelPair(const DiskFamily& family, std::size_t i, std::size_t j) {
    detail::require(i >= 1 && i <= j && j <= family.size(), "kernel_centered: need 1 <= i <= j <= n");
    s = family.one_minus_cc(i, j);
    ci_rj = family.center(i) * family.radius(j);
    cj_ri = family.center(j) * family.radius(i);
    ri_rj = family.radius(i) * family.radius(j);
    floor = family.delta_pow(i);
  }

  cplx one_minus_wz(cplx xi, cplx zeta) const {
    const cplx xb = std::conj(xi);
    return s - ci_rj * zeta - cj_ri * xb - ri_rj * xb * zeta;
  }
};

/// kernel_centered: 1 / (1 - w conj(z))^2 evaluated through the centered
/// expansion. Throws NumericIntegrityError if |1 - w conj(z)| drops below
/// delta^i, which is impossible in exact arithmetic.
inline cplx kernel_centered(const DiskFamily& family, std::size_t i, std::size_t j, cplx xi, cplx zeta) {
  detail::require(std::abs(xi) <= 1.0 + 1e-15 && std::abs(zeta) <= 1.0 + 1e-15,
                  "kernel_centered: xi and zeta must lie in the closed unit disk");
  const KernelPair pair(family, i, j);
  const cplx d = pair.one_minus_wz(xi, zeta);
  if (std::abs(d) < pair.floor * (1.0 - 1e-8))
    throw NumericIntegrityError("kernel_centered: |1 - w conj(z)| below delta^i for i = " +
                                std::to_string(i) + ", j = " + std::to_string(j));
  return 1.0 / (d * d);
}

// ---------------------------------------------------------------------------
// Integrals over the cusp domain
// ---------------------------------------------------------------------------

/// Result of an integral that was checked by order doubling.
struct CheckedValue {
  double value = 0.0;
  double rel_change = 0.0;  // |I(2m) - I(m)| / |I(2m)| at the final order pair
  int order = 0;            // order at which `value` was computed
  bool converged = true;    // rel_change <= kDoublingTolerance
};

/// Breakpoints in t for strip integration over Omega_theta: the profile knots
/// together with dyadic points 2^-s down to below the smallest knot.
inline std::vector<double> cusp_breakpoints(const CuspProfile& profile) {
  std::vector<double> pts(profile.knots().begin(), profile.knots().end());
  const double smallest = profile.knots().front();
  for (int s = 1; s <= 1000; ++s) {
    const double t = std::ldexp(1.0, -s);
    pts.push_back(t);
    if (t < 0.25 * smallest && s >= 60) break;
  }
  pts.push_back(0.0);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

/// Visits every node of the strip rule on Omega_theta restricted to y >= 0:
/// visit(t, y, weight) with weights already doubled for the reflected node,
/// so that sum weight * g(t, y) approximates integral_Omega g dA for g even
/// in y. Panel partial sums go through `panel_done()` so callers can keep a
/// per-panel accumulator. `m_y` must be even.
template <class Visit, class PanelDone>
void for_each_cusp_node(const CuspProfile& profile, int m_t, int m_y, Visit&& visit, PanelDone&& panel_done) {
  detail::require(m_t >= 1 && m_t <= 4 * kMaxOrder, "cusp quadrature: order out of range");
  detail::require(m_y >= 2 && m_y % 2 == 0, "cusp quadrature: transverse order must be even");
  const QuadratureRule rt = gauss_legendre(m_t);
  const QuadratureRule ry = gauss_legendre(m_y);
  const std::vector<double> pts = cusp_breakpoints(profile);
  for (std::size_t p = 0; p + 1 < pts.size(); ++p) {
    const double a = pts[p], b = pts[p + 1];
    const double half_t = 0.5 * (b - a), mid_t = a + half_t;
    for (std::size_t i = 0; i < rt.nodes.size(); ++i) {
      const double t = mid_t + half_t * rt.nodes[i];
      const double theta = profile.eval(t);
      const double wt = rt.weights[i] * half_t;
      // y-rule on [-theta, theta]; nodes come in +- pairs
      for (std::size_t k = static_cast<std::size_t>(m_y / 2); k < ry.nodes.size(); ++k) {
        const double y = theta * ry.nodes[k];
        const double w = wt * theta * ry.weights[k] * 2.0 / std::numbers::pi;
        visit(t, y, w);
      }
    }
    panel_done();
  }
}

/// Integral over Omega_theta of a function g(t, y) that is even in y, at the
/// given orders. Returns the pairwise-summed panel contributions.
template <class G>
double integrate_cusp_even(const CuspProfile& profile, G&& g, int m_t, int m_y) {
  std::vector<double> panels;
  double acc = 0.0;
  for_each_cusp_node(
      profile, m_t, m_y, [&](double t, double y, double w) { acc += w * g(t, y); },
      [&] {
        panels.push_back(acc);
        acc = 0.0;
      });
  return pairwise_sum(panels);
}

/// Runs integrate_cusp_even at (m, m/4) and (2m, m/2), doubling up to the
/// 512 cap while the relative change exceeds 1e-8.
template <class G>
CheckedValue integrate_cusp_checked(const CuspProfile& profile, G&& g, int m = 64) {
  auto transverse = [](int order) { return std::max(4, 2 * ((order / 4 + 1) / 2)); };
  CheckedValue out;
  double coarse = integrate_cusp_even(profile, g, m, transverse(m));
  for (int order = m;; order *= 2) {
    const int fine_order = 2 * order;
    const double fine = integrate_cusp_even(profile, g, fine_order, transverse(fine_order));
    const double scale = std::abs(fine) > 0.0 ? std::abs(fine) : 1.0;
    out.value = fine;
    out.order = fine_order;
    out.rel_change = std::abs(fine - coarse) / scale;
    out.converged = out.rel_change <= kDoublingTolerance;
    if (out.converged || fine_order >= kMaxOrder) break;
    coarse = fine;
  }
  return out;
}

/// Re[(x + iy)^k (x - iy)^j] with x = 1 - t, via |w|^{j+k} cos((k - j) arg w).
inline double moment_integrand(double t, double y, int j, int k) {
  const double x = 1.0 - t;
  const double r = std::hypot(x, y);
  const double a = std::atan2(y, x);
  return std::pow(r, j + k) * std::cos((k - j) * a);
}

/// cusp_moment: integral over Omega_theta of w^k conj(w)^j dA. The region is
/// symmetric about the real axis, so the value is real and symmetric in
/// (j, k); the imaginary part vanishes identically and is not computed.
inline CheckedValue cusp_moment(const CuspProfile& profile, int j, int k, int m = 64) {
  detail::require(j >= 0 && k >= 0 && j <= 400 && k <= 400, "cusp_moment: indices must lie in [0, 400]");
  return integrate_cusp_checked(profile, [j, k](double t, double y) { return moment_integrand(t, y, j, k); },
                                m);
}

/// Area of Omega_theta from the 1D profile: (2/pi) integral_0^1 theta(t) dt,
/// exact on each linear piece.
inline double cusp_area(const CuspProfile& profile) {
  double total = 0.0, prev_t = 0.0, prev_v = 0.0;
  for (std::size_t k = 0; k < profile.knots().size(); ++k) {
    const double t = profile.knots()[k], v = profile.values()[k];
    total += 0.5 * (v + prev_v) * (t - prev_t);
    prev_t = t;
    prev_v = v;
  }
  return 2.0 * total / std::numbers::pi;
}

}  // namespace dirlab
