#pragma once

// Planar regions of the two constructions.
//
// Cusp side: Omega_theta = {1 - t + iy : 0 < t < 1, |y| < theta(t)} where
// theta is piecewise linear through the anchors (delta^j, eps_j delta^j).
// Points near 1 are handled in the local coordinate t = 1 - x; for j >= 7
// at delta = 1/200 the centers 1 - 2 delta^j are not representable as
// doubles, so every cusp-side routine keeps delta^j and t separately.
//
// Rectilinear side: F is a finite union of closed axis-parallel rectangles
// in the right half-plane (base boxes, towers and pipes). The symbol lives on
// e^{-F}, so u in F corresponds to w = e^{-u} in the disk.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dirlab/errors.hpp"
#include "dirlab/seqs.hpp"

namespace dirlab {

using cplx = std::complex<double>;

inline constexpr double kMaxDelta = 1.0 / 200.0;

// ---------------------------------------------------------------------------
// Cusp profile
// ---------------------------------------------------------------------------

/// Increasing piecewise-linear theta on [0, 1] with theta(0) = 0, given by
/// ascending knots t_k in (0, 1] and values theta(t_k). Below the first knot
/// theta is the chord from the origin.
class CuspProfile {
 public:
  CuspProfile(std::vector<double> knots, std::vector<double> values)
      : knots_(std::move(knots)), values_(std::move(values)) {
    detail::require(!knots_.empty() && knots_.size() == values_.size(),
                    "CuspProfile: knots and values must be non-empty and of equal length");
    double prev_t = 0.0, prev_v = 0.0;
    for (std::size_t k = 0; k < knots_.size(); ++k) {
      detail::require(knots_[k] > prev_t && knots_[k] <= 1.0,
                      "CuspProfile: knots must increase within (0, 1]");
      detail::require(values_[k] > prev_v, "CuspProfile: theta must be strictly increasing");
      detail::require(values_[k] <= knots_[k], "CuspProfile: theta(t) <= t violated at a knot");
      prev_t = knots_[k];
      prev_v = values_[k];
    }
    detail::require(knots_.back() == 1.0, "CuspProfile: last knot must be t = 1");
  }

  /// Anchors theta(delta^j) = eps_j delta^j for j = 1..n, joined linearly and
  /// extended from (delta, eps_1 delta) to (1, eps_1).
  static CuspProfile from_decay(const DecaySequence& eps, double delta) {
    detail::require(delta > 0.0 && delta <= kMaxDelta, "profile_make: delta must lie in (0, 1/200]");
    const std::size_t n = eps.size();
    std::vector<double> knots(n + 1), values(n + 1);
    for (std::size_t j = 1; j <= n; ++j) {
      const double dj = std::pow(delta, static_cast<double>(j));
      knots[n - j] = dj;
      values[n - j] = eps(j) * dj;
    }
    knots[n] = 1.0;
    values[n] = eps(1);
    CuspProfile p(std::move(knots), std::move(values));
    p.delta_ = delta;
    p.eps_ = eps;
    return p;
  }

  /// theta(h) = h, the lens-like contrast profile (non-compact regime).
  static CuspProfile lens() { return CuspProfile({1.0}, {1.0}); }

  /// Piecewise-linear interpolant of h -> h^(1+alpha) on the dyadic knots
  /// 2^-s, s = 0..levels.
  static CuspProfile power_law(double alpha, int levels = 64) {
    detail::require(alpha > 0.0, "power_law: alpha must be positive");
    detail::require(levels >= 1 && levels <= 1000, "power_law: levels out of range");
    std::vector<double> knots, values;
    for (int s = levels; s >= 0; --s) {
      const double t = std::ldexp(1.0, -s);
      knots.push_back(t);
      values.push_back(std::pow(t, 1.0 + alpha));
    }
    return CuspProfile(std::move(knots), std::move(values));
  }

  /// profile_eval: theta(h) for h in (0, 1).
  double operator()(double h) const {
    detail::require(h > 0.0 && h < 1.0, "profile_eval: h must lie in (0,1)");
    return eval(h);
  }

  /// theta on the closed interval [0, 1], no validation beyond clamping.
  double eval(double h) const {
    if (h <= 0.0) return 0.0;
    if (h >= 1.0) return values_.back();
    // first knot strictly greater than h
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), h);
    const std::size_t k = static_cast<std::size_t>(it - knots_.begin());
    if (k == 0) return values_[0] * (h / knots_[0]);
    const double t0 = knots_[k - 1], t1 = knots_[k];
    const double v0 = values_[k - 1], v1 = values_[k];
    return v0 + (v1 - v0) * ((h - t0) / (t1 - t0));
  }

  /// Membership of 1 - t + iy.
  bool contains_local(double t, double y) const {
    return t > 0.0 && t < 1.0 && std::abs(y) < eval(t);
  }

  /// cusp_contains: 0 < Re z < 1 and |Im z| < theta(1 - Re z).
  bool contains(cplx z) const {
    const double x = z.real();
    if (!(x > 0.0 && x < 1.0)) return false;
    return std::abs(z.imag()) < eval(1.0 - x);
  }

  std::span<const double> knots() const { return knots_; }
  std::span<const double> values() const { return values_; }

  /// delta and eps are present only for profiles built by from_decay.
  std::optional<double> delta() const { return delta_; }
  const std::optional<DecaySequence>& eps() const { return eps_; }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
  std::optional<double> delta_;
  std::optional<DecaySequence> eps_;
};

// ---------------------------------------------------------------------------
// Disk family
// ---------------------------------------------------------------------------

/// Disks D(c_j, r_j), c_j = 1 - 2 delta^j, r_j = eps_j delta^j, j = 1..n,
/// checked on construction to be pairwise disjoint and inside Omega_theta.
class DiskFamily {
 public:
  static constexpr int kBoundarySamples = 64;

  DiskFamily(const DecaySequence& eps, double delta, std::size_t n)
      : profile_(CuspProfile::from_decay(eps, delta)), eps_(eps), delta_(delta) {
    detail::require(n >= 1 && n <= eps.size(), "disk_family: n must lie in [1, len(eps)]");
    pow_.resize(n + 2);
    for (std::size_t j = 0; j < pow_.size(); ++j) pow_[j] = std::pow(delta, static_cast<double>(j));
    n_ = n;
    certify();
  }

  std::size_t size() const { return n_; }
  double delta() const { return delta_; }
  double eps(std::size_t j) const { return eps_(j); }
  const DecaySequence& eps() const { return eps_; }
  const CuspProfile& profile() const { return profile_; }

  /// delta^j, j >= 0 (stored, never recovered from 1 - c_j).
  double delta_pow(std::size_t j) const { return pow_.at(j); }
  /// 1 - c_j = 2 delta^j.
  double distance_to_one(std::size_t j) const { return 2.0 * pow_.at(j); }
  double center(std::size_t j) const { return 1.0 - 2.0 * pow_.at(j); }
  double radius(std::size_t j) const { return eps_(j) * pow_.at(j); }

  /// 1 - c_i c_j = 2 delta^i + (1 - 2 delta^i) 2 delta^j, free of cancellation.
  double one_minus_cc(std::size_t i, std::size_t j) const {
    const double a = 2.0 * pow_.at(i), b = 2.0 * pow_.at(j);
    return a + (1.0 - a) * b;
  }

  /// c_{j+1} - c_j = 2 (delta^j - delta^{j+1}).
  double center_gap(std::size_t j) const { return 2.0 * (pow_.at(j) - pow_.at(j + 1)); }

 private:
  void certify() const {
    for (std::size_t j = 1; j < n_; ++j) {
      if (!(center_gap(j) > radius(j) + radius(j + 1)))
        throw ConstructionError("disk_family: disks " + std::to_string(j) + " and " +
                                std::to_string(j + 1) + " overlap");
    }
    for (std::size_t j = 1; j <= n_; ++j) {
      const double dj = pow_[j], rj = radius(j);
      for (int k = 0; k < kBoundarySamples; ++k) {
        const double phi = 2.0 * std::numbers::pi * (k + 0.5) / kBoundarySamples;
        const double t = 2.0 * dj - rj * std::cos(phi);
        const double y = rj * std::sin(phi);
        const bool ok = t > dj && std::abs(y) < profile_.eval(dj) && profile_.contains_local(t, y);
        if (!ok)
          throw ConstructionError("disk_family: disk " + std::to_string(j) +
                                  " is not contained in the cusp domain");
      }
    }
  }

  CuspProfile profile_;
  DecaySequence eps_;
  double delta_;
  std::size_t n_ = 0;
  std::vector<double> pow_;
};

// ---------------------------------------------------------------------------
// Rectilinear domain
// ---------------------------------------------------------------------------

/// eps_n = -log(1 - 2^-n), so that e^{-eps_n} = 1 - 2^-n.
inline double strip_edge(int n) { return -std::log1p(-std::ldexp(1.0, -n)); }

/// Non-decreasing integer sequence M_p, p >= 1.
class GrowthSequence {
 public:
  enum class Kind { Log2, Constant, Explicit };

  /// M_p = ceil(log2(p + 1)).
  static GrowthSequence log2() { return GrowthSequence(Kind::Log2, 1, {}); }
  static GrowthSequence constant(std::int64_t k) {
    detail::require(k >= 1, "GrowthSequence: constant must be >= 1");
    return GrowthSequence(Kind::Constant, k, {});
  }
  /// Explicit list M_1..M_L; M_p = M_L for p > L.
  static GrowthSequence explicit_values(std::vector<std::int64_t> values) {
    detail::require(!values.empty(), "GrowthSequence: empty list");
    for (std::size_t i = 0; i < values.size(); ++i) {
      detail::require(values[i] >= 1, "GrowthSequence: entries must be >= 1");
      if (i > 0) detail::require(values[i] >= values[i - 1], "GrowthSequence: must be non-decreasing");
    }
    return GrowthSequence(Kind::Explicit, 0, std::move(values));
  }

  std::int64_t operator()(std::int64_t p) const {
    detail::require(p >= 1, "GrowthSequence: index must be >= 1");
    switch (kind_) {
      case Kind::Log2: {
        // smallest b with 2^b >= p + 1
        std::int64_t b = 0;
        while ((std::int64_t{1} << b) < p + 1) ++b;
        return b;
      }
      case Kind::Constant:
        return constant_;
      case Kind::Explicit:
        return p <= static_cast<std::int64_t>(values_.size()) ? values_[static_cast<std::size_t>(p - 1)]
                                                              : values_.back();
    }
    return 1;
  }

  /// l_n = min(n, M_n^2).
  std::int64_t tower_height(std::int64_t n) const {
    const std::int64_t m = (*this)(n);
    return std::min<std::int64_t>(n, m * m);
  }

  Kind kind() const { return kind_; }
  std::string describe() const {
    switch (kind_) {
      case Kind::Log2: return "log2";
      case Kind::Constant: return "const:" + std::to_string(constant_);
      case Kind::Explicit: return "explicit[" + std::to_string(values_.size()) + "]";
    }
    return "";
  }

 private:
  GrowthSequence(Kind kind, std::int64_t c, std::vector<std::int64_t> v)
      : kind_(kind), constant_(c), values_(std::move(v)) {}
  Kind kind_;
  std::int64_t constant_;
  std::vector<std::int64_t> values_;
};

enum class RectKind { BaseBox, TowerBox, Pipe, Custom };

inline const char* to_string(RectKind kind) {
  switch (kind) {
    case RectKind::BaseBox: return "base";
    case RectKind::TowerBox: return "tower";
    case RectKind::Pipe: return "pipe";
    case RectKind::Custom: return "custom";
  }
  return "?";
}

/// Closed rectangle [x1, x2] x [2 pi anchor + y1, 2 pi anchor + y2]. The
/// y-range is stored relative to 2 pi anchor so that slivers of height
/// 2^-2n pi next to 2k pi stay exact. For boxes B_{k,m}: shift = k and
/// index = m. For pipes P_{k,n}: shift = k and index = n.
struct Rect {
  double x1, x2, y1, y2;
  RectKind kind = RectKind::Custom;
  int shift = 0;
  int index = 0;
  int anchor = 0;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }
  double y_offset() const { return 2.0 * std::numbers::pi * anchor; }
  double abs_y1() const { return y_offset() + y1; }
  double abs_y2() const { return y_offset() + y2; }
  bool contains(double x, double y) const {
    const double local = y - y_offset();
    return x >= x1 && x <= x2 && local >= y1 && local <= y2;
  }
};

/// B_{k,m} = {eps_{m+1} <= x <= eps_m, |y - 2k pi| <= 2^-m pi}.
inline Rect box(int k, int m, RectKind kind) {
  const double half = std::ldexp(std::numbers::pi, -m);
  return Rect{strip_edge(m + 1), strip_edge(m), -half, half, kind, k, m, k};
}

/// P_{k,n}: width 4^{-2n}, centered at the midpoint of [eps_{2n+1}, eps_{2n}],
/// spanning [2(k-1)pi + 2^{-2n}pi, 2k pi - 2^{-2n}pi].
inline Rect pipe(int k, int n) {
  const double mid = 0.5 * (strip_edge(2 * n + 1) + strip_edge(2 * n));
  const double half_w = 0.5 * std::ldexp(1.0, -4 * n);
  const double gap = std::ldexp(std::numbers::pi, -2 * n);
  return Rect{mid - half_w, mid + half_w, gap - 2.0 * std::numbers::pi, -gap, RectKind::Pipe, k, n, k};
}

/// Finite union of closed rectangles in the right half-plane.
class RectilinearDomain {
 public:
  explicit RectilinearDomain(std::vector<Rect> rects) : rects_(std::move(rects)) {
    for (const auto& r : rects_)
      detail::require(r.x1 >= 0.0 && r.x2 >= r.x1 && r.y2 >= r.y1,
                      "RectilinearDomain: rectangles must be ordered and lie in Re u >= 0");
    for (const auto& r : rects_) y_max_ = std::max(y_max_, r.abs_y2());
  }

  /// The box/tower/pipe domain truncated at depth n_max: base boxes B_{0,m}
  /// for 2 <= m <= 2 n_max + 1, towers B_{k,2n} for 0 < k < l_n and pipes
  /// P_{k,n} for 1 <= k < l_n, n <= n_max, with l_n = min(n, M_n^2).
  static RectilinearDomain eksy(const GrowthSequence& M, int n_max) {
    detail::require(n_max >= 1 && n_max <= 60, "eksy_build: n_max must lie in [1, 60]");
    std::vector<Rect> rects;
    std::vector<std::int64_t> l(static_cast<std::size_t>(n_max) + 1, 0);
    for (int n = 1; n <= n_max; ++n) {
      l[static_cast<std::size_t>(n)] = M.tower_height(n);
      const auto level = level_rects(M, n);
      rects.insert(rects.end(), level.begin(), level.end());
    }
    RectilinearDomain d(std::move(rects));
    d.l_ = std::move(l);
    d.n_max_ = n_max;
    d.M_ = M;
    // Sum_{n > n_max} l_n 16^{-n}; l_n <= n makes 80 extra terms ample.
    double tail = 0.0;
    for (int n = n_max + 80; n > n_max; --n)
      tail += static_cast<double>(M.tower_height(n)) * std::ldexp(1.0, -4 * n);
    d.tail_bound_ = tail;
    return d;
  }

  /// Rectangles of level n: B_{0,2n}, B_{0,2n+1}, then B_{k,2n} and P_{k,n}
  /// for 1 <= k < l_n.
  static std::vector<Rect> level_rects(const GrowthSequence& M, int n) {
    detail::require(n >= 1 && n <= 500, "level_rects: n out of range");
    std::vector<Rect> rects{box(0, 2 * n, RectKind::BaseBox), box(0, 2 * n + 1, RectKind::BaseBox)};
    const std::int64_t l = M.tower_height(n);
    for (int k = 1; k < l; ++k) {
      rects.push_back(box(k, 2 * n, RectKind::TowerBox));
      rects.push_back(pipe(k, n));
    }
    return rects;
  }

  std::span<const Rect> rects() const { return rects_; }
  int n_max() const { return n_max_; }
  bool is_eksy() const { return n_max_ > 0; }
  const std::optional<GrowthSequence>& growth() const { return M_; }

  /// l_n for 1 <= n <= n_max (eksy domains only).
  std::int64_t tower_height(int n) const {
    detail::require(is_eksy() && n >= 1 && n <= n_max_, "tower_height: n outside [1, n_max]");
    return l_[static_cast<std::size_t>(n)];
  }

  /// Sum_{n > n_max} l_n 16^{-n}, the analytic size of the truncated tail.
  double tail_bound() const { return tail_bound_; }

  /// eksy_contains (closed rectangles).
  bool contains(cplx u) const {
    for (const auto& r : rects_)
      if (r.contains(u.real(), u.imag())) return true;
    return false;
  }

  /// Largest k for which u + 2k pi i can reach a rectangle when Im u > -pi.
  int max_shift() const {
    return static_cast<int>(std::floor((y_max_ + std::numbers::pi) / (2.0 * std::numbers::pi)));
  }

  /// count_preimages: #{k >= 0 : -Log w + 2k pi i in F}, the counting
  /// function of w -> e^{-f(w)} with f a Riemann map onto the interior.
  int count_preimages(cplx w) const {
    const double modulus = std::abs(w);
    detail::require(modulus > 0.0 && modulus < 1.0, "count_preimages: need 0 < |w| < 1");
    const double x = -std::log(modulus);
    const double y = -std::arg(w);
    int count = 0;
    for (int k = 0; k <= max_shift(); ++k) {
      const bool hit = std::any_of(rects_.begin(), rects_.end(), [&](const Rect& r) {
        const double local = y + 2.0 * std::numbers::pi * (k - r.anchor);
        return x >= r.x1 && x <= r.x2 && local >= r.y1 && local <= r.y2;
      });
      if (hit) ++count;
    }
    return count;
  }

  /// Lebesgue area of F (interiors are pairwise disjoint).
  double area() const {
    double a = 0.0;
    for (const auto& r : rects_) a += r.area();
    return a;
  }

 private:
  std::vector<Rect> rects_;
  double y_max_ = 0.0;
  int n_max_ = 0;
  std::vector<std::int64_t> l_;
  std::optional<GrowthSequence> M_;
  double tail_bound_ = 0.0;
};

}  // namespace dirlab
