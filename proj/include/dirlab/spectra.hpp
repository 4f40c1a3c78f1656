#pragma once

// Dense eigenvalues and norm bounds for small matrices (n up to a few
// hundred). The eigensolver is cyclic Jacobi, which keeps high relative
// accuracy on the tiny eigenvalues of graded positive semidefinite matrices.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "dirlab/errors.hpp"

namespace dirlab {

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

/// Row-major dense matrix with real or complex entries.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T{}) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      detail::require(row.size() == cols_, "Matrix: ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }
  static Matrix diagonal(std::span<const double> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = T(d[i]);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const T> data() const { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (const T& v : data_) m = std::max(m, static_cast<double>(std::abs(v)));
    return m;
  }
  double frobenius() const {
    double s = 0.0;
    for (const T& v : data_) s += static_cast<double>(std::norm(v));
    return std::sqrt(s);
  }
  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const T& v) {
      if constexpr (is_complex<T>::value) return std::isfinite(v.real()) && std::isfinite(v.imag());
      else return std::isfinite(v);
    });
  }

  /// ||A - A*||_max <= tol ||A||_max.
  bool is_hermitian(double tol = 1e-12) const {
    if (!square()) return false;
    double dev = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j) {
        if constexpr (is_complex<T>::value)
          dev = std::max(dev, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        else
          dev = std::max(dev, std::abs((*this)(i, j) - (*this)(j, i)));
      }
    return dev <= tol * max_abs();
  }

  Matrix adjoint() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        if constexpr (is_complex<T>::value) out(j, i) = std::conj((*this)(i, j));
        else out(j, i) = (*this)(i, j);
      }
    return out;
  }

  /// Leading k x k principal submatrix.
  Matrix leading(std::size_t k) const {
    detail::require(k <= rows_ && k <= cols_, "Matrix::leading: size out of range");
    Matrix out(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) out(i, j) = (*this)(i, j);
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    detail::require(a.cols_ == b.rows_, "Matrix product: shape mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T aik = a(i, k);
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<std::complex<double>>;

namespace detail {

/// Stable descending sort; equal values keep their original order.
inline void sort_descending(std::vector<double>& v) {
  std::stable_sort(v.begin(), v.end(), std::greater<>());
}

/// Cyclic Jacobi on a real symmetric matrix, in place. A rotation is applied
/// to (p, q) unless |a_pq| is negligible relative to sqrt|a_pp a_qq| (which
/// preserves small eigenvalues of graded matrices) or to ||A||_F.
inline std::vector<double> jacobi_eigenvalues(RealMatrix a) {
  const std::size_t n = a.rows();
  const double norm_f = a.frobenius();
  if (n == 0) return {};
  if (norm_f == 0.0) return std::vector<double>(n, 0.0);
  constexpr double kRelative = 1e-17;
  const double absolute = 1e-30 * norm_f;
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p), aqq = a(q, q);
        if (std::abs(apq) <= kRelative * std::sqrt(std::abs(app * aqq)) || std::abs(apq) <= absolute) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        rotated = true;
        const double theta = (aqq - app) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double g = a(r, p), h = a(r, q);
          const double gp = g - s * (h + g * tau);
          const double hq = h + s * (g - h * tau);
          a(r, p) = a(p, r) = gp;
          a(r, q) = a(q, r) = hq;
        }
      }
    }
    if (!rotated) break;
  }
  double off = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) off += a(i, j) * a(i, j);
  if (std::sqrt(off) > 1e-13 * norm_f)
    throw NumericIntegrityError("eigh: Jacobi sweeps did not converge");
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  sort_descending(eig);
  return eig;
}

}  // namespace detail

/// eigh: eigenvalues of a Hermitian matrix, non-increasing.
template <class T>
std::vector<double> eigh(const Matrix<T>& a) {
  detail::require(a.square(), "eigh: matrix must be square");
  detail::require(a.all_finite(), "eigh: non-finite entry");
  detail::require(a.is_hermitian(), "eigh: matrix is not Hermitian");
  const std::size_t n = a.rows();
  if constexpr (is_complex<T>::value) {
    // [[X, -Y], [Y, X]] carries every eigenvalue of X + iY twice.
    RealMatrix big(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const auto v = 0.5 * (a(i, j) + std::conj(a(j, i)));
        big(i, j) = big(i + n, j + n) = v.real();
        big(i + n, j) = v.imag();
        big(i, j + n) = -v.imag();
      }
    const auto doubled = detail::jacobi_eigenvalues(std::move(big));
    std::vector<double> eig(n);
    for (std::size_t k = 0; k < n; ++k) eig[k] = 0.5 * (doubled[2 * k] + doubled[2 * k + 1]);
    return eig;
  } else {
    RealMatrix sym(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) sym(i, j) = 0.5 * (a(i, j) + a(j, i));
    return detail::jacobi_eigenvalues(std::move(sym));
  }
}

/// singular_values: sqrt of the eigenvalues of A* A, non-increasing. For a
/// Hermitian positive semidefinite A prefer eigh, which avoids squaring.
template <class T>
std::vector<double> singular_values(const Matrix<T>& a) {
  const auto gram = a.adjoint() * a;
  auto eig = eigh(gram);
  for (double& v : eig) v = std::sqrt(std::max(v, 0.0));
  return eig;
}

struct SchurBound {
  double max_row_sum = 0.0;  // alpha
  double max_col_sum = 0.0;  // beta
  double bound = 0.0;        // sqrt(alpha beta) >= ||A||
};

/// schur_bound: unweighted Schur test.
template <class T>
SchurBound schur_bound(const Matrix<T>& a) {
  SchurBound out;
  std::vector<double> cols(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double v = std::abs(a(i, j));
      row += v;
      cols[j] += v;
    }
    out.max_row_sum = std::max(out.max_row_sum, row);
  }
  for (double c : cols) out.max_col_sum = std::max(out.max_col_sum, c);
  out.bound = std::sqrt(out.max_row_sum * out.max_col_sum);
  return out;
}

struct NeumannBound {
  bool applicable = false;     // false when q >= 1
  double q = 0.0;
  std::vector<double> bounds;  // bounds[n-1] <= b_n(Dg (I + N))
};

/// neumann_lower: for M = Dg (I + N) with ||N|| <= q < 1, the n-th Bernstein
/// (= singular) number satisfies b_n(M) >= d_(n) (1 - q), d_(n) the n-th
/// largest diagonal entry, since ||(I + N)^{-1}|| <= 1 / (1 - q).
inline NeumannBound neumann_lower(std::span<const double> diag, double q) {
  detail::require(q >= 0.0, "neumann_lower: q must be non-negative");
  for (double d : diag) detail::require(d > 0.0, "neumann_lower: diagonal must be positive");
  NeumannBound out;
  out.q = q;
  if (!(q < 1.0)) return out;
  out.applicable = true;
  out.bounds.assign(diag.begin(), diag.end());
  detail::sort_descending(out.bounds);
  for (double& b : out.bounds) b *= (1.0 - q);
  return out;
}

}  // namespace dirlab
