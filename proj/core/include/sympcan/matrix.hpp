#pragma once

// Dense matrices over a scalar backend, plus the congruence-level operations
// the canonicalization algorithms are built from.
//
// Exact backends run fraction-exact eliminations (Bareiss for determinants);
// floating backends delegate factorizations to Eigen and make rank decisions
// through the relative-gap rule on singular values.

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <utility>
#include <vector>

#include "sympcan/errors.hpp"
#include "sympcan/polynomial.hpp"
#include "sympcan/scalars.hpp"

namespace sympcan {

template <class K>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, K(0)) {}
  Matrix(std::initializer_list<std::initializer_list<K>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    a_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw PreconditionError("matrix: ragged initializer");
      for (const auto& v : r) a_.push_back(v);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = K(1);
    return m;
  }
  static Matrix zero(std::size_t r, std::size_t c) { return Matrix(r, c); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  K& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const K& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Matrix operator-() const {
    Matrix r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = -a_[i];
    return r;
  }
  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.require_same_shape(b, "+");
    Matrix r(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.a_.size(); ++i) r.a_[i] = a.a_[i] + b.a_[i];
    return r;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.require_same_shape(b, "-");
    Matrix r(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.a_.size(); ++i) r.a_[i] = a.a_[i] - b.a_[i];
    return r;
  }
  friend Matrix operator*(const K& s, const Matrix& m) {
    Matrix r(m.rows_, m.cols_);
    for (std::size_t i = 0; i < m.a_.size(); ++i) r.a_[i] = s * m.a_[i];
    return r;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw PreconditionError("matrix: product shape mismatch");
    Matrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const K& aik = a(i, k);
        if (scalar_traits<K>::is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  Matrix transpose() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }
  Matrix conj() const {
    Matrix r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = scalar_traits<K>::conj(a_[i]);
    return r;
  }
  Matrix conj_transpose() const { return conj().transpose(); }

  double max_abs() const {
    double m = 0;
    for (const auto& v : a_) m = std::max(m, scalar_traits<K>::abs_approx(v));
    return m;
  }
  double fro_norm() const {
    double s = 0;
    for (const auto& v : a_) {
      double x = scalar_traits<K>::abs_approx(v);
      s += x * x;
    }
    return std::sqrt(s);
  }

  Matrix without_row(std::size_t r) const {
    Matrix m(rows_ - 1, cols_);
    for (std::size_t i = 0, o = 0; i < rows_; ++i) {
      if (i == r) continue;
      for (std::size_t j = 0; j < cols_; ++j) m(o, j) = (*this)(i, j);
      ++o;
    }
    return m;
  }
  Matrix without_col(std::size_t c) const {
    Matrix m(rows_, cols_ - 1);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0, o = 0; j < cols_; ++j) {
        if (j == c) continue;
        m(i, o++) = (*this)(i, j);
      }
    return m;
  }

  // columns [c0, c1) as a new matrix
  Matrix col_range(std::size_t c0, std::size_t c1) const {
    Matrix m(rows_, c1 - c0);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = c0; j < c1; ++j) m(i, j - c0) = (*this)(i, j);
    return m;
  }

  std::vector<K> col(std::size_t j) const {
    std::vector<K> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  void set_col(std::size_t j, const std::vector<K>& v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

 private:
  void require_same_shape(const Matrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw PreconditionError(std::string("matrix: shape mismatch in ") + op);
  }
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<K> a_;
};

// ---------------------------------------------------------------------------
// entrywise conversions

template <class To, class From, class Fn>
Matrix<To> matrix_map(const Matrix<From>& m, Fn fn) {
  Matrix<To> r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = fn(m(i, j));
  return r;
}

template <class K>
Matrix<closure_t<K>> to_closure_matrix(const Matrix<K>& m) {
  return matrix_map<closure_t<K>>(m, [](const K& v) { return scalar_traits<K>::to_closure(v); });
}

template <class K>
Matrix<std::complex<double>> to_complex_matrix(const Matrix<K>& m) {
  return matrix_map<std::complex<double>>(
      m, [](const K& v) { return scalar_traits<K>::to_complex(v); });
}

template <class K>
Matrix<double> to_double_matrix(const Matrix<K>& m) {
  static_assert(!scalar_traits<K>::is_complex, "real scalars required");
  return matrix_map<double>(m, [](const K& v) {
    if constexpr (std::is_same_v<K, double>) return v;
    else return v.to_double();
  });
}

namespace detail {

inline Eigen::MatrixXd to_eigen(const Matrix<double>& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  return e;
}
inline Eigen::MatrixXcd to_eigen(const Matrix<std::complex<double>>& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  return e;
}
inline Matrix<double> from_eigen(const Eigen::MatrixXd& e) {
  Matrix<double> m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j)
      m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e(i, j);
  return m;
}
inline Matrix<std::complex<double>> from_eigen(const Eigen::MatrixXcd& e) {
  Matrix<std::complex<double>> m(static_cast<std::size_t>(e.rows()),
                                 static_cast<std::size_t>(e.cols()));
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j)
      m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e(i, j);
  return m;
}

// Rank decision on a descending singular-value sequence: take the largest
// relative gap when it is decisive (> 1e3), otherwise fall back to the
// absolute eps threshold against the largest value.
inline std::size_t rank_from_singular_values(const std::vector<double>& sv, double eps) {
  if (sv.empty() || sv[0] <= 0) return 0;
  double best_gap = 0;
  std::size_t best_at = sv.size();
  for (std::size_t i = 0; i + 1 < sv.size(); ++i) {
    if (sv[i + 1] <= 0) {
      if (sv[i] > 0 && best_gap < 1e300) {
        best_gap = std::numeric_limits<double>::infinity();
        best_at = i + 1;
      }
      break;
    }
    double g = sv[i] / sv[i + 1];
    if (g > best_gap) {
      best_gap = g;
      best_at = i + 1;
    }
  }
  if (best_gap > 1e3) return best_at;
  std::size_t r = 0;
  for (double s : sv)
    if (s > eps * std::max(1.0, sv[0])) ++r;
  return r;
}

template <class K>
std::vector<double> singular_values(const Matrix<K>& m) {
  auto svd = Eigen::JacobiSVD<decltype(to_eigen(m))>(to_eigen(m));
  std::vector<double> sv(svd.singularValues().data(),
                         svd.singularValues().data() + svd.singularValues().size());
  return sv;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// determinant / rank / solve

// Exact determinant by Bareiss fraction-free elimination (every division in
// the update is exact). Floating backends use an LU factorization.
template <class K>
K det(const Matrix<K>& m) {
  if (!m.is_square()) throw PreconditionError("det: square matrix required");
  std::size_t n = m.rows();
  if (n == 0) return K(1);
  if constexpr (scalar_traits<K>::is_exact) {
    Matrix<K> a = m;
    K prev(1);
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      std::size_t piv = n;
      for (std::size_t i = k; i < n; ++i)
        if (!scalar_traits<K>::is_zero(a(i, k))) {
          piv = i;
          break;
        }
      if (piv == n) return K(0);
      if (piv != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(k, j));
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t j = k + 1; j < n; ++j)
          a(i, j) = (a(k, k) * a(i, j) - a(i, k) * a(k, j)) / prev;
        a(i, k) = K(0);
      }
      prev = a(k, k);
    }
    K d = a(n - 1, n - 1);
    return sign < 0 ? -d : d;
  } else {
    auto lu = Eigen::FullPivLU<decltype(detail::to_eigen(m))>(detail::to_eigen(m));
    return lu.determinant();
  }
}

template <class K>
std::size_t rank(const Matrix<K>& m, const Tol& tol = {}) {
  if (m.empty()) return 0;
  if constexpr (scalar_traits<K>::is_exact) {
    Matrix<K> a = m;
    std::size_t r = 0;
    std::size_t rows = a.rows(), cols = a.cols();
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
      std::size_t piv = rows;
      for (std::size_t i = r; i < rows; ++i)
        if (!scalar_traits<K>::is_zero(a(i, c))) {
          piv = i;
          break;
        }
      if (piv == rows) continue;
      if (piv != r)
        for (std::size_t j = 0; j < cols; ++j) std::swap(a(piv, j), a(r, j));
      for (std::size_t i = r + 1; i < rows; ++i) {
        if (scalar_traits<K>::is_zero(a(i, c))) continue;
        K f = a(i, c) / a(r, c);
        for (std::size_t j = c; j < cols; ++j) a(i, j) -= f * a(r, j);
      }
      ++r;
    }
    return r;
  } else {
    return detail::rank_from_singular_values(detail::singular_values(m), tol.eps);
  }
}

// Reduced row echelon form; returns pivot column indices. Exact backends only.
template <class K>
std::pair<Matrix<K>, std::vector<std::size_t>> rref(const Matrix<K>& m) {
  static_assert(scalar_traits<K>::is_exact, "rref requires an exact backend");
  Matrix<K> a = m;
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t piv = a.rows();
    for (std::size_t i = r; i < a.rows(); ++i)
      if (!scalar_traits<K>::is_zero(a(i, c))) {
        piv = i;
        break;
      }
    if (piv == a.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(r, j));
    K inv = K(1) / a(r, c);
    for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) = inv * a(r, j);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || scalar_traits<K>::is_zero(a(i, c))) continue;
      K f = a(i, c);
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {a, pivots};
}

// Basis of the right null space, as matrix columns. Floating callers may pass
// the expected nullity when it is known from independent structure; the
// decision then reduces to taking that many trailing singular vectors.
template <class K>
Matrix<K> nullspace(const Matrix<K>& m, const Tol& tol = {}, int known_nullity = -1) {
  std::size_t cols = m.cols();
  if constexpr (scalar_traits<K>::is_exact) {
    auto [r, pivots] = rref(m);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::size_t nul = cols - pivots.size();
    if (known_nullity >= 0 && static_cast<std::size_t>(known_nullity) != nul)
      throw IndeterminateError("nullspace: nullity does not match expected structure");
    Matrix<K> basis(cols, nul);
    std::size_t out = 0;
    for (std::size_t free_c = 0; free_c < cols; ++free_c) {
      if (is_pivot[free_c]) continue;
      basis(free_c, out) = K(1);
      for (std::size_t pr = 0; pr < pivots.size(); ++pr)
        basis(pivots[pr], out) = -r(pr, free_c);
      ++out;
    }
    return basis;
  } else {
    auto e = detail::to_eigen(m);
    Eigen::JacobiSVD<decltype(e)> svd(e, Eigen::ComputeFullV);
    std::vector<double> sv(svd.singularValues().data(),
                           svd.singularValues().data() + svd.singularValues().size());
    std::size_t rk;
    if (known_nullity >= 0) {
      rk = cols - static_cast<std::size_t>(known_nullity);
    } else {
      rk = detail::rank_from_singular_values(sv, tol.eps);
    }
    std::size_t nul = cols - rk;
    Matrix<K> basis(cols, nul);
    const auto& v = svd.matrixV();
    for (std::size_t j = 0; j < nul; ++j)
      for (std::size_t i = 0; i < cols; ++i)
        basis(i, j) = v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(rk + j));
    return basis;
  }
}

// Solve A X = B for square nonsingular A.
template <class K>
Matrix<K> solve(const Matrix<K>& a, const Matrix<K>& b) {
  if (!a.is_square() || a.rows() != b.rows())
    throw PreconditionError("solve: shape mismatch");
  if constexpr (scalar_traits<K>::is_exact) {
    std::size_t n = a.rows(), w = b.cols();
    Matrix<K> m(n, n + w);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m(i, j) = a(i, j);
      for (std::size_t j = 0; j < w; ++j) m(i, n + j) = b(i, j);
    }
    auto [r, pivots] = rref(m);
    if (pivots.size() != n || pivots[n - 1] != n - 1)
      throw PreconditionError("solve: singular matrix");
    Matrix<K> x(n, w);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < w; ++j) x(i, j) = r(i, n + j);
    return x;
  } else {
    auto ea = detail::to_eigen(a);
    auto lu = Eigen::FullPivLU<decltype(ea)>(ea);
    if (!lu.isInvertible()) throw PreconditionError("solve: singular matrix");
    return detail::from_eigen(decltype(ea)(lu.solve(detail::to_eigen(b))));
  }
}

template <class K>
Matrix<K> inverse(const Matrix<K>& a) {
  return solve(a, Matrix<K>::identity(a.rows()));
}

template <class K>
Matrix<K> matrix_pow(const Matrix<K>& m, int e) {
  if (!m.is_square()) throw PreconditionError("matrix_pow: square matrix required");
  if (e < 0) throw PreconditionError("matrix_pow: negative power");
  Matrix<K> r = Matrix<K>::identity(m.rows());
  for (int i = 0; i < e; ++i) r = r * m;
  return r;
}

// p evaluated at a square matrix argument, by Horner.
template <class K>
Matrix<K> poly_eval_matrix(const Polynomial<K>& p, const Matrix<K>& m) {
  if (!m.is_square()) throw PreconditionError("poly_eval_matrix: square matrix required");
  std::size_t n = m.rows();
  Matrix<K> r(n, n);
  for (int i = p.degree(); i >= 0; --i) {
    r = r * m;
    const K c = p.coeff(i);
    for (std::size_t d = 0; d < n; ++d) r(d, d) += c;
  }
  return r;
}

// ---------------------------------------------------------------------------
// structural predicates and comparisons

// Entrywise comparison; floating backends use eps * (1 + max entry magnitude).
template <class K>
bool matrix_eq(const Matrix<K>& a, const Matrix<K>& b, const Tol& tol = {}) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if constexpr (scalar_traits<K>::is_exact) {
    return a == b;
  } else {
    double scale = 1.0 + std::max(a.max_abs(), b.max_abs());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j)
        if (scalar_traits<K>::abs_approx(a(i, j) - b(i, j)) > tol.eps * scale) return false;
    return true;
  }
}

template <class K>
bool is_symmetric(const Matrix<K>& m, const Tol& tol = {}) {
  return m.is_square() && matrix_eq(m, m.transpose(), tol);
}

template <class K>
bool is_skew_symmetric(const Matrix<K>& m, const Tol& tol = {}) {
  return m.is_square() && matrix_eq(m, -m.transpose(), tol);
}

// ---------------------------------------------------------------------------
// characteristic polynomial

// Exact backends run the trace recurrence (all divisions are by integers and
// exact over a characteristic-zero field). Floating backends expand the
// product of (x - lambda_i) over the computed eigenvalues.
template <class K>
Polynomial<K> char_poly(const Matrix<K>& m) {
  if (!m.is_square()) throw PreconditionError("char_poly: square matrix required");
  std::size_t n = m.rows();
  if constexpr (scalar_traits<K>::is_exact) {
    std::vector<K> c(n + 1, K(0));
    c[n] = K(1);
    Matrix<K> nk(n, n);  // running auxiliary matrix
    for (std::size_t k = 1; k <= n; ++k) {
      Matrix<K> t = nk;
      const K& ck = c[n - k + 1];
      for (std::size_t d = 0; d < n; ++d) t(d, d) += ck;
      nk = m * t;
      K tr(0);
      for (std::size_t d = 0; d < n; ++d) tr += nk(d, d);
      c[n - k] = -(tr / scalar_traits<K>::from_int(static_cast<long long>(k)));
    }
    return Polynomial<K>(std::move(c));
  } else {
    auto e = detail::to_eigen(to_complex_matrix(m));
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(e, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
      throw IndeterminateError("char_poly: eigenvalue iteration failed");
    std::vector<std::complex<double>> coeff{1.0};  // low degree first
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      std::complex<double> lam = es.eigenvalues()(i);
      std::vector<std::complex<double>> next(coeff.size() + 1, 0.0);
      for (std::size_t j = 0; j < coeff.size(); ++j) {
        next[j + 1] += coeff[j];
        next[j] -= lam * coeff[j];
      }
      coeff = std::move(next);
    }
    std::vector<K> out(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      if constexpr (scalar_traits<K>::is_complex) {
        out[i] = coeff[i];
      } else {
        out[i] = coeff[i].real();
      }
    }
    return Polynomial<K>(std::move(out));
  }
}

// ---------------------------------------------------------------------------
// direct sums

template <class K>
Matrix<K> direct_sum(const std::vector<Matrix<K>>& parts) {
  if (parts.empty()) throw PreconditionError("direct_sum: empty input list");
  std::size_t r = 0, c = 0;
  for (const auto& p : parts) {
    r += p.rows();
    c += p.cols();
  }
  Matrix<K> m(r, c);
  std::size_t ro = 0, co = 0;
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < p.rows(); ++i)
      for (std::size_t j = 0; j < p.cols(); ++j) m(ro + i, co + j) = p(i, j);
    ro += p.rows();
    co += p.cols();
  }
  return m;
}

// Quadrant-wise direct sum of even-sized square matrices: each input 2n_i x
// 2n_i is split into four n_i x n_i quadrants, and same-position quadrants are
// direct-summed. The result has the half-sizes concatenated, so the canonical
// skew form of size p plus the one of size q combine to the one of size p+q.
template <class K>
Matrix<K> block_direct_sum(const std::vector<Matrix<K>>& parts) {
  if (parts.empty()) throw PreconditionError("block_direct_sum: empty input list");
  std::size_t half = 0;
  for (const auto& p : parts) {
    if (!p.is_square() || p.rows() % 2 != 0)
      throw PreconditionError("block_direct_sum: inputs must be square with even size");
    half += p.rows() / 2;
  }
  Matrix<K> m(2 * half, 2 * half);
  std::size_t off = 0;
  for (const auto& p : parts) {
    std::size_t h = p.rows() / 2;
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < h; ++j) {
        m(off + i, off + j) = p(i, j);                      // top-left
        m(off + i, half + off + j) = p(i, h + j);           // top-right
        m(half + off + i, off + j) = p(h + i, j);           // bottom-left
        m(half + off + i, half + off + j) = p(h + i, h + j);// bottom-right
      }
    off += h;
  }
  return m;
}

// The canonical nonsingular skew form: [[0, I], [-I, 0]] of size 2n.
template <class K>
Matrix<K> omega_matrix(std::size_t n) {
  Matrix<K> m(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, n + i) = K(1);
    m(n + i, i) = K(-1);
  }
  return m;
}

// ---------------------------------------------------------------------------
// matrix pairs under congruence

// Value type for a pair (A, B) with A symmetric and B skew-symmetric
// nonsingular of even size. The invariants are checked on construction and
// violations are rejected, never silently repaired.
template <class K>
struct MatrixPair {
  Matrix<K> A, B;

  MatrixPair(Matrix<K> a, Matrix<K> b, const Tol& tol = {}) : A(std::move(a)), B(std::move(b)) {
    if (!A.is_square() || !B.is_square() || A.rows() != B.rows())
      throw PreconditionError("pair: A and B must be square with equal size");
    if (A.rows() % 2 != 0 || A.rows() == 0)
      throw PreconditionError("pair: size must be even and positive");
    if (!is_symmetric(A, tol)) throw PreconditionError("pair: A must be symmetric");
    if (!is_skew_symmetric(B, tol)) throw PreconditionError("pair: B must be skew-symmetric");
    bool nonsingular;
    if constexpr (scalar_traits<K>::is_exact) {
      nonsingular = !scalar_traits<K>::is_zero(det(B));
    } else {
      nonsingular = rank(B, tol) == B.rows();
    }
    if (!nonsingular) throw PreconditionError("pair: B must be nonsingular");
  }

  std::size_t size() const { return A.rows(); }
};

// Congruence transform (A, B) -> (S^T A S, S^T B S) for nonsingular S. The
// result is validated through the pair constructor.
template <class K>
MatrixPair<K> congruence(const Matrix<K>& s, const MatrixPair<K>& p, const Tol& tol = {}) {
  if (!s.is_square() || s.rows() != p.size())
    throw PreconditionError("congruence: transform size mismatch");
  bool nonsingular;
  if constexpr (scalar_traits<K>::is_exact) {
    nonsingular = !scalar_traits<K>::is_zero(det(s));
  } else {
    nonsingular = rank(s, tol) == s.rows();
  }
  if (!nonsingular) throw PreconditionError("congruence: singular transform");
  Matrix<K> st = s.transpose();
  return MatrixPair<K>(st * p.A * s, st * p.B * s, tol);
}

// Rearranges a plain direct sum of pairs (M_i, Omega_{n_i}) into the
// quadrant-wise direct sum by a permutation congruence. Returns the combined
// pair and the permutation matrix P with P^T (⊕ M_i) P = ⊞ M_i and
// P^T (⊕ Omega_{n_i}) P = Omega_N.
template <class K>
std::pair<MatrixPair<K>, Matrix<K>> permutation_congruent_rearrange(
    const std::vector<MatrixPair<K>>& parts, const Tol& tol = {}) {
  if (parts.empty()) throw PreconditionError("rearrange: empty input list");
  std::size_t half = 0;
  for (const auto& p : parts) {
    std::size_t h = p.size() / 2;
    if (!matrix_eq(p.B, omega_matrix<K>(h), tol))
      throw PreconditionError("rearrange: every skew part must be the canonical form");
    half += h;
  }
  std::vector<Matrix<K>> as;
  as.reserve(parts.size());
  for (const auto& p : parts) as.push_back(p.A);
  Matrix<K> a = block_direct_sum(as);
  MatrixPair<K> combined(a, omega_matrix<K>(half), tol);

  // old position (in ⊕ layout) of each new position (in ⊞ layout)
  Matrix<K> perm(2 * half, 2 * half);
  std::size_t base = 0, off = 0;
  for (const auto& p : parts) {
    std::size_t h = p.size() / 2;
    for (std::size_t j = 0; j < h; ++j) {
      perm(base + j, off + j) = K(1);                    // first half block
      perm(base + h + j, half + off + j) = K(1);         // second half block
    }
    base += 2 * h;
    off += h;
  }
  return {combined, perm};
}

}  // namespace sympcan
