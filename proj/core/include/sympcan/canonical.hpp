#pragma once

// Canonical forms of symmetric matrices on a symplectic space, and of the
// Hamiltonian matrices they correspond to.
//
// A pair (A, Omega_m) with A symmetric is reduced, by a symplectic congruence
// S (S^T Omega S = Omega, A -> S^T A S), to a block-direct sum of summands of
// three kinds:
//
//   * hyperbolic pairs   [[0, Phi], [Phi^T, 0]]  where Phi is a Jordan block
//     J_n(a) or a realified complex Jordan block J_n(a+bi);
//   * signed blocks  +/- P_n   (nilpotent part of the spectrum, even sizes);
//   * signed blocks  +/- Q_n(c), c > 0  (purely imaginary spectrum, on real
//     scalar backends).
//
// The multiset of summands is a complete invariant of the pair under
// symplectic congruence; over complex-like scalar fields the P sign is
// dropped and the hyperbolic parameter a is only determined up to -a.
//
// The same decomposition classifies Hamiltonian matrices H = Omega A under
// symplectic similarity; the Hamiltonian realization of the summands is
// [[Phi, 0], [0, -Phi^T]], +/- Omega_n P_n, +/- Omega_n Q_n(c).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sympcan/blocks.hpp"
#include "sympcan/errors.hpp"
#include "sympcan/matrix.hpp"
#include "sympcan/scalars.hpp"
#include "sympcan/spectra.hpp"

namespace sympcan {

// ---------------------------------------------------------------------------
// summand and decomposition types

enum class SummandType { Hyperbolic = 0, P = 1, Q = 2 };

inline std::string summand_type_name(SummandType t) {
  switch (t) {
    case SummandType::Hyperbolic: return "hyperbolic";
    case SummandType::P: return "P";
    case SummandType::Q: return "Q";
  }
  return "?";
}

template <class K>
struct CanonicalSummand {
  SummandType type = SummandType::P;
  // Hyperbolic: phi describes the parameter block (Jordan or RealifiedJordan).
  BlockSpec<K> phi{};
  // P / Q data. P_n occupies 2n rows; Q_n(c) occupies 2n rows.
  std::size_t n = 1;
  int sign = +1;
  K c{scalar_traits<K>::zero()};

  std::size_t size() const {
    if (type == SummandType::Hyperbolic) {
      std::size_t phi_rows =
          (phi.kind == BlockKind::RealifiedJordan) ? 2 * phi.n : phi.n;
      return 2 * phi_rows;
    }
    return 2 * n;
  }

  static CanonicalSummand hyperbolic_jordan(std::size_t n, const K& a) {
    CanonicalSummand s;
    s.type = SummandType::Hyperbolic;
    s.phi.kind = BlockKind::Jordan;
    s.phi.n = n;
    s.phi.a = a;
    return s;
  }
  static CanonicalSummand hyperbolic_realified(std::size_t n, const K& a, const K& b) {
    CanonicalSummand s;
    s.type = SummandType::Hyperbolic;
    s.phi.kind = BlockKind::RealifiedJordan;
    s.phi.n = n;
    s.phi.a = a;
    s.phi.b = b;
    return s;
  }
  static CanonicalSummand signed_p(int sign, std::size_t n) {
    CanonicalSummand s;
    s.type = SummandType::P;
    s.sign = sign;
    s.n = n;
    return s;
  }
  static CanonicalSummand signed_q(int sign, std::size_t n, const K& c) {
    CanonicalSummand s;
    s.type = SummandType::Q;
    s.sign = sign;
    s.n = n;
    s.c = c;
    return s;
  }
};

template <class K>
struct CanonicalDecomposition {
  std::vector<CanonicalSummand<K>> summands;
  std::size_t size = 0;  // 2m, the common row count of A and Omega_m
  // Transform certificate: S with S^T Omega S = Omega and S^T A S equal to the
  // assembled form (or, for Hamiltonian input H, S^{-1} H S equal to the
  // assembled Hamiltonian). Provided on the semisimple paths.
  std::optional<Matrix<K>> certificate;
  double residual = 0.0;
};

// ---------------------------------------------------------------------------
// realizations

// [[0, phi], [phi^T, 0]]
template <class K>
Matrix<K> hyperbolic_form(const Matrix<K>& phi) {
  if (!phi.is_square()) throw PreconditionError("hyperbolic_form: square block required");
  std::size_t n = phi.rows();
  Matrix<K> m(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      m(i, n + j) = phi(i, j);
      m(n + j, i) = phi(i, j);
    }
  return m;
}

// [[phi, 0], [0, -phi^T]]
template <class K>
Matrix<K> hyperbolic_hamiltonian(const Matrix<K>& phi) {
  if (!phi.is_square()) throw PreconditionError("hyperbolic_hamiltonian: square block required");
  std::size_t n = phi.rows();
  Matrix<K> m(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      m(i, j) = phi(i, j);
      m(n + j, n + i) = -phi(i, j);
    }
  return m;
}

template <class K>
Matrix<K> summand_phi_matrix(const CanonicalSummand<K>& s) {
  if (s.type != SummandType::Hyperbolic)
    throw PreconditionError("summand_phi_matrix: hyperbolic summand required");
  if (s.phi.kind == BlockKind::RealifiedJordan)
    return realified_jordan(s.phi.n, s.phi.a, s.phi.b);
  return jordan_block(s.phi.n, s.phi.a);
}

template <class K>
Matrix<K> summand_form(const CanonicalSummand<K>& s) {
  switch (s.type) {
    case SummandType::Hyperbolic:
      return hyperbolic_form(summand_phi_matrix(s));
    case SummandType::P: {
      Matrix<K> m = p_block<K>(s.n);
      return s.sign < 0 ? K(-1) * m : m;
    }
    case SummandType::Q: {
      Matrix<K> m = q_block(s.n, s.c);
      return s.sign < 0 ? K(-1) * m : m;
    }
  }
  throw PreconditionError("summand_form: invalid summand");
}

template <class K>
Matrix<K> summand_hamiltonian(const CanonicalSummand<K>& s) {
  if (s.type == SummandType::Hyperbolic)
    return hyperbolic_hamiltonian(summand_phi_matrix(s));
  return hamiltonian_from_form(summand_form(s));
}

template <class K>
Matrix<K> assemble_form(const CanonicalDecomposition<K>& d) {
  std::vector<Matrix<K>> parts;
  parts.reserve(d.summands.size());
  for (const auto& s : d.summands) parts.push_back(summand_form(s));
  return block_direct_sum(parts);
}

template <class K>
Matrix<K> assemble_hamiltonian(const CanonicalDecomposition<K>& d) {
  std::vector<Matrix<K>> parts;
  parts.reserve(d.summands.size());
  for (const auto& s : d.summands) parts.push_back(summand_hamiltonian(s));
  return block_direct_sum(parts);
}

// H = Omega_m A, the Hamiltonian matrix of the quadratic form A.
template <class K>
Matrix<K> hamiltonian_of_form(const Matrix<K>& a) {
  return hamiltonian_from_form(a);
}

// ---------------------------------------------------------------------------
// summand ordering and comparison

namespace detail {

template <class K>
std::pair<double, double> scalar_sort_key(const K& x) {
  auto z = scalar_traits<K>::to_complex(x);
  return {z.real(), z.imag()};
}

template <class K>
bool scalar_less(const K& a, const K& b) {
  if constexpr (scalar_traits<K>::is_exact) {
    if constexpr (scalar_traits<K>::is_complex) {
      if (!(a.re() == b.re())) return a.re() < b.re();
      return a.im() < b.im();
    } else {
      return a < b;
    }
  } else {
    return scalar_sort_key(a) < scalar_sort_key(b);
  }
}

// Normal order: type, then size data, then sign, then parameters.
template <class K>
bool summand_less(const CanonicalSummand<K>& x, const CanonicalSummand<K>& y) {
  if (x.type != y.type) return static_cast<int>(x.type) < static_cast<int>(y.type);
  switch (x.type) {
    case SummandType::Hyperbolic: {
      int xk = x.phi.kind == BlockKind::RealifiedJordan ? 1 : 0;
      int yk = y.phi.kind == BlockKind::RealifiedJordan ? 1 : 0;
      if (xk != yk) return xk < yk;
      if (x.phi.n != y.phi.n) return x.phi.n < y.phi.n;
      if (scalar_less(x.phi.a, y.phi.a)) return true;
      if (scalar_less(y.phi.a, x.phi.a)) return false;
      return scalar_less(x.phi.b, y.phi.b);
    }
    case SummandType::P:
      if (x.n != y.n) return x.n < y.n;
      return x.sign < y.sign;
    case SummandType::Q:
      if (x.n != y.n) return x.n < y.n;
      if (x.sign != y.sign) return x.sign < y.sign;
      return scalar_less(x.c, y.c);
  }
  return false;
}

template <class K>
bool scalar_close(const K& a, const K& b, double eps) {
  if constexpr (scalar_traits<K>::is_exact) {
    (void)eps;
    return a == b;
  } else {
    return scalar_traits<K>::abs_approx(a - b) <=
           eps * std::max(1.0, std::max(scalar_traits<K>::abs_approx(a),
                                        scalar_traits<K>::abs_approx(b)));
  }
}

}  // namespace detail

template <class K>
void sort_summands(std::vector<CanonicalSummand<K>>& v) {
  std::sort(v.begin(), v.end(),
            [](const CanonicalSummand<K>& a, const CanonicalSummand<K>& b) {
              return detail::summand_less(a, b);
            });
}

// Equality of single summands; `identify_negated_a` applies the {a, -a}
// identification of hyperbolic parameters used on complex-like backends.
template <class K>
bool summands_equal(const CanonicalSummand<K>& x, const CanonicalSummand<K>& y,
                    double eps, bool identify_negated_a) {
  if (x.type != y.type) return false;
  switch (x.type) {
    case SummandType::Hyperbolic: {
      if (x.phi.kind != y.phi.kind || x.phi.n != y.phi.n) return false;
      if (x.phi.kind == BlockKind::RealifiedJordan) {
        return detail::scalar_close(x.phi.a, y.phi.a, eps) &&
               detail::scalar_close(x.phi.b, y.phi.b, eps);
      }
      if (detail::scalar_close(x.phi.a, y.phi.a, eps)) return true;
      if (identify_negated_a &&
          detail::scalar_close(x.phi.a, K(-1) * y.phi.a, eps))
        return true;
      return false;
    }
    case SummandType::P:
      // Over complex-like fields the sign of P is not an invariant.
      return x.n == y.n && (identify_negated_a || x.sign == y.sign);
    case SummandType::Q:
      return x.n == y.n && x.sign == y.sign && detail::scalar_close(x.c, y.c, eps);
  }
  return false;
}

// Multiset equality of decompositions (greedy matching after a normal-order
// sort; robust to epsilon-sized key reorderings because mutually close
// elements match each other either way).
template <class K>
bool decompositions_equal(const CanonicalDecomposition<K>& d1,
                          const CanonicalDecomposition<K>& d2, double eps,
                          bool identify_negated_a) {
  if (d1.size != d2.size) return false;
  if (d1.summands.size() != d2.summands.size()) return false;
  auto a = d1.summands;
  auto b = d2.summands;
  sort_summands(a);
  sort_summands(b);
  std::vector<bool> used(b.size(), false);
  for (const auto& s : a) {
    bool found = false;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      if (summands_equal(s, b[j], eps, identify_negated_a)) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// skew-symmetric reduction to Omega

// Returns nonsingular T with T^T B T = Omega_m for skew-symmetric nonsingular
// B of size 2m, by symplectic pairing elimination. T = I when B is already
// Omega.
template <class K>
Matrix<K> reduce_skew_to_omega(const Matrix<K>& b, const Tol& tol = {}) {
  if (!b.is_square()) throw PreconditionError("reduce_skew_to_omega: square matrix required");
  std::size_t n = b.rows();
  if (n == 0 || n % 2 != 0)
    throw PreconditionError("reduce_skew_to_omega: even positive size required");
  if (!is_skew_symmetric(b, tol))
    throw PreconditionError("reduce_skew_to_omega: skew-symmetric matrix required");
  Matrix<K> om = omega_matrix<K>(n / 2);
  if (matrix_eq(b, om, tol)) return Matrix<K>::identity(n);

  std::size_t m = n / 2;
  auto form = [&](const std::vector<K>& x, const std::vector<K>& y) {
    K acc = scalar_traits<K>::zero();
    for (std::size_t i = 0; i < n; ++i) {
      K row = scalar_traits<K>::zero();
      for (std::size_t j = 0; j < n; ++j) row = row + b(i, j) * y[j];
      acc = acc + x[i] * row;
    }
    return acc;
  };

  std::vector<std::vector<K>> rem;
  rem.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<K> e(n, scalar_traits<K>::zero());
    e[j] = scalar_traits<K>::one();
    rem.push_back(std::move(e));
  }

  std::vector<std::vector<K>> ps, qs;
  double scale = std::max(1.0, b.max_abs());
  while (!rem.empty()) {
    // pick the pivot pair with the largest pairing value
    std::size_t bi = rem.size(), bj = rem.size();
    K bval = scalar_traits<K>::zero();
    double bmag = 0.0;
    for (std::size_t i = 0; i < rem.size() && bi == rem.size(); ++i) {
      for (std::size_t j = i + 1; j < rem.size(); ++j) {
        K v = form(rem[i], rem[j]);
        if constexpr (scalar_traits<K>::is_exact) {
          if (!scalar_is_zero(v, tol)) {
            bi = i;
            bj = j;
            bval = v;
            break;
          }
        } else {
          double mag = scalar_traits<K>::abs_approx(v);
          if (mag > bmag) {
            bmag = mag;
            bi = i;
            bj = j;
            bval = v;
          }
        }
      }
      if constexpr (!scalar_traits<K>::is_exact) break;  // outer loop runs once below
    }
    if constexpr (!scalar_traits<K>::is_exact) {
      // full scan for the floating backend (the loop above only scanned i = 0)
      for (std::size_t i = 1; i < rem.size(); ++i)
        for (std::size_t j = i + 1; j < rem.size(); ++j) {
          K v = form(rem[i], rem[j]);
          double mag = scalar_traits<K>::abs_approx(v);
          if (mag > bmag) {
            bmag = mag;
            bi = i;
            bj = j;
            bval = v;
          }
        }
      if (bi == rem.size() || bmag <= tol.eps * scale)
        throw PreconditionError("reduce_skew_to_omega: singular form");
    } else {
      if (bi == rem.size())
        throw PreconditionError("reduce_skew_to_omega: singular form");
    }

    std::vector<K> p = rem[bi];
    std::vector<K> q = rem[bj];
    for (auto& x : q) x = x / bval;  // now form(p, q) = 1
    rem.erase(rem.begin() + static_cast<std::ptrdiff_t>(bj));
    rem.erase(rem.begin() + static_cast<std::ptrdiff_t>(bi));
    for (auto& r : rem) {
      K fp = form(p, r);
      K fq = form(q, r);
      // r' = r - fp * q + fq * p  satisfies form(p, r') = form(q, r') = 0
      for (std::size_t i = 0; i < n; ++i) r[i] = r[i] - fp * q[i] + fq * p[i];
    }
    ps.push_back(std::move(p));
    qs.push_back(std::move(q));
  }

  Matrix<K> t(n, n);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      t(i, j) = ps[j][i];
      t(i, m + j) = qs[j][i];
    }
  return t;
}

// ---------------------------------------------------------------------------
// Hermitian signature and congruence diagonalization

namespace detail {

template <class L>
L imag_unit() {
  if constexpr (std::is_same_v<L, GaussianRational>) {
    return GaussianRational(Rational(0), Rational(1));
  } else {
    return L(0.0, 1.0);
  }
}

template <class L>
double closure_re(const L& x) {
  if constexpr (std::is_same_v<L, GaussianRational>) {
    return x.re().to_double();
  } else {
    return x.real();
  }
}

// Real part of a closure scalar as an exact sign (+1/0/-1 for exact scalars).
template <class L>
int closure_re_sign(const L& x) {
  if constexpr (std::is_same_v<L, GaussianRational>) {
    return x.re().sign();
  } else {
    return x.real() > 0 ? 1 : (x.real() < 0 ? -1 : 0);
  }
}

// Signature (#positive, #negative) of a Hermitian matrix, by exact congruence
// elimination or by a self-adjoint eigensolver. Floating eigenvalues within
// eps * scale of zero make the signature indeterminate.
template <class L>
std::pair<std::size_t, std::size_t> hermitian_signature(Matrix<L> g, const Tol& tol) {
  std::size_t n = g.rows();
  if (n == 0) return {0, 0};
  if constexpr (scalar_traits<L>::is_exact) {
    // symmetrize exactly to absorb representation asymmetry
    g = (g + g.conj_transpose());
    std::size_t pos = 0, neg = 0;
    std::vector<bool> done(n, false);
    for (std::size_t step = 0; step < n; ++step) {
      // find a nonzero diagonal pivot
      std::size_t piv = n;
      for (std::size_t i = 0; i < n; ++i)
        if (!done[i] && !(g(i, i) == L(0))) {
          piv = i;
          break;
        }
      if (piv == n) {
        // create one from a nonzero off-diagonal entry
        std::size_t oi = n, oj = n;
        for (std::size_t i = 0; i < n && oi == n; ++i) {
          if (done[i]) continue;
          for (std::size_t j = i + 1; j < n; ++j) {
            if (done[j]) continue;
            if (!(g(i, j) == L(0))) {
              oi = i;
              oj = j;
              break;
            }
          }
        }
        if (oi == n) break;  // remaining block is zero
        // col_i += t * col_j (and conjugate row op) makes g(i,i) = 2 Re(t g(i,j))
        L t = L(1);
        if constexpr (std::is_same_v<L, GaussianRational>) {
          if (g(oi, oj).re().sign() == 0) t = imag_unit<L>();
        }
        for (std::size_t r = 0; r < n; ++r) g(r, oi) = g(r, oi) + g(r, oj) * t;
        for (std::size_t cc = 0; cc < n; ++cc)
          g(oi, cc) = g(oi, cc) + scalar_traits<L>::conj(t) * g(oj, cc);
        piv = oi;
      }
      L d = g(piv, piv);
      int s = closure_re_sign(d);
      if (s > 0)
        ++pos;
      else if (s < 0)
        ++neg;
      done[piv] = true;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == piv || done[r]) continue;
        L f = g(r, piv) / d;
        if (f == L(0)) continue;
        for (std::size_t cc = 0; cc < n; ++cc)
          g(r, cc) = g(r, cc) - f * g(piv, cc);
        for (std::size_t rr = 0; rr < n; ++rr)
          g(rr, r) = g(rr, r) - scalar_traits<L>::conj(f) * g(rr, piv);
      }
    }
    return {pos, neg};
  } else {
    Matrix<L> h = g;
    Matrix<L> gt = g.conj_transpose();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) h(i, j) = (g(i, j) + gt(i, j)) * L(0.5);
    Eigen::MatrixXcd eh(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) eh(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = h(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(eh);
    if (es.info() != Eigen::Success)
      throw IndeterminateError("hermitian_signature: eigensolver failed");
    double scale = std::max(1.0, h.fro_norm());
    std::size_t pos = 0, neg = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      double ev = es.eigenvalues()(i);
      if (std::abs(ev) <= tol.eps * scale)
        throw IndeterminateError("hermitian_signature: eigenvalue too close to zero");
      if (ev > 0)
        ++pos;
      else
        ++neg;
    }
    return {pos, neg};
  }
}

// Congruence diagonalization of a Hermitian matrix: returns (C, f) with
// C^* F C = diag(f), every f real and nonzero (throws if F is singular
// within tolerance). Used to decouple the eigenplanes at a purely imaginary
// eigenvalue before building a transform certificate.
template <class L>
std::pair<Matrix<L>, std::vector<L>> hermitian_diagonalize(const Matrix<L>& f_in, const Tol& tol) {
  std::size_t n = f_in.rows();
  if constexpr (scalar_traits<L>::is_exact) {
    Matrix<L> f = f_in;
    Matrix<L> c = Matrix<L>::identity(n);
    // column operations, mirrored as conjugate row operations on f
    std::vector<std::size_t> order;
    std::vector<bool> done(n, false);
    for (std::size_t step = 0; step < n; ++step) {
      std::size_t piv = n;
      for (std::size_t i = 0; i < n; ++i)
        if (!done[i] && !(f(i, i) == L(0))) {
          piv = i;
          break;
        }
      if (piv == n) {
        std::size_t oi = n, oj = n;
        for (std::size_t i = 0; i < n && oi == n; ++i) {
          if (done[i]) continue;
          for (std::size_t j = 0; j < n; ++j) {
            if (done[j] || j == i) continue;
            if (!(f(i, j) == L(0))) {
              oi = i;
              oj = j;
              break;
            }
          }
        }
        if (oi == n) throw IndeterminateError("hermitian_diagonalize: singular form");
        L t = L(1);
        if constexpr (std::is_same_v<L, GaussianRational>) {
          if ((f(oi, oj) + scalar_traits<L>::conj(f(oi, oj))) == L(0)) t = imag_unit<L>();
        }
        for (std::size_t r = 0; r < n; ++r) {
          f(r, oi) = f(r, oi) + f(r, oj) * t;
          c(r, oi) = c(r, oi) + c(r, oj) * t;
        }
        for (std::size_t cc = 0; cc < n; ++cc)
          f(oi, cc) = f(oi, cc) + scalar_traits<L>::conj(t) * f(oj, cc);
        piv = oi;
      }
      L d = f(piv, piv);
      done[piv] = true;
      order.push_back(piv);
      for (std::size_t r = 0; r < n; ++r) {
        if (r == piv || done[r]) continue;
        L fac = f(piv, r) / d;  // eliminate column r against the pivot column
        if (fac == L(0)) continue;
        for (std::size_t rr = 0; rr < n; ++rr) {
          f(rr, r) = f(rr, r) - f(rr, piv) * fac;
          c(rr, r) = c(rr, r) - c(rr, piv) * fac;
        }
        for (std::size_t cc = 0; cc < n; ++cc)
          f(r, cc) = f(r, cc) - scalar_traits<L>::conj(fac) * f(piv, cc);
      }
    }
    // reorder columns so the diagonal values line up with 0..n-1
    Matrix<L> cr(n, n);
    std::vector<L> diag;
    diag.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t src = order[k];
      for (std::size_t r = 0; r < n; ++r) cr(r, k) = c(r, src);
      diag.push_back(f(src, src));
    }
    for (const auto& d : diag)
      if (d == L(0)) throw IndeterminateError("hermitian_diagonalize: singular form");
    return {cr, diag};
  } else {
    Eigen::MatrixXcd eh(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Matrix<L> ft = f_in.conj_transpose();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        eh(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            (f_in(i, j) + ft(i, j)) * L(0.5);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(eh);
    if (es.info() != Eigen::Success)
      throw IndeterminateError("hermitian_diagonalize: eigensolver failed");
    double scale = std::max(1.0, f_in.fro_norm());
    Matrix<L> c(n, n);
    std::vector<L> diag(n);
    for (std::size_t j = 0; j < n; ++j) {
      double ev = es.eigenvalues()(static_cast<Eigen::Index>(j));
      if (std::abs(ev) <= tol.eps * scale)
        throw IndeterminateError("hermitian_diagonalize: singular form");
      for (std::size_t i = 0; i < n; ++i)
        c(i, j) = es.eigenvectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      diag[j] = L(ev);
    }
    return {c, diag};
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// sign characteristic

namespace detail {

// Chain generators of H at lambda, bucketed by chain length.
template <class K>
std::vector<std::pair<std::size_t, std::vector<std::vector<closure_t<K>>>>>
chain_tops(const Matrix<K>& h, const closure_t<K>& lambda, const SpectraOptions& opts) {
  auto chains = jordan_chains(h, lambda, opts);
  std::vector<std::pair<std::size_t, std::vector<std::vector<closure_t<K>>>>> buckets;
  for (const auto& ch : chains) {
    std::size_t len = ch.vectors.cols();
    auto it = std::find_if(buckets.begin(), buckets.end(),
                           [&](const auto& b) { return b.first == len; });
    if (it == buckets.end()) {
      buckets.push_back({len, {}});
      it = buckets.end() - 1;
    }
    it->second.push_back(ch.vectors.col(len - 1));
  }
  std::sort(buckets.begin(), buckets.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return buckets;
}

// Gram matrix of the pairing  (u, v) -> i^len * u^* Omega (H - lambda)^{len-1} v
// over the chain generators; Hermitian for Hamiltonian H and lambda either 0
// or purely imaginary. Its signature carries the block signs at lambda.
template <class L>
Matrix<L> sign_gram(const Matrix<L>& h, const L& lambda, std::size_t len,
                    const std::vector<std::vector<L>>& tops) {
  std::size_t dim = h.rows();
  Matrix<L> shifted = h;
  for (std::size_t i = 0; i < dim; ++i) shifted(i, i) = shifted(i, i) - lambda;
  Matrix<L> m = matrix_pow(shifted, len - 1);
  Matrix<L> om = omega_matrix<L>(dim / 2);
  m = om * m;
  L phase = L(1);
  for (std::size_t k = 0; k < len % 4; ++k) phase = phase * imag_unit<L>();
  std::size_t cnt = tops.size();
  Matrix<L> g(cnt, cnt);
  for (std::size_t p = 0; p < cnt; ++p) {
    for (std::size_t q = 0; q < cnt; ++q) {
      L acc = L(0);
      for (std::size_t i = 0; i < dim; ++i) {
        L row = L(0);
        for (std::size_t j = 0; j < dim; ++j) row = row + m(i, j) * tops[q][j];
        acc = acc + scalar_traits<L>::conj(tops[p][i]) * row;
      }
      g(p, q) = phase * acc;
    }
  }
  return g;
}

// Orientation of the Gram recipe for the reference block of the same shape:
// +1 when a positive Gram value means sign +, -1 when it means sign -.
// Computed on the pure canonical block itself, with the same length and
// (for Q) the same parameter, so every convention in the recipe cancels.
template <class K>
int sign_gram_calibration(SummandType type, std::size_t len, const K& c,
                          const SpectraOptions& opts) {
  using L = closure_t<K>;
  Matrix<K> a_ref;
  L lambda;
  if (type == SummandType::P) {
    if (len % 2 != 0) throw PreconditionError("sign calibration: P needs even length");
    a_ref = p_block<K>(len / 2);
    lambda = L(0);
  } else {
    a_ref = q_block(len, c);
    lambda = scalar_traits<L>::to_closure(scalar_traits<K>::to_closure(c)) * imag_unit<L>();
  }
  Matrix<K> h_ref = hamiltonian_from_form(a_ref);
  auto buckets = chain_tops(h_ref, lambda, opts);
  for (const auto& [blen, tops] : buckets) {
    if (blen != len) continue;
    Matrix<L> g = sign_gram(to_closure_matrix(h_ref), lambda, len, tops);
    auto [pos, neg] = hermitian_signature(g, opts.tol);
    if (pos == 1 && neg == 0) return +1;
    if (pos == 0 && neg == 1) return -1;
    throw IndeterminateError("sign calibration: reference block gave mixed signature");
  }
  throw IndeterminateError("sign calibration: reference chain length missing");
}

}  // namespace detail

struct CanonicalOptions {
  SpectraOptions spectra{};
  bool certificate = true;
  // parameter tolerance used by decomposition comparison on floating backends
  double match_eps = 1e-6;
};

// Signs attached to the blocks of H = Omega A at lambda_class, which must be
// 0 (even-sized blocks, the +/- P summands) or ci with c > 0 (the +/- Q
// summands). Returns (H-block size, sign) pairs, sorted.
template <class K>
std::vector<std::pair<std::size_t, int>> sign_characteristic(
    const Matrix<K>& h, const Matrix<K>& a, const closure_t<K>& lambda_class,
    const CanonicalOptions& opts = {}) {
  using L = closure_t<K>;
  if (!h.is_square() || h.rows() != a.rows())
    throw PreconditionError("sign_characteristic: matching square inputs required");
  if (!is_hamiltonian(h, opts.spectra.tol))
    throw PreconditionError("sign_characteristic: Hamiltonian matrix required");
  if constexpr (scalar_traits<K>::is_complex) {
    throw PreconditionError("sign_characteristic: real scalar backend required");
  }
  bool zero_class = scalar_is_zero(lambda_class, opts.spectra.tol);
  if (!zero_class) {
    if (detail::closure_re_sign(lambda_class) != 0 ||
        !(detail::closure_im_positive(lambda_class)))
      throw PreconditionError("sign_characteristic: class must be 0 or ci with c > 0");
  }
  (void)a;

  auto buckets = detail::chain_tops(h, lambda_class, opts.spectra);
  Matrix<L> hl = to_closure_matrix(h);
  std::vector<std::pair<std::size_t, int>> out;
  for (const auto& [len, tops] : buckets) {
    if (zero_class && len % 2 != 0) continue;  // odd zero blocks carry no sign
    Matrix<L> g = detail::sign_gram(hl, lambda_class, len, tops);
    auto [pos, neg] = detail::hermitian_signature(g, opts.spectra.tol);
    if (pos + neg != tops.size())
      throw IndeterminateError("sign_characteristic: degenerate Gram matrix");
    int calib;
    if (zero_class) {
      calib = detail::sign_gram_calibration<K>(SummandType::P, len, K(1), opts.spectra);
    } else {
      K c = detail::closure_im_as_scalar<K>(lambda_class);
      calib = detail::sign_gram_calibration<K>(SummandType::Q, len, c, opts.spectra);
    }
    std::size_t plus = calib > 0 ? pos : neg;
    std::size_t minus = calib > 0 ? neg : pos;
    for (std::size_t i = 0; i < plus; ++i) out.push_back({len, +1});
    for (std::size_t i = 0; i < minus; ++i) out.push_back({len, -1});
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// eigenvalue classification shared by the canonicalization routines

namespace detail {

template <class L>
bool closure_im_positive(const L& x) {
  if constexpr (std::is_same_v<L, GaussianRational>) {
    return x.im().sign() > 0;
  } else {
    return x.imag() > 0;
  }
}

template <class K>
K closure_re_as_scalar(const closure_t<K>& x) {
  if constexpr (std::is_same_v<K, Rational>) {
    return x.re();
  } else {
    return K(x.real());
  }
}

template <class K>
K closure_im_as_scalar(const closure_t<K>& x) {
  if constexpr (std::is_same_v<K, Rational>) {
    return x.im();
  } else {
    return K(x.imag());
  }
}

enum class EigenClass { Zero, RealPair, ImaginaryPair, Quadruple };

template <class K>
struct ClassifiedEigenvalue {
  EigenClass cls;
  closure_t<K> value;           // as reported by jordan_structure
  std::vector<std::size_t> sizes;
};

// Splits the spectrum of a Hamiltonian matrix into the zero class, real
// pairs {a, -a}, purely imaginary pairs {ci, -ci}, and complex quadruples
// {a+bi, a-bi, -a+bi, -a-bi}. On floating backends the split snaps within
// the clustering threshold.
template <class K>
double hamiltonian_snap_threshold(const Matrix<K>& h, const SpectraOptions& opts) {
  if constexpr (scalar_traits<K>::is_exact) {
    (void)h;
    (void)opts;
    return 0.0;
  } else {
    return 10.0 * opts.cluster_eps * std::max(1.0, h.fro_norm());
  }
}

template <class L>
bool closure_is_zero_within(const L& x, double thr) {
  if constexpr (std::is_same_v<L, GaussianRational>) {
    (void)thr;
    return x == L(0);
  } else {
    return std::abs(x) <= thr;
  }
}

template <class L>
bool closure_re_zero_within(const L& x, double thr) {
  if constexpr (std::is_same_v<L, GaussianRational>) {
    (void)thr;
    return x.re().sign() == 0;
  } else {
    return std::abs(x.real()) <= thr;
  }
}

template <class L>
bool closure_im_zero_within(const L& x, double thr) {
  if constexpr (std::is_same_v<L, GaussianRational>) {
    (void)thr;
    return x.im().sign() == 0;
  } else {
    return std::abs(x.imag()) <= thr;
  }
}

template <class L>
bool closure_close(const L& x, const L& y, double thr) {
  if constexpr (std::is_same_v<L, GaussianRational>) {
    (void)thr;
    return x == y;
  } else {
    return std::abs(x - y) <= thr;
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// certificate construction (semisimple spectra)

namespace detail {

// Ambient columns of one summand's symplectic basis: `p` spans the first half
// of the summand's quadrant rows, `q` the second half.
template <class K>
struct SummandBasis {
  std::vector<std::vector<K>> p, q;
};

template <class K>
K bilinear_omega(const std::vector<K>& x, const std::vector<K>& y) {
  std::size_t n = x.size(), m = n / 2;
  K acc = scalar_traits<K>::zero();
  for (std::size_t i = 0; i < m; ++i)
    acc = acc + x[i] * y[m + i] - x[m + i] * y[i];
  return acc;
}

// Splits a closure vector into real and imaginary parts over the base field.
template <class K>
void closure_split(const std::vector<closure_t<K>>& z, std::vector<K>& re,
                   std::vector<K>& im) {
  re.resize(z.size());
  im.resize(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    re[i] = closure_re_as_scalar<K>(z[i]);
    im[i] = closure_im_as_scalar<K>(z[i]);
  }
}

// Symplectic Gram-Schmidt on a spanning set of an omega-nondegenerate
// subspace; returns pairs (p_i, q_i) with omega(p_i, q_j) = delta_ij and all
// other pairings zero. Bilinear form; works over any backend field.
template <class K>
std::vector<std::pair<std::vector<K>, std::vector<K>>> symplectic_pairs(
    std::vector<std::vector<K>> span, const Tol& tol) {
  std::vector<std::pair<std::vector<K>, std::vector<K>>> out;
  while (true) {
    // drop numerically dead vectors
    std::vector<std::vector<K>> live;
    for (auto& v : span) {
      double mag = 0;
      for (const auto& x : v) mag = std::max(mag, scalar_traits<K>::abs_approx(x));
      if constexpr (scalar_traits<K>::is_exact) {
        bool nz = false;
        for (const auto& x : v)
          if (!(x == K(0))) {
            nz = true;
            break;
          }
        if (nz) live.push_back(std::move(v));
      } else {
        if (mag > tol.eps) live.push_back(std::move(v));
      }
    }
    span = std::move(live);
    if (span.size() < 2) break;
    std::size_t bi = span.size(), bj = span.size();
    K bval = scalar_traits<K>::zero();
    double bmag = 0;
    for (std::size_t i = 0; i < span.size(); ++i)
      for (std::size_t j = i + 1; j < span.size(); ++j) {
        K v = bilinear_omega(span[i], span[j]);
        double mag = scalar_traits<K>::abs_approx(v);
        if constexpr (scalar_traits<K>::is_exact) {
          if (!(v == K(0))) {
            bi = i;
            bj = j;
            bval = v;
            i = span.size();
            break;
          }
        } else {
          if (mag > bmag) {
            bmag = mag;
            bi = i;
            bj = j;
            bval = v;
          }
        }
      }
    if (bi == span.size()) break;
    std::vector<K> p = span[bi], q = span[bj];
    for (auto& x : q) x = x / bval;
    span.erase(span.begin() + static_cast<std::ptrdiff_t>(bj));
    span.erase(span.begin() + static_cast<std::ptrdiff_t>(bi));
    for (auto& r : span) {
      K fp = bilinear_omega(p, r);
      K fq = bilinear_omega(q, r);
      for (std::size_t i = 0; i < r.size(); ++i) r[i] = r[i] - fp * q[i] + fq * p[i];
    }
    out.push_back({std::move(p), std::move(q)});
  }
  return out;
}

template <class K>
std::vector<std::vector<K>> matrix_columns(const Matrix<K>& m) {
  std::vector<std::vector<K>> cols;
  cols.reserve(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) cols.push_back(m.col(j));
  return cols;
}

// Dual-normalizes Y against X: returns Y' (columns) with
// omega(x_i, y'_j) = delta_ij. Throws if the pairing is singular.
template <class K>
std::vector<std::vector<K>> dual_normalize(const std::vector<std::vector<K>>& xs,
                                           const std::vector<std::vector<K>>& ys,
                                           const Tol& tol) {
  std::size_t k = xs.size();
  if (ys.size() != k)
    throw IndeterminateError("certificate: eigen-space dimensions do not pair up");
  Matrix<K> w(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) w(i, j) = bilinear_omega(xs[i], ys[j]);
  Matrix<K> winv = inverse(w, tol);  // throws on singular pairing
  std::vector<std::vector<K>> out(k, std::vector<K>(ys[0].size(), scalar_traits<K>::zero()));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t s = 0; s < k; ++s) {
      K f = winv(s, j);
      for (std::size_t r = 0; r < ys[0].size(); ++r)
        out[j][r] = out[j][r] + ys[s][r] * f;
    }
  return out;
}

template <class K>
std::optional<K> scalar_sqrt(const K& x) {
  if constexpr (std::is_same_v<K, Rational>) {
    return x.exact_sqrt();
  } else {
    if (x < 0) return std::nullopt;
    return std::sqrt(x);
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// canonicalization over complex-like backends

template <class K>
CanonicalDecomposition<K> canonicalize_complex(const Matrix<K>& a,
                                               const CanonicalOptions& opts = {}) {
  static_assert(scalar_traits<K>::is_complex,
                "canonicalize_complex requires a complex-like scalar backend");
  using L = closure_t<K>;
  const Tol& tol = opts.spectra.tol;
  if (!a.is_square() || a.rows() == 0 || a.rows() % 2 != 0)
    throw PreconditionError("canonicalize_complex: even positive size required");
  if (!is_symmetric(a, tol))
    throw PreconditionError("canonicalize_complex: symmetric matrix required");
  std::size_t dim = a.rows();
  Matrix<K> h = hamiltonian_from_form(a);
  auto js = jordan_structure(h, opts.spectra);
  double thr = detail::hamiltonian_snap_threshold(h, opts.spectra);

  CanonicalDecomposition<K> dec;
  dec.size = dim;
  bool semisimple = true;
  std::vector<bool> used(js.eigens.size(), false);

  for (std::size_t e = 0; e < js.eigens.size(); ++e) {
    for (std::size_t s : js.eigens[e].sizes)
      if (s != 1) semisimple = false;
  }

  std::vector<std::pair<L, std::vector<std::size_t>>> hyper_classes;  // rep -> sizes
  std::vector<L> zero_values;  // the cluster values classified as zero

  for (std::size_t e = 0; e < js.eigens.size(); ++e) {
    if (used[e]) continue;
    const L& lam = js.eigens[e].value;
    if (detail::closure_is_zero_within(lam, thr)) {
      used[e] = true;
      zero_values.push_back(lam);
      std::vector<std::size_t> sizes = js.eigens[e].sizes;
      std::sort(sizes.begin(), sizes.end());
      // even sizes -> P summands (sign-free over complex-like fields);
      // odd sizes -> paired hyperbolic J_n(0)
      std::size_t i = 0;
      while (i < sizes.size()) {
        std::size_t sz = sizes[i];
        std::size_t cnt = 0;
        while (i < sizes.size() && sizes[i] == sz) {
          ++cnt;
          ++i;
        }
        if (sz % 2 == 0) {
          for (std::size_t t = 0; t < cnt; ++t)
            dec.summands.push_back(CanonicalSummand<K>::signed_p(+1, sz / 2));
        } else {
          if (cnt % 2 != 0)
            throw IndeterminateError(
                "canonicalize: odd-size zero blocks with odd multiplicity");
          for (std::size_t t = 0; t < cnt / 2; ++t)
            dec.summands.push_back(CanonicalSummand<K>::hyperbolic_jordan(sz, K(0)));
        }
      }
      continue;
    }
    // nonzero: find the partner cluster at -lam
    std::size_t partner = js.eigens.size();
    for (std::size_t f = 0; f < js.eigens.size(); ++f) {
      if (f == e || used[f]) continue;
      if (detail::closure_close(js.eigens[f].value, L(0) - lam, 2 * thr)) {
        partner = f;
        break;
      }
    }
    if (partner == js.eigens.size())
      throw IndeterminateError("canonicalize: eigenvalue without a negated partner");
    auto s1 = js.eigens[e].sizes;
    auto s2 = js.eigens[partner].sizes;
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());
    if (s1 != s2)
      throw IndeterminateError("canonicalize: block sizes differ between lambda and -lambda");
    used[e] = used[partner] = true;
    // canonical representative of {lam, -lam}: Re > 0, ties by Im > 0
    L rep = lam;
    int rs = detail::closure_re_sign(lam);
    if (rs < 0 || (rs == 0 && !detail::closure_im_positive(lam))) rep = L(0) - lam;
    hyper_classes.push_back({rep, s1});
  }

  for (const auto& [rep, sizes] : hyper_classes) {
    for (std::size_t sz : sizes) {
      K aval;
      if constexpr (std::is_same_v<K, GaussianRational>) {
        aval = rep;
      } else {
        aval = rep;
      }
      dec.summands.push_back(CanonicalSummand<K>::hyperbolic_jordan(sz, aval));
    }
  }

  sort_summands(dec.summands);
  std::size_t total = 0;
  for (const auto& s : dec.summands) total += s.size();
  if (total != dim)
    throw IndeterminateError("canonicalize: summand sizes do not cover the space");

  if (semisimple && opts.certificate) {
    // Build the symplectic basis summand by summand. Hyperbolic classes use
    // eigenvector duality; the zero class uses symplectic Gram-Schmidt on the
    // kernel. No square roots are needed, so this works over exact fields.
    std::vector<std::pair<CanonicalSummand<K>, detail::SummandBasis<K>>> built;
    bool ok = true;
    // zero class
    std::size_t zero_mult = 0;
    for (const auto& z : zero_values) {
      (void)z;
    }
    {
      // multiplicity of 0 = dimension of ker H (semisimple)
      Matrix<K> hs = h;
      if (!zero_values.empty()) {
        auto kernel = nullspace(hs, tol);
        zero_mult = kernel.cols();
        auto pairs = detail::symplectic_pairs(detail::matrix_columns(kernel), tol);
        if (2 * pairs.size() != zero_mult) ok = false;
        for (auto& pr : pairs) {
          detail::SummandBasis<K> basis;
          basis.p.push_back(pr.first);
          basis.q.push_back(pr.second);
          built.push_back({CanonicalSummand<K>::hyperbolic_jordan(1, K(0)), std::move(basis)});
        }
      }
    }
    for (const auto& [rep, sizes] : hyper_classes) {
      if (!ok) break;
      std::size_t k = sizes.size();
      Matrix<K> shifted_p = h, shifted_m = h;
      for (std::size_t i = 0; i < dim; ++i) {
        shifted_p(i, i) = shifted_p(i, i) - K(rep);
        shifted_m(i, i) = shifted_m(i, i) + K(rep);
      }
      auto xcols = detail::matrix_columns(nullspace(shifted_p, tol, static_cast<int>(k)));
      auto ycols0 = detail::matrix_columns(nullspace(shifted_m, tol, static_cast<int>(k)));
      if (xcols.size() != k || ycols0.size() != k) {
        ok = false;
        break;
      }
      std::vector<std::vector<K>> ycols;
      try {
        ycols = detail::dual_normalize(xcols, ycols0, tol);
      } catch (const Error&) {
        ok = false;
        break;
      }
      for (std::size_t i = 0; i < k; ++i) {
        detail::SummandBasis<K> basis;
        basis.p.push_back(xcols[i]);
        basis.q.push_back(ycols[i]);
        built.push_back({CanonicalSummand<K>::hyperbolic_jordan(1, K(rep)), std::move(basis)});
      }
    }
    if (ok) {
      // order the built summands exactly like dec.summands
      std::vector<CanonicalSummand<K>> rebuilt;
      Matrix<K> s(dim, dim);
      std::stable_sort(built.begin(), built.end(), [](const auto& x, const auto& y) {
        return detail::summand_less(x.first, y.first);
      });
      std::size_t half_off = 0;
      std::size_t m_half = dim / 2;
      for (auto& [sm, basis] : built) {
        for (std::size_t j = 0; j < basis.p.size(); ++j) {
          for (std::size_t i = 0; i < dim; ++i) {
            s(i, half_off + j) = basis.p[j][i];
            s(i, m_half + half_off + j) = basis.q[j][i];
          }
        }
        half_off += basis.p.size();
        rebuilt.push_back(sm);
      }
      if (half_off == m_half) {
        Matrix<K> om = omega_matrix<K>(m_half);
        Matrix<K> target = [&] {
          CanonicalDecomposition<K> tmp;
          tmp.summands = rebuilt;
          tmp.size = dim;
          return assemble_form(tmp);
        }();
        Matrix<K> ra = s.transpose() * a * s;
        Matrix<K> ro = s.transpose() * om * s;
        double res = std::max((ra - target).max_abs(), (ro - om).max_abs());
        bool sympl_ok;
        if constexpr (scalar_traits<K>::is_exact) {
          sympl_ok = matrix_eq(ra, target, tol) && matrix_eq(ro, om, tol);
        } else {
          double scale = std::max(1.0, a.fro_norm());
          sympl_ok = res <= 1e-6 * scale;
        }
        if (sympl_ok) {
          dec.summands = std::move(rebuilt);
          dec.certificate = std::move(s);
          dec.residual = res;
        }
      }
    }
  }
  return dec;
}

// ---------------------------------------------------------------------------
// canonicalization over real backends

namespace detail {

// one eigenvalue class of a real Hamiltonian spectrum
template <class K>
struct RealClassData {
  EigenClass cls;
  // zero: nothing; real: a > 0; imaginary: c > 0; quadruple: a > 0, b > 0
  K a{scalar_traits<K>::zero()};
  K b{scalar_traits<K>::zero()};
  closure_t<K> rep{};  // representative eigenvalue as reported by the spectrum
  std::vector<std::size_t> sizes;
};

}  // namespace detail

template <class K>
CanonicalDecomposition<K> canonicalize_real(const Matrix<K>& a,
                                            const CanonicalOptions& opts = {}) {
  static_assert(!scalar_traits<K>::is_complex,
                "canonicalize_real requires a real scalar backend");
  using L = closure_t<K>;
  const Tol& tol = opts.spectra.tol;
  if (!a.is_square() || a.rows() == 0 || a.rows() % 2 != 0)
    throw PreconditionError("canonicalize_real: even positive size required");
  if (!is_symmetric(a, tol))
    throw PreconditionError("canonicalize_real: symmetric matrix required");
  std::size_t dim = a.rows();
  std::size_t m_half = dim / 2;
  Matrix<K> h = hamiltonian_from_form(a);
  auto js = jordan_structure(h, opts.spectra);
  double thr = detail::hamiltonian_snap_threshold(h, opts.spectra);

  bool semisimple = true;
  for (const auto& eb : js.eigens)
    for (std::size_t s : eb.sizes)
      if (s != 1) semisimple = false;

  // ---- classify the spectrum ----
  std::vector<detail::RealClassData<K>> classes;
  bool have_zero = false;
  std::vector<std::size_t> zero_sizes;
  std::vector<bool> used(js.eigens.size(), false);

  auto find_cluster = [&](const L& v) -> std::size_t {
    for (std::size_t f = 0; f < js.eigens.size(); ++f) {
      if (used[f]) continue;
      if (detail::closure_close(js.eigens[f].value, v, 2 * thr)) return f;
    }
    return js.eigens.size();
  };

  for (std::size_t e = 0; e < js.eigens.size(); ++e) {
    if (used[e]) continue;
    const L& lam = js.eigens[e].value;
    if (detail::closure_is_zero_within(lam, thr)) {
      used[e] = true;
      have_zero = true;
      zero_sizes = js.eigens[e].sizes;
      continue;
    }
    bool re0 = detail::closure_re_zero_within(lam, thr);
    bool im0 = detail::closure_im_zero_within(lam, thr);
    if (im0 && !re0) {
      // real pair {a, -a}
      used[e] = true;
      std::size_t f = find_cluster(L(0) - lam);
      if (f == js.eigens.size())
        throw IndeterminateError("canonicalize: real eigenvalue without negated partner");
      used[f] = true;
      auto s1 = js.eigens[e].sizes;
      auto s2 = js.eigens[f].sizes;
      std::sort(s1.begin(), s1.end());
      std::sort(s2.begin(), s2.end());
      if (s1 != s2)
        throw IndeterminateError("canonicalize: block sizes differ between a and -a");
      detail::RealClassData<K> cd;
      cd.cls = detail::EigenClass::RealPair;
      K av = detail::closure_re_as_scalar<K>(lam);
      cd.a = detail::positive(av) ? av : K(-1) * av;
      cd.rep = lam;
      cd.sizes = s1;
      classes.push_back(std::move(cd));
      continue;
    }
    if (re0) {
      // purely imaginary pair {ci, -ci}
      used[e] = true;
      std::size_t f = find_cluster(L(0) - lam);
      if (f == js.eigens.size())
        throw IndeterminateError("canonicalize: imaginary eigenvalue without conjugate");
      used[f] = true;
      auto s1 = js.eigens[e].sizes;
      auto s2 = js.eigens[f].sizes;
      std::sort(s1.begin(), s1.end());
      std::sort(s2.begin(), s2.end());
      if (s1 != s2)
        throw IndeterminateError("canonicalize: block sizes differ between ci and -ci");
      detail::RealClassData<K> cd;
      cd.cls = detail::EigenClass::ImaginaryPair;
      K cv = detail::closure_im_as_scalar<K>(lam);
      bool pos = detail::positive(cv);
      cd.a = pos ? cv : K(-1) * cv;  // c stored in `a`
      cd.rep = pos ? lam : L(0) - lam;
      cd.sizes = s1;
      classes.push_back(std::move(cd));
      continue;
    }
    // quadruple {lam, conj, -lam, -conj}
    used[e] = true;
    L conj_l;
    if constexpr (std::is_same_v<L, GaussianRational>) {
      conj_l = lam.conj();
    } else {
      conj_l = std::conj(lam);
    }
    std::size_t f1 = find_cluster(conj_l);
    if (f1 == js.eigens.size())
      throw IndeterminateError("canonicalize: complex eigenvalue without conjugate");
    used[f1] = true;
    std::size_t f2 = find_cluster(L(0) - lam);
    if (f2 == js.eigens.size())
      throw IndeterminateError("canonicalize: complex eigenvalue without negated partner");
    used[f2] = true;
    std::size_t f3 = find_cluster(L(0) - conj_l);
    if (f3 == js.eigens.size())
      throw IndeterminateError("canonicalize: complex eigenvalue quadruple incomplete");
    used[f3] = true;
    auto s0 = js.eigens[e].sizes;
    std::sort(s0.begin(), s0.end());
    for (std::size_t f : {f1, f2, f3}) {
      auto sf = js.eigens[f].sizes;
      std::sort(sf.begin(), sf.end());
      if (sf != s0)
        throw IndeterminateError("canonicalize: block sizes differ across the quadruple");
    }
    detail::RealClassData<K> cd;
    cd.cls = detail::EigenClass::Quadruple;
    K av = detail::closure_re_as_scalar<K>(lam);
    K bv = detail::closure_im_as_scalar<K>(lam);
    cd.a = detail::positive(av) ? av : K(-1) * av;
    cd.b = detail::positive(bv) ? bv : K(-1) * bv;
    // representative with Re > 0, Im > 0
    cd.rep = scalar_traits<L>::is_exact
                 ? L(scalar_traits<K>::to_closure(cd.a)) +
                       L(scalar_traits<K>::to_closure(cd.b)) * detail::imag_unit<L>()
                 : cd.rep;
    if constexpr (!scalar_traits<L>::is_exact) {
      cd.rep = L(scalar_traits<K>::abs_approx(av), scalar_traits<K>::abs_approx(bv));
    }
    cd.sizes = s0;
    classes.push_back(std::move(cd));
  }

  // ---- build the summand multiset ----
  CanonicalDecomposition<K> dec;
  dec.size = dim;
  // collected sign data for the certificate path at imaginary classes
  if (have_zero) {
    std::vector<std::size_t> sizes = zero_sizes;
    std::sort(sizes.begin(), sizes.end());
    // odd sizes pair into hyperbolic J_n(0); even sizes carry signs
    std::size_t i = 0;
    std::vector<std::pair<std::size_t, int>> zero_signs;
    bool need_signs = false;
    for (std::size_t sz : sizes)
      if (sz % 2 == 0) need_signs = true;
    if (need_signs) zero_signs = sign_characteristic(h, a, L(0), opts);
    while (i < sizes.size()) {
      std::size_t sz = sizes[i];
      std::size_t cnt = 0;
      while (i < sizes.size() && sizes[i] == sz) {
        ++cnt;
        ++i;
      }
      if (sz % 2 != 0) {
        if (cnt % 2 != 0)
          throw IndeterminateError("canonicalize: odd-size zero blocks with odd multiplicity");
        for (std::size_t t = 0; t < cnt / 2; ++t)
          dec.summands.push_back(CanonicalSummand<K>::hyperbolic_jordan(sz, K(0)));
      } else {
        std::size_t plus = 0, minus = 0;
        for (const auto& [bsz, sg] : zero_signs)
          if (bsz == sz) (sg > 0 ? plus : minus)++;
        if (plus + minus != cnt)
          throw IndeterminateError("canonicalize: zero-class sign count mismatch");
        for (std::size_t t = 0; t < plus; ++t)
          dec.summands.push_back(CanonicalSummand<K>::signed_p(+1, sz / 2));
        for (std::size_t t = 0; t < minus; ++t)
          dec.summands.push_back(CanonicalSummand<K>::signed_p(-1, sz / 2));
      }
    }
  }
  for (const auto& cd : classes) {
    if (cd.cls == detail::EigenClass::RealPair) {
      for (std::size_t sz : cd.sizes)
        dec.summands.push_back(CanonicalSummand<K>::hyperbolic_jordan(sz, cd.a));
    } else if (cd.cls == detail::EigenClass::Quadruple) {
      for (std::size_t sz : cd.sizes)
        dec.summands.push_back(CanonicalSummand<K>::hyperbolic_realified(sz, cd.a, cd.b));
    } else {
      auto signs = sign_characteristic(h, a, cd.rep, opts);
      std::vector<std::size_t> sorted = cd.sizes;
      std::sort(sorted.begin(), sorted.end());
      std::size_t i = 0;
      while (i < sorted.size()) {
        std::size_t sz = sorted[i];
        std::size_t cnt = 0;
        while (i < sorted.size() && sorted[i] == sz) {
          ++cnt;
          ++i;
        }
        std::size_t plus = 0, minus = 0;
        for (const auto& [bsz, sg] : signs)
          if (bsz == sz) (sg > 0 ? plus : minus)++;
        if (plus + minus != cnt)
          throw IndeterminateError("canonicalize: imaginary-class sign count mismatch");
        for (std::size_t t = 0; t < plus; ++t)
          dec.summands.push_back(CanonicalSummand<K>::signed_q(+1, sz, cd.a));
        for (std::size_t t = 0; t < minus; ++t)
          dec.summands.push_back(CanonicalSummand<K>::signed_q(-1, sz, cd.a));
      }
    }
  }

  sort_summands(dec.summands);
  std::size_t total = 0;
  for (const auto& s : dec.summands) total += s.size();
  if (total != dim)
    throw IndeterminateError("canonicalize: summand sizes do not cover the space");

  // ---- certificate (semisimple spectra) ----
  if (semisimple && opts.certificate) {
    std::vector<std::pair<CanonicalSummand<K>, detail::SummandBasis<K>>> built;
    bool ok = true;
    if (have_zero) {
      auto kernel = nullspace(h, tol);
      auto pairs = detail::symplectic_pairs(detail::matrix_columns(kernel), tol);
      if (2 * pairs.size() != kernel.cols()) ok = false;
      for (auto& pr : pairs) {
        detail::SummandBasis<K> basis;
        basis.p.push_back(pr.first);
        basis.q.push_back(pr.second);
        built.push_back({CanonicalSummand<K>::hyperbolic_jordan(1, K(0)), std::move(basis)});
      }
    }
    Matrix<L> hl = to_closure_matrix(h);
    for (const auto& cd : classes) {
      if (!ok) break;
      std::size_t k = cd.sizes.size();
      if (cd.cls == detail::EigenClass::RealPair) {
        Matrix<K> sp = h, sm = h;
        for (std::size_t i = 0; i < dim; ++i) {
          sp(i, i) = sp(i, i) - cd.a;
          sm(i, i) = sm(i, i) + cd.a;
        }
        auto xs = detail::matrix_columns(nullspace(sp, tol, static_cast<int>(k)));
        auto ys0 = detail::matrix_columns(nullspace(sm, tol, static_cast<int>(k)));
        if (xs.size() != k || ys0.size() != k) {
          ok = false;
          break;
        }
        std::vector<std::vector<K>> ys;
        try {
          ys = detail::dual_normalize(xs, ys0, tol);
        } catch (const Error&) {
          ok = false;
          break;
        }
        for (std::size_t i = 0; i < k; ++i) {
          detail::SummandBasis<K> basis;
          basis.p.push_back(xs[i]);
          basis.q.push_back(ys[i]);
          built.push_back({CanonicalSummand<K>::hyperbolic_jordan(1, cd.a), std::move(basis)});
        }
      } else if (cd.cls == detail::EigenClass::Quadruple) {
        // complex eigenvectors at a+bi and at -a+bi give the two real planes
        Matrix<L> sp = hl, sm = hl;
        L lam = cd.rep;
        for (std::size_t i = 0; i < dim; ++i) {
          sp(i, i) = sp(i, i) - lam;
          sm(i, i) = sm(i, i) + scalar_traits<L>::conj(lam);  // -(a - bi) = -a + bi
        }
        auto zs = detail::matrix_columns(nullspace(sp, tol, static_cast<int>(k)));
        auto ws = detail::matrix_columns(nullspace(sm, tol, static_cast<int>(k)));
        if (zs.size() != k || ws.size() != k) {
          ok = false;
          break;
        }
        std::vector<std::vector<K>> us, vs0;
        for (const auto& z : zs) {
          std::vector<K> re, im;
          detail::closure_split<K>(z, re, im);
          us.push_back(re);
          us.push_back(im);
        }
        for (const auto& w : ws) {
          std::vector<K> re, im;
          detail::closure_split<K>(w, re, im);
          vs0.push_back(re);
          vs0.push_back(im);
        }
        std::vector<std::vector<K>> vs;
        try {
          vs = detail::dual_normalize(us, vs0, tol);
        } catch (const Error&) {
          ok = false;
          break;
        }
        // flip the second member of each plane to match the rotation cell
        for (std::size_t i = 0; i < k; ++i) {
          for (auto& x : us[2 * i + 1]) x = K(-1) * x;
          for (auto& x : vs[2 * i + 1]) x = K(-1) * x;
          detail::SummandBasis<K> basis;
          basis.p.push_back(us[2 * i]);
          basis.p.push_back(us[2 * i + 1]);
          basis.q.push_back(vs[2 * i]);
          basis.q.push_back(vs[2 * i + 1]);
          built.push_back(
              {CanonicalSummand<K>::hyperbolic_realified(1, cd.a, cd.b), std::move(basis)});
        }
      } else {
        // purely imaginary: Krein-form diagonalization of the eigenvectors
        Matrix<L> sp = hl;
        for (std::size_t i = 0; i < dim; ++i) sp(i, i) = sp(i, i) - cd.rep;
        auto zs = detail::matrix_columns(nullspace(sp, tol, static_cast<int>(k)));
        if (zs.size() != k) {
          ok = false;
          break;
        }
        Matrix<L> om_l = omega_matrix<L>(m_half);
        Matrix<L> f(k, k);
        for (std::size_t p = 0; p < k; ++p)
          for (std::size_t q = 0; q < k; ++q) {
            L acc = L(0);
            for (std::size_t i = 0; i < dim; ++i) {
              L row = L(0);
              for (std::size_t j = 0; j < dim; ++j) row = row + om_l(i, j) * zs[q][j];
              acc = acc + scalar_traits<L>::conj(zs[p][i]) * row;
            }
            f(p, q) = detail::imag_unit<L>() * acc;
          }
        Matrix<L> cmat;
        std::vector<L> fdiag;
        try {
          auto [cm, fd] = detail::hermitian_diagonalize(f, tol);
          cmat = std::move(cm);
          fdiag = std::move(fd);
        } catch (const Error&) {
          ok = false;
          break;
        }
        // z'_j = sum_i zs[i] * cmat(i, j); plane (x, y) = (Re z', Im z')
        for (std::size_t j = 0; j < k && ok; ++j) {
          std::vector<L> zp(dim, L(0));
          for (std::size_t i = 0; i < k; ++i)
            for (std::size_t r = 0; r < dim; ++r) zp[r] = zp[r] + zs[i][r] * cmat(i, j);
          std::vector<K> x, y;
          detail::closure_split<K>(zp, x, y);
          K fval = detail::closure_re_as_scalar<K>(fdiag[j]);
          if (scalar_is_zero(fval, tol)) {
            ok = false;
            break;
          }
          K w = K(-1) * fval / K(2);  // omega(x, y)
          K absw = detail::positive(w) ? w : K(-1) * w;
          auto s_opt = detail::scalar_sqrt(absw);
          if (!s_opt.has_value()) {
            ok = false;  // no exact square root: emit without certificate
            break;
          }
          K s = *s_opt;
          int eps = detail::positive(w) ? +1 : -1;  // sign of the Q summand
          detail::SummandBasis<K> basis;
          std::vector<K> pcol(dim), qcol(dim);
          for (std::size_t r = 0; r < dim; ++r) {
            pcol[r] = x[r] / s;
            qcol[r] = (eps > 0 ? y[r] : K(-1) * y[r]) / s;
          }
          basis.p.push_back(std::move(pcol));
          basis.q.push_back(std::move(qcol));
          built.push_back({CanonicalSummand<K>::signed_q(eps, 1, cd.a), std::move(basis)});
        }
      }
    }
    if (ok) {
      std::vector<CanonicalSummand<K>> rebuilt;
      Matrix<K> s(dim, dim);
      std::stable_sort(built.begin(), built.end(), [](const auto& x, const auto& y) {
        return detail::summand_less(x.first, y.first);
      });
      std::size_t half_off = 0;
      for (auto& [sm, basis] : built) {
        for (std::size_t j = 0; j < basis.p.size(); ++j) {
          for (std::size_t i = 0; i < dim; ++i) {
            s(i, half_off + j) = basis.p[j][i];
            s(i, m_half + half_off + j) = basis.q[j][i];
          }
        }
        half_off += basis.p.size();
        rebuilt.push_back(sm);
      }
      if (half_off == m_half) {
        Matrix<K> om = omega_matrix<K>(m_half);
        Matrix<K> target = [&] {
          CanonicalDecomposition<K> tmp;
          tmp.summands = rebuilt;
          tmp.size = dim;
          return assemble_form(tmp);
        }();
        Matrix<K> ra = s.transpose() * a * s;
        Matrix<K> ro = s.transpose() * om * s;
        double res = std::max((ra - target).max_abs(), (ro - om).max_abs());
        bool cert_ok;
        if constexpr (scalar_traits<K>::is_exact) {
          cert_ok = matrix_eq(ra, target, tol) && matrix_eq(ro, om, tol);
        } else {
          double scale = std::max(1.0, a.fro_norm());
          cert_ok = res <= 1e-6 * scale;
        }
        if (cert_ok) {
          // the certificate's summand list must agree with the sign extraction
          CanonicalDecomposition<K> check;
          check.summands = rebuilt;
          check.size = dim;
          if (decompositions_equal(dec, check, opts.match_eps, false)) {
            dec.summands = std::move(rebuilt);
            dec.certificate = std::move(s);
            dec.residual = res;
          }
        }
      }
    }
  }
  return dec;
}

// Regime dispatch: complex-like backends get the two-type decomposition,
// real backends the three-type decomposition.
template <class K>
CanonicalDecomposition<K> canonicalize(const Matrix<K>& a, const CanonicalOptions& opts = {}) {
  if constexpr (scalar_traits<K>::is_complex) {
    return canonicalize_complex(a, opts);
  } else {
    return canonicalize_real(a, opts);
  }
}

// ---------------------------------------------------------------------------
// Hamiltonian canonicalization

template <class K>
CanonicalDecomposition<K> canonicalize_hamiltonian(const Matrix<K>& h,
                                                   const CanonicalOptions& opts = {}) {
  const Tol& tol = opts.spectra.tol;
  if (!is_hamiltonian(h, tol))
    throw PreconditionError("canonicalize_hamiltonian: Hamiltonian matrix required");
  Matrix<K> a = form_from_hamiltonian(h);
  CanonicalDecomposition<K> dec = canonicalize(a, opts);
  if (dec.certificate.has_value()) {
    // S diagonalizes the form; the Hamiltonian realization of a hyperbolic
    // summand additionally needs the orthosymplectic flip diag(flip, flip)
    // inside that summand, which turns Omega * [[0,Phi],[Phi^T,0]] =
    // [[Phi^T,0],[0,-Phi]] into [[Phi,0],[0,-Phi^T]].
    std::vector<Matrix<K>> corr;
    corr.reserve(dec.summands.size());
    for (const auto& s : dec.summands) {
      std::size_t half = s.size() / 2;
      if (s.type == SummandType::Hyperbolic) {
        Matrix<K> fl = flip_matrix<K>(half);
        corr.push_back(direct_sum(fl, fl));
      } else {
        corr.push_back(Matrix<K>::identity(2 * half));
      }
    }
    Matrix<K> f = block_direct_sum(corr);
    Matrix<K> s_ham = (*dec.certificate) * f;
    Matrix<K> target = assemble_hamiltonian(dec);
    Matrix<K> lhs = h * s_ham;
    Matrix<K> rhs = s_ham * target;
    double res = (lhs - rhs).max_abs();
    bool ok;
    if constexpr (scalar_traits<K>::is_exact) {
      ok = matrix_eq(lhs, rhs, tol);
    } else {
      ok = res <= 1e-6 * std::max(1.0, h.fro_norm());
    }
    if (ok) {
      dec.certificate = std::move(s_ham);
      dec.residual = res;
    } else {
      dec.certificate.reset();
      dec.residual = 0.0;
    }
  }
  return dec;
}

// ---------------------------------------------------------------------------
// Williamson decomposition

template <class K>
struct WilliamsonResult {
  Matrix<K> d;  // n x n diagonal, entries descending
  Matrix<K> s;  // 2n x 2n symplectic with s^T a s = d (+) d
};

namespace detail {

// positive definiteness via symmetric elimination pivots
template <class K>
bool positive_definite(Matrix<K> m, const Tol& tol) {
  std::size_t n = m.rows();
  double scale = 0;
  if constexpr (!scalar_traits<K>::is_exact) {
    for (std::size_t i = 0; i < n; ++i) scale += scalar_traits<K>::abs_approx(m(i, i));
    scale = std::max(scale / static_cast<double>(n），1e-300);
  }
  for (std::size_t k = 0; k < n; ++k) {
    K piv = m(k, k);
    if constexpr (scalar_traits<K>::is_exact) {
      if (!(piv.sign() > 0)) return false;
    } else {
      if (!(piv > tol.eps * scale)) return false;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      K f = m(i, k) / piv;
      for (std::size_t j = k; j < n; ++j) m(i, j) = m(i, j) - f * m(k, j);
    }
  }
  return true;
}

}  // namespace detail

template <class K>
WilliamsonResult<K> williamson(const Matrix<K>& a, const CanonicalOptions& opts = {}) {
  static_assert(!scalar_traits<K>::is_complex, "williamson requires a real scalar backend");
  const Tol& tol = opts.spectra.tol;
  if (!a.is_square() || a.rows() == 0 || a.rows() % 2 != 0)
    throw PreconditionError("williamson: even positive size required");
  if (!is_symmetric(a, tol)) throw PreconditionError("williamson: symmetric matrix required");
  if (!detail::positive_definite(a, tol))
    throw PreconditionError("williamson: positive definite matrix required");
  std::size_t dim = a.rows();
  std::size_t n = dim / 2;

  if constexpr (scalar_traits<K>::is_exact) {
    // exact arithmetic covers the already-diagonal case, where the required
    // scalings stay inside the field; everything else needs floating point
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        if (i != j && !(a(i, j) == K(0)))
          throw UnsupportedSpectrumError(
              "williamson: exact backend supports diagonal input only");
    std::vector<K> alpha(n), scale(n);
    for (std::size_t i = 0; i < n; ++i) {
      K d = a(i, i), e = a(n + i, n + i);
      auto al = (d * e).exact_sqrt();
      if (!al.has_value())
        throw UnsupportedSpectrumError("williamson: symplectic eigenvalue is irrational");
      auto s2 = (e / d).exact_sqrt();
      std::optional<K> s = s2.has_value() ? s2->exact_sqrt() : std::nullopt;
      if (!s.has_value())
        throw UnsupportedSpectrumError("williamson: required scaling is irrational");
      alpha[i] = *al;
      scale[i] = *s;
    }
    // sort planes by alpha descending with a symplectic plane permutation
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return alpha[y] < alpha[x]; });
    Matrix<K> s(dim, dim), d(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t src = order[j];
      s(src, j) = scale[src];
      s(n + src, n + j) = K(1) / scale[src];
      d(j, j) = alpha[src];
    }
    return {d, s};
  } else {
    Eigen::MatrixXd ea = sympcan::detail::to_eigen(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ea);
    if (es.info() != Eigen::Success) throw IndeterminateError("williamson: eigensolver failed");
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (!(ev(i) > 0)) throw PreconditionError("williamson: positive definite matrix required");
    Eigen::MatrixXd isqrt =
        es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
        es.eigenvectors().transpose();
    Matrix<K> om = omega_matrix<K>(n);
    Eigen::MatrixXd eo = sympcan::detail::to_eigen(om);
    Eigen::MatrixXd nmat = isqrt * eo * isqrt;  // skew-symmetric
    Eigen::MatrixXcd herm =
        std::complex<double>(0.0, 1.0) * nmat.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(herm);
    if (hs.info() != Eigen::Success) throw IndeterminateError("williamson: eigensolver failed");
    // positive eigenvalues mu = 1/alpha with eigenvectors z = x + i y
    std::vector<std::pair<double, Eigen::VectorXcd>> planes;
    for (Eigen::Index i = 0; i < hs.eigenvalues().size(); ++i) {
      double mu = hs.eigenvalues()(i);
      if (mu > 0) planes.push_back({mu, hs.eigenvectors().col(i)});
    }
    if (planes.size() != n) throw IndeterminateError("williamson: spectral pairing failed");
    // alpha descending = mu ascending
    std::sort(planes.begin(), planes.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    Matrix<K> s(dim, dim), d(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      double mu = planes[j].first;
      double alpha = 1.0 / mu;
      Eigen::VectorXd x = planes[j].second.real();
      Eigen::VectorXd y = planes[j].second.imag();
      double nx = x.norm(), ny = y.norm();
      if (nx <= tol.eps || ny <= tol.eps)
        throw IndeterminateError("williamson: degenerate eigenplane");
      x /= nx;
      y /= ny;
      Eigen::VectorXd u = std::sqrt(alpha) * (isqrt * y);
      Eigen::VectorXd v = std::sqrt(alpha) * (isqrt * x);
      for (std::size_t i = 0; i < dim; ++i) {
        s(i, j) = u(static_cast<Eigen::Index>(i));
        s(i, n + j) = v(static_cast<Eigen::Index>(i));
      }
      d(j, j) = alpha;
    }
    return {d, s};
  }
}

// Symplectic eigenvalues of a positive definite matrix: the positive numbers
// alpha_j with spectrum(Omega A) = {±i alpha_j}, sorted descending.
template <class K>
std::vector<typename scalar_traits<K>::real_type> symplectic_eigenvalues(
    const Matrix<K>& a, const CanonicalOptions& opts = {}) {
  static_assert(!scalar_traits<K>::is_complex,
                "symplectic_eigenvalues requires a real scalar backend");
  using R = typename scalar_traits<K>::real_type;
  const Tol& tol = opts.spectra.tol;
  if (!a.is_square() || a.rows() == 0 || a.rows() % 2 != 0)
    throw PreconditionError("symplectic_eigenvalues: even positive size required");
  if (!is_symmetric(a, tol))
    throw PreconditionError("symplectic_eigenvalues: symmetric matrix required");
  if (!detail::positive_definite(a, tol))
    throw PreconditionError("symplectic_eigenvalues: positive definite matrix required");
  std::size_t n = a.rows() / 2;
  Matrix<K> h = hamiltonian_from_form(a);
  std::vector<R> out;
  if constexpr (scalar_traits<K>::is_exact) {
    auto js = jordan_structure(h, opts.spectra);
    for (const auto& eb : js.eigens) {
      if (eb.value.im().sign() <= 0) continue;
      for (std::size_t s : eb.sizes) {
        if (s != 1)
          throw IndeterminateError("symplectic_eigenvalues: nontrivial block on SPD input");
        out.push_back(eb.value.im());
      }
    }
  } else {
    Eigen::MatrixXd eh = sympcan::detail::to_eigen(h);
    Eigen::EigenSolver<Eigen::MatrixXd> es(eh);
    if (es.info() != Eigen::Success)
      throw IndeterminateError("symplectic_eigenvalues: eigensolver failed");
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      auto lam = es.eigenvalues()(i);
      if (lam.imag() > 0) out.push_back(lam.imag());
    }
  }
  if (out.size() != n)
    throw IndeterminateError("symplectic_eigenvalues: spectral pairing failed");
  std::sort(out.begin(), out.end(), [](const R& x, const R& y) { return y < x; });
  return out;
}

// ---------------------------------------------------------------------------
// deciders

// Congruence of pairs (A1, B1), (A2, B2): reduce both skew parts to Omega and
// compare the canonical summand multisets of the reduced symmetric parts.
template <class K>
bool congruent_pairs(const MatrixPair<K>& p1, const MatrixPair<K>& p2,
                     const CanonicalOptions& opts = {}) {
  if (p1.a.rows() != p2.a.rows()) return false;
  Matrix<K> t1 = reduce_skew_to_omega(p1.b, opts.spectra.tol);
  Matrix<K> t2 = reduce_skew_to_omega(p2.b, opts.spectra.tol);
  Matrix<K> a1 = t1.transpose() * p1.a * t1;
  Matrix<K> a2 = t2.transpose() * p2.a * t2;
  CanonicalOptions o = opts;
  o.certificate = false;
  auto d1 = canonicalize(a1, o);
  auto d2 = canonicalize(a2, o);
  return decompositions_equal(d1, d2, opts.match_eps, scalar_traits<K>::is_complex);
}

// Symplectic similarity of Hamiltonian matrices.
template <class K>
bool symplectically_similar(const Matrix<K>& h1, const Matrix<K>& h2,
                            const CanonicalOptions& opts = {}) {
  if (h1.rows() != h2.rows()) return false;
  CanonicalOptions o = opts;
  o.certificate = false;
  auto d1 = canonicalize_hamiltonian(h1, o);
  auto d2 = canonicalize_hamiltonian(h2, o);
  return decompositions_equal(d1, d2, opts.match_eps, scalar_traits<K>::is_complex);
}

}  // namespace sympcan
