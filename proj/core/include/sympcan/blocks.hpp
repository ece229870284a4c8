#pragma once

// Constructors for the named canonical matrices and matrix pairs, and the
// structural predicates of the theory: symplectic / Hamiltonian tests and the
// existence and construction of a nonsingular skew-symmetric M making M*Psi
// symmetric ("tilde" companion of a Frobenius-type block).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sympcan/matrix.hpp"
#include "sympcan/polynomial.hpp"

namespace sympcan {

enum class BlockKind { Jordan, RealifiedJordan, Frobenius, Omega, P, Pprime, Q, Qprime };

inline std::string block_kind_name(BlockKind k) {
  switch (k) {
    case BlockKind::Jordan: return "J";
    case BlockKind::RealifiedJordan: return "JR";
    case BlockKind::Frobenius: return "F";
    case BlockKind::Omega: return "Omega";
    case BlockKind::P: return "P";
    case BlockKind::Pprime: return "Pp";
    case BlockKind::Q: return "Q";
    case BlockKind::Qprime: return "Qp";
  }
  throw Error("block_kind_name: unreachable");
}

inline std::optional<BlockKind> block_kind_from(std::string_view s) {
  if (s == "J") return BlockKind::Jordan;
  if (s == "JR") return BlockKind::RealifiedJordan;
  if (s == "F") return BlockKind::Frobenius;
  if (s == "Omega") return BlockKind::Omega;
  if (s == "P") return BlockKind::P;
  if (s == "Pp") return BlockKind::Pprime;
  if (s == "Q") return BlockKind::Q;
  if (s == "Qp") return BlockKind::Qprime;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// elementary builders

template <class K>
Matrix<K> flip_matrix(std::size_t n) {
  Matrix<K> m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, n - 1 - i) = K(1);
  return m;
}

// n x n upper shift: ones on the superdiagonal.
template <class K>
Matrix<K> shift_matrix(std::size_t n) {
  Matrix<K> m(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = K(1);
  return m;
}

template <class K>
Matrix<K> jordan_block(std::size_t n, const K& a) {
  if (n == 0) throw PreconditionError("jordan_block: n >= 1 required");
  Matrix<K> m = shift_matrix<K>(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = a;
  return m;
}

// 2n x 2n realification of the Jordan block with eigenvalue a + bi: 2x2 cells
// [[a,b],[-b,a]] on the diagonal and identity cells on the superdiagonal.
template <class K>
Matrix<K> realified_jordan(std::size_t n, const K& a, const K& b) {
  if (n == 0) throw PreconditionError("realified_jordan: n >= 1 required");
  Matrix<K> m(2 * n, 2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    m(2 * k, 2 * k) = a;
    m(2 * k, 2 * k + 1) = b;
    m(2 * k + 1, 2 * k) = -b;
    m(2 * k + 1, 2 * k + 1) = a;
    if (k + 1 < n) {
      m(2 * k, 2 * k + 2) = K(1);
      m(2 * k + 1, 2 * k + 3) = K(1);
    }
  }
  return m;
}

// Companion matrix of chi = x^n + c1 x^{n-1} + ... + cn: ones on the
// subdiagonal, last column -cn, ..., -c1 from the top.
template <class K>
Matrix<K> companion_matrix(const Polynomial<K>& chi) {
  int n = chi.degree();
  if (n < 1) throw PreconditionError("companion_matrix: degree >= 1 required");
  if (!(chi.leading() == K(1))) throw PreconditionError("companion_matrix: monic required");
  Matrix<K> m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int i = 1; i < n; ++i) m(static_cast<std::size_t>(i), static_cast<std::size_t>(i - 1)) = K(1);
  for (int i = 0; i < n; ++i)
    m(static_cast<std::size_t>(i), static_cast<std::size_t>(n - 1)) = -chi.coeff(i);
  return m;
}

// ---------------------------------------------------------------------------
// canonical symmetric blocks (2n x 2n)

// diag-of-quadrants [[F, 0], [0, G]] with F the full anti-diagonal of ones
// and G the shifted anti-diagonal: G[i][j] = 1 iff i + j = n + 2 (1-based).
template <class K>
Matrix<K> p_block(std::size_t n) {
  if (n == 0) throw PreconditionError("p_block: n >= 1 required");
  Matrix<K> m(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) m(i, n - 1 - i) = K(1);
  for (std::size_t i = 1; i < n; ++i) m(n + i, n + (n - i)) = K(1);
  return m;
}

// [[0, Z], [Z^T, e1 e1^T]] with Z the upper shift.
template <class K>
Matrix<K> pprime_block(std::size_t n) {
  if (n == 0) throw PreconditionError("pprime_block: n >= 1 required");
  Matrix<K> m(2 * n, 2 * n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    m(i, n + i + 1) = K(1);
    m(n + i + 1, i) = K(1);
  }
  m(n, n) = K(1);
  return m;
}

namespace detail {

// alternating anti-diagonal: entry (i, n+1-i) = (-1)^(i+1), 1-based.
template <class K>
Matrix<K> alternating_antidiagonal(std::size_t n) {
  Matrix<K> m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, n - 1 - i) = (i % 2 == 0) ? K(1) : K(-1);
  return m;
}

// the 2x2 cell [[0, 1], [-c^2, 0]] of the even-size canonical block
template <class K>
Matrix<K> c_cell(const K& c) {
  return Matrix<K>{{K(0), K(1)}, {-(c * c), K(0)}};
}

}  // namespace detail

// The 2n x 2n symmetric block with a c > 0 parameter. Odd n: quadrants
// [[cW, Z], [Z^T, cW]] where W is the alternating anti-diagonal and Z the
// upper shift. Even n: [[0, U], [U^T, E]] with U block-bidiagonal over 2x2
// cells C = [[0,1],[-c^2,0]] (diagonal) and I2 (superdiagonal), and E carrying
// a single I2 in its leading corner.
template <class K>
Matrix<K> q_block(std::size_t n, const K& c) {
  if (n == 0) throw PreconditionError("q_block: n >= 1 required");
  Matrix<K> m(2 * n, 2 * n);
  if (n % 2 == 1) {
    Matrix<K> w = detail::alternating_antidiagonal<K>(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) = c * w(i, j);
        m(n + i, n + j) = c * w(i, j);
      }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      m(i, n + i + 1) = K(1);
      m(n + i + 1, i) = K(1);
    }
  } else {
    const K c2 = c * c;
    std::size_t half = n / 2;  // number of 2x2 cells per quadrant row
    for (std::size_t k = 0; k < half; ++k) {
      std::size_t r = 2 * k;
      // C cell at block-diagonal position (k, k) of the upper-right quadrant
      m(r, n + r + 1) = K(1);
      m(r + 1, n + r) = -c2;
      m(n + r + 1, r) = K(1);
      m(n + r, r + 1) = -c2;
      if (k + 1 < half) {
        // I2 cell at block position (k, k+1)
        m(r, n + r + 2) = K(1);
        m(r + 1, n + r + 3) = K(1);
        m(n + r + 2, r) = K(1);
        m(n + r + 3, r + 1) = K(1);
      }
    }
    m(n, n) = K(1);
    m(n + 1, n + 1) = K(1);
  }
  return m;
}

// Alternative to q_block for odd n (equal to q_block when n is even):
// [[c^2 e1 e1^T, U], [U^T, E]] where U has a single 1 at (1,3), C cells at
// block positions (k,k) and I2 cells at (k,k+1) for the row pairs (2k, 2k+1),
// and E has ones at (1,1), (1,2), (2,1).
template <class K>
Matrix<K> qprime_block(std::size_t n, const K& c) {
  if (n == 0) throw PreconditionError("qprime_block: n >= 1 required");
  if (n % 2 == 0) return q_block(n, c);
  Matrix<K> m(2 * n, 2 * n);
  const K c2 = c * c;
  m(0, 0) = c2;
  m(n, n) = K(1);
  if (n > 1) {
    m(n, n + 1) = K(1);
    m(n + 1, n) = K(1);
    // U(1,3) = 1
    m(0, n + 2) = K(1);
    m(n + 2, 0) = K(1);
  }
  for (std::size_t k = 1; 2 * k < n; ++k) {
    std::size_t r = 2 * k - 1;  // 0-based start row of the pair (2k, 2k+1)
    // C cell at rows (r, r+1), columns (r, r+1) of the upper-right quadrant
    m(r, n + r + 1) = K(1);
    m(r + 1, n + r) = -c2;
    m(n + r + 1, r) = K(1);
    m(n + r, r + 1) = -c2;
    if (2 * k + 2 < n) {
      m(r, n + r + 2) = K(1);
      m(r + 1, n + r + 3) = K(1);
      m(n + r + 2, r) = K(1);
      m(n + r + 3, r + 1) = K(1);
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// block specification and dispatch

template <class K>
struct BlockSpec {
  BlockKind kind = BlockKind::Jordan;
  std::size_t n = 1;
  K a{scalar_traits<K>::zero()};
  K b{scalar_traits<K>::zero()};
  K c{scalar_traits<K>::zero()};
  Polynomial<K> p;      // Frobenius: irreducible factor
  std::size_t s = 1;    // Frobenius: power
  int sign = +1;        // for the signed canonical summands
};

namespace detail {

template <class K>
bool positive(const K& v) {
  if constexpr (scalar_traits<K>::is_complex) {
    (void)v;
    return false;  // no order; callers reject these specs first
  } else if constexpr (std::is_same_v<K, double>) {
    return v > 0;
  } else {
    return v.sign() > 0;
  }
}

// Irreducibility over the rationals is decided for degree <= 2 only
// (linear always; quadratic via rational-square discriminant test).
// Everything else is left unverified and the caller gets a warning.
template <class K>
std::optional<bool> frobenius_irreducible(const Polynomial<K>& p) {
  if (p.degree() == 1) return true;
  if constexpr (std::is_same_v<K, Rational>) {
    if (p.degree() == 2) {
      Polynomial<K> m = p.make_monic();
      Rational b = m.coeff(1), c0 = m.coeff(0);
      Rational disc = b * b - Rational(4) * c0;
      if (disc.sign() < 0) return true;
      return !disc.exact_sqrt().has_value();
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Validates a spec; throws on hard violations and returns human-readable
// warnings for conditions left unverified.
template <class K>
std::vector<std::string> validate_block_spec(const BlockSpec<K>& spec) {
  std::vector<std::string> warnings;
  if (spec.n == 0) throw PreconditionError("block spec: n >= 1 required");
  if (spec.sign != 1 && spec.sign != -1)
    throw PreconditionError("block spec: sign must be +1 or -1");
  bool signable = spec.kind == BlockKind::P || spec.kind == BlockKind::Pprime ||
                  spec.kind == BlockKind::Q || spec.kind == BlockKind::Qprime;
  if (spec.sign == -1 && !signable)
    throw PreconditionError("block spec: sign applies only to P/Pp/Q/Qp");
  switch (spec.kind) {
    case BlockKind::RealifiedJordan:
      if constexpr (scalar_traits<K>::is_complex)
        throw PreconditionError("block spec: realified blocks need an ordered scalar field");
      if (!detail::positive(spec.b))
        throw PreconditionError("block spec: realified block requires b > 0");
      break;
    case BlockKind::Q:
    case BlockKind::Qprime:
      if constexpr (scalar_traits<K>::is_complex)
        throw PreconditionError("block spec: Q blocks need an ordered scalar field");
      if (!detail::positive(spec.c))
        throw PreconditionError("block spec: Q blocks require c > 0");
      break;
    case BlockKind::Frobenius: {
      if (spec.p.degree() < 1) throw PreconditionError("block spec: polynomial of degree >= 1 required");
      if (!(spec.p.leading() == K(1))) throw PreconditionError("block spec: monic polynomial required");
      if (spec.s < 1) throw PreconditionError("block spec: power s >= 1 required");
      auto irr = detail::frobenius_irreducible(spec.p);
      if (!irr.has_value())
        warnings.push_back("irreducibility of the block polynomial was not verified");
      else if (!*irr)
        throw PreconditionError("block spec: polynomial is reducible");
      break;
    }
    default:
      break;
  }
  return warnings;
}

template <class K>
Matrix<K> make_block(const BlockSpec<K>& spec) {
  validate_block_spec(spec);
  Matrix<K> m;
  switch (spec.kind) {
    case BlockKind::Jordan: m = jordan_block(spec.n, spec.a); break;
    case BlockKind::RealifiedJordan: m = realified_jordan(spec.n, spec.a, spec.b); break;
    case BlockKind::Frobenius: m = companion_matrix(spec.p.pow(static_cast<int>(spec.s))); break;
    case BlockKind::Omega: m = omega_matrix<K>(spec.n); break;
    case BlockKind::P: m = p_block<K>(spec.n); break;
    case BlockKind::Pprime: m = pprime_block<K>(spec.n); break;
    case BlockKind::Q: m = q_block(spec.n, spec.c); break;
    case BlockKind::Qprime: m = qprime_block(spec.n, spec.c); break;
  }
  if (spec.sign == -1) m = -m;
  return m;
}

// ---------------------------------------------------------------------------
// structural predicates

template <class K>
bool is_symplectic(const Matrix<K>& s, const Tol& tol = {}) {
  if (!s.is_square() || s.rows() % 2 != 0)
    throw PreconditionError("is_symplectic: even square size required");
  Matrix<K> om = omega_matrix<K>(s.rows() / 2);
  return matrix_eq(s.transpose() * om * s, om, tol);
}

template <class K>
bool is_hamiltonian(const Matrix<K>& h, const Tol& tol = {}) {
  if (!h.is_square() || h.rows() % 2 != 0)
    throw PreconditionError("is_hamiltonian: even square size required");
  return is_symmetric(omega_matrix<K>(h.rows() / 2) * h, tol);
}

// The correspondence between quadratic-form matrices and Hamiltonian
// matrices: H = Omega * A, A = -Omega * H (Omega^2 = -I).
template <class K>
Matrix<K> hamiltonian_from_form(const Matrix<K>& a) {
  if (!a.is_square() || a.rows() % 2 != 0)
    throw PreconditionError("hamiltonian_from_form: even square size required");
  return omega_matrix<K>(a.rows() / 2) * a;
}

template <class K>
Matrix<K> form_from_hamiltonian(const Matrix<K>& h) {
  if (!h.is_square() || h.rows() % 2 != 0)
    throw PreconditionError("form_from_hamiltonian: even square size required");
  return -(omega_matrix<K>(h.rows() / 2) * h);
}

// ---------------------------------------------------------------------------
// tilde companions

// A pair (Psi, M) with M nonsingular skew-symmetric and M*Psi symmetric.
template <class K>
struct TildePsi {
  Matrix<K> psi, tilde;

  TildePsi(Matrix<K> psi_in, Matrix<K> tilde_in, const Tol& tol = {})
      : psi(std::move(psi_in)), tilde(std::move(tilde_in)) {
    if (!psi.is_square() || !tilde.is_square() || psi.rows() != tilde.rows())
      throw PreconditionError("tilde pair: square matrices of equal size required");
    if (!is_skew_symmetric(tilde, tol))
      throw PreconditionError("tilde pair: companion must be skew-symmetric");
    bool nonsingular;
    if constexpr (scalar_traits<K>::is_exact) {
      nonsingular = !scalar_traits<K>::is_zero(det(tilde));
    } else {
      nonsingular = rank(tilde, tol) == tilde.rows();
    }
    if (!nonsingular) throw PreconditionError("tilde pair: companion must be nonsingular");
    if (!is_symmetric(tilde * psi, tol))
      throw PreconditionError("tilde pair: product must be symmetric");
  }
};

// The canonical pair built from a square Phi: ([[0, Phi], [Phi^T, 0]], Omega).
template <class K>
MatrixPair<K> make_pair_type_i(const Matrix<K>& phi, const Tol& tol = {}) {
  if (!phi.is_square()) throw PreconditionError("make_pair_type_i: square matrix required");
  std::size_t n = phi.rows();
  Matrix<K> a(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      a(i, n + j) = phi(i, j);
      a(n + j, i) = phi(i, j);
    }
  return MatrixPair<K>(std::move(a), omega_matrix<K>(n), tol);
}

// The canonical pair (M*Psi, M) scaled by an even polynomial f evaluated at
// Psi: (M Psi f(Psi), M f(Psi)).
template <class K>
MatrixPair<K> make_pair_type_ii(const TildePsi<K>& t, const Polynomial<K>& f,
                                const Tol& tol = {}) {
  if (f.degree() < 0) throw PreconditionError("make_pair_type_ii: f must be nonzero");
  if (!poly_is_even(f, tol))
    throw PreconditionError("make_pair_type_ii: f must contain only even powers");
  Matrix<K> fpsi = poly_eval_matrix(f, t.psi);
  return MatrixPair<K>(t.tilde * t.psi * fpsi, t.tilde * fpsi, tol);
}

// Existence test for the tilde companion, given Psi and the irreducible
// factor p of its characteristic polynomial (chi = p^s is re-verified).
// The regime decides which form of the condition applies:
//   - general exact field: size even, and p = x or p has only even powers
//   - algebraically-closed-like: size even and p = x
//   - real-closed-like: size even, and p = x or p = x^2 + b with b > 0
template <class K>
bool tilde_exists(const Matrix<K>& psi, const Polynomial<K>& p, const Tol& tol = {},
                  FieldRegime regime = scalar_traits<K>::regime) {
  if (!psi.is_square()) throw PreconditionError("tilde_exists: square matrix required");
  std::size_t n = psi.rows();
  int d = p.degree();
  if (d < 1) throw PreconditionError("tilde_exists: factor of degree >= 1 required");
  if (n % static_cast<std::size_t>(d) != 0)
    throw PreconditionError("tilde_exists: characteristic polynomial is not a power of p");
  Polynomial<K> chi = char_poly(psi);
  Polynomial<K> ps = p.make_monic().pow(static_cast<int>(n / static_cast<std::size_t>(d)));
  bool matches;
  if constexpr (scalar_traits<K>::is_exact) {
    matches = (chi == ps);
  } else {
    matches = true;
    double scale = 1.0;
    for (int i = 0; i <= chi.degree(); ++i)
      scale = std::max(scale, scalar_traits<K>::abs_approx(chi.coeff(i)));
    for (int i = 0; i <= std::max(chi.degree(), ps.degree()); ++i)
      if (scalar_traits<K>::abs_approx(chi.coeff(i) - ps.coeff(i)) > tol.eps * scale) {
        matches = false;
        break;
      }
  }
  if (!matches)
    throw PreconditionError("tilde_exists: characteristic polynomial is not a power of p");

  if (n % 2 != 0) return false;
  Polynomial<K> pm = p.make_monic();
  bool p_is_x = (pm.degree() == 1 && scalar_is_zero(pm.coeff(0), tol));
  if (p_is_x) return true;
  switch (regime) {
    case FieldRegime::ClosedLike:
      return false;
    case FieldRegime::GeneralExact:
      return poly_is_even(pm, tol);
    case FieldRegime::RealLike: {
      if (pm.degree() != 2 || !poly_is_even(pm, tol)) return false;
      const K b = pm.coeff(0);
      if constexpr (scalar_traits<K>::is_complex) {
        return false;
      } else {
        return detail::positive(b);
      }
    }
  }
  return false;
}

// Constructs the tilde companion for a nilpotent Psi with a single Jordan
// chain (even size n, rank n-1): a Jordan-chain basis T with Psi = T J T^-1
// is computed and the companion is T^-T K T^-1 for the alternating
// anti-diagonal K.
template <class K>
TildePsi<K> make_tilde_nilpotent(const Matrix<K>& psi, const Tol& tol = {}) {
  if (!psi.is_square()) throw PreconditionError("make_tilde_nilpotent: square matrix required");
  std::size_t n = psi.rows();
  if (n % 2 != 0) throw PreconditionError("make_tilde_nilpotent: even size required");
  if (rank(psi, tol) != n - 1)
    throw PreconditionError("make_tilde_nilpotent: a single Jordan chain is required");
  Matrix<K> power = Matrix<K>::identity(n);
  for (std::size_t k = 0; k + 1 < n; ++k) power = power * psi;  // psi^(n-1)
  if (matrix_eq(power * psi, Matrix<K>::zero(n, n), tol) == false)
    throw PreconditionError("make_tilde_nilpotent: matrix is not nilpotent");
  // chain generator: first standard basis vector not annihilated by psi^(n-1)
  std::size_t gen = n;
  double best = 0;
  for (std::size_t j = 0; j < n; ++j) {
    bool nonzero = false;
    double mag = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!scalar_is_zero(power(i, j), tol)) nonzero = true;
      mag = std::max(mag, scalar_traits<K>::abs_approx(power(i, j)));
    }
    if (!nonzero) continue;
    if constexpr (scalar_traits<K>::is_exact) {
      gen = j;
      break;
    } else {
      // floating: prefer the best-conditioned generator
      if (mag > best) {
        best = mag;
        gen = j;
      }
    }
  }
  if (gen == n) throw PreconditionError("make_tilde_nilpotent: matrix is nilpotent of lower index");
  Matrix<K> basis(n, n);
  std::vector<K> v(n, K(0));
  v[gen] = K(1);
  for (std::size_t k = n; k-- > 0;) {
    basis.set_col(k, v);
    // v <- psi v
    std::vector<K> next(n, K(0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) next[i] += psi(i, j) * v[j];
    v = std::move(next);
  }
  Matrix<K> s = inverse(basis);
  Matrix<K> tilde = s.transpose() * detail::alternating_antidiagonal<K>(n) * s;
  return TildePsi<K>(psi, tilde, tol);
}

// The canonical set of tilde-admitting representatives of size 2n, each with
// companion Omega. Closed-like scalars get the single nilpotent
// representative -Omega P; ordered scalars additionally get -Omega Q(c) for
// every requested parameter value c > 0.
template <class K>
std::vector<TildePsi<K>> canonical_tilde_representatives(
    std::size_t n, const std::vector<K>& cs = {}, const Tol& tol = {},
    FieldRegime regime = scalar_traits<K>::regime) {
  if (n == 0) throw PreconditionError("canonical_tilde_representatives: n >= 1 required");
  Matrix<K> om = omega_matrix<K>(n);
  std::vector<TildePsi<K>> out;
  out.emplace_back(-(om * p_block<K>(n)), om, tol);
  if (!cs.empty()) {
    if (regime == FieldRegime::ClosedLike)
      throw PreconditionError(
          "canonical_tilde_representatives: parametrized representatives need an ordered field");
    if constexpr (scalar_traits<K>::is_complex) {
      throw PreconditionError(
          "canonical_tilde_representatives: parametrized representatives need an ordered field");
    } else {
      for (const K& c : cs) {
        if (!detail::positive(c))
          throw PreconditionError("canonical_tilde_representatives: c > 0 required");
        out.emplace_back(-(om * q_block(n, c)), om, tol);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// similarity transforms used by the self-verification identities

namespace detail {

// diag of signs (-1)^floor((i - offset)/2), 1-based i; offset 1 gives the
// pattern (+ + - - + + ...), offset 0 gives (+ - - + + - - ...).
template <class K>
Matrix<K> pair_sign_diagonal(std::size_t n, int offset) {
  Matrix<K> m(n, n);
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t q = (i - static_cast<std::size_t>(offset)) / 2;
    m(i - 1, i - 1) = (q % 2 == 0) ? K(1) : K(-1);
  }
  return m;
}

}  // namespace detail

// The realified Jordan form written with companion cells: m-block bidiagonal
// with C = [[0,1],[-c^2,0]] on the diagonal and I2 above. Similar to
// realified_jordan(m, 0, c) by the per-cell scaling diag(1, c).
template <class K>
Matrix<K> realified_jordan_companion(std::size_t m, const K& c) {
  if (m == 0) throw PreconditionError("realified_jordan_companion: m >= 1 required");
  Matrix<K> r(2 * m, 2 * m);
  const K c2 = c * c;
  for (std::size_t k = 0; k < m; ++k) {
    r(2 * k, 2 * k + 1) = K(1);
    r(2 * k + 1, 2 * k) = -c2;
    if (k + 1 < m) {
      r(2 * k, 2 * k + 2) = K(1);
      r(2 * k + 1, 2 * k + 3) = K(1);
    }
  }
  return r;
}

// per-cell scaling diag(1, c) ⊕ ... ⊕ diag(1, c) (m cells) conjugating the
// companion-cell realified form into the rotation-cell one.
template <class K>
Matrix<K> companion_to_rotation_scaling(std::size_t m, const K& c) {
  Matrix<K> d(2 * m, 2 * m);
  for (std::size_t k = 0; k < m; ++k) {
    d(2 * k, 2 * k) = K(1);
    d(2 * k + 1, 2 * k + 1) = c;
  }
  return d;
}

// basis change reducing Omega * qprime_block(n, c) (odd n) to companion form
template <class K>
Matrix<K> qprime_similarity(std::size_t n) {
  std::vector<Matrix<K>> parts{flip_matrix<K>(n), detail::pair_sign_diagonal<K>(n, 1)};
  return direct_sum(parts);
}

// basis change reducing Omega * q_block(n, c) (even n) to the block-triangular
// companion form with the corner coupling cell
template <class K>
Matrix<K> q_even_similarity(std::size_t n) {
  std::vector<Matrix<K>> parts{flip_matrix<K>(n), detail::pair_sign_diagonal<K>(n, 0)};
  return direct_sum(parts);
}

}  // namespace sympcan
