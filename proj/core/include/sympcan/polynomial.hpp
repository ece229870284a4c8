#pragma once

// Dense univariate polynomials over a scalar backend.
//
// Coefficients are stored low degree first; the zero polynomial is the empty
// list and reports degree -1. All arithmetic prunes high-order zeros so the
// leading coefficient of a nonzero polynomial is never zero (exact compare on
// exact backends, bit-exact zero on floating ones).

#include <algorithm>
#include <initializer_list>
#include <string>
#include <vector>

#include "sympcan/errors.hpp"
#include "sympcan/scalars.hpp"

namespace sympcan {

template <class K>
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<K> coeffs) : c_(coeffs) { prune(); }
  explicit Polynomial(std::vector<K> coeffs) : c_(std::move(coeffs)) { prune(); }

  static Polynomial zero() { return {}; }
  static Polynomial constant(const K& v) { return Polynomial(std::vector<K>{v}); }
  static Polynomial x() { return Polynomial({K(0), K(1)}); }

  // x^n with coefficient c
  static Polynomial monomial(int n, const K& coeff) {
    if (n < 0) throw PreconditionError("polynomial: negative degree monomial");
    std::vector<K> c(static_cast<std::size_t>(n) + 1, K(0));
    c.back() = coeff;
    return Polynomial(std::move(c));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<K>& coeffs() const { return c_; }

  // coefficient of x^i (0 beyond the stored range)
  K coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return K(0);
    return c_[static_cast<std::size_t>(i)];
  }

  K leading() const {
    if (is_zero()) throw PreconditionError("polynomial: leading coefficient of zero");
    return c_.back();
  }

  Polynomial operator-() const {
    std::vector<K> r(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = -c_[i];
    return Polynomial(std::move(r));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<K> r(std::max(a.c_.size(), b.c_.size()), K(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<K> r(a.c_.size() + b.c_.size() - 1, K(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(const K& s, const Polynomial& p) {
    std::vector<K> r(p.c_.size());
    for (std::size_t i = 0; i < p.c_.size(); ++i) r[i] = s * p.c_[i];
    return Polynomial(std::move(r));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  Polynomial pow(int e) const {
    if (e < 0) throw PreconditionError("polynomial: negative power");
    Polynomial r = constant(K(1));
    for (int i = 0; i < e; ++i) r = r * (*this);
    return r;
  }

  K eval(const K& x) const {  // Horner
    K r(0);
    for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
    return r;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<K> r(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
      r[i - 1] = scalar_traits<K>::from_int(static_cast<long long>(i)) * c_[i];
    return Polynomial(std::move(r));
  }

  Polynomial make_monic() const {
    if (is_zero()) throw PreconditionError("polynomial: cannot normalize zero");
    K inv = K(1) / leading();
    return inv * (*this);
  }

  std::string str() const;

 private:
  void prune() {
    while (!c_.empty() && scalar_traits<K>::is_zero(c_.back())) c_.pop_back();
  }
  std::vector<K> c_;
};

// Quotient and remainder of exact polynomial division.
template <class K>
std::pair<Polynomial<K>, Polynomial<K>> poly_divmod(const Polynomial<K>& a, const Polynomial<K>& b) {
  if (b.is_zero()) throw PreconditionError("polynomial: division by zero polynomial");
  std::vector<K> rem(a.coeffs());
  int db = b.degree();
  K lead = b.leading();
  if (static_cast<int>(rem.size()) - 1 < db) return {Polynomial<K>{}, a};
  std::vector<K> quot(rem.size() - static_cast<std::size_t>(db), K(0));
  for (int i = static_cast<int>(rem.size()) - 1; i >= db; --i) {
    K c = rem[static_cast<std::size_t>(i)];
    if (scalar_traits<K>::is_zero(c)) continue;
    K q = c / lead;
    quot[static_cast<std::size_t>(i - db)] = q;
    for (int j = 0; j <= db; ++j)
      rem[static_cast<std::size_t>(i - db + j)] -= q * b.coeff(j);
  }
  return {Polynomial<K>(std::move(quot)), Polynomial<K>(std::move(rem))};
}

// Monic gcd by the Euclidean algorithm. Exact backends only.
template <class K>
Polynomial<K> poly_gcd(Polynomial<K> a, Polynomial<K> b) {
  static_assert(scalar_traits<K>::is_exact, "polynomial gcd requires an exact backend");
  while (!b.is_zero()) {
    auto [q, r] = poly_divmod(a, b);
    (void)q;
    a = b;
    b = r;
  }
  if (a.is_zero()) return a;
  return a.make_monic();
}

// Product of the distinct irreducible factors, each to the first power.
template <class K>
Polynomial<K> poly_squarefree_part(const Polynomial<K>& p) {
  static_assert(scalar_traits<K>::is_exact, "squarefree part requires an exact backend");
  if (p.degree() <= 0) return p;
  Polynomial<K> g = poly_gcd(p, p.derivative());
  if (g.degree() <= 0) return p.make_monic();
  auto [q, r] = poly_divmod(p, g);
  if (!r.is_zero()) throw Error("polynomial: squarefree division not exact");
  return q.make_monic();
}

// True when only even powers carry nonzero coefficients, i.e. p(x) = g(x^2).
// Floating coefficients are measured against the largest coefficient.
template <class K>
bool poly_is_even(const Polynomial<K>& p, const Tol& tol = {}) {
  if constexpr (scalar_traits<K>::is_exact) {
    for (int i = 1; i <= p.degree(); i += 2)
      if (!scalar_traits<K>::is_zero(p.coeff(i))) return false;
    return true;
  } else {
    double scale = 0;
    for (int i = 0; i <= p.degree(); ++i)
      scale = std::max(scale, scalar_traits<K>::abs_approx(p.coeff(i)));
    for (int i = 1; i <= p.degree(); i += 2)
      if (scalar_traits<K>::abs_approx(p.coeff(i)) > tol.eps * std::max(1.0, scale)) return false;
    return true;
  }
}

template <class K>
std::string Polynomial<K>::str() const {
  if (is_zero()) return "0";
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    const K& c = coeff(i);
    if (scalar_traits<K>::is_zero(c)) continue;
    if (!out.empty()) out += " + ";
    if constexpr (std::is_same_v<K, Rational>) {
      out += c.str();
    } else if constexpr (std::is_same_v<K, GaussianRational>) {
      out += "(" + c.str() + ")";
    } else {
      out += std::to_string(scalar_traits<K>::abs_approx(c));
    }
    if (i > 0) out += "*x^" + std::to_string(i);
  }
  return out;
}

}  // namespace sympcan
