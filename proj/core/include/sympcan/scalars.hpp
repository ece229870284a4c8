#pragma once

// Scalar backends.
//
// Four field backends share one compile-time interface:
//   Rational          exact, ordered        (arbitrary precision, plays the real role)
//   GaussianRational  exact, complex-like   (Rational + i*Rational)
//   double            floating, ordered
//   std::complex<double> floating, complex-like
//
// Exact scalars compare exactly; floating scalars compare through a
// relative-plus-absolute tolerance. Every algorithm in the library is
// templated over one of these types and consults scalar_traits for the
// regime-dependent choices.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sympcan/errors.hpp"

namespace sympcan {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Arbitrary-precision rational. Invariants (maintained by the underlying
// representation): lowest terms, positive denominator, zero is 0/1.
class Rational {
 public:
  Rational() = default;
  Rational(int v) : v_(v) {}                 // NOLINT implicit by design
  Rational(long long v) : v_(v) {}           // NOLINT
  Rational(const BigInt& v) : v_(v) {}       // NOLINT
  Rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw PreconditionError("rational: zero denominator");
    v_ = BigRat(num, den);
  }

  static Rational parse(std::string_view s);

  BigInt num() const { return boost::multiprecision::numerator(v_); }
  BigInt den() const { return boost::multiprecision::denominator(v_); }

  bool is_zero() const { return v_.is_zero(); }
  bool is_one() const { return v_ == 1; }
  int sign() const { return v_ < 0 ? -1 : (v_ > 0 ? 1 : 0); }

  Rational operator-() const { return Rational(BigRat(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw PreconditionError("rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  Rational abs() const { return v_ < 0 ? -(*this) : *this; }

  double to_double() const { return v_.convert_to<double>(); }

  // "p/q" with q > 0 in lowest terms; the denominator is always printed.
  std::string str() const { return num().str() + "/" + den().str(); }

  // Exact square root when the value is a square of a rational, else nullopt.
  std::optional<Rational> exact_sqrt() const;

 private:
  explicit Rational(const BigRat& v) : v_(v) {}
  BigRat v_;
};

inline Rational Rational::parse(std::string_view s) {
  auto bad = [&] { throw ParseError("rational: cannot parse '" + std::string(s) + "'"); };
  if (s.empty()) bad();
  std::string num, den = "1";
  auto slash = s.find('/');
  if (slash == std::string_view::npos) {
    num = std::string(s);
  } else {
    num = std::string(s.substr(0, slash));
    den = std::string(s.substr(slash + 1));
    if (num.empty() || den.empty()) bad();
  }
  auto check_int = [&](const std::string& t) {
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) bad();
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) bad();
  };
  check_int(num);
  check_int(den);
  BigInt q(den);
  if (q == 0) bad();
  return Rational(BigInt(num), q);
}

inline std::optional<Rational> Rational::exact_sqrt() const {
  if (v_ < 0) return std::nullopt;
  if (v_.is_zero()) return Rational(0);
  BigInt n = num(), d = den();
  BigInt rn = boost::multiprecision::sqrt(n), rd = boost::multiprecision::sqrt(d);
  if (rn * rn != n || rd * rd != d) return std::nullopt;
  return Rational(rn, rd);
}

// Exact complex scalar: re + i*im with rational parts.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(int v) : re_(v) {}                       // NOLINT
  GaussianRational(long long v) : re_(v) {}                 // NOLINT
  GaussianRational(const Rational& re) : re_(re) {}         // NOLINT
  GaussianRational(const Rational& re, const Rational& im) : re_(re), im_(im) {}

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_real() const { return im_.is_zero(); }

  GaussianRational conj() const { return {re_, -im_}; }
  Rational norm() const { return re_ * re_ + im_ * im_; }  // |z|^2

  GaussianRational operator-() const { return {-re_, -im_}; }
  GaussianRational& operator+=(const GaussianRational& o) {
    re_ += o.re_; im_ += o.im_; return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re_ -= o.re_; im_ -= o.im_; return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    Rational r = re_ * o.re_ - im_ * o.im_;
    Rational i = re_ * o.im_ + im_ * o.re_;
    re_ = r; im_ = i; return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o) {
    Rational n = o.norm();
    if (n.is_zero()) throw PreconditionError("gaussian rational: division by zero");
    GaussianRational t = *this;
    t *= o.conj();
    re_ = t.re_ / n; im_ = t.im_ / n; return *this;
  }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  std::complex<double> to_complex() const { return {re_.to_double(), im_.to_double()}; }

  std::string str() const { return re_.str() + (im_.sign() >= 0 ? "+" : "") + im_.str() + "i"; }

 private:
  Rational re_, im_;
};

inline GaussianRational gaussian_i() { return {Rational(0), Rational(1)}; }

// Floating comparison context. eps drives scalar equality and structural
// validation; exact backends ignore it.
struct Tol {
  double eps = 1e-9;
};

enum class FieldRegime {
  GeneralExact,  // exact ordered field, no closure assumption
  RealLike,      // behaves as a real closed field
  ClosedLike,    // behaves as an algebraically closed field
};

template <class K>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool is_exact = true;
  static constexpr bool is_complex = false;
  static constexpr FieldRegime regime = FieldRegime::GeneralExact;
  using real_type = Rational;
  using closure_type = GaussianRational;
  static Rational zero() { return 0; }
  static Rational one() { return 1; }
  static Rational from_int(long long v) { return v; }
  static Rational conj(const Rational& x) { return x; }
  static Rational re(const Rational& x) { return x; }
  static Rational im(const Rational&) { return 0; }
  static bool is_zero(const Rational& x) { return x.is_zero(); }
  static double abs_approx(const Rational& x) { return std::fabs(x.to_double()); }
  static std::complex<double> to_complex(const Rational& x) { return {x.to_double(), 0.0}; }
  static GaussianRational to_closure(const Rational& x) { return {x, Rational(0)}; }
};

template <>
struct scalar_traits<GaussianRational> {
  static constexpr bool is_exact = true;
  static constexpr bool is_complex = true;
  static constexpr FieldRegime regime = FieldRegime::ClosedLike;
  using real_type = Rational;
  using closure_type = GaussianRational;
  static GaussianRational zero() { return 0; }
  static GaussianRational one() { return 1; }
  static GaussianRational from_int(long long v) { return v; }
  static GaussianRational conj(const GaussianRational& x) { return x.conj(); }
  static Rational re(const GaussianRational& x) { return x.re(); }
  static Rational im(const GaussianRational& x) { return x.im(); }
  static bool is_zero(const GaussianRational& x) { return x.is_zero(); }
  static double abs_approx(const GaussianRational& x) { return std::abs(x.to_complex()); }
  static std::complex<double> to_complex(const GaussianRational& x) { return x.to_complex(); }
  static GaussianRational to_closure(const GaussianRational& x) { return x; }
};

template <>
struct scalar_traits<double> {
  static constexpr bool is_exact = false;
  static constexpr bool is_complex = false;
  static constexpr FieldRegime regime = FieldRegime::RealLike;
  using real_type = double;
  using closure_type = std::complex<double>;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double from_int(long long v) { return static_cast<double>(v); }
  static double conj(double x) { return x; }
  static double re(double x) { return x; }
  static double im(double) { return 0.0; }
  static bool is_zero(double x) { return x == 0.0; }
  static double abs_approx(double x) { return std::fabs(x); }
  static std::complex<double> to_complex(double x) { return {x, 0.0}; }
  static std::complex<double> to_closure(double x) { return {x, 0.0}; }
};

template <>
struct scalar_traits<std::complex<double>> {
  static constexpr bool is_exact = false;
  static constexpr bool is_complex = true;
  static constexpr FieldRegime regime = FieldRegime::ClosedLike;
  using real_type = double;
  using closure_type = std::complex<double>;
  static std::complex<double> zero() { return {0.0, 0.0}; }
  static std::complex<double> one() { return {1.0, 0.0}; }
  static std::complex<double> from_int(long long v) { return {static_cast<double>(v), 0.0}; }
  static std::complex<double> conj(const std::complex<double>& x) { return std::conj(x); }
  static double re(const std::complex<double>& x) { return x.real(); }
  static double im(const std::complex<double>& x) { return x.imag(); }
  static bool is_zero(const std::complex<double>& x) { return x.real() == 0.0 && x.imag() == 0.0; }
  static double abs_approx(const std::complex<double>& x) { return std::abs(x); }
  static std::complex<double> to_complex(const std::complex<double>& x) { return x; }
  static std::complex<double> to_closure(const std::complex<double>& x) { return x; }
};

template <class K>
using closure_t = typename scalar_traits<K>::closure_type;
template <class K>
using real_t = typename scalar_traits<K>::real_type;

// a == b exactly for exact backends; |a-b| <= eps*max(1,|a|,|b|) for floating.
template <class K>
bool scalar_eq(const K& a, const K& b, const Tol& tol = {}) {
  if constexpr (scalar_traits<K>::is_exact) {
    return a == b;
  } else {
    double aa = scalar_traits<K>::abs_approx(a);
    double bb = scalar_traits<K>::abs_approx(b);
    double scale = std::max({1.0, aa, bb});
    return scalar_traits<K>::abs_approx(a - b) <= tol.eps * scale;
  }
}

template <class K>
bool scalar_is_zero(const K& x, const Tol& tol = {}) {
  return scalar_eq(x, scalar_traits<K>::zero(), tol);
}

// Best rational approximation p/q of x with q <= max_den and |x - p/q| <= tol,
// by continued fractions. Used to lift floating eigenvalue estimates into the
// exact field before exact verification; never trusted on its own.
std::optional<Rational> rational_reconstruct(double x, long long max_den, double tol);

inline std::optional<Rational> rational_reconstruct(double x, long long max_den, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  if (std::fabs(x) <= tol) return Rational(0);
  // convergents of the continued fraction of x
  double v = x;
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int it = 0; it < 64; ++it) {
    double fa = std::floor(v);
    if (fa > 9.0e17 || fa < -9.0e17) break;
    long long a = static_cast<long long>(fa);
    long long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den || q2 < 0) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double approx = static_cast<double>(p1) / static_cast<double>(q1);
    if (std::fabs(x - approx) <= tol) return Rational(BigInt(p1), BigInt(q1));
    double frac = v - fa;
    if (frac < 1e-18) break;
    v = 1.0 / frac;
  }
  return std::nullopt;
}

// Exact square root over the Gaussian rationals when one exists. For
// d = p + qi, a root x + yi requires x^2 - y^2 = p and 2xy = q; with
// N = sqrt(p^2 + q^2) this forces x^2 = (p + N)/2, so d has a root iff both
// square roots work out rational.
inline std::optional<GaussianRational> gaussian_exact_sqrt(const GaussianRational& d) {
  const Rational& p = d.re();
  const Rational& q = d.im();
  if (q.is_zero()) {
    if (p.sign() >= 0) {
      auto r = p.exact_sqrt();
      if (!r) return std::nullopt;
      return GaussianRational(*r, Rational(0));
    }
    auto r = (-p).exact_sqrt();
    if (!r) return std::nullopt;
    return GaussianRational(Rational(0), *r);
  }
  auto n = (p * p + q * q).exact_sqrt();
  if (!n) return std::nullopt;
  auto x2 = (p + *n) / Rational(2);
  auto x = x2.exact_sqrt();
  if (!x || x->is_zero()) return std::nullopt;
  Rational y = q / (Rational(2) * (*x));
  GaussianRational root(*x, y);
  if (!(root * root == d)) return std::nullopt;
  return root;
}

}  // namespace sympcan
