#pragma once

// Eigenstructure extraction feeding the canonicalization algorithms:
// eigenvalues in the closure field, Jordan block-size partitions recovered
// from rank sequences (Weyr duality), and explicit Jordan chains.
//
// Exact backends locate eigenvalues in the Gaussian rationals — degree <= 2
// factors algebraically, higher degrees by verified reconstruction of
// floating candidates — and refuse spectra that do not split there
// (UnsupportedSpectrumError). Floating backends cluster eigenvalue estimates
// and make every rank decision through the relative-gap rule.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <functional>
#include <map>
#include <vector>

#include "sympcan/blocks.hpp"
#include "sympcan/matrix.hpp"

namespace sympcan {

struct SpectraOptions {
  Tol tol{};                  // rank and zero decisions
  double cluster_eps = 1e-5;  // eigenvalue clustering unit (floating backends).
                              // Kept separate from tol.eps: the eigenvalue cloud
                              // of a size-k Jordan block spreads like eps^(1/k),
                              // far above roundoff for k >= 2.
  long long max_den = 1000000000000LL;  // reconstruction bound (exact backends)
};

template <class K>
struct EigenvalueBlocks {
  closure_t<K> value;
  std::vector<std::size_t> sizes;  // descending
};

template <class K>
struct JordanStructure {
  std::vector<EigenvalueBlocks<K>> eigens;
  std::size_t dimension = 0;

  std::size_t multiplicity_at(std::size_t i) const {
    std::size_t m = 0;
    for (auto s : eigens[i].sizes) m += s;
    return m;
  }
};

// One chain per Jordan block: column j of `vectors` is v_{j+1}, with
// (M - lambda I) v_1 = 0 and (M - lambda I) v_{j+1} = v_j.
template <class K>
struct JordanChain {
  closure_t<K> value;
  Matrix<closure_t<K>> vectors;  // n x (block size)
};

namespace detail {

// deterministic eigenvalue ordering: by real part, then imaginary part
inline bool closure_less(const GaussianRational& a, const GaussianRational& b) {
  if (a.re() != b.re()) return a.re() < b.re();
  return a.im() < b.im();
}
inline bool closure_less(const std::complex<double>& a, const std::complex<double>& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

template <class L>
std::size_t rank_normalized(const Matrix<L>& p, const Tol& tol) {
  if constexpr (scalar_traits<L>::is_exact) {
    return rank(p);
  } else {
    double nrm = p.fro_norm();
    if (nrm == 0) return 0;
    Matrix<L> q = L(1.0 / nrm) * p;
    return rank(q, tol);
  }
}

// Weyr data at one eigenvalue: d[k-1] = rank((M-lambda)^{k-1}) - rank((M-lambda)^k)
// counts[k-1] = number of Jordan blocks of size exactly k.
struct WeyrData {
  std::vector<std::size_t> d;
  std::vector<std::size_t> counts;
  std::size_t largest = 0;
};

template <class L>
WeyrData weyr_at(const Matrix<L>& m, const L& lambda, std::size_t mult, const Tol& tol) {
  std::size_t n = m.rows();
  Matrix<L> shifted = m;
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= lambda;
  if constexpr (!scalar_traits<L>::is_exact) {
    double nrm = shifted.fro_norm();
    if (nrm > 0) shifted = L(1.0 / nrm) * shifted;
  }
  WeyrData w;
  Matrix<L> power = shifted;
  // A product of normalized factors whose norm sinks to roundoff level is an
  // exact zero plus noise; renormalizing it would amplify the noise to a full
  // rank matrix, so collapse is tracked explicitly.
  bool collapsed = false;
  std::size_t r_prev = n, accounted = 0;
  for (std::size_t k = 1; k <= n && accounted < mult; ++k) {
    std::size_t r = collapsed ? 0 : rank_normalized(power, tol);
    if (r > r_prev)
      throw IndeterminateError("jordan structure: rank sequence increased");
    std::size_t dk = r_prev - r;
    if (dk == 0) break;
    if (!w.d.empty() && dk > w.d.back())
      throw IndeterminateError("jordan structure: rank differences not monotone");
    w.d.push_back(dk);
    accounted += dk;
    r_prev = r;
    if (accounted < mult && !collapsed) {
      power = power * shifted;
      if constexpr (!scalar_traits<L>::is_exact) {
        double nrm = power.fro_norm();
        if (nrm <= static_cast<double>(n) * tol.eps)
          collapsed = true;
        else
          power = L(1.0 / nrm) * power;
      }
    }
  }
  if (accounted != mult)
    throw IndeterminateError("jordan structure: rank sequence inconsistent with multiplicity");
  w.largest = w.d.size();
  w.counts.resize(w.largest);
  for (std::size_t k = 0; k < w.largest; ++k) {
    std::size_t next = (k + 1 < w.largest) ? w.d[k + 1] : 0;
    w.counts[k] = w.d[k] - next;
  }
  return w;
}

inline std::vector<std::size_t> sizes_from_weyr(const WeyrData& w) {
  std::vector<std::size_t> sizes;
  for (std::size_t k = w.largest; k-- > 0;)
    for (std::size_t c = 0; c < w.counts[k]; ++c) sizes.push_back(k + 1);
  return sizes;
}

// All complex roots of a polynomial, from the eigenvalues of its companion
// matrix. The polynomial need not be exactly monic-normalizable in floating
// arithmetic; make_monic handles both regimes.
template <class L>
std::vector<std::complex<double>> float_root_candidates(const Polynomial<L>& g) {
  Polynomial<L> m = g.make_monic();
  Matrix<std::complex<double>> comp =
      to_complex_matrix(companion_matrix(m));
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(to_eigen(comp), false);
  if (es.info() != Eigen::Success)
    throw IndeterminateError("root finding: eigenvalue iteration failed");
  std::vector<std::complex<double>> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    out.push_back(es.eigenvalues()(i));
  return out;
}

// Lift one floating estimate into the Gaussian rationals, trying successively
// looser reconstruction tolerances. Verification against the polynomial is the
// caller's job; this only proposes candidates.
inline std::optional<GaussianRational> reconstruct_gaussian(std::complex<double> z,
                                                            long long max_den) {
  double scale = std::max(1.0, std::abs(z));
  for (double t : {1e-12, 1e-9, 1e-6}) {
    auto re = rational_reconstruct(z.real(), max_den, t * scale);
    auto im = rational_reconstruct(z.imag(), max_den, t * scale);
    if (re && im) return GaussianRational(*re, *im);
  }
  return std::nullopt;
}

// Roots of a squarefree polynomial over the Gaussian rationals, all of them or
// UnsupportedSpectrumError. Degree <= 2 is solved algebraically (exact square
// root in Q(i)); higher degrees peel off verified reconstructions of floating
// candidates until the algebraic base case is reached.
inline std::vector<GaussianRational> squarefree_roots_gaussian(Polynomial<GaussianRational> g,
                                                               long long max_den) {
  using G = GaussianRational;
  std::vector<G> roots;
  g = g.make_monic();
  while (g.degree() > 2) {
    bool progressed = false;
    for (std::complex<double> cand : float_root_candidates(g)) {
      if (g.degree() <= 2) break;
      auto lam = reconstruct_gaussian(cand, max_den);
      if (!lam) continue;
      if (!g.eval(*lam).is_zero()) continue;
      Polynomial<G> lin{std::vector<G>{-*lam, G(1)}};
      auto [q, r] = poly_divmod(g, lin);
      if (!r.is_zero()) continue;
      roots.push_back(*lam);
      g = q;
      progressed = true;
    }
    if (!progressed)
      throw UnsupportedSpectrumError(
          "spectrum does not split over the Gaussian rationals (or exceeds the "
          "reconstruction bound)");
  }
  if (g.degree() == 1) {
    roots.push_back(-(g.coeff(0) / g.coeff(1)));
  } else if (g.degree() == 2) {
    Polynomial<G> m = g.make_monic();
    G b = m.coeff(1), c0 = m.coeff(0);
    G disc = b * b - G(4) * c0;
    auto s = gaussian_exact_sqrt(disc);
    if (!s)
      throw UnsupportedSpectrumError(
          "quadratic factor has no roots in the Gaussian rationals");
    G half(Rational(1, 2));
    roots.push_back((-b + *s) * half);
    roots.push_back((-b - *s) * half);
  }
  return roots;
}

// single-linkage clustering of floating eigenvalue estimates
inline std::vector<std::pair<std::complex<double>, std::size_t>> cluster_points(
    const std::vector<std::complex<double>>& pts, double threshold) {
  std::size_t n = pts.size();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(pts[i] - pts[j]) <= threshold) parent[find(i)] = find(j);
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::pair<std::complex<double>, std::size_t>> out;
  for (auto& [root, members] : groups) {
    std::complex<double> mean = 0;
    for (auto i : members) mean += pts[i];
    mean /= static_cast<double>(members.size());
    out.emplace_back(mean, members.size());
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// jordan_structure

template <class K>
JordanStructure<K> jordan_structure(const Matrix<K>& m, const SpectraOptions& opts = {}) {
  if (!m.is_square()) throw PreconditionError("jordan_structure: square matrix required");
  using L = closure_t<K>;
  std::size_t n = m.rows();
  JordanStructure<K> js;
  js.dimension = n;
  if (n == 0) return js;
  Matrix<L> ml = to_closure_matrix(m);

  if constexpr (scalar_traits<K>::is_exact) {
    Polynomial<K> chi_k = char_poly(m);
    std::vector<L> lifted(static_cast<std::size_t>(chi_k.degree()) + 1);
    for (int i = 0; i <= chi_k.degree(); ++i)
      lifted[static_cast<std::size_t>(i)] = scalar_traits<K>::to_closure(chi_k.coeff(i));
    Polynomial<L> chi(std::move(lifted));
    Polynomial<L> g = poly_squarefree_part(chi);
    std::vector<L> roots = detail::squarefree_roots_gaussian(g, opts.max_den);
    std::sort(roots.begin(), roots.end(),
              [](const L& a, const L& b) { return detail::closure_less(a, b); });
    for (const L& lam : roots) {
      // algebraic multiplicity by exact division
      std::size_t mult = 0;
      Polynomial<L> lin{std::vector<L>{-lam, L(1)}};
      Polynomial<L> rem = chi;
      while (true) {
        auto [q, r] = poly_divmod(rem, lin);
        if (!r.is_zero()) break;
        rem = q;
        ++mult;
      }
      auto w = detail::weyr_at(ml, lam, mult, opts.tol);
      js.eigens.push_back({lam, detail::sizes_from_weyr(w)});
    }
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(detail::to_eigen(ml), false);
    if (es.info() != Eigen::Success)
      throw IndeterminateError("jordan_structure: eigenvalue iteration failed");
    std::vector<std::complex<double>> evs;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      evs.push_back(es.eigenvalues()(i));
    double scale = std::max(1.0, m.fro_norm());
    double threshold = 10.0 * opts.cluster_eps * scale;
    auto clusters = detail::cluster_points(evs, threshold);

    if constexpr (!scalar_traits<K>::is_complex) {
      // real input: snap near-real centers and average conjugate partners
      for (auto& [center, mult] : clusters)
        if (std::abs(center.imag()) <= threshold) center = {center.real(), 0.0};
      std::vector<bool> consumed(clusters.size(), false);
      for (std::size_t i = 0; i < clusters.size(); ++i) {
        if (clusters[i].first.imag() <= 0) continue;
        bool paired = false;
        for (std::size_t j = 0; j < clusters.size(); ++j) {
          if (consumed[j] || clusters[j].first.imag() >= 0) continue;
          if (std::abs(std::conj(clusters[i].first) - clusters[j].first) <= 2 * threshold) {
            if (clusters[i].second != clusters[j].second)
              throw IndeterminateError(
                  "jordan_structure: conjugate clusters of unequal multiplicity");
            std::complex<double> c =
                (clusters[i].first + std::conj(clusters[j].first)) * 0.5;
            clusters[i].first = c;
            clusters[j].first = std::conj(c);
            consumed[j] = true;
            paired = true;
            break;
          }
        }
        if (!paired)
          throw IndeterminateError("jordan_structure: unpaired complex cluster for real input");
      }
    }

    std::sort(clusters.begin(), clusters.end(), [](const auto& a, const auto& b) {
      return detail::closure_less(a.first, b.first);
    });
    for (auto& [center, mult] : clusters) {
      auto w = detail::weyr_at(ml, L(center), mult, opts.tol);
      js.eigens.push_back({L(center), detail::sizes_from_weyr(w)});
    }
  }

  std::size_t covered = 0;
  for (std::size_t i = 0; i < js.eigens.size(); ++i) covered += js.multiplicity_at(i);
  if (covered != n)
    throw IndeterminateError("jordan_structure: block sizes do not cover the dimension");
  return js;
}

// ---------------------------------------------------------------------------
// jordan_chains

namespace detail {

// incremental independence bookkeeping over the closure field
template <class L>
class SpanTracker {
 public:
  explicit SpanTracker(std::size_t n) : n_(n) {}

  // exact: true rank growth; floating: Gram-Schmidt residual above threshold
  bool try_add(const std::vector<L>& v) {
    auto res = residual(v);
    if (!accept(res, v)) return false;
    push(std::move(res));
    return true;
  }

  // floating candidate ranking: larger residual = better conditioned choice
  double residual_norm(const std::vector<L>& v) const {
    auto res = residual(v);
    double s = 0;
    for (const auto& x : res) {
      double a = scalar_traits<L>::abs_approx(x);
      s += a * a;
    }
    return std::sqrt(s);
  }

 private:
  std::vector<L> residual(const std::vector<L>& v) const {
    std::vector<L> r = v;
    if constexpr (scalar_traits<L>::is_exact) {
      // eliminate with recorded pivots
      for (std::size_t c = 0; c < cols_.size(); ++c) {
        std::size_t piv = pivots_[c];
        if (scalar_traits<L>::is_zero(r[piv])) continue;
        L f = r[piv] / cols_[c][piv];
        for (std::size_t i = 0; i < n_; ++i) r[i] -= f * cols_[c][i];
      }
    } else {
      for (const auto& q : cols_) {
        L dot = scalar_traits<L>::zero();
        for (std::size_t i = 0; i < n_; ++i) dot += scalar_traits<L>::conj(q[i]) * r[i];
        for (std::size_t i = 0; i < n_; ++i) r[i] -= dot * q[i];
      }
    }
    return r;
  }

  bool accept(const std::vector<L>& res, const std::vector<L>& v) const {
    if constexpr (scalar_traits<L>::is_exact) {
      for (const auto& x : res)
        if (!scalar_traits<L>::is_zero(x)) return true;
      return false;
    } else {
      double rn = 0, vn = 0;
      for (const auto& x : res) rn += scalar_traits<L>::abs_approx(x) * scalar_traits<L>::abs_approx(x);
      for (const auto& x : v) vn += scalar_traits<L>::abs_approx(x) * scalar_traits<L>::abs_approx(x);
      return std::sqrt(rn) > 1e-6 * std::max(1.0, std::sqrt(vn));
    }
  }

  void push(std::vector<L> res) {
    if constexpr (scalar_traits<L>::is_exact) {
      std::size_t piv = n_;
      for (std::size_t i = 0; i < n_; ++i)
        if (!scalar_traits<L>::is_zero(res[i])) {
          piv = i;
          break;
        }
      pivots_.push_back(piv);
      cols_.push_back(std::move(res));
    } else {
      double nrm = 0;
      for (const auto& x : res) nrm += scalar_traits<L>::abs_approx(x) * scalar_traits<L>::abs_approx(x);
      nrm = std::sqrt(nrm);
      L inv = L(1) / L(nrm);
      for (auto& x : res) x = x * inv;
      cols_.push_back(std::move(res));
    }
  }

  std::size_t n_;
  std::vector<std::vector<L>> cols_;
  std::vector<std::size_t> pivots_;
};

template <class L>
std::vector<L> mat_vec(const Matrix<L>& m, const std::vector<L>& v) {
  std::vector<L> out(m.rows(), scalar_traits<L>::zero());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!scalar_traits<L>::is_zero(m(i, j))) out[i] += m(i, j) * v[j];
  return out;
}

}  // namespace detail

// One chain per Jordan block at lambda, lengths matching the block-size
// multiset, jointly independent. Chains are built top-down: generators of the
// longest blocks first, each new generator independent of ker (M-lambda)^(j-1)
// and of the level-j members of previously built chains.
template <class K>
std::vector<JordanChain<K>> jordan_chains(const Matrix<K>& m, const closure_t<K>& lambda,
                                          const SpectraOptions& opts = {}) {
  using L = closure_t<K>;
  if (!m.is_square()) throw PreconditionError("jordan_chains: square matrix required");
  std::size_t n = m.rows();
  Matrix<L> ml = to_closure_matrix(m);
  Matrix<L> shifted = ml;
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= lambda;
  // floating work happens on the normalized shift; the scale is restored when
  // chain vectors are propagated so v_{t-1} = (m - lambda) v_t holds exactly
  double shift_scale = 1.0;
  if constexpr (!scalar_traits<K>::is_exact) {
    double nrm = shifted.fro_norm();
    if (nrm > 0) {
      shifted = L(1.0 / nrm) * shifted;
      shift_scale = nrm;
    }
  }

  // multiplicity = dimension loss of the stabilized power
  std::size_t mult = 0;
  {
    Matrix<L> p = shifted;
    bool collapsed = false;
    std::size_t r_prev = n;
    for (std::size_t k = 1; k <= n; ++k) {
      std::size_t r = collapsed ? 0 : detail::rank_normalized(p, opts.tol);
      if (r == r_prev) break;
      mult += r_prev - r;
      r_prev = r;
      if (collapsed) break;
      p = p * shifted;
      if constexpr (!scalar_traits<K>::is_exact) {
        double nr = p.fro_norm();
        if (nr <= static_cast<double>(n) * opts.tol.eps)
          collapsed = true;
        else
          p = L(1.0 / nr) * p;
      }
    }
  }
  if (mult == 0) throw PreconditionError("jordan_chains: not an eigenvalue");
  auto w = detail::weyr_at(ml, lambda, mult, opts.tol);

  // kernel bases of the shifted powers, with nullities known from the Weyr data
  std::vector<Matrix<L>> kernels(w.largest + 1);
  {
    Matrix<L> p = Matrix<L>::identity(n);
    std::size_t nullity = 0;
    for (std::size_t j = 1; j <= w.largest; ++j) {
      p = p * shifted;
      if constexpr (!scalar_traits<K>::is_exact) {
        double nr = p.fro_norm();
        // a power that collapses to roundoff level is an exact zero: replace
        // it by the zero matrix so its kernel is computed as the full space
        if (nr <= static_cast<double>(n) * opts.tol.eps)
          p = Matrix<L>(n, n);
        else
          p = L(1.0 / nr) * p;
      }
      nullity += w.d[j - 1];
      kernels[j] = nullspace(p, opts.tol, static_cast<int>(nullity));
    }
  }

  std::vector<JordanChain<K>> chains;
  detail::SpanTracker<L> span(n);
  // chains are discovered longest-first; level-j members of longer chains are
  // folded into the span before generators of length-j chains are chosen
  for (std::size_t j = w.largest; j >= 1; --j) {
    // rebuild the span: ker^(j-1) plus level-j members of existing chains
    detail::SpanTracker<L> level(n);
    if (j >= 2) {
      const Matrix<L>& kb = kernels[j - 1];
      for (std::size_t c = 0; c < kb.cols(); ++c)
        level.try_add(kb.col(c));
    }
    for (const auto& ch : chains)
      if (ch.vectors.cols() >= j) level.try_add(ch.vectors.col(j - 1));

    std::size_t need = w.counts[j - 1];
    const Matrix<L>& cand = kernels[j];
    std::vector<bool> used(cand.cols(), false);
    for (std::size_t picked = 0; picked < need; ++picked) {
      std::size_t best = cand.cols();
      if constexpr (scalar_traits<K>::is_exact) {
        for (std::size_t c = 0; c < cand.cols(); ++c) {
          if (used[c]) continue;
          if (level.try_add(cand.col(c))) {
            best = c;
            break;
          }
        }
      } else {
        double best_res = 0;
        for (std::size_t c = 0; c < cand.cols(); ++c) {
          if (used[c]) continue;
          double r = level.residual_norm(cand.col(c));
          if (r > best_res) {
            best_res = r;
            best = c;
          }
        }
        if (best != cand.cols() && !level.try_add(cand.col(best))) best = cand.cols();
      }
      if (best == cand.cols())
        throw IndeterminateError("jordan_chains: failed to extend chain basis");
      used[best] = true;
      // build the chain v_j = generator, v_{t-1} = shifted v_t
      Matrix<L> vecs(n, j);
      std::vector<L> v = cand.col(best);
      for (std::size_t t = j; t >= 1; --t) {
        for (std::size_t i = 0; i < n; ++i) vecs(i, t - 1) = v[i];
        if (t > 1) {
          v = detail::mat_vec(shifted, v);
          if constexpr (!scalar_traits<K>::is_exact)
            for (auto& x : v) x *= L(shift_scale);
        }
      }
      chains.push_back(JordanChain<K>{lambda, std::move(vecs)});
    }
    if (j == 1) break;
  }
  return chains;
}

// ---------------------------------------------------------------------------
// similarity

template <class K>
bool is_similar(const Matrix<K>& a, const Matrix<K>& b, const SpectraOptions& opts = {}) {
  if (!a.is_square() || !b.is_square() || a.rows() != b.rows())
    throw PreconditionError("is_similar: square matrices of equal size required");
  auto ja = jordan_structure(a, opts);
  auto jb = jordan_structure(b, opts);
  if (ja.eigens.size() != jb.eigens.size()) return false;
  if constexpr (scalar_traits<K>::is_exact) {
    for (std::size_t i = 0; i < ja.eigens.size(); ++i) {
      if (!(ja.eigens[i].value == jb.eigens[i].value)) return false;
      if (ja.eigens[i].sizes != jb.eigens[i].sizes) return false;
    }
    return true;
  } else {
    double scale = std::max({1.0, a.fro_norm(), b.fro_norm()});
    double threshold = 10.0 * opts.cluster_eps * scale;
    std::vector<bool> taken(jb.eigens.size(), false);
    for (const auto& ea : ja.eigens) {
      bool matched = false;
      for (std::size_t j = 0; j < jb.eigens.size(); ++j) {
        if (taken[j]) continue;
        if (std::abs(ea.value - jb.eigens[j].value) <= threshold &&
            ea.sizes == jb.eigens[j].sizes) {
          taken[j] = true;
          matched = true;
          break;
        }
      }
      if (!matched) return false;
    }
    return true;
  }
}

}  // namespace sympcan
