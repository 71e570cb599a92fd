#ifndef TGE_TESTS_SUPPORT_HPP
#define TGE_TESTS_SUPPORT_HPP

// Shared fixtures and independent oracles for the test programs. Oracles here
// avoid the library's own algorithms: word sums are enumerated directly,
// determinants use cofactor expansion, spectra come from Eigen.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tge/tge.hpp"

namespace tge::test {

#ifndef TGE_FIXTURE_DIR
#error "TGE_FIXTURE_DIR must point at the fixtures directory"
#endif

inline std::string fixture(const std::string& name) { return std::string(TGE_FIXTURE_DIR) + "/" + name; }

inline CircleGraph e_pq(std::int64_t p, std::int64_t q) { return single_loop_graph(p, q); }

/// One vertex, loops e1 (p=2, q=1) and e2 (p=1, q=3).
inline CircleGraph two_loops() {
  return CircleGraph({"v"}, std::vector<EdgeSpec>{{"e1", "v", "v", 2, 1}, {"e2", "v", "v", 1, 3}});
}

/// Random valid graph: every vertex gets an incoming and an outgoing edge first.
inline CircleGraph random_graph(std::mt19937_64& rng, std::size_t max_vertices, std::size_t max_edges,
                                std::int64_t max_p, std::int64_t max_q = 4) {
  std::uniform_int_distribution<std::size_t> nv(1, max_vertices);
  const std::size_t n = nv(rng);
  std::vector<std::string> vs;
  for (std::size_t i = 0; i < n; ++i) vs.push_back("v" + std::to_string(i));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_int_distribution<std::int64_t> pd(1, max_p), qd(1, max_q);
  std::bernoulli_distribution neg(0.3);
  auto degree_q = [&] { return neg(rng) ? -qd(rng) : qd(rng); };

  std::vector<EdgeSpec> es;
  // A cycle through all vertices keeps the graph valid with n edges.
  const std::size_t edges = std::max(n, std::uniform_int_distribution<std::size_t>(n, std::max(n, max_edges))(rng));
  for (std::size_t i = 0; i < n; ++i)
    es.push_back({"c" + std::to_string(i), vs[i], vs[(i + 1) % n], pd(rng), degree_q()});
  for (std::size_t i = n; i < edges; ++i)
    es.push_back({"x" + std::to_string(i), vs[pick(rng)], vs[pick(rng)], pd(rng), degree_q()});
  return CircleGraph(vs, es);
}

// ---------------------------------------------------------------------------
// Word-sum oracles

/// Sum over paths e_1..e_k whose last edge leaves v of prod p(e_i).
inline BigInt source_paths_by_words(const CircleGraph& g, unsigned k, std::size_t v) {
  BigInt total = 0;
  for (const auto& w : enumerate_words(g, k, false)) {
    if (g.edge(w.edges.back()).source != v) continue;
    BigInt prod = 1;
    for (auto e : w.edges) prod *= g.edge(e).p;
    total += prod;
  }
  return total;
}

/// Sum over paths e_1..e_k whose first edge enters v of prod |q(e_i)|.
inline BigInt range_paths_by_words(const CircleGraph& g, unsigned k, std::size_t v) {
  BigInt total = 0;
  for (const auto& w : enumerate_words(g, k, false)) {
    if (g.edge(w.edges.front()).range != v) continue;
    BigInt prod = 1;
    for (auto e : w.edges) prod *= g.edge(e).q < 0 ? -g.edge(e).q : g.edge(e).q;
    total += prod;
  }
  return total;
}

/// Sum over closed words of |prod p - prod q|, and the number of degenerate words.
inline BigInt loops_by_words(const CircleGraph& g, unsigned k, std::size_t* degenerate = nullptr) {
  BigInt total = 0;
  std::size_t deg = 0;
  for (const auto& w : enumerate_words(g, k, true)) {
    BigInt pp = 1, qq = 1;
    for (auto e : w.edges) {
      pp *= g.edge(e).p;
      qq *= g.edge(e).q;
    }
    if (pp == qq) ++deg;
    total += pp > qq ? BigInt(pp - qq) : BigInt(qq - pp);
  }
  if (degenerate) *degenerate = deg;
  return total;
}

/// sum_k C(m,k) |2^(m-k) - 3^k|: loops of the two-loop graph.
inline BigInt two_loops_formula(unsigned m) {
  BigInt total = 0, binom = 1;
  for (unsigned k = 0; k <= m; ++k) {
    BigInt a = ipow(BigInt(2), m - k), b = ipow(BigInt(3), k);
    total += binom * (a > b ? BigInt(a - b) : BigInt(b - a));
    binom = binom * (m - k) / (k + 1);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Linear algebra oracles

inline BigInt cofactor_determinant(const ExactMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  BigInt det = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (m(0, c) == 0) continue;
    ExactMatrix minor(n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0, jj = 0; j < n; ++j)
        if (j != c) minor(i - 1, jj++) = m(i, j);
    BigInt term = m(0, c) * cofactor_determinant(minor);
    det += (c % 2 == 0) ? term : BigInt(-term);
  }
  return det;
}

inline double eigen_spectral_radius(const ExactMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      d(i, j) = to_double(m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
  Eigen::EigenSolver<Eigen::MatrixXd> es(d, false);
  double best = 0;
  for (Eigen::Index i = 0; i < n; ++i) best = std::max(best, std::abs(es.eigenvalues()(i)));
  return best;
}

inline ExactMatrix random_matrix(std::mt19937_64& rng, std::size_t n, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  ExactMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = d(rng);
  return m;
}

// ---------------------------------------------------------------------------
// Bimodule oracle

/// u_{r(e)} xi_{e,k} = xi_{e,k'} u^l with (k - 1) + q = (k' - 1) + p l, 1 <= k' <= p.
struct Wrap {
  std::int64_t k;
  std::int64_t power;
};

inline Wrap wrap_rule(std::int64_t p, std::int64_t q, std::int64_t k) {
  const std::int64_t shifted = (k - 1) + q;
  std::int64_t l = shifted >= 0 ? shifted / p : -((-shifted + p - 1) / p);
  return {shifted - p * l + 1, l};
}

// ---------------------------------------------------------------------------
// Random algebra words

/// A random product of up to `max_len` generators S, S*, u, u* with a small
/// rational coefficient, drawn from the graph's symbols and vertices.
inline RawTerm random_word(std::mt19937_64& rng, const Algebra& alg, std::size_t max_len) {
  const auto& sg = alg.symbols();
  const auto& g = alg.graph();
  std::uniform_int_distribution<std::size_t> len(1, max_len), kind(0, 3), sym(0, sg.size() - 1),
      vert(0, g.vertex_count() - 1);
  std::uniform_int_distribution<int> coef(-3, 3), power(1, 3);
  RawTerm t;
  int c = coef(rng);
  t.coefficient = Gauss(c == 0 ? 1 : c);
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) {
    switch (kind(rng)) {
      case 0: t.factors.push_back(Factor::s(sym(rng))); break;
      case 1: t.factors.push_back(Factor::s_star(sym(rng))); break;
      case 2: t.factors.push_back(Factor::elem(LaurentPoly::generator(vert(rng), power(rng)))); break;
      default: t.factors.push_back(Factor::elem(LaurentPoly::generator(vert(rng), -power(rng)))); break;
    }
  }
  return t;
}

/// S_alpha u^n S_beta^* with admissible alpha, beta of the given lengths
/// (a nonzero monomial), drawn uniformly from admissible paths.
inline MonomialSum random_monomial(std::mt19937_64& rng, const Algebra& alg, std::size_t max_len) {
  const auto& sg = alg.symbols();
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> power(-2, 2);
  for (;;) {
    const auto alphas = symbol_paths(sg, len(rng));
    const auto betas = symbol_paths(sg, len(rng));
    const auto& a = alphas[std::uniform_int_distribution<std::size_t>(0, alphas.size() - 1)(rng)];
    const auto& b = betas[std::uniform_int_distribution<std::size_t>(0, betas.size() - 1)(rng)];
    std::size_t va = a.empty() ? 0 : alg.source_of(a.back());
    std::size_t vb = b.empty() ? va : alg.source_of(b.back());
    if (a.empty()) va = vb;
    if (va != vb) continue;
    return alg.monomial(a, LaurentPoly::generator(va, power(rng)), b);
  }
}

}  // namespace tge::test

#endif  // TGE_TESTS_SUPPORT_HPP
