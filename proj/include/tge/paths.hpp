#ifndef TGE_PATHS_HPP
#define TGE_PATHS_HPP

// Exact counts of source paths, range paths and loops in a circle graph.
//
// A path over a discrete word e_1 ... e_k is a point (z_1, ..., z_k) of the
// k-torus with z_i^p(e_i) = z_{i+1}^q(e_{i+1}). Fixing the source point
// leaves prod p(e_i) solutions, fixing the range point prod |q(e_i)|. A
// closed word adds z_k^p(e_k) = z_1^q(e_1); its solution set is the kernel of
// the cyclic exponent matrix, of order |det| = |prod p - prod q| (infinite
// when the products coincide).

#include <atomic>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tge/errors.hpp"
#include "tge/graph.hpp"
#include "tge/matrix.hpp"
#include "tge/numeric.hpp"
#include "tge/parallel.hpp"

namespace tge {

/// |E^k_s(v)|: paths of length k whose source lies over a fixed point of v.
inline BigInt count_source_paths(const CircleGraph& g, unsigned k, std::size_t v) {
  if (v >= g.vertex_count()) throw LookupError("unknown vertex index " + std::to_string(v));
  if (k == 0) throw PreconditionError("path length must be at least 1");
  return row_sums(mat_P(g), k, v);
}

inline BigInt count_source_paths(const CircleGraph& g, unsigned k, const std::string& v) {
  return count_source_paths(g, k, g.vertex_index(v));
}

/// |E^k_r(v)|: paths of length k whose range lies over a fixed point of v.
inline BigInt count_range_paths(const CircleGraph& g, unsigned k, std::size_t v) {
  if (v >= g.vertex_count()) throw LookupError("unknown vertex index " + std::to_string(v));
  if (k == 0) throw PreconditionError("path length must be at least 1");
  return column_sums(mat_Q_abs(g), k, v);
}

inline BigInt count_range_paths(const CircleGraph& g, unsigned k, const std::string& v) {
  return count_range_paths(g, k, g.vertex_index(v));
}

// ---------------------------------------------------------------------------
// Loop weights

/// Row i encodes z_i^p(e_i) * z_{i+1}^-q(e_{i+1}) = 1, indices mod k.
inline ExactMatrix cyclic_exponent_matrix(const CircleGraph& g, const DiscreteWord& w) {
  const std::size_t k = w.length();
  ExactMatrix m(k);
  for (std::size_t i = 0; i < k; ++i) {
    m(i, i) += g.edge(w.edges[i]).p;
    m(i, (i + 1) % k) -= g.edge(w.edges[(i + 1) % k]).q;
  }
  return m;
}

struct LoopWeight {
  BigInt value;             // |prod p - prod q|; 0 when degenerate
  BigInt abs_q_value;       // |prod p - prod |q||
  bool degenerate = false;  // prod p == prod q: a continuum of loops
};

inline LoopWeight loop_weight(const CircleGraph& g, const DiscreteWord& w) {
  if (!is_closed(g, w)) throw PreconditionError("loop_weight requires a closed word");
  BigInt prod_p = 1, prod_q = 1;
  for (std::size_t e : w.edges) {
    prod_p *= g.edge(e).p;
    prod_q *= g.edge(e).q;
  }
  LoopWeight out;
  out.value = abs(BigInt(prod_p - prod_q));
  out.abs_q_value = abs(BigInt(prod_p - abs(prod_q)));
  out.degenerate = prod_p == prod_q;
  return out;
}

inline constexpr std::size_t kDefaultOracleCap = 50'000'000;

/// Counts solutions of z^M = 1 on the n-torus by exhaustive search over
/// N-th roots of unity, N = |det M|: the solution group has order N, so every
/// solution lies in mu_N^n. A point exp(2 pi i x / N) solves row r iff
/// sum_j M(r,j) x_j = 0 mod N.
inline BigInt torus_solutions_bruteforce(const ExactMatrix& m,
                                         std::size_t cap = kDefaultOracleCap) {
  const BigInt det = determinant(m);
  if (det == 0) throw PreconditionError("torus oracle requires a nonzero determinant");
  const BigInt order = abs(det);
  const std::size_t n = m.size();
  BigInt space = ipow(order, static_cast<unsigned>(n));
  if (space > cap)
    throw ResourceError("torus oracle search space " + space.str() + " exceeds cap " +
                        std::to_string(cap));
  const long long big_n = order.convert_to<long long>();
  std::vector<std::vector<long long>> rows(n, std::vector<long long>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      long long x = (m(r, c) % order).convert_to<long long>();
      rows[r][c] = x < 0 ? x + big_n : x;
    }

  std::vector<long long> x(n, 0);
  BigInt count = 0;
  for (;;) {
    bool ok = true;
    for (std::size_t r = 0; r < n && ok; ++r) {
      long long acc = 0;
      for (std::size_t c = 0; c < n; ++c) acc = (acc + rows[r][c] * x[c]) % big_n;
      ok = acc == 0;
    }
    if (ok) ++count;
    std::size_t pos = 0;
    while (pos < n && ++x[pos] == big_n) x[pos++] = 0;
    if (pos == n) break;
  }
  return count;
}

// ---------------------------------------------------------------------------
// Loop tables

struct LoopRow {
  unsigned k = 0;
  BigInt loops;          // sum of |prod p - prod q|, the fixed points of sigma^k
  BigInt abs_q_loops;    // sum of |prod p - prod |q||
  BigInt trace_P;        // sum of prod p over closed words = tr P^k
  BigInt trace_Q_abs;    // sum of prod |q| = tr |Q|^k
  BigInt closed_words;   // number of discrete closed words
  std::optional<std::string> degenerate_word;  // first (lexicographic) degenerate word

  bool sign_discrepancy() const { return loops != abs_q_loops; }
};

struct WordWeight {
  DiscreteWord word;
  LoopWeight weight;
};

struct LoopCountTable {
  std::vector<LoopRow> rows;          // k = 1 .. k_max
  std::vector<WordWeight> words;      // per closed word, only when recorded

  const LoopRow& at(unsigned k) const { return rows.at(k - 1); }
  bool has_degenerate() const {
    for (const auto& r : rows)
      if (r.degenerate_word) return true;
    return false;
  }
};

struct LoopOptions {
  std::size_t word_cap = kDefaultWordCap;  // total paths visited
  bool record_words = false;
  std::size_t record_limit = 100000;       // closed words kept when recording
  std::size_t threads = thread_count();
};

namespace detail {

struct LoopAccumulator {
  std::vector<LoopRow> rows;
  std::vector<WordWeight> words;
};

inline void loop_dfs(const CircleGraph& g, unsigned k_max, std::vector<std::size_t>& word,
                     const BigInt& prod_p, const BigInt& prod_q, LoopAccumulator& acc,
                     std::atomic<std::size_t>& visited, const LoopOptions& opt) {
  if (++visited > opt.word_cap)
    throw ResourceError("loop enumeration exceeded cap of " + std::to_string(opt.word_cap) +
                        " paths");
  const std::size_t d = word.size();
  const Edge& last = g.edge(word.back());
  if (last.source == g.edge(word.front()).range) {
    LoopRow& row = acc.rows[d - 1];
    BigInt abs_q = abs(prod_q);
    BigInt weight = abs(BigInt(prod_p - prod_q));
    row.loops += weight;
    row.abs_q_loops += abs(BigInt(prod_p - abs_q));
    row.trace_P += prod_p;
    row.trace_Q_abs += abs_q;
    row.closed_words += 1;
    const bool degenerate = prod_p == prod_q;
    if (degenerate && !row.degenerate_word) row.degenerate_word = word_name(g, DiscreteWord{word});
    if (opt.record_words && acc.words.size() < opt.record_limit) {
      acc.words.push_back(
          WordWeight{DiscreteWord{word}, LoopWeight{weight, abs(BigInt(prod_p - abs_q)), degenerate}});
    }
  }
  if (d == k_max) return;
  for (std::size_t f : g.edges_into(last.source)) {
    word.push_back(f);
    loop_dfs(g, k_max, word, prod_p * g.edge(f).p, prod_q * g.edge(f).q, acc, visited, opt);
    word.pop_back();
  }
}

}  // namespace detail

/// Loop counts for k = 1 .. k_max by explicit enumeration of closed words.
/// Degenerate words are flagged per row, not raised; see loop_count.
inline LoopCountTable loop_table(const CircleGraph& g, unsigned k_max,
                                 const LoopOptions& opt = {}) {
  if (k_max == 0) throw PreconditionError("k_max must be at least 1");
  const std::size_t m = g.edge_count();
  std::vector<detail::LoopAccumulator> parts(m);
  std::atomic<std::size_t> visited{0};
  parallel_for(
      m,
      [&](std::size_t e) {
        auto& acc = parts[e];
        acc.rows.resize(k_max);
        std::vector<std::size_t> word{e};
        detail::loop_dfs(g, k_max, word, BigInt(g.edge(e).p), BigInt(g.edge(e).q), acc, visited,
                         opt);
      },
      opt.threads);

  LoopCountTable table;
  table.rows.resize(k_max);
  for (unsigned k = 1; k <= k_max; ++k) table.rows[k - 1].k = k;
  for (auto& part : parts) {  // first-edge order keeps the merge deterministic
    for (unsigned k = 0; k < k_max; ++k) {
      LoopRow& row = table.rows[k];
      const LoopRow& src = part.rows[k];
      row.loops += src.loops;
      row.abs_q_loops += src.abs_q_loops;
      row.trace_P += src.trace_P;
      row.trace_Q_abs += src.trace_Q_abs;
      row.closed_words += src.closed_words;
      if (!row.degenerate_word && src.degenerate_word) row.degenerate_word = src.degenerate_word;
    }
    for (auto& w : part.words) {
      if (table.words.size() < opt.record_limit) table.words.push_back(std::move(w));
    }
  }
  return table;
}

/// Throws DegenerateLoopError naming the first degenerate row.
inline void require_nondegenerate(const LoopCountTable& table) {
  for (const auto& row : table.rows) {
    if (row.degenerate_word) throw DegenerateLoopError(*row.degenerate_word, row.k);
  }
}

/// |E^k_l|, the number of loops of length k.
inline BigInt loop_count(const CircleGraph& g, unsigned k, const LoopOptions& opt = {}) {
  if (k == 0) throw PreconditionError("loop length must be at least 1");
  // Only length k matters; enumerate through k and read the last row.
  LoopCountTable table = loop_table(g, k, opt);
  const LoopRow& row = table.at(k);
  if (row.degenerate_word) throw DegenerateLoopError(*row.degenerate_word, k);
  return row.loops;
}

/// Fixed points of sigma^k on the infinite path space coincide with the loops
/// of length k; this is the same number as loop_count.
inline BigInt fixed_point_count(const CircleGraph& g, unsigned k, const LoopOptions& opt = {}) {
  return loop_count(g, k, opt);
}

}  // namespace tge

#endif  // TGE_PATHS_HPP
