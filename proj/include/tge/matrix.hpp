#ifndef TGE_MATRIX_HPP
#define TGE_MATRIX_HPP

// Square matrices over arbitrary-precision integers, plus the incidence
// matrices P, Q, |Q| of a circle graph and Lambda of its symbol graph.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "tge/errors.hpp"
#include "tge/graph.hpp"
#include "tge/numeric.hpp"

namespace tge {

class ExactMatrix {
 public:
  ExactMatrix() = default;
  explicit ExactMatrix(std::size_t n) : n_(n), data_(n * n) {}

  ExactMatrix(std::initializer_list<std::initializer_list<long long>> rows) : n_(rows.size()) {
    data_.reserve(n_ * n_);
    for (const auto& row : rows) {
      if (row.size() != n_) throw PreconditionError("matrix must be square");
      for (long long x : row) data_.emplace_back(x);
    }
  }

  static ExactMatrix identity(std::size_t n) {
    ExactMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t size() const { return n_; }

  BigInt& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  const std::vector<std::string>& labels() const { return labels_; }
  void set_labels(std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != n_)
      throw PreconditionError("label count does not match dimension");
    labels_ = std::move(labels);
  }

  bool is_nonnegative() const {
    return std::all_of(data_.begin(), data_.end(), [](const BigInt& x) { return x >= 0; });
  }

  ExactMatrix abs() const {
    ExactMatrix out = *this;
    for (auto& x : out.data_) x = tge::abs(x);
    return out;
  }

  ExactMatrix transposed() const {
    ExactMatrix out(n_);
    out.labels_ = labels_;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  BigInt trace() const {
    BigInt t = 0;
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.n_ != b.n_) throw PreconditionError("dimension mismatch in matrix product");
    ExactMatrix c(a.n_);
    c.labels_ = a.labels_;
    for (std::size_t i = 0; i < a.n_; ++i) {
      for (std::size_t k = 0; k < a.n_; ++k) {
        const BigInt& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < a.n_; ++j) c(i, j) += aik * b(k, j);
      }
    }
    return c;
  }

  friend ExactMatrix operator+(ExactMatrix a, const ExactMatrix& b) {
    if (a.n_ != b.n_) throw PreconditionError("dimension mismatch in matrix sum");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.n_ == b.n_ && a.data_ == b.data_;
  }

  ExactMatrix pow(unsigned k) const {
    ExactMatrix result = identity(n_);
    result.labels_ = labels_;
    ExactMatrix base = *this;
    while (k) {
      if (k & 1u) result = result * base;
      k >>= 1u;
      if (k) base = base * base;
    }
    return result;
  }

 private:
  std::size_t n_ = 0;
  std::vector<BigInt> data_;
  std::vector<std::string> labels_;
};

// ---------------------------------------------------------------------------
// Incidence matrices

namespace detail {

template <typename Weight>
ExactMatrix vertex_matrix(const CircleGraph& g, Weight weight) {
  ExactMatrix m(g.vertex_count());
  for (const auto& e : g.edges()) m(e.source, e.range) += weight(e);
  m.set_labels(g.vertices());
  return m;
}

}  // namespace detail

/// P(v,w) = sum of p(e) over edges with s(e) = v, r(e) = w.
inline ExactMatrix mat_P(const CircleGraph& g) {
  return detail::vertex_matrix(g, [](const Edge& e) { return BigInt(e.p); });
}

/// Q(v,w) = sum of q(e) over edges with s(e) = v, r(e) = w (signed).
inline ExactMatrix mat_Q(const CircleGraph& g) {
  return detail::vertex_matrix(g, [](const Edge& e) { return BigInt(e.q); });
}

/// Same as mat_Q with |q(e)|.
inline ExactMatrix mat_Q_abs(const CircleGraph& g) {
  return detail::vertex_matrix(g, [](const Edge& e) { return tge::abs(BigInt(e.q)); });
}

/// Unweighted adjacency A(v,w) = #{e : s(e) = v, r(e) = w}.
inline ExactMatrix mat_adjacency(const CircleGraph& g) {
  return detail::vertex_matrix(g, [](const Edge&) { return BigInt(1); });
}

/// 0/1 incidence matrix of the symbol graph.
inline ExactMatrix mat_Lambda(const CircleGraph& g, const SymbolGraph& sg) {
  ExactMatrix m(sg.size());
  std::vector<std::string> labels;
  labels.reserve(sg.size());
  for (std::size_t i = 0; i < sg.size(); ++i) {
    labels.push_back(symbol_label(g, sg.symbol(i)));
    for (std::size_t j = 0; j < sg.size(); ++j) m(i, j) = sg.allowed(i, j) ? 1 : 0;
  }
  m.set_labels(std::move(labels));
  return m;
}

inline ExactMatrix mat_Lambda(const CircleGraph& g) { return mat_Lambda(g, symbol_graph(g)); }

// ---------------------------------------------------------------------------
// Powers and sums

inline BigInt power_trace(const ExactMatrix& m, unsigned k) { return m.pow(k).trace(); }

/// Row v sum of M^k.
inline BigInt row_sums(const ExactMatrix& m, unsigned k, std::size_t v) {
  if (v >= m.size()) throw LookupError("row index out of range");
  // Vector-matrix iteration: e_v^T M^k 1.
  std::vector<BigInt> x(m.size(), 0);
  x[v] = 1;
  for (unsigned step = 0; step < k; ++step) {
    std::vector<BigInt> y(m.size(), 0);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < m.size(); ++j) y[j] += x[i] * m(i, j);
    }
    x = std::move(y);
  }
  return std::accumulate(x.begin(), x.end(), BigInt(0));
}

/// Column v sum of M^k.
inline BigInt column_sums(const ExactMatrix& m, unsigned k, std::size_t v) {
  return row_sums(m.transposed(), k, v);
}

inline BigInt entry_sum(const ExactMatrix& m) {
  BigInt s = 0;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) s += m(i, j);
  return s;
}

// ---------------------------------------------------------------------------
// Determinant (fraction-free Bareiss elimination)

inline BigInt determinant(const ExactMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);

  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && a[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;  // exact division
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

// ---------------------------------------------------------------------------
// Smith normal form

struct SmithForm {
  std::vector<BigInt> invariants;  // d_1 | d_2 | ... | d_n, all >= 0
  ExactMatrix left;                // U, unimodular
  ExactMatrix right;               // V, unimodular; U * M * V = diag(d)
};

/// Repeated gcd reduction with the smallest nonzero |entry| as pivot.
inline SmithForm smith_normal_form(const ExactMatrix& m) {
  const std::size_t n = m.size();
  ExactMatrix a = m;
  ExactMatrix u = ExactMatrix::identity(n);
  ExactMatrix v = ExactMatrix::identity(n);

  auto swap_rows = [&](std::size_t i, std::size_t j) {
    for (std::size_t c = 0; c < n; ++c) {
      std::swap(a(i, c), a(j, c));
      std::swap(u(i, c), u(j, c));
    }
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < n; ++r) {
      std::swap(a(r, i), a(r, j));
      std::swap(v(r, i), v(r, j));
    }
  };
  // row_i -= f * row_j
  auto sub_row = [&](std::size_t i, std::size_t j, const BigInt& f) {
    for (std::size_t c = 0; c < n; ++c) {
      a(i, c) -= f * a(j, c);
      u(i, c) -= f * u(j, c);
    }
  };
  auto sub_col = [&](std::size_t i, std::size_t j, const BigInt& f) {
    for (std::size_t r = 0; r < n; ++r) {
      a(r, i) -= f * a(r, j);
      v(r, i) -= f * v(r, j);
    }
  };

  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      // Pivot: smallest nonzero |entry| in the trailing block.
      std::size_t pr = n, pc = n;
      for (std::size_t i = t; i < n; ++i) {
        for (std::size_t j = t; j < n; ++j) {
          if (a(i, j) == 0) continue;
          if (pr == n || tge::abs(a(i, j)) < tge::abs(a(pr, pc))) {
            pr = i;
            pc = j;
          }
        }
      }
      if (pr == n) break;  // trailing block is zero
      swap_rows(t, pr);
      swap_cols(t, pc);

      bool clean = true;
      for (std::size_t i = t + 1; i < n; ++i) {
        if (a(i, t) == 0) continue;
        sub_row(i, t, a(i, t) / a(t, t));
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a(t, j) == 0) continue;
        sub_col(j, t, a(t, j) / a(t, t));
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Divisibility: fold any offending row into the pivot row and retry.
      std::size_t bad = n;
      for (std::size_t i = t + 1; i < n && bad == n; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (a(i, j) % a(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad == n) break;
      sub_row(t, bad, BigInt(-1));
    }
    if (a(t, t) < 0) {
      for (std::size_t c = 0; c < n; ++c) {
        a(t, c) = -a(t, c);
        u(t, c) = -u(t, c);
      }
    }
  }

  SmithForm out{{}, std::move(u), std::move(v)};
  out.invariants.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.invariants.push_back(a(i, i));
  return out;
}

// ---------------------------------------------------------------------------
// Strongly connected components of the nonzero pattern

/// Components in reverse topological order (Tarjan). Each is a sorted index list.
inline std::vector<std::vector<std::size_t>> strongly_connected_components(const ExactMatrix& m) {
  const std::size_t n = m.size();
  constexpr std::size_t unvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, unvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> comps;
  std::size_t counter = 0;

  // Iterative Tarjan: frames of (node, next neighbour to try).
  std::vector<std::pair<std::size_t, std::size_t>> frames;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [node, next] = frames.back();
      if (next < n) {
        std::size_t w = next++;
        if (m(node, w) == 0) continue;
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[node] = std::min(low[node], index[w]);
        }
        continue;
      }
      const std::size_t done = node;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
      if (low[done] == index[done]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != done);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
    }
  }
  return comps;
}

inline ExactMatrix principal_submatrix(const ExactMatrix& m, const std::vector<std::size_t>& idx) {
  ExactMatrix out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = m(idx[i], idx[j]);
  return out;
}

// ---------------------------------------------------------------------------
// Perron root

struct SpectralOptions {
  double tol = 1e-12;
  std::size_t max_iter = 100000;
};

struct SpectralResult {
  double radius = 0.0;
  std::size_t iterations = 0;
  double residual = 0.0;
};

namespace detail {

// Power iteration on B = M + I for an irreducible nonnegative M (so B is
// primitive), from the all-ones vector. The Collatz-Wielandt quotients
// min_i (Bx)_i/x_i <= rho(B) <= max_i (Bx)_i/x_i bracket the root at every
// step; iteration stops when the relative bracket width is within tol.
inline SpectralResult shifted_power_iteration(const std::vector<std::vector<double>>& m,
                                              const SpectralOptions& opt) {
  const std::size_t n = m.size();
  std::vector<double> x(n, 1.0), y(n);
  double lower = 0, upper = 0, residual = std::numeric_limits<double>::infinity();
  for (std::size_t it = 1; it <= opt.max_iter; ++it) {
    lower = std::numeric_limits<double>::infinity();
    upper = 0;
    double norm = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = x[i];  // identity shift
      for (std::size_t j = 0; j < n; ++j) s += m[i][j] * x[j];
      y[i] = s;
      const double q = s / x[i];
      lower = std::min(lower, q);
      upper = std::max(upper, q);
      norm = std::max(norm, s);
    }
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / norm;
    residual = (upper - lower) / upper;
    if (residual <= opt.tol) return {0.5 * (lower + upper) - 1.0, it, residual};
  }
  throw NonConvergenceError(0.5 * (lower + upper) - 1.0, residual, opt.max_iter);
}

}  // namespace detail

struct ComponentSpectrum {
  std::vector<std::size_t> members;  // row indices of the strongly connected component
  SpectralResult result;
};

/// Perron roots of the diagonal blocks on the strongly connected components
/// that carry a cycle, in Tarjan order.
inline std::vector<ComponentSpectrum> component_spectra(const ExactMatrix& m,
                                                        const SpectralOptions& opt = {}) {
  if (!m.is_nonnegative())
    throw PreconditionError("spectral_radius requires an entrywise nonnegative matrix");
  if (!(opt.tol > 0)) throw PreconditionError("tolerance must be positive");
  std::vector<ComponentSpectrum> out;
  for (const auto& comp : strongly_connected_components(m)) {
    if (comp.size() == 1 && m(comp[0], comp[0]) == 0) continue;  // acyclic node
    ExactMatrix block = principal_submatrix(m, comp);
    // Scale by the largest row sum so the shift by I stays comparable to the
    // spectrum (fast convergence for periodic blocks) and doubles stay in range.
    BigInt max_row = 0;
    for (std::size_t i = 0; i < block.size(); ++i) {
      BigInt row = 0;
      for (std::size_t j = 0; j < block.size(); ++j) row += block(i, j);
      max_row = std::max(max_row, row);
    }
    const double scale = to_double(max_row);
    std::vector<std::vector<double>> d(block.size(), std::vector<double>(block.size()));
    for (std::size_t i = 0; i < block.size(); ++i)
      for (std::size_t j = 0; j < block.size(); ++j) d[i][j] = to_double(block(i, j)) / scale;
    SpectralResult r;
    try {
      r = detail::shifted_power_iteration(d, opt);
    } catch (const NonConvergenceError& e) {
      throw NonConvergenceError(e.best_estimate() * scale, e.residual(), opt.max_iter);
    }
    r.radius *= scale;
    out.push_back({comp, r});
  }
  return out;
}

/// Perron root of a nonnegative matrix: the maximum over strongly connected
/// components, each computed by shifted power iteration.
inline SpectralResult spectral_radius(const ExactMatrix& m, const SpectralOptions& opt = {}) {
  SpectralResult best;
  for (const auto& c : component_spectra(m, opt)) {
    best.iterations += c.result.iterations;
    best.residual = std::max(best.residual, c.result.residual);
    best.radius = std::max(best.radius, c.result.radius);
  }
  return best;
}

}  // namespace tge

#endif  // TGE_MATRIX_HPP
