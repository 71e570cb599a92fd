#ifndef TGE_BIMODULE_HPP
#define TGE_BIMODULE_HPP

// The Hilbert bimodule H = C(E^1) of a circle graph over A = C(E^0):
//
//   (xi . f)(e, z) = xi(e, z) f(s(e), z^p(e))
//   (f . xi)(e, z) = f(r(e), z^q(e)) xi(e, z)
//   <xi, eta>(v, w) = sum over s(e) = v, z^p(e) = w of conj(xi(e, z)) eta(e, z)
//
// and its standard basis xi_{e,k}(e, z) = z^(k-1) / sqrt(p(e)). The irrational
// normalizer is carried as a per-edge flag and only resolved where flags
// meet in an inner product, where the combined factor is rational whenever
// the product of the flagged p(e) is a perfect square.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tge/errors.hpp"
#include "tge/graph.hpp"
#include "tge/laurent.hpp"
#include "tge/numeric.hpp"

namespace tge {

/// Edge component of a bimodule vector: poly, divided by sqrt(p(e)) when `normalized`.
struct EdgeComponent {
  Laurent poly;
  bool normalized = false;

  friend bool operator==(const EdgeComponent&, const EdgeComponent&) = default;
};

class BimoduleVector {
 public:
  using Components = std::map<std::size_t, EdgeComponent>;

  BimoduleVector() = default;

  static BimoduleVector on_edge(std::size_t edge, Laurent poly, bool normalized = false) {
    BimoduleVector v;
    v.set(edge, EdgeComponent{std::move(poly), normalized});
    return v;
  }

  const Components& components() const { return components_; }
  bool is_zero() const { return components_.empty(); }

  void set(std::size_t edge, EdgeComponent c) {
    if (c.poly.is_zero())
      components_.erase(edge);
    else
      components_[edge] = std::move(c);
  }

  /// Throws PreconditionError when both sides carry the same edge with different flags.
  BimoduleVector& operator+=(const BimoduleVector& o) {
    for (const auto& [e, c] : o.components_) {
      auto it = components_.find(e);
      if (it == components_.end()) {
        components_.emplace(e, c);
        continue;
      }
      if (it->second.normalized != c.normalized)
        throw PreconditionError("cannot add components with different normalizations");
      it->second.poly += c.poly;
      if (it->second.poly.is_zero()) components_.erase(it);
    }
    return *this;
  }
  friend BimoduleVector operator+(BimoduleVector a, const BimoduleVector& b) { return a += b; }

  friend BimoduleVector operator*(const Gauss& s, const BimoduleVector& a) {
    BimoduleVector out;
    for (const auto& [e, c] : a.components_) out.set(e, EdgeComponent{s * c.poly, c.normalized});
    return out;
  }

  friend bool operator==(const BimoduleVector& a, const BimoduleVector& b) {
    return a.components_ == b.components_;
  }

 private:
  Components components_;
};

/// xi_{e,k} for every edge e and 1 <= k <= p(e), in symbol-graph order.
inline std::vector<BimoduleVector> std_basis(const CircleGraph& g) {
  std::vector<BimoduleVector> basis;
  basis.reserve(g.total_degree());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    for (std::int64_t k = 1; k <= g.edge(e).p; ++k)
      basis.push_back(BimoduleVector::on_edge(e, Laurent::monomial(k - 1), true));
  }
  return basis;
}

namespace detail {

// 1/sqrt(radicand) as an exact rational, or nullopt when irrational.
inline std::optional<Rational> inverse_sqrt(const BigInt& radicand) {
  BigInt root = exact_sqrt(radicand);
  if (root <= 0) return std::nullopt;
  return Rational(1) / Rational(root);
}

inline BigInt flag_radicand(std::int64_t p, int flags) {
  return ipow(BigInt(p), static_cast<unsigned>(flags));
}

}  // namespace detail

/// <xi, eta> as an element of A, one Laurent polynomial per source vertex.
inline VertexFunction inner(const CircleGraph& g, const BimoduleVector& xi,
                            const BimoduleVector& eta) {
  VertexFunction out;
  for (const auto& [e, a] : xi.components()) {
    auto it = eta.components().find(e);
    if (it == eta.components().end()) continue;
    const EdgeComponent& b = it->second;
    const Edge& edge = g.edge(e);
    Laurent fiber = (a.poly.adjoint() * b.poly).transfer(edge.p);
    if (fiber.is_zero()) continue;
    const int flags = int(a.normalized) + int(b.normalized);
    auto scale = detail::inverse_sqrt(detail::flag_radicand(edge.p, flags));
    if (!scale)
      throw PreconditionError("inner product on edge " + edge.name +
                              " leaves an unresolved 1/sqrt(p) factor");
    out.add(edge.source, Gauss(*scale) * fiber);
  }
  return out;
}

/// f . xi for f localized at a vertex: components with r(e) = vertex are
/// multiplied by f(z^q(e)), the rest vanish.
inline BimoduleVector act_left(const CircleGraph& g, const LaurentPoly& f,
                               const BimoduleVector& xi) {
  BimoduleVector out;
  for (const auto& [e, c] : xi.components()) {
    const Edge& edge = g.edge(e);
    if (edge.range != f.vertex) continue;
    out.set(e, EdgeComponent{f.poly.substitute_power(edge.q) * c.poly, c.normalized});
  }
  return out;
}

inline BimoduleVector act_left(const CircleGraph& g, const VertexFunction& f,
                               const BimoduleVector& xi) {
  BimoduleVector out;
  for (const auto& [v, part] : f.parts()) out += act_left(g, LaurentPoly{v, part}, xi);
  return out;
}

/// xi . f for f localized at a vertex: components with s(e) = vertex are
/// multiplied by f(z^p(e)), the rest vanish.
inline BimoduleVector act_right(const CircleGraph& g, const BimoduleVector& xi,
                                const LaurentPoly& f) {
  BimoduleVector out;
  for (const auto& [e, c] : xi.components()) {
    const Edge& edge = g.edge(e);
    if (edge.source != f.vertex) continue;
    out.set(e, EdgeComponent{c.poly * f.poly.substitute_power(edge.p), c.normalized});
  }
  return out;
}

inline BimoduleVector act_right(const CircleGraph& g, const BimoduleVector& xi,
                                const VertexFunction& f) {
  BimoduleVector out;
  for (const auto& [v, part] : f.parts()) out += act_right(g, xi, LaurentPoly{v, part});
  return out;
}

/// Rank-one operator theta_{xi,zeta} applied to eta: xi . <zeta, eta>. All
/// normalizer flags of the three vectors are resolved together; the result
/// carries none.
inline BimoduleVector rank_one_apply(const CircleGraph& g, const BimoduleVector& xi,
                                     const BimoduleVector& zeta, const BimoduleVector& eta) {
  BimoduleVector out;
  for (const auto& [e_out, x] : xi.components()) {
    const Edge& out_edge = g.edge(e_out);
    Laurent acc;
    for (const auto& [e, z] : zeta.components()) {
      const Edge& edge = g.edge(e);
      if (edge.source != out_edge.source) continue;
      auto it = eta.components().find(e);
      if (it == eta.components().end()) continue;
      Laurent fiber = (z.poly.adjoint() * it->second.poly).transfer(edge.p);
      if (fiber.is_zero()) continue;
      BigInt radicand = detail::flag_radicand(out_edge.p, int(x.normalized)) *
                        detail::flag_radicand(edge.p, int(z.normalized) + int(it->second.normalized));
      auto scale = detail::inverse_sqrt(radicand);
      if (!scale)
        throw PreconditionError("rank-one operator leaves an unresolved 1/sqrt(p) factor");
      acc += Gauss(*scale) * fiber.substitute_power(out_edge.p);
    }
    out.set(e_out, EdgeComponent{x.poly * acc, false});
  }
  return out;
}

/// Removes normalizer flags whose radicand is a perfect square (p(e) = 1, 4, 9, ...).
inline BimoduleVector resolve_flags(const CircleGraph& g, const BimoduleVector& xi) {
  BimoduleVector out;
  for (const auto& [e, c] : xi.components()) {
    if (!c.normalized) {
      out.set(e, c);
      continue;
    }
    auto scale = detail::inverse_sqrt(BigInt(g.edge(e).p));
    out.set(e, scale ? EdgeComponent{Gauss(*scale) * c.poly, false} : c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string generator_name(const CircleGraph& g, std::size_t v) {
  return g.vertex_count() == 1 ? std::string("u") : "u(" + g.vertex_name(v) + ")";
}

inline std::string render(const CircleGraph& g, const VertexFunction& f) {
  if (f.is_zero()) return "0";
  const bool single = g.vertex_count() == 1;
  std::string out;
  for (const auto& [v, part] : f.parts()) {
    if (!out.empty()) out += " + ";
    out += render_laurent(part, generator_name(g, v), single);
  }
  return out;
}

inline std::string render(const CircleGraph& g, const BimoduleVector& xi) {
  if (xi.is_zero()) return "0";
  std::string out;
  for (const auto& [e, c] : xi.components()) {
    if (!out.empty()) out += "; ";
    out += g.edge(e).name + ": " + c.poly.str();
    if (c.normalized) out += " / sqrt(" + std::to_string(g.edge(e).p) + ")";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Basis verification

struct BasisReport {
  bool pass = true;
  std::size_t checks = 0;
  std::string failed_identity;  // empty on success
  std::string lhs;
  std::string rhs;
};

/// Checks <b_i, b_j> = delta_ij 1_{s(e_i)} and sum_i b_i <b_i, eta> = eta for
/// every monomial vector eta = z^m on each edge with |m| <= 2 max p(e). Each
/// b_i must be supported on a single edge. Stops at the first failure.
inline BasisReport verify_basis(const CircleGraph& g, const std::vector<BimoduleVector>& basis) {
  BasisReport report;
  auto fail = [&](std::string what, std::string lhs, std::string rhs) {
    report.pass = false;
    report.failed_identity = std::move(what);
    report.lhs = std::move(lhs);
    report.rhs = std::move(rhs);
    return report;
  };

  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].components().size() != 1)
      return fail("basis vector " + std::to_string(i + 1) + " is supported on one edge",
                  render(g, basis[i]), "single-edge vector");
    const std::size_t vi = g.edge(basis[i].components().begin()->first).source;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      ++report.checks;
      VertexFunction lhs = inner(g, basis[i], basis[j]);
      VertexFunction rhs = i == j ? VertexFunction(LaurentPoly::unit(vi)) : VertexFunction();
      if (!(lhs == rhs))
        return fail("<b" + std::to_string(i + 1) + ", b" + std::to_string(j + 1) + ">",
                    render(g, lhs), render(g, rhs));
    }
  }

  std::int64_t max_p = 1;
  for (const auto& e : g.edges()) max_p = std::max(max_p, e.p);
  // Exponents in the order 0, 1, -1, 2, -2, ... so the lowest-degree failure surfaces first.
  std::vector<std::int64_t> exponents{0};
  for (std::int64_t m = 1; m <= 2 * max_p; ++m) {
    exponents.push_back(m);
    exponents.push_back(-m);
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    for (std::int64_t m : exponents) {
      ++report.checks;
      BimoduleVector eta = BimoduleVector::on_edge(e, Laurent::monomial(m));
      BimoduleVector sum;
      for (const auto& b : basis) sum += rank_one_apply(g, b, b, eta);
      if (!(sum == eta))
        return fail("reconstruction of z^" + std::to_string(m) + " on edge " + g.edge(e).name,
                    render(g, sum), render(g, eta));
    }
  }
  return report;
}

inline BasisReport verify_basis(const CircleGraph& g) { return verify_basis(g, std_basis(g)); }

// ---------------------------------------------------------------------------
// Matrices over A indexed by basis-symbol paths

using SymbolPath = std::vector<std::size_t>;  // symbol indices, admissible

/// Admissible symbol paths of length k (one empty path for k = 0), lexicographic.
inline std::vector<SymbolPath> symbol_paths(const SymbolGraph& sg, std::size_t k) {
  std::vector<SymbolPath> paths{SymbolPath{}};
  for (std::size_t step = 0; step < k; ++step) {
    std::vector<SymbolPath> next;
    for (const auto& path : paths) {
      for (std::size_t i = 0; i < sg.size(); ++i) {
        if (!path.empty() && !sg.allowed(path.back(), i)) continue;
        SymbolPath extended = path;
        extended.push_back(i);
        next.push_back(std::move(extended));
      }
    }
    paths = std::move(next);
  }
  return paths;
}

/// Element of K(H^{(x)k}) in the standard basis: entry (I, J) = <xi_I, T xi_J>.
class LaurentMatrix {
 public:
  LaurentMatrix() = default;
  LaurentMatrix(std::size_t level, std::vector<SymbolPath> index)
      : level_(level), index_(std::move(index)), entries_(index_.size() * index_.size()) {}

  static LaurentMatrix identity(const CircleGraph& g, const SymbolGraph& sg, std::size_t level) {
    LaurentMatrix m(level, symbol_paths(sg, level));
    for (std::size_t i = 0; i < m.size(); ++i) {
      m(i, i) = level == 0 ? VertexFunction::unit(g.vertex_count())
                           : VertexFunction(LaurentPoly::unit(
                                 g.edge(sg.symbol(m.index_[i].back()).edge).source));
    }
    return m;
  }

  /// 1x1 matrix at level 0 holding an element of A.
  static LaurentMatrix scalar(const VertexFunction& a) {
    LaurentMatrix m(0, {SymbolPath{}});
    m(0, 0) = a;
    return m;
  }

  std::size_t level() const { return level_; }
  std::size_t size() const { return index_.size(); }
  const std::vector<SymbolPath>& index() const { return index_; }

  VertexFunction& operator()(std::size_t i, std::size_t j) { return entries_[i * size() + j]; }
  const VertexFunction& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * size() + j];
  }

  friend LaurentMatrix operator*(const LaurentMatrix& a, const LaurentMatrix& b) {
    if (a.index_ != b.index_) throw PreconditionError("matrix index sets differ");
    LaurentMatrix c(a.level_, a.index_);
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        if (a(i, k).is_zero()) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (!b(k, j).is_zero()) c(i, j) += a(i, k) * b(k, j);
        }
      }
    return c;
  }

  friend LaurentMatrix operator+(LaurentMatrix a, const LaurentMatrix& b) {
    if (a.index_ != b.index_) throw PreconditionError("matrix index sets differ");
    for (std::size_t i = 0; i < a.entries_.size(); ++i) a.entries_[i] += b.entries_[i];
    return a;
  }

  LaurentMatrix adjoint() const {
    LaurentMatrix out(level_, index_);
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j) out(i, j) = (*this)(j, i).adjoint();
    return out;
  }

  friend bool operator==(const LaurentMatrix& a, const LaurentMatrix& b) {
    return a.level_ == b.level_ && a.index_ == b.index_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t level_ = 0;
  std::vector<SymbolPath> index_;
  std::vector<VertexFunction> entries_;
};

/// <xi_i, a . xi_j> for basis symbols i, j; zero unless both sit on the same edge.
inline VertexFunction basis_coefficient(const CircleGraph& g, const SymbolGraph& sg,
                                        std::size_t i, std::size_t j, const VertexFunction& a) {
  const Symbol& si = sg.symbol(i);
  const Symbol& sj = sg.symbol(j);
  if (si.edge != sj.edge) return {};
  const std::size_t e = sj.edge;
  BimoduleVector xi_i = BimoduleVector::on_edge(e, Laurent::monomial(si.k - 1), true);
  BimoduleVector xi_j = BimoduleVector::on_edge(e, Laurent::monomial(sj.k - 1), true);
  return inner(g, xi_i, act_left(g, a, xi_j));
}

/// Matrix of the left action of a in the standard basis (level 1).
inline LaurentMatrix left_action_matrix(const CircleGraph& g, const SymbolGraph& sg,
                                        const VertexFunction& a) {
  LaurentMatrix m(1, symbol_paths(sg, 1));
  for (std::size_t i = 0; i < sg.size(); ++i)
    for (std::size_t j = 0; j < sg.size(); ++j) m(i, j) = basis_coefficient(g, sg, i, j, a);
  return m;
}

/// Matrix of the left action of the generator u_v.
inline LaurentMatrix left_action_matrix(const CircleGraph& g, std::size_t v) {
  if (v >= g.vertex_count()) throw LookupError("unknown vertex index " + std::to_string(v));
  return left_action_matrix(g, symbol_graph(g), VertexFunction(LaurentPoly::generator(v)));
}

inline LaurentMatrix left_action_matrix(const CircleGraph& g, const std::string& v) {
  return left_action_matrix(g, g.vertex_index(v));
}

/// Embedding K(H^{(x)k}) -> K(H^{(x)k+1}): entry a at (I, J) expands to the
/// block <xi_i, a xi_j> at ((I,i), (J,j)). Entries at level >= 1 must be
/// localized at the source of the last symbol of both I and J.
inline LaurentMatrix psi_embed(const CircleGraph& g, const SymbolGraph& sg,
                               const LaurentMatrix& m) {
  if (m.level() > 0) {
    for (std::size_t r = 0; r < m.size(); ++r)
      for (std::size_t c = 0; c < m.size(); ++c) {
        const VertexFunction& a = m(r, c);
        if (a.is_zero()) continue;
        const std::size_t vr = g.edge(sg.symbol(m.index()[r].back()).edge).source;
        const std::size_t vc = g.edge(sg.symbol(m.index()[c].back()).edge).source;
        if (!a.is_localized() || a.parts().begin()->first != vr || vr != vc)
          throw VertexMismatch("matrix entry (" + std::to_string(r) + "," + std::to_string(c) +
                               ") is not localized at the source of its index paths");
      }
  }

  std::vector<SymbolPath> index;
  std::vector<std::size_t> parent;  // row of m each new index extends
  for (std::size_t r = 0; r < m.size(); ++r) {
    const SymbolPath& path = m.index()[r];
    for (std::size_t i = 0; i < sg.size(); ++i) {
      if (!path.empty() && !sg.allowed(path.back(), i)) continue;
      SymbolPath extended = path;
      extended.push_back(i);
      index.push_back(std::move(extended));
      parent.push_back(r);
    }
  }

  LaurentMatrix out(m.level() + 1, std::move(index));
  for (std::size_t r = 0; r < out.size(); ++r) {
    for (std::size_t c = 0; c < out.size(); ++c) {
      const VertexFunction& a = m(parent[r], parent[c]);
      if (a.is_zero()) continue;
      out(r, c) = basis_coefficient(g, sg, out.index()[r].back(), out.index()[c].back(), a);
    }
  }
  return out;
}

inline LaurentMatrix psi_embed(const CircleGraph& g, const LaurentMatrix& m) {
  return psi_embed(g, symbol_graph(g), m);
}

}  // namespace tge

#endif  // TGE_BIMODULE_HPP
