#ifndef TGE_GRAPH_HPP
#define TGE_GRAPH_HPP

// Circle-correspondence graphs: a finite base graph whose vertices and edges
// each carry a circle. Edge e covers its source circle with degree p(e) >= 1
// (s(e, z) = z^p(e)) and winds its range circle q(e) != 0 times
// (r(e, z) = z^q(e)).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tge/errors.hpp"

namespace tge {

struct Edge {
  std::string name;
  std::size_t source = 0;
  std::size_t range = 0;
  std::int64_t p = 1;
  std::int64_t q = 1;
};

/// Edge description by vertex name, as it appears in graph files.
struct EdgeSpec {
  std::string name;
  std::string source;
  std::string range;
  std::int64_t p = 1;
  std::int64_t q = 1;
};

class CircleGraph {
 public:
  CircleGraph() = default;

  /// Throws LookupError when an edge refers to a vertex that is not listed.
  CircleGraph(std::vector<std::string> vertices, const std::vector<EdgeSpec>& edges)
      : vertices_(std::move(vertices)) {
    for (std::size_t i = 0; i < vertices_.size(); ++i) vertex_lookup_.emplace(vertices_[i], i);
    edges_.reserve(edges.size());
    for (const auto& spec : edges) {
      edges_.push_back(Edge{spec.name, vertex_index(spec.source), vertex_index(spec.range),
                            spec.p, spec.q});
    }
    index_edges();
  }

  CircleGraph(std::vector<std::string> vertices, std::vector<Edge> edges)
      : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    for (std::size_t i = 0; i < vertices_.size(); ++i) vertex_lookup_.emplace(vertices_[i], i);
    for (const auto& e : edges_) {
      if (e.source >= vertices_.size() || e.range >= vertices_.size())
        throw LookupError("edge " + e.name + " refers to a vertex index out of range");
    }
    index_edges();
  }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_.at(i); }
  const std::string& vertex_name(std::size_t v) const { return vertices_.at(v); }

  std::size_t vertex_index(const std::string& name) const {
    auto it = vertex_lookup_.find(name);
    if (it == vertex_lookup_.end()) throw LookupError("unknown vertex '" + name + "'");
    return it->second;
  }

  std::size_t edge_index(const std::string& name) const {
    auto it = edge_lookup_.find(name);
    if (it == edge_lookup_.end()) throw LookupError("unknown edge '" + name + "'");
    return it->second;
  }

  bool has_vertex(const std::string& name) const { return vertex_lookup_.count(name) != 0; }
  bool has_edge(const std::string& name) const { return edge_lookup_.count(name) != 0; }

  /// Edges e with r(e) = v, in input order.
  const std::vector<std::size_t>& edges_into(std::size_t v) const { return into_.at(v); }
  /// Edges e with s(e) = v, in input order.
  const std::vector<std::size_t>& edges_from(std::size_t v) const { return from_.at(v); }

  /// Sum of p(e): the number of standard basis vectors of the bimodule.
  std::size_t total_degree() const {
    std::size_t n = 0;
    for (const auto& e : edges_) n += e.p > 0 ? static_cast<std::size_t>(e.p) : 0;
    return n;
  }

  friend bool operator==(const CircleGraph& a, const CircleGraph& b) {
    if (a.vertices_ != b.vertices_ || a.edges_.size() != b.edges_.size()) return false;
    for (std::size_t i = 0; i < a.edges_.size(); ++i) {
      const Edge& x = a.edges_[i];
      const Edge& y = b.edges_[i];
      if (x.name != y.name || x.source != y.source || x.range != y.range || x.p != y.p ||
          x.q != y.q)
        return false;
    }
    return true;
  }

 private:
  void index_edges() {
    into_.assign(vertices_.size(), {});
    from_.assign(vertices_.size(), {});
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      edge_lookup_.emplace(edges_[i].name, i);  // first occurrence wins on duplicates
      into_[edges_[i].range].push_back(i);
      from_[edges_[i].source].push_back(i);
    }
  }

  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> vertex_lookup_;
  std::unordered_map<std::string, std::size_t> edge_lookup_;
  std::vector<std::vector<std::size_t>> into_;
  std::vector<std::vector<std::size_t>> from_;
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string subject;  // offending vertex or edge name
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Every violated standing hypothesis; empty for a valid graph.
inline std::vector<Violation> validate(const CircleGraph& g) {
  std::vector<Violation> out;
  if (g.vertex_count() == 0) out.push_back({"", "graph has no vertices"});
  std::unordered_map<std::string, int> seen_vertices;
  for (const auto& v : g.vertices()) {
    if (seen_vertices[v]++ == 1) out.push_back({v, "duplicate vertex name"});
  }
  std::unordered_map<std::string, int> seen_edges;
  for (const auto& e : g.edges()) {
    if (seen_edges[e.name]++ == 1) out.push_back({e.name, "duplicate edge name"});
    if (e.p < 1) out.push_back({e.name, "p must be at least 1"});
    if (e.q == 0) out.push_back({e.name, "q must be nonzero"});
  }
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (g.edges_into(v).empty()) out.push_back({g.vertex_name(v), "vertex receives no edge"});
    if (g.edges_from(v).empty()) out.push_back({g.vertex_name(v), "vertex emits no edge"});
  }
  return out;
}

inline bool is_valid(const CircleGraph& g) { return validate(g).empty(); }

/// Graph data violates the standing hypotheses; carries the full list.
class ValidationError : public PreconditionError {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : PreconditionError(summary(violations)), violations_(std::move(violations)) {}
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string summary(const std::vector<Violation>& v) {
    std::string s = "invalid graph";
    if (!v.empty()) s += ": " + (v.front().subject.empty() ? "" : v.front().subject + ": ") + v.front().message;
    if (v.size() > 1) s += " (and " + std::to_string(v.size() - 1) + " more)";
    return s;
  }
  std::vector<Violation> violations_;
};

inline void require_valid(const CircleGraph& g) {
  auto violations = validate(g);
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

// ---------------------------------------------------------------------------
// Discrete words

/// Edge indices e_1 ... e_k with s(e_i) = r(e_{i+1}).
struct DiscreteWord {
  std::vector<std::size_t> edges;

  std::size_t length() const { return edges.size(); }
  friend bool operator==(const DiscreteWord&, const DiscreteWord&) = default;
  friend auto operator<=>(const DiscreteWord&, const DiscreteWord&) = default;
};

inline bool is_path(const CircleGraph& g, const DiscreteWord& w) {
  if (w.edges.empty()) return false;
  for (std::size_t i = 0; i + 1 < w.edges.size(); ++i) {
    if (g.edge(w.edges[i]).source != g.edge(w.edges[i + 1]).range) return false;
  }
  return true;
}

inline bool is_closed(const CircleGraph& g, const DiscreteWord& w) {
  return is_path(g, w) && g.edge(w.edges.back()).source == g.edge(w.edges.front()).range;
}

/// Edge names joined by single spaces.
inline std::string word_name(const CircleGraph& g, const DiscreteWord& w) {
  std::string out;
  for (std::size_t i = 0; i < w.edges.size(); ++i) {
    if (i) out += ' ';
    out += g.edge(w.edges[i]).name;
  }
  return out;
}

inline constexpr std::size_t kDefaultWordCap = 10'000'000;

namespace detail {

// Depth-first walk over paths e_1 ... e_k starting from `prefix`, calling
// `visit` on every completed path. Lexicographic in edge index order.
inline void extend_words(const CircleGraph& g, std::vector<std::size_t>& prefix, std::size_t k,
                         const std::function<void(const std::vector<std::size_t>&)>& visit) {
  if (prefix.size() == k) {
    visit(prefix);
    return;
  }
  const std::size_t tail = g.edge(prefix.back()).source;
  for (std::size_t f : g.edges_into(tail)) {
    prefix.push_back(f);
    extend_words(g, prefix, k, visit);
    prefix.pop_back();
  }
}

}  // namespace detail

/// All words of length k (closed: additionally s(e_k) = r(e_1)), sorted
/// lexicographically by edge index list. Throws ResourceError past `cap`.
inline std::vector<DiscreteWord> enumerate_words(const CircleGraph& g, std::size_t k, bool closed,
                                                 std::size_t cap = kDefaultWordCap) {
  if (k == 0) throw PreconditionError("word length must be at least 1");
  std::vector<DiscreteWord> out;
  std::vector<std::size_t> prefix;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    prefix.assign(1, e);
    detail::extend_words(g, prefix, k, [&](const std::vector<std::size_t>& w) {
      if (closed && g.edge(w.back()).source != g.edge(w.front()).range) return;
      if (out.size() >= cap)
        throw ResourceError("word enumeration exceeded cap of " + std::to_string(cap));
      out.push_back(DiscreteWord{w});
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transposition

/// Interchanges source and range. The new source map z -> z^q is re-expressed
/// as a covering of degree |q| by reparametrizing the edge circle (z -> 1/z
/// when q < 0), so the new edge has p' = |q| and q' = sign(q) * p.
inline CircleGraph transpose(const CircleGraph& g) {
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const auto& e : g.edges()) {
    const std::int64_t sign = e.q < 0 ? -1 : 1;
    edges.push_back(Edge{e.name, e.range, e.source, e.q * sign, sign * e.p});
  }
  return CircleGraph(g.vertices(), std::move(edges));
}

// ---------------------------------------------------------------------------
// Symbol graph

/// Basis symbol (e, k), 1 <= k <= p(e).
struct Symbol {
  std::size_t edge = 0;
  std::int64_t k = 1;
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// Finite graph on basis symbols: (e,k) -> (f,l) iff s(e) = r(f).
class SymbolGraph {
 public:
  explicit SymbolGraph(const CircleGraph& g) {
    offsets_.reserve(g.edge_count());
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      offsets_.push_back(symbols_.size());
      for (std::int64_t k = 1; k <= g.edge(e).p; ++k) symbols_.push_back(Symbol{e, k});
    }
    const std::size_t n = symbols_.size();
    adjacency_.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        adjacency_[i][j] = g.edge(symbols_[i].edge).source == g.edge(symbols_[j].edge).range;
      }
    }
  }

  std::size_t size() const { return symbols_.size(); }
  const std::vector<Symbol>& symbols() const { return symbols_; }
  const Symbol& symbol(std::size_t i) const { return symbols_.at(i); }
  bool allowed(std::size_t from, std::size_t to) const { return adjacency_.at(from).at(to); }
  const std::vector<std::vector<bool>>& adjacency() const { return adjacency_; }

  /// Index of symbol (e, k); throws LookupError when k is out of [1, p(e)].
  std::size_t index_of(std::size_t edge, std::int64_t k) const {
    if (edge >= offsets_.size()) throw LookupError("edge index out of range");
    const std::size_t begin = offsets_[edge];
    const std::size_t end = edge + 1 < offsets_.size() ? offsets_[edge + 1] : symbols_.size();
    if (k < 1 || static_cast<std::size_t>(k) > end - begin)
      throw LookupError("basis index " + std::to_string(k) + " out of range [1, " +
                        std::to_string(end - begin) + "]");
    return begin + static_cast<std::size_t>(k - 1);
  }

 private:
  std::vector<Symbol> symbols_;
  std::vector<std::size_t> offsets_;
  std::vector<std::vector<bool>> adjacency_;
};

inline SymbolGraph symbol_graph(const CircleGraph& g) { return SymbolGraph(g); }

/// "(e1,2)" style label for symbol i.
inline std::string symbol_label(const CircleGraph& g, const Symbol& s) {
  return "(" + g.edge(s.edge).name + "," + std::to_string(s.k) + ")";
}

// ---------------------------------------------------------------------------
// Standard fixtures

/// One vertex "v", one loop "e" with the given degrees.
inline CircleGraph single_loop_graph(std::int64_t p, std::int64_t q) {
  return CircleGraph({"v"}, std::vector<EdgeSpec>{{"e", "v", "v", p, q}});
}

}  // namespace tge

#endif  // TGE_GRAPH_HPP
