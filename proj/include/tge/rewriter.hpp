#ifndef TGE_REWRITER_HPP
#define TGE_REWRITER_HPP

// Normal forms in the Cuntz-Pimsner algebra of a circle graph.
//
// Generators: partial isometries S_i (one per basis symbol i = (e,k)), their
// adjoints, and elements a of A = C(E^0 x T) given as Laurent polynomials
// localized at a vertex. Every product reduces to a sum of monomials
// S_alpha a S_beta^* with the rules
//
//   (R1) S_i^* S_j  ->  delta_ij 1_{s(e_i)}
//   (R2) a S_j      ->  sum_i S_i <xi_i, a xi_j>
//   (R3) S_i^* a    ->  sum_j <xi_j, a^* xi_i>^* S_j^*
//
// plus products of A-factors and the vanishing of products whose vertices do
// not match (S_i S_j = 0 unless s(e_i) = r(e_j), and so on).
//
// Termination: each step either shortens the word (R1, zero rules, A A
// merges) or moves an A-factor right past an S (R2) or left past an S^*
// (R3) without changing the number of S and S^* letters. The pair
// (number of S^* letters left of some S letter plus A letters left of some S
// or right of some S^*, word length) decreases lexicographically, so
// rewriting stops at S...S [a] S^*...S^*.
//
// The rules are confluent (the overlap S_i^* a S_j resolves to
// <xi_i, a xi_j> either way), so the reduced form of a product does not
// depend on the reduction order. Reduced forms are still not unique as
// algebra elements, since the covariance relation
// a = sum_{i,j} S_i <xi_i, a xi_j> S_j^* is not a reduction. `lift` applies
// that relation; two sums are equal in the algebra iff, for every gauge
// degree, their lifts to a common level coincide. `equal` implements that
// test.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tge/bimodule.hpp"
#include "tge/errors.hpp"
#include "tge/graph.hpp"
#include "tge/laurent.hpp"
#include "tge/numeric.hpp"

namespace tge {

// ---------------------------------------------------------------------------
// Unreduced products

enum class FactorKind { S, SStar, A };

struct Factor {
  FactorKind kind = FactorKind::A;
  std::size_t symbol = 0;  // S, SStar
  LaurentPoly a;           // A

  static Factor s(std::size_t i) { return {FactorKind::S, i, {}}; }
  static Factor s_star(std::size_t i) { return {FactorKind::SStar, i, {}}; }
  static Factor elem(LaurentPoly a) { return {FactorKind::A, 0, std::move(a)}; }

  friend bool operator==(const Factor& x, const Factor& y) {
    if (x.kind != y.kind) return false;
    return x.kind == FactorKind::A ? x.a == y.a : x.symbol == y.symbol;
  }
};

/// coefficient * f_1 f_2 ... f_n. A bare coefficient stands for c * 1.
struct RawTerm {
  Gauss coefficient{1};
  std::vector<Factor> factors;
};

/// Formal sum of unreduced products, as produced by the parser.
struct RawSum {
  std::vector<RawTerm> terms;

  friend RawSum operator+(RawSum a, const RawSum& b) {
    a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
    return a;
  }
  friend RawSum operator*(const RawSum& a, const RawSum& b) {
    RawSum out;
    for (const auto& x : a.terms)
      for (const auto& y : b.terms) {
        RawTerm t{x.coefficient * y.coefficient, x.factors};
        t.factors.insert(t.factors.end(), y.factors.begin(), y.factors.end());
        out.terms.push_back(std::move(t));
      }
    return out;
  }
  friend RawSum operator*(const Gauss& c, RawSum a) {
    for (auto& t : a.terms) t.coefficient *= c;
    return a;
  }
};

inline RawSum raw_factor(Factor f) { return RawSum{{RawTerm{Gauss(1), {std::move(f)}}}}; }
inline RawSum raw_scalar(const Gauss& c) { return RawSum{{RawTerm{c, {}}}}; }

/// Formal adjoint: reverses the word, swaps S and S^*, conjugates.
inline RawSum adjoint(const RawSum& x) {
  RawSum out;
  for (const auto& t : x.terms) {
    RawTerm r{t.coefficient.conj(), {}};
    for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it) {
      switch (it->kind) {
        case FactorKind::S: r.factors.push_back(Factor::s_star(it->symbol)); break;
        case FactorKind::SStar: r.factors.push_back(Factor::s(it->symbol)); break;
        case FactorKind::A: r.factors.push_back(Factor::elem(it->a.adjoint())); break;
      }
    }
    out.terms.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Normal forms

/// Position of a monomial S_alpha a S_beta^*; both words in path order.
struct MonomialKey {
  SymbolPath alpha;
  SymbolPath beta;
  std::size_t vertex = 0;

  std::int64_t degree() const {
    return static_cast<std::int64_t>(alpha.size()) - static_cast<std::int64_t>(beta.size());
  }
  std::size_t level() const { return std::min(alpha.size(), beta.size()); }

  friend bool operator==(const MonomialKey&, const MonomialKey&) = default;
  friend bool operator<(const MonomialKey& x, const MonomialKey& y) {
    return std::tie(x.alpha, x.beta, x.vertex) < std::tie(y.alpha, y.beta, y.vertex);
  }
};

/// One normal-form term S_alpha a S_beta^*, a localized at `key.vertex`.
struct MonomialTerm {
  MonomialKey key;
  Laurent a;
};

/// Sorted, merged sum of normal-form terms without zero Laurent parts.
class MonomialSum {
 public:
  using Terms = std::map<MonomialKey, Laurent>;

  MonomialSum() = default;

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add(const MonomialKey& key, const Laurent& a) {
    if (a.is_zero()) return;
    auto [it, inserted] = terms_.emplace(key, a);
    if (!inserted) {
      it->second += a;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  MonomialSum& operator+=(const MonomialSum& o) {
    for (const auto& [k, a] : o.terms_) add(k, a);
    return *this;
  }
  MonomialSum& operator-=(const MonomialSum& o) {
    for (const auto& [k, a] : o.terms_) add(k, -a);
    return *this;
  }
  friend MonomialSum operator+(MonomialSum a, const MonomialSum& b) { return a += b; }
  friend MonomialSum operator-(MonomialSum a, const MonomialSum& b) { return a -= b; }
  friend MonomialSum operator*(const Gauss& c, const MonomialSum& x) {
    MonomialSum out;
    for (const auto& [k, a] : x.terms_) out.add(k, c * a);
    return out;
  }
  friend bool operator==(const MonomialSum& a, const MonomialSum& b) {
    return a.terms_ == b.terms_;
  }

  /// (S_alpha a S_beta^*)^* = S_beta a^* S_alpha^*.
  MonomialSum adjoint() const {
    MonomialSum out;
    for (const auto& [k, a] : terms_) out.add(MonomialKey{k.beta, k.alpha, k.vertex}, a.adjoint());
    return out;
  }

  /// Every term has |alpha| = |beta|.
  bool is_core() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return t.first.alpha.size() == t.first.beta.size(); });
  }

  RawSum to_raw() const {
    RawSum out;
    for (const auto& [k, a] : terms_) {
      RawTerm t;
      for (std::size_t i : k.alpha) t.factors.push_back(Factor::s(i));
      t.factors.push_back(Factor::elem(LaurentPoly{k.vertex, a}));
      for (auto it = k.beta.rbegin(); it != k.beta.rend(); ++it)
        t.factors.push_back(Factor::s_star(*it));
      out.terms.push_back(std::move(t));
    }
    return out;
  }

 private:
  Terms terms_;
};

/// Test hook: make S_i^* S_j reduce to 1_{s(e_i)} for one pair i != j.
struct FaultInjection {
  std::optional<std::pair<std::size_t, std::size_t>> contraction;
};

/// Result of chi_m: a formal sum over pairs (mu, nu) of admissible words of
/// length m, read as matrix units e_{mu,nu} tensored with the algebra element
/// S_mu^* x S_nu. Zero entries are omitted.
struct ChiResult {
  std::size_t m = 0;
  std::vector<SymbolPath> words;
  std::map<std::pair<std::size_t, std::size_t>, MonomialSum> entries;

  std::size_t index_size() const { return words.size() * words.size(); }
};

struct MatrixUnitReport {
  bool pass = true;
  std::size_t units = 0;
  std::size_t products = 0;
  std::string failure;  // empty on success
  std::string lhs;
  std::string rhs;
};

class Algebra {
 public:
  explicit Algebra(const CircleGraph& g, FaultInjection fault = {})
      : g_(g), sg_(g), fault_(std::move(fault)) {
    require_valid(g_);
  }

  const CircleGraph& graph() const { return g_; }
  const SymbolGraph& symbols() const { return sg_; }

  std::size_t source_of(std::size_t symbol) const { return g_.edge(sg_.symbol(symbol).edge).source; }
  std::size_t range_of(std::size_t symbol) const { return g_.edge(sg_.symbol(symbol).edge).range; }

  // -- constructors of common elements ------------------------------------

  MonomialSum one() const {
    MonomialSum x;
    for (std::size_t v = 0; v < g_.vertex_count(); ++v) x.add({{}, {}, v}, Laurent::constant(1));
    return x;
  }
  MonomialSum element(const LaurentPoly& a) const {
    MonomialSum x;
    x.add({{}, {}, a.vertex}, a.poly);
    return x;
  }
  MonomialSum generator(std::size_t v, std::int64_t power = 1) const {
    return element(LaurentPoly::generator(v, power));
  }
  /// S_alpha a S_beta^*, normalized (zero when inadmissible).
  MonomialSum monomial(const SymbolPath& alpha, const LaurentPoly& a, const SymbolPath& beta) const {
    RawTerm t;
    for (std::size_t i : alpha) t.factors.push_back(Factor::s(i));
    t.factors.push_back(Factor::elem(a));
    for (auto it = beta.rbegin(); it != beta.rend(); ++it) t.factors.push_back(Factor::s_star(*it));
    return normalize(RawSum{{t}});
  }
  /// S_alpha S_beta^* (the vertex part is the unit at the common source).
  MonomialSum monomial(const SymbolPath& alpha, const SymbolPath& beta) const {
    RawTerm t;
    for (std::size_t i : alpha) t.factors.push_back(Factor::s(i));
    for (auto it = beta.rbegin(); it != beta.rend(); ++it) t.factors.push_back(Factor::s_star(*it));
    return normalize(RawSum{{t}});
  }

  // -- normalization -------------------------------------------------------

  MonomialSum normalize(const RawSum& x) const {
    MonomialSum out;
    for (const auto& t : x.terms) reduce_term(t, out);
    return out;
  }

  MonomialSum normalize(const MonomialSum& x) const { return normalize(x.to_raw()); }

  MonomialSum multiply(const MonomialSum& x, const MonomialSum& y) const {
    return normalize(x.to_raw() * y.to_raw());
  }

  // -- shifts ----------------------------------------------------------------

  /// Phi(x) = sum_i S_i x S_i^*.
  MonomialSum phi(const MonomialSum& x) const {
    RawSum raw = x.to_raw();
    MonomialSum out;
    for (std::size_t i = 0; i < sg_.size(); ++i) {
      out += normalize(raw_factor(Factor::s(i)) * raw * raw_factor(Factor::s_star(i)));
    }
    return out;
  }

  /// One covariance step on every term:
  /// S_alpha a S_beta^* -> sum_{i,j} S_{alpha i} <xi_i, a xi_j> S_{beta j}^*.
  MonomialSum lift(const MonomialSum& x) const {
    MonomialSum out;
    for (const auto& [key, a] : x.terms()) lift_term(key, a, out);
    return out;
  }

  /// The core embedding Psi on elements with |alpha| = |beta| in every term.
  MonomialSum psi_core(const MonomialSum& x) const {
    if (!x.is_core()) throw PreconditionError("psi_core requires |alpha| = |beta| in every term");
    return lift(x);
  }

  /// Lifts every term of gauge degree d to the largest level present in that degree.
  MonomialSum common_level_form(const MonomialSum& x) const { return lift_to(x, levels_of(x)); }

  /// Both sides lifted, degree by degree, to the larger of their levels. At a
  /// fixed level the coefficient of S_alpha a S_beta^* is S_alpha^* x S_beta, so
  /// the two sums are identical exactly when x = y in the algebra.
  std::pair<MonomialSum, MonomialSum> canonical_pair(const MonomialSum& x, const MonomialSum& y) const {
    auto levels = levels_of(x);
    for (const auto& [d, l] : levels_of(y)) levels[d] = std::max(levels[d], l);
    return {lift_to(x, levels), lift_to(y, levels)};
  }

  /// Equality in the algebra: x - y vanishes at a common level in every degree.
  bool equal(const MonomialSum& x, const MonomialSum& y) const {
    auto [a, b] = canonical_pair(x, y);
    return a == b;
  }

  // -- chi_m -----------------------------------------------------------------

  ChiResult chi(const MonomialSum& x, std::size_t m) const {
    if (m < 1) throw PreconditionError("chi_m requires m >= 1");
    ChiResult out;
    out.m = m;
    out.words = symbol_paths(sg_, m);
    RawSum raw = x.to_raw();
    for (std::size_t a = 0; a < out.words.size(); ++a) {
      RawSum left = path_adjoint(out.words[a]) * raw;
      for (std::size_t b = 0; b < out.words.size(); ++b) {
        MonomialSum middle = normalize(left * path_raw(out.words[b]));
        if (!middle.is_zero()) out.entries.emplace(std::make_pair(a, b), std::move(middle));
      }
    }
    return out;
  }

  /// Convolution product on pairs: (mu,nu)(mu',nu') = delta_{nu,mu'} (mu,nu').
  ChiResult chi_product(const ChiResult& x, const ChiResult& y) const {
    if (x.m != y.m) throw PreconditionError("chi results of different lengths");
    ChiResult out{x.m, x.words, {}};
    for (const auto& [ij, a] : x.entries) {
      for (const auto& [kl, b] : y.entries) {
        if (ij.second != kl.first) continue;
        MonomialSum prod = multiply(a, b);
        if (prod.is_zero()) continue;
        auto& slot = out.entries[{ij.first, kl.second}];
        slot += prod;
      }
    }
    for (auto it = out.entries.begin(); it != out.entries.end();) {
      it = it->second.is_zero() ? out.entries.erase(it) : std::next(it);
    }
    return out;
  }

  /// Entrywise algebra equality of two chi results.
  bool chi_equal(const ChiResult& x, const ChiResult& y) const {
    if (x.m != y.m) return false;
    std::set<std::pair<std::size_t, std::size_t>> keys;
    for (const auto& kv : x.entries) keys.insert(kv.first);
    for (const auto& kv : y.entries) keys.insert(kv.first);
    const MonomialSum zero;
    return std::all_of(keys.begin(), keys.end(), [&](const auto& ij) {
      auto a = x.entries.find(ij), b = y.entries.find(ij);
      return equal(a == x.entries.end() ? zero : a->second, b == y.entries.end() ? zero : b->second);
    });
  }

  // -- matrix units ------------------------------------------------------------

  /// Checks (S_mu P_i S_nu^*)(S_nu' P_j S_rho^*) = delta_{nu nu'} delta_ij S_mu P_i S_rho^*
  /// over all nonzero units with |mu| = |nu| = k, where P_i = S_i S_i^*.
  MatrixUnitReport matrix_unit_check(std::size_t k) const {
    if (k > 3) throw ResourceError("matrix_unit_check is limited to k <= 3");
    struct Unit {
      std::size_t mu, i, nu;
      MonomialSum form;
    };
    const auto paths = symbol_paths(sg_, k);
    std::vector<Unit> units;
    for (std::size_t a = 0; a < paths.size(); ++a)
      for (std::size_t i = 0; i < sg_.size(); ++i) {
        if (!paths[a].empty() && !sg_.allowed(paths[a].back(), i)) continue;
        for (std::size_t b = 0; b < paths.size(); ++b) {
          if (!paths[b].empty() && !sg_.allowed(paths[b].back(), i)) continue;
          units.push_back({a, i, b, unit_form(paths[a], i, paths[b])});
        }
      }

    MatrixUnitReport report;
    report.units = units.size();
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, const MonomialSum*> lookup;
    for (const auto& u : units) lookup[{u.mu, u.i, u.nu}] = &u.form;
    const MonomialSum zero;
    for (const auto& x : units) {
      if (x.form.is_zero()) {
        report.pass = false;
        report.failure = "unit " + describe_unit(paths, x.mu, x.i, x.nu) + " vanished";
        return report;
      }
      for (const auto& y : units) {
        ++report.products;
        MonomialSum lhs = multiply(x.form, y.form);
        const MonomialSum& rhs =
            (x.nu == y.mu && x.i == y.i) ? *lookup.at({x.mu, x.i, y.nu}) : zero;
        if (!(lhs == rhs)) {
          report.pass = false;
          report.failure = describe_unit(paths, x.mu, x.i, x.nu) + " * " +
                           describe_unit(paths, y.mu, y.i, y.nu);
          report.lhs = render(lhs);
          report.rhs = render(rhs);
          return report;
        }
      }
    }
    return report;
  }

  // -- matrices over A -------------------------------------------------------

  /// sum over (I, J) of S_I M_IJ S_J^*.
  MonomialSum from_matrix(const LaurentMatrix& m) const {
    MonomialSum out;
    for (std::size_t r = 0; r < m.size(); ++r)
      for (std::size_t c = 0; c < m.size(); ++c)
        for (const auto& [v, part] : m(r, c).parts())
          out += monomial(m.index()[r], LaurentPoly{v, part}, m.index()[c]);
    return out;
  }

  // -- rendering -------------------------------------------------------------

  std::string symbol_text(std::size_t i) const {
    const Symbol& s = sg_.symbol(i);
    return g_.edge(s.edge).name + "," + std::to_string(s.k);
  }

  /// Parseable text: one summand per Laurent monomial, e.g. "S(e1,2)*u(v)^3*S*(e1,1)".
  std::string render(const MonomialSum& x) const {
    if (x.is_zero()) return "0";
    std::string out;
    for (const auto& [key, a] : x.terms()) {
      for (const auto& [n, c] : a.terms()) {
        std::vector<std::string> factors;
        for (std::size_t i : key.alpha) factors.push_back("S(" + symbol_text(i) + ")");
        const std::string& vname = g_.vertex_name(key.vertex);
        if (n > 0) factors.push_back("u(" + vname + ")" + (n == 1 ? "" : "^" + std::to_string(n)));
        if (n < 0) factors.push_back("u*(" + vname + ")" + (n == -1 ? "" : "^" + std::to_string(-n)));
        for (auto it = key.beta.rbegin(); it != key.beta.rend(); ++it)
          factors.push_back("S*(" + symbol_text(*it) + ")");
        if (factors.empty())
          factors.push_back(g_.vertex_count() == 1 ? "1" : "u(" + vname + ")^0");

        std::string body;
        for (std::size_t f = 0; f < factors.size(); ++f) body += (f ? "*" : "") + factors[f];
        const bool bare_one = factors.size() == 1 && factors[0] == "1";

        Gauss coeff = c;
        bool negative = coeff.is_real() && coeff.re() < 0;
        if (negative) coeff = -coeff;
        std::string term;
        if (bare_one)
          term = coeff.str();
        else if (coeff == Gauss(1))
          term = body;
        else
          term = coeff.str() + "*" + body;
        if (out.empty())
          out = (negative ? "-" : "") + term;
        else
          out += (negative ? " - " : " + ") + term;
      }
    }
    return out;
  }

 private:
  static std::map<std::int64_t, std::size_t> levels_of(const MonomialSum& x) {
    std::map<std::int64_t, std::size_t> out;
    for (const auto& [key, a] : x.terms()) {
      auto& level = out[key.degree()];
      level = std::max(level, key.level());
    }
    return out;
  }

  MonomialSum lift_to(const MonomialSum& x, const std::map<std::int64_t, std::size_t>& levels) const {
    MonomialSum out;
    for (const auto& [key, a] : x.terms()) {
      MonomialSum part;
      part.add(key, a);
      for (std::size_t l = key.level(); l < levels.at(key.degree()); ++l) part = lift(part);
      out += part;
    }
    return out;
  }

  // S_{p_1} ... S_{p_m}
  static RawSum path_raw(const SymbolPath& p) {
    RawTerm t;
    for (std::size_t i : p) t.factors.push_back(Factor::s(i));
    return RawSum{{t}};
  }
  // (S_p)^* = S_{p_m}^* ... S_{p_1}^*
  static RawSum path_adjoint(const SymbolPath& p) {
    RawTerm t;
    for (auto it = p.rbegin(); it != p.rend(); ++it) t.factors.push_back(Factor::s_star(*it));
    return RawSum{{t}};
  }

  MonomialSum unit_form(const SymbolPath& mu, std::size_t i, const SymbolPath& nu) const {
    SymbolPath a = mu, b = nu;
    a.push_back(i);
    b.push_back(i);
    return monomial(a, b);
  }

  std::string describe_unit(const std::vector<SymbolPath>& paths, std::size_t mu, std::size_t i,
                            std::size_t nu) const {
    auto word = [&](const SymbolPath& p) {
      std::string s = "[";
      for (std::size_t k = 0; k < p.size(); ++k) s += (k ? " " : "") + symbol_text(p[k]);
      return s + "]";
    };
    return "S_" + word(paths[mu]) + " P_(" + symbol_text(i) + ") S*_" + word(paths[nu]);
  }

  void lift_term(const MonomialKey& key, const Laurent& a, MonomialSum& out) const {
    const VertexFunction af(LaurentPoly{key.vertex, a});
    for (std::size_t j = 0; j < sg_.size(); ++j) {
      if (range_of(j) != key.vertex) continue;
      const std::size_t e = sg_.symbol(j).edge;
      for (std::int64_t k = 1; k <= g_.edge(e).p; ++k) {
        const std::size_t i = sg_.index_of(e, k);
        VertexFunction c = basis_coefficient(g_, sg_, i, j, af);
        if (c.is_zero()) continue;
        MonomialKey lifted{key.alpha, key.beta, source_of(i)};
        lifted.alpha.push_back(i);
        lifted.beta.push_back(j);
        out.add(lifted, c.at(source_of(i)));
      }
    }
  }

  using Word = std::vector<Factor>;

  // One rewrite at the leftmost reducible position. Returns false when the
  // word is irreducible; otherwise `results` holds the replacement words
  // (empty when the term vanishes).
  bool rewrite_once(const Word& w, std::vector<Word>& results) const {
    results.clear();
    for (std::size_t p = 0; p + 1 < w.size(); ++p) {
      const Factor& x = w[p];
      const Factor& y = w[p + 1];
      auto splice = [&](std::vector<Factor> middle) {
        Word out(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p));
        out.insert(out.end(), middle.begin(), middle.end());
        out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(p + 2), w.end());
        results.push_back(std::move(out));
      };
      using K = FactorKind;
      if (x.kind == K::A && y.kind == K::A) {
        if (x.a.vertex != y.a.vertex) return true;
        LaurentPoly prod = x.a * y.a;
        if (!prod.is_zero()) splice({Factor::elem(std::move(prod))});
        return true;
      }
      if (x.kind == K::SStar && y.kind == K::S) {  // R1
        const bool hit = x.symbol == y.symbol ||
                         (fault_.contraction && fault_.contraction->first == x.symbol &&
                          fault_.contraction->second == y.symbol);
        if (hit) splice({Factor::elem(LaurentPoly::unit(source_of(x.symbol)))});
        return true;
      }
      if (x.kind == K::A && y.kind == K::S) {  // R2
        if (x.a.vertex != range_of(y.symbol)) return true;
        const std::size_t e = sg_.symbol(y.symbol).edge;
        const VertexFunction af(x.a);
        for (std::int64_t k = 1; k <= g_.edge(e).p; ++k) {
          const std::size_t i = sg_.index_of(e, k);
          VertexFunction c = basis_coefficient(g_, sg_, i, y.symbol, af);
          if (c.is_zero()) continue;
          splice({Factor::s(i), Factor::elem(LaurentPoly{source_of(i), c.at(source_of(i))})});
        }
        return true;
      }
      if (x.kind == K::SStar && y.kind == K::A) {  // R3
        if (y.a.vertex != range_of(x.symbol)) return true;
        const std::size_t e = sg_.symbol(x.symbol).edge;
        const VertexFunction adj(y.a.adjoint());
        for (std::int64_t k = 1; k <= g_.edge(e).p; ++k) {
          const std::size_t j = sg_.index_of(e, k);
          VertexFunction c = basis_coefficient(g_, sg_, j, x.symbol, adj);
          if (c.is_zero()) continue;
          splice({Factor::elem(LaurentPoly{source_of(j), c.at(source_of(j)).adjoint()}),
                  Factor::s_star(j)});
        }
        return true;
      }
      // Vanishing products with mismatched vertices.
      if (x.kind == K::S && y.kind == K::S && source_of(x.symbol) != range_of(y.symbol))
        return true;
      if (x.kind == K::SStar && y.kind == K::SStar && range_of(x.symbol) != source_of(y.symbol))
        return true;
      if (x.kind == K::S && y.kind == K::A && y.a.vertex != source_of(x.symbol)) return true;
      if (x.kind == K::A && y.kind == K::SStar && x.a.vertex != source_of(y.symbol)) return true;
      if (x.kind == K::S && y.kind == K::SStar && source_of(x.symbol) != source_of(y.symbol))
        return true;
    }
    return false;
  }

  void emit(const Gauss& coeff, const Word& w, MonomialSum& out) const {
    MonomialKey key;
    std::optional<LaurentPoly> a;
    for (const auto& f : w) {
      switch (f.kind) {
        case FactorKind::S: key.alpha.push_back(f.symbol); break;
        case FactorKind::A: a = f.a; break;
        case FactorKind::SStar: key.beta.insert(key.beta.begin(), f.symbol); break;
      }
    }
    if (a) {
      key.vertex = a->vertex;
      out.add(key, coeff * a->poly);
    } else if (!key.alpha.empty()) {
      key.vertex = source_of(key.alpha.back());
      out.add(key, Laurent::constant(coeff));
    } else if (!key.beta.empty()) {
      key.vertex = source_of(key.beta.back());
      out.add(key, Laurent::constant(coeff));
    } else {
      for (std::size_t v = 0; v < g_.vertex_count(); ++v) {
        key.vertex = v;
        out.add(key, Laurent::constant(coeff));
      }
    }
  }

  void reduce_term(const RawTerm& t, MonomialSum& out) const {
    if (t.coefficient.is_zero()) return;
    for (const auto& f : t.factors) {
      if (f.kind != FactorKind::A && f.symbol >= sg_.size())
        throw LookupError("symbol index out of range");
      if (f.kind == FactorKind::A && f.a.vertex >= g_.vertex_count())
        throw LookupError("vertex index out of range");
      if (f.kind == FactorKind::A && f.a.is_zero()) return;
    }
    std::vector<Word> stack{t.factors};
    std::vector<Word> next;
    while (!stack.empty()) {
      Word w = std::move(stack.back());
      stack.pop_back();
      if (!rewrite_once(w, next)) {
        emit(t.coefficient, w, out);
        continue;
      }
      for (auto& r : next) stack.push_back(std::move(r));
    }
  }

  CircleGraph g_;
  SymbolGraph sg_;
  FaultInjection fault_;
};

}  // namespace tge

#endif  // TGE_REWRITER_HPP
