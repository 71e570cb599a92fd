#ifndef TGE_LAURENT_HPP
#define TGE_LAURENT_HPP

// Laurent polynomials with Gaussian-rational coefficients: exact elements of
// C(T) with finite Fourier support. `Laurent` is a function on one circle;
// `LaurentPoly` pins it to a vertex circle; `VertexFunction` is an element of
// C(E^0 x T), one Laurent polynomial per vertex.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "tge/errors.hpp"
#include "tge/numeric.hpp"

namespace tge {

class Laurent {
 public:
  using Terms = std::map<std::int64_t, Gauss>;

  Laurent() = default;

  static Laurent constant(const Gauss& c) { return monomial(0, c); }
  static Laurent monomial(std::int64_t exponent, const Gauss& c = Gauss(1)) {
    Laurent f;
    if (!c.is_zero()) f.terms_.emplace(exponent, c);
    return f;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  Gauss coefficient(std::int64_t exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? Gauss(0) : it->second;
  }

  /// Adds c z^n, dropping the term when it cancels.
  void add_term(std::int64_t exponent, const Gauss& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(exponent, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Laurent& operator+=(const Laurent& o) {
    for (const auto& [n, c] : o.terms_) add_term(n, c);
    return *this;
  }
  Laurent& operator-=(const Laurent& o) {
    for (const auto& [n, c] : o.terms_) add_term(n, -c);
    return *this;
  }

  friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
  friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
  friend Laurent operator-(const Laurent& a) { return Laurent() - a; }

  friend Laurent operator*(const Laurent& a, const Laurent& b) {
    Laurent out;
    for (const auto& [n, c] : a.terms_)
      for (const auto& [m, d] : b.terms_) out.add_term(n + m, c * d);
    return out;
  }

  friend Laurent operator*(const Gauss& s, const Laurent& a) {
    Laurent out;
    if (s.is_zero()) return out;
    for (const auto& [n, c] : a.terms_) out.terms_.emplace(n, s * c);
    return out;
  }

  friend bool operator==(const Laurent& a, const Laurent& b) { return a.terms_ == b.terms_; }

  /// z^n -> conj(c) z^-n.
  Laurent adjoint() const {
    Laurent out;
    for (const auto& [n, c] : terms_) out.terms_.emplace(-n, c.conj());
    return out;
  }

  /// Pullback along z -> z^m.
  Laurent substitute_power(std::int64_t m) const {
    if (m == 0) throw PreconditionError("substitute_power requires a nonzero exponent");
    Laurent out;
    for (const auto& [n, c] : terms_) out.terms_.emplace(n * m, c);
    return out;
  }

  /// Fiber sum f -> (z -> sum over w^p = z of f(w)). On monomials z^n this is
  /// p z^(n/p) when p divides n and 0 otherwise.
  Laurent transfer(std::int64_t p) const {
    if (p < 1) throw PreconditionError("transfer requires p >= 1");
    Laurent out;
    for (const auto& [n, c] : terms_) {
      if (n % p == 0) out.add_term(n / p, Gauss(p) * c);
    }
    return out;
  }

  std::complex<double> evaluate(std::complex<double> z) const {
    std::complex<double> acc = 0;
    for (const auto& [n, c] : terms_) acc += c.to_complex() * std::pow(z, static_cast<int>(n));
    return acc;
  }

  /// "c*z^n" terms sorted by exponent, e.g. "-1*z^-1 + (2+1i)*z^3"; "0" when empty.
  std::string str(const std::string& var = "z") const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [n, c] : terms_) {
      if (!out.empty()) out += " + ";
      out += c.str() + "*" + var + "^" + std::to_string(n);
    }
    return out;
  }

 private:
  Terms terms_;
};

/// Laurent polynomial on the circle over one vertex.
struct LaurentPoly {
  std::size_t vertex = 0;
  Laurent poly;

  static LaurentPoly unit(std::size_t v) { return {v, Laurent::constant(1)}; }
  /// The generator u_v: z on the circle over v.
  static LaurentPoly generator(std::size_t v, std::int64_t power = 1) {
    return {v, Laurent::monomial(power)};
  }

  bool is_zero() const { return poly.is_zero(); }

  LaurentPoly adjoint() const { return {vertex, poly.adjoint()}; }
  LaurentPoly substitute_power(std::int64_t m) const { return {vertex, poly.substitute_power(m)}; }
  LaurentPoly transfer(std::int64_t p) const { return {vertex, poly.transfer(p)}; }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.vertex == b.vertex && a.poly == b.poly;
  }
};

namespace detail {
inline void require_same_vertex(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.vertex != b.vertex)
    throw VertexMismatch("Laurent polynomials live at different vertices (" +
                         std::to_string(a.vertex) + " vs " + std::to_string(b.vertex) + ")");
}
}  // namespace detail

inline LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
  detail::require_same_vertex(a, b);
  return {a.vertex, a.poly + b.poly};
}
inline LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
  detail::require_same_vertex(a, b);
  return {a.vertex, a.poly - b.poly};
}
inline LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  detail::require_same_vertex(a, b);
  return {a.vertex, a.poly * b.poly};
}
inline LaurentPoly operator*(const Gauss& s, const LaurentPoly& a) { return {a.vertex, s * a.poly}; }

/// Element of C(E^0 x T): sparse vertex -> Laurent map without zero entries.
class VertexFunction {
 public:
  using Parts = std::map<std::size_t, Laurent>;

  VertexFunction() = default;
  VertexFunction(const LaurentPoly& f) { set(f.vertex, f.poly); }  // NOLINT: localized -> global

  /// The unit sum over v of 1_v.
  static VertexFunction unit(std::size_t vertex_count) {
    VertexFunction f;
    for (std::size_t v = 0; v < vertex_count; ++v) f.set(v, Laurent::constant(1));
    return f;
  }

  const Parts& parts() const { return parts_; }
  bool is_zero() const { return parts_.empty(); }

  Laurent at(std::size_t v) const {
    auto it = parts_.find(v);
    return it == parts_.end() ? Laurent() : it->second;
  }

  void set(std::size_t v, Laurent f) {
    if (f.is_zero())
      parts_.erase(v);
    else
      parts_[v] = std::move(f);
  }

  void add(std::size_t v, const Laurent& f) { set(v, at(v) + f); }

  /// Supported on at most one vertex.
  bool is_localized() const { return parts_.size() <= 1; }

  VertexFunction& operator+=(const VertexFunction& o) {
    for (const auto& [v, f] : o.parts_) add(v, f);
    return *this;
  }
  friend VertexFunction operator+(VertexFunction a, const VertexFunction& b) { return a += b; }
  friend VertexFunction operator-(VertexFunction a, const VertexFunction& b) {
    for (const auto& [v, f] : b.parts_) a.add(v, -f);
    return a;
  }
  friend VertexFunction operator*(const VertexFunction& a, const VertexFunction& b) {
    VertexFunction out;
    for (const auto& [v, f] : a.parts_) {
      auto it = b.parts_.find(v);
      if (it != b.parts_.end()) out.set(v, f * it->second);
    }
    return out;
  }
  friend VertexFunction operator*(const Gauss& s, const VertexFunction& a) {
    VertexFunction out;
    for (const auto& [v, f] : a.parts_) out.set(v, s * f);
    return out;
  }
  friend bool operator==(const VertexFunction& a, const VertexFunction& b) {
    return a.parts_ == b.parts_;
  }

  VertexFunction adjoint() const {
    VertexFunction out;
    for (const auto& [v, f] : parts_) out.parts_.emplace(v, f.adjoint());
    return out;
  }

 private:
  Parts parts_;
};

// ---------------------------------------------------------------------------
// Generator notation: `gen` is "u" for one-vertex graphs and "u(v)" otherwise.

/// One monomial c * gen^n. The constant term renders as the bare coefficient
/// when `bare_constants`, otherwise as "gen^0" so the vertex stays visible.
inline std::string render_monomial(const Gauss& c, std::int64_t n, const std::string& gen,
                                   bool bare_constants) {
  if (n == 0 && bare_constants) return c.str();
  std::string power = gen + (n == 1 ? "" : "^" + std::to_string(n));
  if (c == Gauss(1)) return power;
  if (c == Gauss(-1)) return "-" + power;
  return c.str() + "*" + power;
}

/// Terms sorted by exponent and joined with " + "; "0" for the zero polynomial.
inline std::string render_laurent(const Laurent& f, const std::string& gen, bool bare_constants) {
  if (f.is_zero()) return "0";
  std::string out;
  for (const auto& [n, c] : f.terms()) {
    if (!out.empty()) out += " + ";
    out += render_monomial(c, n, gen, bare_constants);
  }
  return out;
}

}  // namespace tge

#endif  // TGE_LAURENT_HPP
