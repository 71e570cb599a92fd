#ifndef TGE_EXPRESSION_HPP
#define TGE_EXPRESSION_HPP

// Text syntax for algebra elements:
//
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := 'S(' edge ',' k ')' | 'S*(' edge ',' k ')'
//           | 'u(' vertex ')' ['^' int] | 'u*(' vertex ')' ['^' int]
//           | int ['/' int] | '(' expr ')'
//
// Whitespace is ignored between tokens. Names run up to the next ',' or ')'.
// Parsing expands products distributively but applies no relations.

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "tge/errors.hpp"
#include "tge/graph.hpp"
#include "tge/laurent.hpp"
#include "tge/numeric.hpp"
#include "tge/rewriter.hpp"

namespace tge {

namespace detail {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, const CircleGraph& g, const SymbolGraph& sg)
      : text_(text), g_(g), sg_(sg) {}

  RawSum parse() {
    RawSum out = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  RawSum expr() {
    Gauss sign(1);
    if (accept("-"))
      sign = Gauss(-1);
    else
      accept("+");
    RawSum out = sign * term();
    for (;;) {
      if (accept("+"))
        out = out + term();
      else if (accept("-"))
        out = out + Gauss(-1) * term();
      else
        return out;
    }
  }

  RawSum term() {
    RawSum out = factor();
    while (accept("*")) out = out * factor();
    return out;
  }

  RawSum factor() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    if (accept("(")) {
      RawSum inner = expr();
      expect(")");
      return inner;
    }
    if (accept("S*(")) return raw_factor(Factor::s_star(symbol()));
    if (accept("S(")) return raw_factor(Factor::s(symbol()));
    if (accept("u*(")) return raw_factor(Factor::elem(generator(-1)));
    if (accept("u(")) return raw_factor(Factor::elem(generator(1)));
    if (std::isdigit(static_cast<unsigned char>(text_[pos_]))) return raw_scalar(Gauss(rational()));
    fail("unknown generator");
  }

  std::string name() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ')') ++pos_;
    std::string n(text_.substr(start, pos_ - start));
    while (!n.empty() && std::isspace(static_cast<unsigned char>(n.back()))) n.pop_back();
    if (n.empty()) {
      pos_ = start;
      fail("expected a name");
    }
    return n;
  }

  std::int64_t integer(bool allow_sign) {
    skip_space();
    const std::size_t start = pos_;
    if (allow_sign && pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    const std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits) {
      pos_ = start;
      fail("expected an integer");
    }
    try {
      return std::stoll(std::string(text_.substr(start, pos_ - start)));
    } catch (const std::out_of_range&) {
      pos_ = start;
      fail("integer out of range");
    }
  }

  Rational rational() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    BigInt num(std::string(text_.substr(start, pos_ - start)));
    if (!accept("/")) return Rational(num);
    skip_space();
    const std::size_t den_start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == den_start) fail("expected a denominator");
    BigInt den(std::string(text_.substr(den_start, pos_ - den_start)));
    if (den == 0) {
      pos_ = den_start;
      fail("division by zero");
    }
    return Rational(num, den);
  }

  std::size_t symbol() {
    const std::size_t at = pos_;
    const std::string edge = name();
    if (!g_.has_edge(edge)) {
      pos_ = at;
      fail("unknown edge '" + edge + "'");
    }
    expect(",");
    const std::size_t k_at = pos_;
    const std::int64_t k = integer(false);
    const std::size_t e = g_.edge_index(edge);
    if (k < 1 || k > g_.edge(e).p) {
      pos_ = k_at;
      fail("basis index " + std::to_string(k) + " out of range [1, " +
           std::to_string(g_.edge(e).p) + "] for edge '" + edge + "'");
    }
    expect(")");
    return sg_.index_of(e, k);
  }

  LaurentPoly generator(std::int64_t sign) {
    const std::size_t at = pos_;
    const std::string v = name();
    if (!g_.has_vertex(v)) {
      pos_ = at;
      fail("unknown vertex '" + v + "'");
    }
    expect(")");
    std::int64_t power = 1;
    if (accept("^")) power = integer(true);
    return LaurentPoly::generator(g_.vertex_index(v), sign * power);
  }

  std::string_view text_;
  const CircleGraph& g_;
  const SymbolGraph& sg_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses `text` into an unreduced sum. Throws ParseError with the offending
/// position on syntax errors, unknown names and out-of-range basis indices.
inline RawSum parse_expression(std::string_view text, const CircleGraph& g,
                               const SymbolGraph& sg) {
  return detail::ExpressionParser(text, g, sg).parse();
}

inline RawSum parse_expression(std::string_view text, const Algebra& alg) {
  return parse_expression(text, alg.graph(), alg.symbols());
}

/// Parses and normalizes in one step.
inline MonomialSum evaluate(std::string_view text, const Algebra& alg) {
  return alg.normalize(parse_expression(text, alg));
}

}  // namespace tge

#endif  // TGE_EXPRESSION_HPP
