#ifndef TGE_NUMERIC_HPP
#define TGE_NUMERIC_HPP

// Exact scalar types: arbitrary-precision integers, rationals and Gaussian
// rationals (a + b i with a, b rational).

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <ostream>
#include <string>

#include "tge/errors.hpp"

namespace tge {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt abs(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

inline std::string to_string(const BigInt& x) { return x.str(); }

inline std::string to_string(const Rational& x) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(x) == 1) return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

inline double to_double(const BigInt& x) { return x.convert_to<double>(); }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

/// Integer square root when `x` is a perfect square, -1 otherwise.
inline BigInt exact_sqrt(const BigInt& x) {
  if (x < 0) return -1;
  BigInt r = boost::multiprecision::sqrt(x);
  return r * r == x ? r : BigInt(-1);
}

inline BigInt ipow(const BigInt& base, unsigned k) {
  return boost::multiprecision::pow(base, k);
}

/// Gaussian rational re + im*i.
class Gauss {
 public:
  Gauss() = default;
  Gauss(std::int64_t re) : re_(re) {}  // NOLINT: implicit from integers
  Gauss(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return re_ == 0 && im_ == 0; }
  bool is_real() const { return im_ == 0; }

  Gauss conj() const { return {re_, -im_}; }

  Gauss& operator+=(const Gauss& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  Gauss& operator-=(const Gauss& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  Gauss& operator*=(const Gauss& o) {
    Rational re = re_ * o.re_ - im_ * o.im_;
    im_ = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    return *this;
  }
  Gauss& operator/=(const Rational& d) {
    if (d == 0) throw PreconditionError("division by zero");
    re_ /= d;
    im_ /= d;
    return *this;
  }

  friend Gauss operator+(Gauss a, const Gauss& b) { return a += b; }
  friend Gauss operator-(Gauss a, const Gauss& b) { return a -= b; }
  friend Gauss operator*(Gauss a, const Gauss& b) { return a *= b; }
  friend Gauss operator/(Gauss a, const Rational& d) { return a /= d; }
  friend Gauss operator-(const Gauss& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const Gauss& a, const Gauss& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  std::complex<double> to_complex() const { return {to_double(re_), to_double(im_)}; }

  /// "3", "-1/2", "2i", "(1+2i)". Purely real values never get parentheses.
  std::string str() const {
    if (im_ == 0) return to_string(re_);
    std::string imag = (im_ == 1 ? "" : im_ == -1 ? "-" : to_string(im_)) + "i";
    if (re_ == 0) return imag;
    std::string sep = im_ > 0 ? "+" : "";
    return "(" + to_string(re_) + sep + imag + ")";
  }

 private:
  Rational re_{0};
  Rational im_{0};
};

inline std::ostream& operator<<(std::ostream& os, const Gauss& g) { return os << g.str(); }

}  // namespace tge

#endif  // TGE_NUMERIC_HPP
