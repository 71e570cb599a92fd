#ifndef TGE_ERRORS_HPP
#define TGE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A configured size cap (word count, oracle search space) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Graph or expression refers to an unknown vertex, edge or symbol.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Laurent data localized at different vertices was combined.
class VertexMismatch : public Error {
 public:
  using Error::Error;
};

/// Malformed input text; `position` is a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// A closed word whose cyclic torus system has a continuum of solutions.
class DegenerateLoopError : public Error {
 public:
  DegenerateLoopError(const std::string& word, std::size_t length)
      : Error("degenerate closed word " + word + " (length " + std::to_string(length) +
              "): products of p and q coincide, loop set is infinite"),
        word_(word),
        length_(length) {}
  const std::string& word() const { return word_; }
  std::size_t length() const { return length_; }

 private:
  std::string word_;
  std::size_t length_;
};

/// Power iteration did not reach the requested tolerance.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(double best_estimate, double residual, std::size_t iterations)
      : Error("spectral radius did not converge after " + std::to_string(iterations) +
              " iterations (estimate " + std::to_string(best_estimate) + ", residual " +
              std::to_string(residual) + ")"),
        best_estimate_(best_estimate),
        residual_(residual) {}
  double best_estimate() const { return best_estimate_; }
  double residual() const { return residual_; }

 private:
  double best_estimate_;
  double residual_;
};

}  // namespace tge

#endif  // TGE_ERRORS_HPP
