#ifndef HIWISH_ERRORS_HPP
#define HIWISH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hiwish {

// Base class for every error this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &what) : std::runtime_error(what) {}
};

// A matrix required to be symmetric positive definite failed the Cholesky
// factorization (zero or negative pivot), or failed the symmetry check.
class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(const std::string &what) : Error(what) {}
};

// Operands have incompatible or non-square dimensions.
class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string &what) : Error(what) {}
};

// A scalar or structural parameter is outside its admissible range.
class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string &what) : Error(what) {}
};

// An iterative routine exhausted its iteration budget.
class NoConvergence : public Error {
 public:
  explicit NoConvergence(const std::string &what) : Error(what) {}
};

// The degrees-of-freedom chain left the numerically representable range.
class ChainDiverged : public Error {
 public:
  explicit ChainDiverged(const std::string &what) : Error(what) {}
};

// Numerical integration of the degrees-of-freedom conditional produced a
// non-finite or non-positive variance.
class QuadratureDegenerate : public Error {
 public:
  explicit QuadratureDegenerate(const std::string &what) : Error(what) {}
};

// Malformed text input: CSV cells, config values, unknown keys.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string &what) : Error(what) {}
};

// The operating system refused a read or a write.
class IoError : public Error {
 public:
  explicit IoError(const std::string &what) : Error(what) {}
};

}  // namespace hiwish

#endif  // HIWISH_ERRORS_HPP
