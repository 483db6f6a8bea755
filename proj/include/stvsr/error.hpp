#pragma once

#include <stdexcept>
#include <string>

namespace stvsr {

/// Failure categories surfaced through the C API as status codes.
enum class ErrorKind {
  contract,  // precondition or configuration violation
  shape,     // incompatible tensor shapes
  io,        // file system / codec failure
  numeric,   // non-finite values, failed factorization, symmetry residue
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ContractError : public Error {
 public:
  explicit ContractError(const std::string& what) : Error(ErrorKind::contract, what) {}
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error(ErrorKind::shape, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

/// Raised by ifft3 when the inverse transform carries a non-negligible
/// imaginary part, i.e. the spectrum was not conjugate-symmetric.
class SymmetryError : public NumericError {
 public:
  explicit SymmetryError(const std::string& what) : NumericError(what) {}
};

}  // namespace stvsr
