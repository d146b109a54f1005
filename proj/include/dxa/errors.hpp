#pragma once

#include <stdexcept>
#include <string>

namespace dxa {

// Exception families map one-to-one onto the CLI exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments or parameters (exit code 2 from the CLI).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed or insufficient input data (exit code 3).
class DataError : public Error {
 public:
  using Error::Error;
};

// Quadrature, Cholesky or sampler breakdown (exit code 4).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace dxa
