#pragma once

#include <stdexcept>
#include <string>

namespace skewpnn {

// Out-of-domain argument to a math routine (negative distance, sigma <= 0, NaN).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed user input: bad parameters, dimension mismatch, degenerate datasets.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Failures while reading or interpreting data files and serialized documents.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace skewpnn
