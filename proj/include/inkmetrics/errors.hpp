#pragma once

#include <stdexcept>
#include <string>

namespace ink {

/// Malformed or contract-violating input (bad file, bad field, broken
/// session invariant). Maps to CLI exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input is well-formed but statistically unusable (zero variance, too few
/// observations, degenerate fit). Maps to CLI exit code 3.
class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ink
