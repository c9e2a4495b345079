#pragma once

#include <stdexcept>
#include <string>

namespace subspace_lens {

/// Bad input: malformed files, violated preconditions, inconsistent options.
/// Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical stage could not produce a trustworthy result (rank deficiency,
/// coincident embedded points, optimizer refusal). Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace subspace_lens
