#pragma once

#include <stdexcept>
#include <string>

namespace pfm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonHermitian : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class NegativeEigenvalue : public Error {
 public:
  using Error::Error;
};

// Input outside the modelled parameter range.
class DomainError : public Error {
 public:
  using Error::Error;
};

class UnsupportedProbe : public DomainError {
 public:
  using DomainError::DomainError;
};

// epsilon == 0: the four states span only two dimensions.
class SingularEpsilon : public DomainError {
 public:
  using DomainError::DomainError;
};

class DegenerateSpan : public DomainError {
 public:
  using DomainError::DomainError;
};

class NegativeProbability : public Error {
 public:
  using Error::Error;
};

}  // namespace pfm
