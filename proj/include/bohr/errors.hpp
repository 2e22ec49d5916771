#pragma once

#include <stdexcept>
#include <string>

namespace bohr {

/// Input outside the domain an operation is defined on.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Root bracket whose endpoint signs do not differ.
class BracketError : public std::runtime_error {
 public:
  BracketError(const std::string& what, double lo, double hi, int sign_lo,
               int sign_hi)
      : std::runtime_error(what),
        lo(lo),
        hi(hi),
        sign_lo(sign_lo),
        sign_hi(sign_hi) {}

  double lo;
  double hi;
  int sign_lo;
  int sign_hi;
};

/// Iterative method hit its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The direct and spectral radius computations disagree.
class CrossCheckError : public std::runtime_error {
 public:
  CrossCheckError(const std::string& what, double direct, double spectral)
      : std::runtime_error(what), direct(direct), spectral(spectral) {}

  double direct;
  double spectral;
};

}  // namespace bohr
