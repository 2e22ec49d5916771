#pragma once

#include <cmath>
#include <concepts>
#include <string>

#include "bohr/errors.hpp"

namespace bohr {

/// Callable returning the sign (-1, 0, +1) of a function at a point.
template <typename F>
concept SignFunction = requires(F f, double x) {
  { f(x) } -> std::convertible_to<int>;
};

struct BisectionResult {
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;
  bool exact = false;  // a midpoint evaluated to sign 0

  double midpoint() const { return exact ? lo : 0.5 * (lo + hi); }
};

inline constexpr int kBisectionMaxIterations = 200;

/// Shrinks [lo, hi] around a sign change until hi - lo <= tol.
/// `sign_lo` is the sign at lo; the sign at hi is assumed opposite.
template <SignFunction F>
BisectionResult bisect(F&& sign_of, double lo, double hi, int sign_lo,
                       double tol,
                       int max_iterations = kBisectionMaxIterations) {
  BisectionResult res{lo, hi, 0, false};
  while (res.hi - res.lo > tol) {
    if (res.iterations >= max_iterations) {
      throw ConvergenceError("bisection: no convergence after " +
                             std::to_string(max_iterations) + " iterations");
    }
    const double mid = 0.5 * (res.lo + res.hi);
    if (mid <= res.lo || mid >= res.hi) break;  // interval is one ulp wide
    ++res.iterations;
    const int s = sign_of(mid);
    if (s == 0) {
      res.lo = res.hi = mid;
      res.exact = true;
      break;
    }
    if (s == sign_lo) {
      res.lo = mid;
    } else {
      res.hi = mid;
    }
  }
  return res;
}

}  // namespace bohr
