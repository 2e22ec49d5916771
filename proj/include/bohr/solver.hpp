#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "bohr/bisection.hpp"
#include "bohr/errors.hpp"
#include "bohr/spectral.hpp"
#include "bohr/toeplitz.hpp"

namespace bohr {

using spectral::RootBracket;

enum class Method { direct, spectral, both };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::direct: return "direct";
    case Method::spectral: return "spectral";
    case Method::both: return "both";
  }
  return "?";
}

inline constexpr double kDefaultTolerance = 1e-14;

/// Roots of Delta_n in (0,1) lie in g([5pi/6, pi]) = [1/3, sqrt(3)/3].
inline constexpr double kRadiusUpperBound = std::numbers::sqrt3 / 3.0;

/// Cross-check tolerance between the direct and spectral values.
inline double cross_check_tolerance(double tol) {
  return std::max(1e-10, 10.0 * tol);
}

struct RadiusResult {
  int n = 0;
  std::optional<double> value;  // empty: Delta_n has no root in (0,1)
  Method method = Method::direct;
  std::optional<RootBracket> bracket_used;  // r-space for direct, x-space for spectral
  int iterations = 0;
  ScaledDet residual;              // Delta_n at value
  std::optional<double> x_root;    // spectral root angle, when computed
  std::string note;

  bool has_root() const { return value.has_value(); }
};

namespace detail {

inline void check_degree_and_tol(const char* who, int n, double tol) {
  if (n < 1) {
    throw DomainError(std::string(who) + ": n must be >= 1, got " +
                      std::to_string(n));
  }
  if (!(tol > 0.0)) {
    throw DomainError(std::string(who) + ": tol must be > 0");
  }
}

struct ScanHit {
  double lo;
  double hi;
  int sign_lo;
  int sign_hi;
};

// Walks [from, to] with the given step and reports the first cell whose
// endpoint signs differ (or whose right endpoint is an exact zero).
inline std::optional<ScanHit> scan(int n, double from, double to, double step) {
  double r = from;
  int s = delta({n, r}).sign;
  if (s == 0) return ScanHit{r, r, 0, 0};
  for (long long k = 1;; ++k) {
    const double next = std::min(from + static_cast<double>(k) * step, to);
    const int s_next = delta({n, next}).sign;
    if (s_next != s) return ScanHit{r, next, s, s_next};
    if (next >= to) return std::nullopt;
    r = next;
  }
}

}  // namespace detail

/// R_n as the smallest root of Delta_n in (0,1): grid scan of the
/// recurrence, then bisection on the first sign change.
inline RadiusResult radius_direct(int n, double tol = kDefaultTolerance) {
  detail::check_degree_and_tol("radius_direct", n, tol);

  constexpr double kCoarseStep = 1e-3;
  constexpr double kWindowEnd = 0.60;
  constexpr double kScanEnd = 0.999;
  const double nn = static_cast<double>(n);
  const double fine_step =
      std::min(kCoarseStep, std::numbers::pi * std::numbers::pi / (4.0 * nn * nn));

  RadiusResult out;
  out.n = n;
  out.method = Method::direct;

  // Sub-1/3 sweep first so a root there would be the one reported.
  auto hit = detail::scan(n, 0.0, 1.0 / 3.0, kCoarseStep);
  if (!hit) hit = detail::scan(n, 1.0 / 3.0, kWindowEnd, fine_step);
  if (!hit) hit = detail::scan(n, kWindowEnd, kScanEnd, kCoarseStep);
  if (!hit) {
    out.note = "Delta_" + std::to_string(n) + " has no root in (0, 1)";
    return out;
  }

  double value = hit->lo;
  if (hit->sign_lo != 0) {
    out.bracket_used = RootBracket{hit->lo, hit->hi, hit->sign_lo, hit->sign_hi};
    if (hit->sign_hi == 0) {
      value = hit->hi;
    } else {
      const auto res =
          bisect([n](double r) { return delta({n, r}).sign; }, hit->lo,
                 hit->hi, hit->sign_lo, tol);
      value = res.midpoint();
      out.iterations = res.iterations;
    }
  }
  out.value = value;
  out.residual = delta({n, value});
  return out;
}

/// R_n = g(x*) with x* the largest root of p_n on [5pi/6, pi].
inline RadiusResult radius_spectral(int n, double tol = kDefaultTolerance) {
  detail::check_degree_and_tol("radius_spectral", n, tol);
  if (n < spectral::kMinSpectralDegree) {
    throw DomainError("radius_spectral: n = " + std::to_string(n) +
                      " is below 7; use the direct method");
  }
  const auto root = spectral::solve_spectral(n, tol);
  RadiusResult out;
  out.n = n;
  out.method = Method::spectral;
  out.value = root.r;
  out.x_root = root.x;
  out.bracket_used = root.bracket;
  out.iterations = root.iterations;
  out.residual = delta({n, root.r});
  return out;
}

struct RadiusOptions {
  double tol = kDefaultTolerance;
  std::optional<Method> method;  // default: both when n >= 7, else direct
};

/// Dispatches to the requested method. With Method::both the direct and
/// spectral values must agree within cross_check_tolerance(tol); the
/// spectral value is returned.
inline RadiusResult radius(int n, const RadiusOptions& opts = {}) {
  detail::check_degree_and_tol("radius", n, opts.tol);
  const Method method = opts.method.value_or(
      n >= spectral::kMinSpectralDegree ? Method::both : Method::direct);

  if (method == Method::direct || (method == Method::both &&
                                   n < spectral::kMinSpectralDegree)) {
    auto res = radius_direct(n, opts.tol);
    if (n == 1) {
      res.note =
          "no root in (0,1): the Bohr inequality holds for every r < 1 at "
          "degree 1, so the radius is 1";
    }
    return res;
  }
  if (method == Method::spectral) return radius_spectral(n, opts.tol);

  const auto direct = radius_direct(n, opts.tol);
  auto spec = radius_spectral(n, opts.tol);
  const double d = direct.value.value_or(std::numeric_limits<double>::quiet_NaN());
  const double s = *spec.value;
  if (!(std::abs(d - s) <= cross_check_tolerance(opts.tol))) {
    throw CrossCheckError("radius: direct " + std::to_string(d) +
                              " and spectral " + std::to_string(s) +
                              " disagree for n = " + std::to_string(n),
                          d, s);
  }
  spec.method = Method::both;
  spec.iterations += direct.iterations;
  return spec;
}

/// Value reported to users: R_n, or 1 when Delta_n has no root in (0,1).
inline double reported_radius(const RadiusResult& res) {
  return res.value.value_or(1.0);
}

}  // namespace bohr
