#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "bohr/bisection.hpp"
#include "bohr/errors.hpp"
#include "bohr/toeplitz.hpp"

// Spectral route to the Bohr radius. Substituting r = g(x), where g solves
// 3r^2 + 4r cos x + 1 = 0, turns Delta_n(r) into
//   Delta_n = (-2r)^{n+1} / (1 - r^2) * p_n(cos x),
//   p_n(cos x) = U_{n+1}(cos x) + 2r U_n(cos x) + r^2 U_{n-1}(cos x),
// so the smallest root of Delta_n in (0,1) is g at the largest root of p_n
// on [5pi/6, pi].

namespace bohr::spectral {

inline constexpr double kPi = std::numbers::pi;

/// Left end of the real, positive branch of g.
inline constexpr double kBranchStart = 5.0 * kPi / 6.0;

/// Clamp window for the discriminant 4cos^2 x - 3 near x = 5pi/6.
inline constexpr double kDiscriminantSlack = 1e-14;

namespace detail {

struct Substitution {
  double excess;  // g(x) - 1/3
  double value;   // g(x)
};

// Works in theta = pi - x so that both g - 1/3 and the discriminant keep
// full relative precision as x -> pi.
inline Substitution substitute(double x) {
  const double theta = kPi - x;
  if (!(theta >= 0.0) || theta > kPi / 2.0) {
    throw DomainError("subst_g: x = " + std::to_string(x) +
                      " is outside [5pi/6, pi]");
  }
  const double s = std::sin(0.5 * theta);
  const double h = 2.0 * s * s;  // 1 - cos(theta)
  const double c = 1.0 - h;      // cos(theta) = -cos(x)
  double disc = (1.0 - 8.0 * h) + 4.0 * h * h;  // 4cos^2 x - 3
  if (disc < 0.0) {
    if (disc < -kDiscriminantSlack) {
      throw DomainError("subst_g: x = " + std::to_string(x) +
                        " is below 5pi/6 (4cos^2 x - 3 < 0)");
    }
    disc = 0.0;
  }
  // (2c - 1 - sqrt(disc))/3 - 1/3, rationalized.
  const double excess = 4.0 * h / (3.0 * ((2.0 * c - 1.0) + std::sqrt(disc)));
  return {excess, 1.0 / 3.0 + excess};
}

}  // namespace detail

/// r = g(x) = (-2cos x - sqrt(4cos^2 x - 3)) / 3 for x in [5pi/6, pi].
inline double subst_g(double x) { return detail::substitute(x).value; }

/// g(x) - 1/3, accurate to full relative precision near x = pi.
inline double subst_g_excess(double x) { return detail::substitute(x).excess; }

/// A point of the substitution: angle x, radius r = g(x), t = cos x.
struct SpectralPoint {
  double x = kPi;
  double r = 1.0 / 3.0;
  double t = -1.0;

  static SpectralPoint at(double x) { return {x, subst_g(x), std::cos(x)}; }
};

/// (3r^2 + 4r cos theta + 1) / (r^2 + 2r cos theta + 1).
inline double symbol_f(double r, double theta) {
  const double c = std::cos(theta);
  const double den = r * r + 2.0 * r * c + 1.0;
  if (den == 0.0) {
    throw DomainError("symbol_f: vanishing denominator");
  }
  return (3.0 * r * r + 4.0 * r * c + 1.0) / den;
}

/// U_0(t) ... U_kmax(t) by the three-term recurrence.
inline std::vector<double> cheb_u(double t, int kmax) {
  if (std::abs(t) > 1.0 + 1e-12) {
    throw DomainError("cheb_u: |t| must be <= 1, got " + std::to_string(t));
  }
  if (kmax < 0) {
    throw DomainError("cheb_u: kmax must be >= 0");
  }
  std::vector<double> u(static_cast<std::size_t>(kmax) + 1);
  u[0] = 1.0;
  if (kmax >= 1) u[1] = 2.0 * t;
  for (std::size_t k = 2; k < u.size(); ++k) {
    u[k] = 2.0 * t * u[k - 1] - u[k - 2];
  }
  return u;
}

/// p_n(cos x) with r = g(x).
///
/// U_k(-cos theta) = (-1)^k U_k(cos theta), and U_k(cos theta) is run with
/// the difference form of the recurrence,
///   D_{k+1} = D_k - 4 sin^2(theta/2) U_k,  U_{k+1} = U_k + D_{k+1},
/// which stays accurate for cos theta close to 1 and is regular at x = pi.
inline double pn_eval(int n, double x) {
  if (n < 1) {
    throw DomainError("pn_eval: n must be >= 1, got " + std::to_string(n));
  }
  const double r = subst_g(x);
  const double s = std::sin(0.5 * (kPi - x));
  const double step = -4.0 * s * s;

  double u_nm1 = 0.0;  // U_{k-2}
  double u_n = 0.0;    // U_{k-1}
  double u = 1.0;      // U_k
  double d = 1.0;      // U_k - U_{k-1}
  for (int k = 0; k <= n; ++k) {
    d += step * u;
    u_nm1 = u_n;
    u_n = u;
    u += d;
  }
  // u = U_{n+1}, u_n = U_n, u_nm1 = U_{n-1}, all at cos(theta).
  const double inner = u - 2.0 * r * u_n + r * r * u_nm1;
  return (n % 2 == 0) ? -inner : inner;
}

/// ((-2r)^{n+1} / (1 - r^2)) * p_n(cos x) in sign/log form, r = g(x).
inline ScaledDet delta_closed_form(int n, double x) {
  const double r = subst_g(x);
  const double p = pn_eval(n, x);
  ScaledDet out;
  if (p == 0.0) return out;
  const int prefactor_sign = ((n + 1) % 2 == 0) ? 1 : -1;
  out.sign = prefactor_sign * (p > 0.0 ? 1 : -1);
  out.log_mag = (n + 1) * std::log(2.0 * r) - std::log1p(-r * r) +
                std::log(std::abs(p));
  return out;
}

/// Equispaced nodes x_nu = nu * pi / (n + 2), nu = 1 .. n+1.
struct NodeGrid {
  int n = 0;
  std::vector<double> nodes;
};

inline double node(int n, int nu) {
  return static_cast<double>(nu) * kPi / static_cast<double>(n + 2);
}

inline NodeGrid nodes(int n) {
  if (n < 1) {
    throw DomainError("nodes: n must be >= 1, got " + std::to_string(n));
  }
  NodeGrid grid{n, {}};
  grid.nodes.reserve(static_cast<std::size_t>(n) + 1);
  for (int nu = 1; nu <= n + 1; ++nu) grid.nodes.push_back(node(n, nu));
  return grid;
}

/// y_n = ((n+1)pi - pi/2) / (n+2), halfway between x_n and x_{n+1}.
inline double half_node(int n) {
  return (static_cast<double>(n + 1) * kPi - 0.5 * kPi) /
         static_cast<double>(n + 2);
}

/// Smallest degree for which the spectral bracket is used.
inline constexpr int kMinSpectralDegree = 7;

struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
  int sign_lo = 0;
  int sign_hi = 0;
};

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

/// Signs of p_n at lo and hi; throws BracketError unless they differ.
inline RootBracket sign_bracket(int n, double lo, double hi) {
  RootBracket b{lo, hi, sign_of(pn_eval(n, lo)), sign_of(pn_eval(n, hi))};
  if (b.sign_lo * b.sign_hi != -1) {
    throw BracketError("bracket: p_" + std::to_string(n) +
                           " has no sign change on [" + std::to_string(lo) +
                           ", " + std::to_string(hi) + "] (signs " +
                           std::to_string(b.sign_lo) + ", " +
                           std::to_string(b.sign_hi) + ")",
                       lo, hi, b.sign_lo, b.sign_hi);
  }
  return b;
}

/// Bracket (x_{n+1}, pi) for the largest root of p_n on [5pi/6, pi].
///
/// p_n(cos x_{n+1}) = (-1)^n 2r (1 + r cos x_{n+1}) and
/// p_n(-1) = (-1)^{n+1} (4n + 12) / 9, so the signs differ for every n.
/// Endpoint signs are still checked at runtime.
inline RootBracket bracket(int n) {
  if (n < kMinSpectralDegree) {
    throw DomainError("bracket: n = " + std::to_string(n) +
                      " is below 7; use the direct method");
  }
  return sign_bracket(n, node(n, n + 1), kPi);
}

struct SpectralRoot {
  double x = 0.0;
  double r = 0.0;
  int iterations = 0;
  RootBracket bracket;
};

/// Largest root x* of p_n on [5pi/6, pi] by bisection, and r* = g(x*).
inline SpectralRoot solve_spectral(int n, double tol) {
  if (!(tol > 0.0)) {
    throw DomainError("solve_spectral: tol must be > 0");
  }
  const RootBracket b = bracket(n);
  const auto res = bisect([n](double x) { return sign_of(pn_eval(n, x)); },
                          b.lo, b.hi, b.sign_lo, tol);
  const double x = res.midpoint();
  return {x, subst_g(x), res.iterations, b};
}

/// (-1)^{n+1} p_n(cos x) / ((n+2)(1-r)^2) at x = pi - z/(n+2), r = g(x).
/// Tends to sin(z)/z as n grows.
inline double scaled_kernel(int n, double z) {
  const double x = kPi - z / static_cast<double>(n + 2);
  const double r = subst_g(x);
  const double p = pn_eval(n, x);
  const double signed_p = ((n + 1) % 2 == 0) ? p : -p;
  return signed_p / (static_cast<double>(n + 2) * (1.0 - r) * (1.0 - r));
}

}  // namespace bohr::spectral
