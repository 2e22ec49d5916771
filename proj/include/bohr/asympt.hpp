#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bohr/errors.hpp"
#include "bohr/solver.hpp"
#include "bohr/spectral.hpp"

namespace bohr::asympt {

/// Bohr's constant for the full H^infinity class.
inline constexpr double kBohrConstant = 1.0 / 3.0;

/// Limit of n^2 (R_n - 1/3).
inline constexpr double kLimitConstant = 3.2898681336964528;  // pi^2 / 3

/// One line of the convergence table for c_n = n^2 (R_n - 1/3).
struct AsymRow {
  int n = 0;
  double radius = 0.0;
  double c = 0.0;
  double deviation = 0.0;        // c - pi^2/3
  std::optional<double> theta;   // pi - x*, with R_n = g(x*)
  std::optional<double> eps;     // (n+2) theta - pi
};

/// pi - x for the x in [5pi/6, pi] with g(x) = r, without an arccos:
/// 1 - cos(pi - x) = (3r - 1)(1 - r) / (4r).
inline double theta_from_radius(double r) {
  if (!(r >= kBohrConstant && r <= kRadiusUpperBound + 1e-12)) {
    throw DomainError("theta_from_radius: r = " + std::to_string(r) +
                      " is outside [1/3, sqrt(3)/3]");
  }
  const double excess3 = std::fma(3.0, r, -1.0);  // 3r - 1
  const double half_versine = std::max(0.0, excess3 * (1.0 - r) / (8.0 * r));
  return 2.0 * std::asin(std::sqrt(half_versine));
}

/// Builds a row from an already computed radius. Every field is a function
/// of (n, radius) alone.
inline AsymRow asym_row_from_radius(int n, double radius) {
  AsymRow row;
  row.n = n;
  row.radius = radius;
  const double nn = static_cast<double>(n);
  row.c = nn * nn * (std::fma(3.0, radius, -1.0) / 3.0);
  row.deviation = row.c - kLimitConstant;
  if (n >= spectral::kMinSpectralDegree) {
    row.theta = theta_from_radius(radius);
    row.eps = (nn + 2.0) * *row.theta - std::numbers::pi;
  }
  return row;
}

inline AsymRow asym_row(int n, double tol = kDefaultTolerance) {
  if (n < 2) {
    throw DomainError("asym_row: n must be >= 2, got " + std::to_string(n));
  }
  const auto res = radius(n, {tol, std::nullopt});
  return asym_row_from_radius(n, *res.value);
}

inline std::vector<AsymRow> asym_table(std::span<const int> ns,
                                       double tol = kDefaultTolerance) {
  if (ns.empty()) {
    throw DomainError("asym_table: empty list of degrees");
  }
  std::vector<AsymRow> rows;
  rows.reserve(ns.size());
  for (int n : ns) rows.push_back(asym_row(n, tol));
  return rows;
}

struct ExtrapolationResult {
  double estimate = 0.0;
  std::vector<std::pair<int, double>> samples;  // (n, c_n) used
  int order_assumed = 1;
};

/// Richardson extrapolation of c_n over rows with n doubling at each step.
/// Level k combines neighbours as (2^k e_{2n} - e_n) / (2^k - 1), removing
/// an assumed n^{-k} term; `order` levels are applied and the final-level
/// estimates are averaged.
inline ExtrapolationResult richardson(std::span<const AsymRow> rows,
                                      int order = 1) {
  if (order != 1 && order != 2) {
    throw DomainError("richardson: order must be 1 or 2");
  }
  if (rows.size() < static_cast<std::size_t>(order) + 1) {
    throw DomainError("richardson: order " + std::to_string(order) +
                      " needs at least " + std::to_string(order + 1) +
                      " rows");
  }
  ExtrapolationResult out;
  out.order_assumed = order;
  std::vector<double> level;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].n != 2 * rows[i - 1].n) {
      throw DomainError("richardson: degrees must double between rows (" +
                        std::to_string(rows[i - 1].n) + " -> " +
                        std::to_string(rows[i].n) + ")");
    }
    out.samples.emplace_back(rows[i].n, rows[i].c);
    level.push_back(rows[i].c);
  }
  for (int k = 1; k <= order; ++k) {
    const double w = std::ldexp(1.0, k);
    std::vector<double> next;
    for (std::size_t i = 0; i + 1 < level.size(); ++i) {
      next.push_back((w * level[i + 1] - level[i]) / (w - 1.0));
    }
    level = std::move(next);
  }
  double sum = 0.0;
  for (double v : level) sum += v;
  out.estimate = sum / static_cast<double>(level.size());
  return out;
}

}  // namespace bohr::asympt
