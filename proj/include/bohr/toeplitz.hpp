#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bohr/errors.hpp"

namespace bohr {

/// Degree n and radius r parameterizing T_n(r) and Delta_n(r) = det T_n(r).
struct ToeplitzParams {
  int n = 0;
  double r = 0.0;

  void validate() const {
    if (n < 0) {
      throw DomainError("toeplitz: degree n must be >= 0, got " +
                        std::to_string(n));
    }
    if (!(r >= 0.0 && r < 1.0)) {
      throw DomainError("toeplitz: r must lie in [0, 1), got " +
                        std::to_string(r));
    }
  }
};

/// Largest degree accepted by the dense determinant path.
inline constexpr int kDenseMaxDegree = 64;

/// The (n+1)x(n+1) symmetric Toeplitz matrix with entries c_{|i-j|},
/// c_0 = 1 and c_k = (-1)^{k-1} r^k.
class ToeplitzMatrix {
 public:
  explicit ToeplitzMatrix(const ToeplitzParams& p) : params_(p) {
    p.validate();
    const int size = p.n + 1;
    std::vector<double> c(static_cast<std::size_t>(size));
    c[0] = 1.0;
    double power = 1.0;
    for (int k = 1; k < size; ++k) {
      power *= p.r;
      c[static_cast<std::size_t>(k)] = (k % 2 == 1) ? power : -power;
    }
    entries_.resize(size, size);
    for (int i = 0; i < size; ++i) {
      for (int j = 0; j < size; ++j) {
        entries_(i, j) = c[static_cast<std::size_t>(std::abs(i - j))];
      }
    }
  }

  int size() const { return static_cast<int>(entries_.rows()); }
  double operator()(int i, int j) const { return entries_(i, j); }
  const Eigen::MatrixXd& matrix() const { return entries_; }
  const ToeplitzParams& params() const { return params_; }

 private:
  ToeplitzParams params_;
  Eigen::MatrixXd entries_;
};

inline ToeplitzMatrix build_matrix(const ToeplitzParams& p) {
  return ToeplitzMatrix(p);
}

/// Determinant by LU with partial pivoting. Validation path only.
inline double dense_det(const ToeplitzMatrix& m) {
  if (m.size() - 1 > kDenseMaxDegree) {
    throw DomainError("dense_det: degree " + std::to_string(m.size() - 1) +
                      " exceeds the dense limit " +
                      std::to_string(kDenseMaxDegree));
  }
  return m.matrix().partialPivLu().determinant();
}

/// A determinant held as sign * exp(log_mag). `raw` is the plain double
/// value, present only when the evaluation never had to rescale.
struct ScaledDet {
  int sign = 0;
  double log_mag = -std::numeric_limits<double>::infinity();
  std::optional<double> raw;

  /// sign * exp(log_mag); may underflow or overflow for large degrees.
  double value() const {
    if (raw) return *raw;
    if (sign == 0) return 0.0;
    return sign * std::exp(log_mag);
  }

  double log10_abs() const { return log_mag / std::numbers::ln10; }
};

/// Magnitude window for the working pair of the recurrence. Leaving it
/// triggers an exact power-of-two rescale.
struct RescaleWindow {
  double low = 1e-150;
  double high = 1e150;
};

namespace detail {

struct RecurrenceOutcome {
  ScaledDet det;
  // |Delta_n| over the sum of magnitudes of the two terms that produced it.
  double cancellation = 1.0;
};

inline RecurrenceOutcome run_recurrence(const ToeplitzParams& p,
                                        const RescaleWindow& window) {
  p.validate();
  const double r2 = p.r * p.r;
  const double a = 3.0 * r2 + 1.0;
  const double b = 4.0 * r2;

  double prev = 1.0;  // Delta_{-1}
  double cur = 1.0;   // Delta_0
  long long exponent = 0;
  bool rescaled = false;
  double cancellation = 1.0;

  for (int k = 1; k <= p.n; ++k) {
    const double t1 = a * cur;
    const double t2 = b * prev;
    const double next = t1 - t2;
    const double terms = std::abs(t1) + std::abs(t2);
    cancellation = terms > 0.0 ? std::abs(next) / terms : 1.0;
    prev = cur;
    cur = next;

    const double mag = std::max(std::abs(prev), std::abs(cur));
    if (mag == 0.0) break;
    if (mag < window.low || mag > window.high) {
      int e = 0;
      std::frexp(mag, &e);
      prev = std::ldexp(prev, -e);
      cur = std::ldexp(cur, -e);
      exponent += e;
      rescaled = true;
    }
  }

  RecurrenceOutcome out;
  out.cancellation = cancellation;
  if (cur == 0.0) {
    out.det.sign = 0;
    if (!rescaled) out.det.raw = 0.0;
    return out;
  }
  out.det.sign = cur > 0.0 ? 1 : -1;
  out.det.log_mag =
      std::log(std::abs(cur)) + static_cast<double>(exponent) * std::numbers::ln2;
  if (!rescaled) out.det.raw = cur;
  return out;
}

}  // namespace detail

/// Delta_n(r) by the three-term recurrence
///   Delta_k = (3r^2 + 1) Delta_{k-1} - 4 r^2 Delta_{k-2},
/// starting from Delta_{-1} = Delta_0 = 1.
inline ScaledDet delta(const ToeplitzParams& p,
                       const RescaleWindow& window = {}) {
  return detail::run_recurrence(p, window).det;
}

/// Sign of Delta_n(r), reported as 0 when the last recurrence step cancels
/// to within `rel_tol` of its terms.
inline int delta_sign(const ToeplitzParams& p, double rel_tol = 1e-12) {
  const auto out = detail::run_recurrence(p, {});
  if (out.det.sign == 0 || out.cancellation <= rel_tol) return 0;
  return out.det.sign;
}

inline std::vector<int> delta_sign_profile(int n, std::span<const double> rs) {
  std::vector<int> signs;
  signs.reserve(rs.size());
  for (double r : rs) signs.push_back(delta_sign({n, r}));
  return signs;
}

}  // namespace bohr
