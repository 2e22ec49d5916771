#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bohr/errors.hpp"

// Empirical side of the Bohr inequality
//   sum_k |a_k| r^k <= sup_{|z|<1} |p(z)|,   p(z) = sum_{k<=n} a_k z^k.

namespace bohr::check {

using Complex = std::complex<double>;

/// Polynomial of degree at most n on the unit disk, coefficients a_0..a_n.
class DiskPolynomial {
 public:
  DiskPolynomial() : coeffs_{Complex{0.0, 0.0}} {}

  explicit DiskPolynomial(std::vector<Complex> coeffs)
      : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) {
      throw DomainError("DiskPolynomial: needs at least one coefficient");
    }
  }

  static DiskPolynomial from_real(std::span<const double> a) {
    std::vector<Complex> c(a.begin(), a.end());
    return DiskPolynomial(std::move(c));
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const Complex> coeffs() const { return coeffs_; }

  Complex operator()(Complex z) const {
    Complex acc = coeffs_.back();
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) {
      acc = acc * z + *it;
    }
    return acc;
  }

  /// |p(e^{i theta})|^2
  double norm_on_circle(double theta) const {
    return std::norm((*this)(std::polar(1.0, theta)));
  }

  friend bool operator==(const DiskPolynomial&, const DiskPolynomial&) = default;

 private:
  std::vector<Complex> coeffs_;
};

/// sum_k |a_k| r^k
inline double majorant(const DiskPolynomial& p, double r) {
  double acc = 0.0;
  const auto c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * r + std::abs(*it);
  return acc;
}

inline int min_samples(int degree) { return 4 * (degree + 1); }
inline int default_samples(int degree) {
  return std::max(256, 16 * (degree + 1));
}

namespace detail {

inline constexpr int kRefinedMaxima = 8;
inline constexpr double kRefineWidth = 1e-12;

// Golden-section search for the maximum of |p|^2 on [a, b].
inline double golden_max(const DiskPolynomial& p, double a, double b,
                         double width = kRefineWidth) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = p.norm_on_circle(c);
  double fd = p.norm_on_circle(d);
  while (b - a > width) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = p.norm_on_circle(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = p.norm_on_circle(d);
    }
  }
  return std::max({fc, fd, p.norm_on_circle(0.5 * (a + b))});
}

inline double sampled_supnorm(const DiskPolynomial& p, int samples,
                              double width) {
  const auto m = static_cast<std::size_t>(samples);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(samples);
  std::vector<double> v(m);
  for (std::size_t j = 0; j < m; ++j) {
    v[j] = p.norm_on_circle(step * static_cast<double>(j));
  }

  std::vector<std::size_t> peaks;
  for (std::size_t j = 0; j < m; ++j) {
    const double left = v[(j + m - 1) % m];
    const double right = v[(j + 1) % m];
    if (v[j] >= left && v[j] >= right) peaks.push_back(j);
  }
  const auto keep = std::min<std::size_t>(peaks.size(), kRefinedMaxima);
  std::partial_sort(peaks.begin(), peaks.begin() + static_cast<std::ptrdiff_t>(keep),
                    peaks.end(), [&v](std::size_t a, std::size_t b) {
                      return v[a] > v[b] || (v[a] == v[b] && a < b);
                    });

  double best = *std::max_element(v.begin(), v.end());
  for (std::size_t i = 0; i < keep; ++i) {
    const double centre = step * static_cast<double>(peaks[i]);
    best = std::max(best, golden_max(p, centre - step, centre + step, width));
  }
  return std::sqrt(best);
}

}  // namespace detail

/// max |p| on the unit circle: equispaced sampling, then golden-section
/// refinement of the 8 largest local maxima to theta-width 1e-12.
/// The result never exceeds the true sup-norm.
inline double supnorm(const DiskPolynomial& p, int samples) {
  if (samples < min_samples(p.degree())) {
    throw DomainError("supnorm: " + std::to_string(samples) +
                      " samples is below the minimum " +
                      std::to_string(min_samples(p.degree())));
  }
  return detail::sampled_supnorm(p, samples, detail::kRefineWidth);
}

/// Both sides of the Bohr inequality for one polynomial at one radius.
struct BohrWitness {
  DiskPolynomial poly;
  double r = 0.0;
  double majorant = 0.0;
  double supnorm = 0.0;
  double gap = 0.0;  // majorant - supnorm; > 0 is a violation

  bool violates() const { return gap > 0.0; }
};

inline BohrWitness bohr_gap(const DiskPolynomial& p, double r, int samples) {
  BohrWitness w{p, r, majorant(p, r), supnorm(p, samples), 0.0};
  w.gap = w.majorant - w.supnorm;
  return w;
}

enum class CoefficientMode { real, complex, automatic };

inline const char* to_string(CoefficientMode m) {
  switch (m) {
    case CoefficientMode::real: return "real";
    case CoefficientMode::complex: return "complex";
    case CoefficientMode::automatic: return "auto";
  }
  return "?";
}

struct SearchOptions {
  int restarts = 200;
  CoefficientMode mode = CoefficientMode::automatic;
  std::uint64_t seed = 0;
  int samples = 0;           // 0: default_samples(n)
  double threshold = 1e-6;   // smallest gap reported as a violation
};

namespace detail {

// Free parameters of the search. a_0 and a_1 are taken real and >= 0: a
// global phase and the rotation a_k -> e^{ik alpha} a_k leave both sides
// of the inequality unchanged.
inline int parameter_count(int n, CoefficientMode mode) {
  return mode == CoefficientMode::real ? n + 1 : 2 * n;
}

inline std::vector<Complex> to_coefficients(std::span<const double> x, int n,
                                            CoefficientMode mode) {
  std::vector<Complex> a(static_cast<std::size_t>(n) + 1);
  a[0] = std::abs(x[0]);
  a[1] = std::abs(x[1]);
  for (int k = 2; k <= n; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    if (mode == CoefficientMode::real) {
      a[ku] = x[ku];
    } else {
      const auto base = static_cast<std::size_t>(2 * k - 2);
      a[ku] = Complex{x[base], x[base + 1]};
    }
  }
  double scale = 0.0;
  for (const auto& c : a) scale = std::max(scale, std::abs(c));
  if (scale > 0.0) {
    for (auto& c : a) c /= scale;
  }
  return a;
}

inline bool lexicographically_less(const DiskPolynomial& a,
                                   const DiskPolynomial& b) {
  const auto ca = a.coeffs();
  const auto cb = b.coeffs();
  return std::lexicographical_compare(
      ca.begin(), ca.end(), cb.begin(), cb.end(),
      [](const Complex& u, const Complex& v) {
        return u.real() < v.real() || (u.real() == v.real() && u.imag() < v.imag());
      });
}

inline bool better(const BohrWitness& a, const BohrWitness& b) {
  if (a.gap != b.gap) return a.gap > b.gap;
  return lexicographically_less(a.poly, b.poly);
}

// Coordinate descent on the gap. Each coordinate keeps its own step, which
// doubles after a successful move and halves after a failed one; random
// directions are probed before the steps are allowed to shrink further.
inline BohrWitness descend(int n, double r, CoefficientMode mode, int samples,
                           std::mt19937_64& rng) {
  constexpr double kInitialStep = 0.25;
  constexpr double kMaxStep = 1.0;
  constexpr double kFinalStep = 1e-7;
  constexpr int kMaxSweeps = 400;
  // Candidates are ranked on a coarser sup-norm; the returned witness is
  // re-evaluated at full accuracy.
  constexpr double kSearchWidth = 1e-9;
  const int search_samples = std::max(32, 8 * (n + 1));

  const int dim = parameter_count(n, mode);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto evaluate = [&](std::span<const double> x) {
    const auto a = to_coefficients(x, n, mode);
    if (std::all_of(a.begin(), a.end(), [](Complex c) { return c == Complex{}; })) {
      return -std::numeric_limits<double>::infinity();
    }
    const DiskPolynomial p(a);
    return majorant(p, r) - sampled_supnorm(p, search_samples, kSearchWidth);
  };

  std::vector<double> x(static_cast<std::size_t>(dim));
  for (auto& v : x) v = uniform(rng);
  double fx = evaluate(x);
  std::vector<double> trial(x.size());
  std::vector<double> step(x.size(), kInitialStep);
  std::vector<double> dir(x.size());

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool improved = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      bool moved = false;
      for (double sgn : {1.0, -1.0}) {
        trial = x;
        trial[i] += sgn * step[i];
        const double ft = evaluate(trial);
        if (ft > fx) {
          x.swap(trial);
          fx = ft;
          moved = true;
          break;
        }
      }
      step[i] = moved ? std::min(2.0 * step[i], kMaxStep) : 0.5 * step[i];
      improved = improved || moved;
    }
    const double h = *std::max_element(step.begin(), step.end());
    if (!improved) {
      for (int probe = 0; probe < 2 * dim; ++probe) {
        double len = 0.0;
        for (auto& v : dir) {
          v = gauss(rng);
          len += v * v;
        }
        len = std::sqrt(len);
        for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + h * dir[i] / len;
        const double ft = evaluate(trial);
        if (ft > fx) {
          x.swap(trial);
          fx = ft;
          std::fill(step.begin(), step.end(), h);
          break;
        }
      }
    }
    if (h < kFinalStep) break;
  }
  const DiskPolynomial p(to_coefficients(x, n, mode));
  return bohr_gap(p, r, samples);
}

inline std::optional<BohrWitness> search_mode(int n, double r,
                                              CoefficientMode mode,
                                              const SearchOptions& opts) {
  const int samples = opts.samples > 0 ? opts.samples : default_samples(n);
  std::mt19937_64 rng(opts.seed);
  std::optional<BohrWitness> best;
  for (int k = 0; k < opts.restarts; ++k) {
    auto w = descend(n, r, mode, samples, rng);
    if (!best || better(w, *best)) best = std::move(w);
  }
  if (best && best->gap > opts.threshold) return best;
  return std::nullopt;
}

}  // namespace detail

/// Searches for a degree-n polynomial (normalized to max |a_k| = 1) whose
/// majorant at r exceeds its sup-norm by more than opts.threshold.
/// CoefficientMode::automatic tries real coefficients, then complex ones.
inline std::optional<BohrWitness> search_violation(int n, double r,
                                                   const SearchOptions& opts = {}) {
  if (n < 1) {
    throw DomainError("search_violation: n must be >= 1");
  }
  if (!(r > 0.0 && r < 1.0)) {
    throw DomainError("search_violation: r must lie in (0, 1)");
  }
  if (opts.restarts < 1) {
    throw DomainError("search_violation: restarts must be >= 1");
  }
  if (opts.samples != 0 && opts.samples < min_samples(n)) {
    throw DomainError("search_violation: samples below 4(n+1)");
  }
  if (opts.mode != CoefficientMode::automatic) {
    return detail::search_mode(n, r, opts.mode, opts);
  }
  if (auto w = detail::search_mode(n, r, CoefficientMode::real, opts)) return w;
  return detail::search_mode(n, r, CoefficientMode::complex, opts);
}

/// Interval (lo, hi) around the radius at which violations start to be
/// found. `hi` is empty when no violation was found anywhere in the window.
struct EmpiricalInterval {
  double lo = 0.0;
  std::optional<double> hi;

  bool conclusive() const { return hi.has_value(); }
};

inline constexpr double kEmpiricalLow = 1.0 / 3.0;
inline constexpr double kEmpiricalHigh = 0.9;
inline constexpr double kEmpiricalWidth = 0.01;

/// Bisection on r over [1/3, 0.9] of "search_violation finds a witness".
inline EmpiricalInterval empirical_radius(int n, int budget,
                                          std::uint64_t seed = 0) {
  if (n < 2) {
    throw DomainError("empirical_radius: n must be >= 2");
  }
  if (budget < 1) {
    throw DomainError("empirical_radius: budget must be >= 1");
  }
  SearchOptions opts;
  opts.restarts = budget;
  opts.seed = seed;
  auto found = [&](double r) { return search_violation(n, r, opts).has_value(); };

  if (!found(kEmpiricalHigh)) return {kEmpiricalHigh, std::nullopt};
  double lo = kEmpiricalLow;
  double hi = kEmpiricalHigh;
  while (hi - lo > kEmpiricalWidth) {
    const double mid = 0.5 * (lo + hi);
    (found(mid) ? hi : lo) = mid;
  }
  return {lo, hi};
}

}  // namespace bohr::check
