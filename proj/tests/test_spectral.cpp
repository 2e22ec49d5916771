#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "bohr/spectral.hpp"
#include "bohr/toeplitz.hpp"
#include "oracles.hpp"

namespace sp = bohr::spectral;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

// Direct transcription of the substitution, no rewriting.
double naive_g(double x) {
  const double c = std::cos(x);
  return (-2.0 * c - std::sqrt(std::max(0.0, 4.0 * c * c - 3.0))) / 3.0;
}

// p_n(cos x) from the sine quotients, valid away from x = pi.
double sine_quotient_p(int n, double x) {
  const double r = naive_g(x);
  return (std::sin((n + 2) * x) + 2.0 * r * std::sin((n + 1) * x) +
          r * r * std::sin(n * x)) /
         std::sin(x);
}

}  // namespace

TEST_CASE("subst_g at reference angles", "[spectral]") {
  CHECK_THAT(sp::subst_g(kPi), WithinAbs(1.0 / 3.0, 1e-16));
  CHECK_THAT(sp::subst_g(5.0 * kPi / 6.0), WithinAbs(std::sqrt(3.0) / 3.0, 1e-8));
  CHECK_THAT(sp::subst_g(0.95 * kPi), WithinAbs(oracle::kG095Pi, 1e-14));
  CHECK_THAT(sp::subst_g(0.90 * kPi), WithinAbs(oracle::kG090Pi, 1e-14));
  CHECK_THAT(sp::subst_g(0.87 * kPi), WithinAbs(oracle::kG087Pi, 1e-14));
}

TEST_CASE("subst_g rejects angles off the positive real branch", "[spectral]") {
  CHECK_THROWS_AS(sp::subst_g(2.5), bohr::DomainError);   // below 5pi/6
  CHECK_THROWS_AS(sp::subst_g(1.0), bohr::DomainError);
  CHECK_THROWS_AS(sp::subst_g(0.1), bohr::DomainError);   // g < 0 there
  CHECK_THROWS_AS(sp::subst_g(3.2), bohr::DomainError);   // beyond pi
  CHECK_NOTHROW(sp::subst_g(sp::kBranchStart));
}

TEST_CASE("g solves 3g^2 + 4g cos x + 1 = 0 and decreases", "[spectral][property]") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(sp::kBranchStart, kPi);
  std::vector<double> xs(1000);
  for (auto& x : xs) x = angle(rng);
  std::sort(xs.begin(), xs.end());
  double prev = 1.0;
  for (double x : xs) {
    const auto pt = sp::SpectralPoint::at(x);
    CHECK(std::abs(3.0 * pt.r * pt.r + 4.0 * pt.r * pt.t + 1.0) <= 1e-12);
    CHECK(pt.r >= 1.0 / 3.0);
    CHECK(pt.r <= std::sqrt(3.0) / 3.0 + 1e-12);
    CHECK(pt.r < prev);
    prev = pt.r;
    CHECK(sp::subst_g_excess(x) >= 0.0);
  }
}

TEST_CASE("subst_g_excess keeps relative precision near pi", "[spectral]") {
  // g(pi - t) - 1/3 = t^2/3 + O(t^4)
  for (double t : {1e-3, 1e-4, 1e-5, 1e-6}) {
    const double x = kPi - t;
    const double theta = kPi - x;  // the angle actually represented
    CHECK_THAT(sp::subst_g_excess(x), WithinRel(theta * theta / 3.0, 1e-5));
  }
}

TEST_CASE("symbol_f", "[spectral]") {
  CHECK(sp::symbol_f(0.0, 1.234) == 1.0);
  CHECK_THAT(sp::symbol_f(1.0 / 3.0, 0.0), WithinAbs(1.5, 1e-15));
  for (double x : {0.84 * kPi, 0.9 * kPi, 0.99 * kPi, kPi}) {
    CHECK(std::abs(sp::symbol_f(sp::subst_g(x), x)) <= 1e-12);
  }
}

TEST_CASE("cheb_u", "[spectral]") {
  const auto at_one = sp::cheb_u(1.0, 20);
  for (int k = 0; k <= 20; ++k) CHECK(at_one[static_cast<std::size_t>(k)] == k + 1);

  const auto half = sp::cheb_u(0.5, 2);
  CHECK(half == std::vector<double>{1.0, 1.0, 0.0});

  const auto u = sp::cheb_u(std::cos(0.3), 4);
  CHECK_THAT(u[4] * std::sin(0.3), WithinAbs(std::sin(1.5), 1e-12));

  CHECK_THROWS_AS(sp::cheb_u(1.01, 3), bohr::DomainError);
  CHECK_THROWS_AS(sp::cheb_u(0.5, -1), bohr::DomainError);
}

TEST_CASE("pn_eval at x = pi", "[spectral]") {
  CHECK_THAT(sp::pn_eval(2, kPi), WithinAbs(-20.0 / 9.0, 1e-13));
  CHECK_THAT(sp::pn_eval(5, kPi), WithinAbs(32.0 / 9.0, 1e-13));
  // U_k(-1) = (-1)^k (k+1) gives (-1)^{n+1} (4n + 12) / 9 at r = 1/3.
  for (int n = 1; n <= 200; ++n) {
    const double expected = ((n + 1) % 2 == 0 ? 1.0 : -1.0) * (4.0 * n + 12.0) / 9.0;
    CHECK_THAT(sp::pn_eval(n, kPi), WithinRel(expected, 1e-12));
  }
  CHECK_THROWS_AS(sp::pn_eval(0, kPi), bohr::DomainError);
  CHECK_THROWS_AS(sp::pn_eval(3, 2.0), bohr::DomainError);
}

TEST_CASE("pn_eval matches sine quotients and the plain recurrence", "[spectral][property]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(sp::kBranchStart, 0.99 * kPi);
  for (int k = 0; k < 200; ++k) {
    const int n = 1 + static_cast<int>(rng() % 60);
    const double x = angle(rng);
    const double p = sp::pn_eval(n, x);
    const double scale = (n + 2) / std::sin(x);
    CHECK(std::abs(p - sine_quotient_p(n, x)) <= 1e-11 * scale);

    const auto u = sp::cheb_u(std::cos(x), n + 1);
    const double r = sp::subst_g(x);
    const auto nn = static_cast<std::size_t>(n);
    const double via_u = u[nn + 1] + 2.0 * r * u[nn] + r * r * u[nn - 1];
    CHECK(std::abs(p - via_u) <= 1e-11 * scale);
  }
}

TEST_CASE("closed form reproduces the determinant recurrence", "[spectral][property]") {
  for (double x : {0.87 * kPi, 0.9 * kPi, 0.95 * kPi}) {
    const double r = sp::subst_g(x);
    const double closed = std::pow(-2.0 * r, 11) / (1.0 - r * r) * sp::pn_eval(10, x);
    const auto rec = bohr::delta({10, r});
    REQUIRE(rec.raw);
    CHECK_THAT(closed, WithinRel(*rec.raw, 1e-9));
  }

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> angle(sp::kBranchStart, kPi);
  std::vector<double> xs(20);
  for (auto& x : xs) x = angle(rng);
  for (int n = 1; n <= 500; n += (n < 20 ? 1 : 37)) {
    for (double x : xs) {
      const auto closed = sp::delta_closed_form(n, x);
      const auto rec = bohr::delta({n, sp::subst_g(x)});
      // Skip points sitting on a root, where the log is unbounded.
      if (rec.sign == 0 || closed.sign == 0 || rec.log_mag < -30.0 * n) continue;
      CHECK(closed.sign == rec.sign);
      CHECK_THAT(closed.log_mag, WithinAbs(rec.log_mag, 1e-9 * std::max(1.0, std::abs(rec.log_mag))));
    }
  }
}

TEST_CASE("nodes", "[spectral]") {
  const auto g2 = sp::nodes(2);
  REQUIRE(g2.nodes.size() == 3);
  CHECK_THAT(g2.nodes[0], WithinAbs(kPi / 4, 1e-15));
  CHECK_THAT(g2.nodes[1], WithinAbs(kPi / 2, 1e-15));
  CHECK_THAT(g2.nodes[2], WithinAbs(3 * kPi / 4, 1e-15));

  const auto g1 = sp::nodes(1);
  CHECK(g1.nodes.size() == 2);
  CHECK_THAT(g1.nodes[0], WithinAbs(kPi / 3, 1e-15));
  CHECK_THAT(g1.nodes[1], WithinAbs(2 * kPi / 3, 1e-15));

  for (int n : {1, 7, 100, 12345}) {
    const auto g = sp::nodes(n);
    CHECK(std::is_sorted(g.nodes.begin(), g.nodes.end()));
    CHECK(g.nodes.front() > 0.0);
    CHECK(g.nodes.back() < kPi);
    CHECK_THAT(g.nodes.back(), WithinAbs((n + 1) * kPi / (n + 2), 1e-15));
  }
  CHECK_THROWS_AS(sp::nodes(0), bohr::DomainError);
}

TEST_CASE("half_node y_n", "[spectral]") {
  CHECK_THAT(sp::half_node(7), WithinAbs(5.0 * kPi / 6.0, 1e-15));
  CHECK_THAT(sp::half_node(10), WithinAbs(10.5 * kPi / 12.0, 1e-15));
  CHECK(sp::half_node(6) < sp::kBranchStart);
}

TEST_CASE("node values follow (-1)^{nu+1} 2r (1 + r cos x_nu)", "[spectral]") {
  for (int n = 7; n <= 50; ++n) {
    for (int nu = 1; nu <= n + 1; ++nu) {
      const double x = sp::node(n, nu);
      if (x < sp::kBranchStart) continue;
      const double r = sp::subst_g(x);
      const double sign = (nu % 2 == 1) ? 1.0 : -1.0;
      const double expected = sign * 2.0 * r * (1.0 + r * std::cos(x));
      const double p = sp::pn_eval(n, x);
      CHECK_THAT(p, WithinAbs(expected, 1e-11));
      CHECK(sp::sign_of(p) == static_cast<int>(sign));
    }
  }
}

TEST_CASE("bracket (x_{n+1}, pi) carries a sign change", "[spectral]") {
  const auto b7 = sp::bracket(7);
  CHECK_THAT(b7.lo, WithinAbs(8.0 * kPi / 9.0, 1e-15));
  CHECK(b7.hi == kPi);
  CHECK(b7.sign_lo * b7.sign_hi == -1);

  const auto b10 = sp::bracket(10);
  CHECK_THAT(b10.lo, WithinAbs(11.0 * kPi / 12.0, 1e-15));

  CHECK_THROWS_AS(sp::bracket(6), bohr::DomainError);
  for (int n = 7; n <= 2000; n += (n < 60 ? 1 : 113)) {
    const auto b = sp::bracket(n);
    CHECK(b.lo < b.hi);
    CHECK(b.sign_lo == ((n % 2 == 0) ? 1 : -1));
    CHECK(b.sign_hi == -b.sign_lo);
  }
}

TEST_CASE("(y_n, x_{n+1}) has no sign change: the largest root lies above x_{n+1}",
          "[spectral]") {
  for (int n = 7; n <= 50; ++n) {
    const double y = sp::half_node(n);
    const double x_last = sp::node(n, n + 1);
    CHECK(sp::sign_of(sp::pn_eval(n, y)) == sp::sign_of(sp::pn_eval(n, x_last)));
    CHECK_THROWS_AS(sp::sign_bracket(n, y, x_last), bohr::BracketError);
  }
}

TEST_CASE("solve_spectral", "[spectral]") {
  const auto r7 = sp::solve_spectral(7, 1e-14);
  CHECK_THAT(r7.r, WithinAbs(oracle::kR7, 1e-10));
  CHECK(r7.iterations <= bohr::kBisectionMaxIterations);

  const auto r100 = sp::solve_spectral(100, 1e-14);
  CHECK_THAT(r100.r, WithinAbs(0.33365, 5e-4));
  CHECK_THAT(r100.r, WithinAbs(oracle::kR100, 1e-12));

  const auto r1000 = sp::solve_spectral(1000, 1e-14);
  CHECK(r1000.x > r1000.bracket.lo);
  CHECK(r1000.x < r1000.bracket.hi);
  CHECK(r1000.x > sp::node(1000, 1001));

  CHECK_THROWS_AS(sp::solve_spectral(7, 0.0), bohr::DomainError);
  CHECK_THROWS_AS(sp::solve_spectral(5, 1e-12), bohr::DomainError);
}

TEST_CASE("scaled kernel tends to sin z / z", "[spectral]") {
  for (double z : {1.5 * kPi, 2.0, 1.0}) {
    const double target = std::sin(z) / z;
    double prev = 1e300;
    for (int n : {100, 1000, 10000}) {
      const double dev = std::abs(sp::scaled_kernel(n, z) - target);
      CHECK(dev < prev);
      prev = dev;
    }
    CHECK(prev <= 1e-2);
  }
}
