#include <cmath>
#include <numbers>

#include "doctest.h"

#include "cuspscan/errors.hpp"
#include "cuspscan/quadrature.hpp"
#include "cuspscan/specfun.hpp"

using namespace cusp;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("J_n matches the standard library over the supported range") {
  double worst = 0.0;
  for (double x : {1e-6, 0.01, 0.3, 1.0, 2.5, 7.3, 15.0, 33.3, 60.0, 99.9}) {
    const auto seq = specfun::bessel_j_sequence(80, x);
    for (int n = 0; n <= 80; ++n) {
      const double ref = std::cyl_bessel_j(static_cast<double>(n), x);
      worst = std::max(worst, std::abs(seq[n] - ref));
    }
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("Y_n matches the standard library where it is moderate") {
  for (double x : {0.05, 0.5, 1.0, 4.0, 12.0, 40.0, 95.0}) {
    const auto y = specfun::bessel_y_sequence(40, x);
    for (int n = 0; n <= 40; ++n) {
      const double ref = std::cyl_neumann(static_cast<double>(n), x);
      if (std::abs(ref) > 1e12) continue;
      CHECK_MESSAGE(rel(y[n], ref) < 1e-10, "n=" << n << " x=" << x);
    }
  }
}

TEST_CASE("Wronskian J_{n+1} Y_n - J_n Y_{n+1} = 2 / (pi x)") {
  for (double x : {0.2, 1.7, 9.0, 55.0}) {
    const auto h = specfun::hankel1_sequence(30, x);
    for (int n = 0; n < 30; ++n) {
      const double w = h[n + 1].real() * h[n].imag() - h[n].real() * h[n + 1].imag();
      const double ref = 2.0 / (std::numbers::pi * x);
      if (std::abs(h[n + 1].imag()) > 1e10) break;
      CHECK(rel(w, ref) < 1e-9);
    }
  }
}

TEST_CASE("negative orders and negative arguments follow the reflection rules") {
  CHECK(specfun::bessel_j(-3, 2.0) == doctest::Approx(-std::cyl_bessel_j(3.0, 2.0)).epsilon(1e-14));
  CHECK(specfun::bessel_j(-4, 2.0) == doctest::Approx(std::cyl_bessel_j(4.0, 2.0)).epsilon(1e-14));
  CHECK(specfun::bessel_j(3, -2.0) == doctest::Approx(-std::cyl_bessel_j(3.0, 2.0)).epsilon(1e-14));
  CHECK(specfun::bessel_y(-1, 3.0) == doctest::Approx(-std::cyl_neumann(1.0, 3.0)).epsilon(1e-12));
  CHECK(specfun::bessel_j(0, 0.0) == 1.0);
  CHECK(specfun::bessel_j(5, 0.0) == 0.0);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(specfun::bessel_y(0, 0.0), DomainError);
  CHECK_THROWS_AS(specfun::hankel1(1, -1.0), DomainError);
  CHECK_THROWS_AS(specfun::bessel_j(specfun::kMaxOrder + 1, 1.0), DomainError);
  CHECK_THROWS_AS(specfun::bessel_j(1, std::nan("")), DomainError);
}

TEST_CASE("circular harmonics are orthonormal under the trapezoidal rule") {
  const int count = 64;
  for (int a = -5; a <= 5; ++a) {
    for (int b = -5; b <= 5; ++b) {
      std::complex<double> s = 0.0;
      for (int j = 0; j < count; ++j) {
        const double t = 2.0 * std::numbers::pi * j / count;
        s += std::conj(specfun::circular_harmonic(a, t)) * specfun::circular_harmonic(b, t);
      }
      s *= 2.0 * std::numbers::pi / count;
      CHECK(std::abs(s - (a == b ? 1.0 : 0.0)) < 1e-13);
    }
  }
}

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n - 1 exactly") {
  const auto &rule = gauss_legendre(6);
  for (int p = 0; p <= 11; ++p) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], p);
    const double exact = (p % 2) ? 0.0 : 2.0 / (p + 1);
    CHECK(std::abs(s - exact) < 1e-14);
  }
}
