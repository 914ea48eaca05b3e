#include "cuspscan/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cuspscan/errors.hpp"

namespace cusp::specfun {
namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

void check_order(int n) {
  if (n > kMaxOrder || n < -kMaxOrder) {
    throw DomainError("bessel order " + std::to_string(n) + " exceeds supported range");
  }
}

void check_finite(double x) {
  if (!std::isfinite(x)) throw DomainError("bessel argument is not finite");
}

// Starting order for the downward sweep: the ratio J_start / max|J| must sit
// below double precision over the whole supported range of x.
int miller_start(int nmax, double x) {
  const int base = std::max(nmax, static_cast<int>(std::ceil(x)));
  int m = base + 30 + static_cast<int>(std::ceil(15.0 * std::cbrt(x)));
  if (m % 2) ++m;
  return m;
}

// Normalised J_0..J_m for x > 0, m even.
std::vector<double> miller_sweep(int m, double x) {
  std::vector<double> j(static_cast<std::size_t>(m) + 2, 0.0);
  j[m + 1] = 0.0;
  j[m] = 1e-30;
  double norm = 0.0;  // J_0 + 2 sum J_{2k}, unnormalised
  for (int k = m; k >= 1; --k) {
    j[k - 1] = (2.0 * k / x) * j[k] - j[k + 1];
    if (k % 2 == 0) norm += 2.0 * j[k];
    if (std::abs(j[k - 1]) > 1e200) {
      for (int i = k - 1; i <= m; ++i) j[i] *= 1e-200;
      norm *= 1e-200;
    }
  }
  norm += j[0];
  const double inv = 1.0 / norm;
  for (auto &v : j) v *= inv;
  j.pop_back();
  return j;
}

}  // namespace

std::vector<double> bessel_j_sequence(int nmax, double x) {
  check_order(nmax);
  check_finite(x);
  if (nmax < 0) throw DomainError("bessel_j_sequence: negative nmax");
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const double ax = std::abs(x);
  const auto full = miller_sweep(miller_start(nmax, ax), ax);
  for (int n = 0; n <= nmax; ++n) {
    out[n] = (x < 0 && (n % 2)) ? -full[n] : full[n];
  }
  return out;
}

namespace {

// Y_0..Y_nmax given the normalised sweep j[0..m].
std::vector<double> neumann_from_sweep(int nmax, double x, const std::vector<double> &j) {
  const int m = static_cast<int>(j.size()) - 1;
  const double pi = std::numbers::pi;
  const double log_term = std::log(0.5 * x) + kEulerGamma;

  double s0 = 0.0;
  double s1 = 0.0;
  for (int k = 1; 2 * k + 1 <= m; ++k) {
    const double sign = (k % 2) ? -1.0 : 1.0;
    s0 += sign * j[2 * k] / k;
    s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k;
  }
  std::vector<double> y(static_cast<std::size_t>(nmax) + 1);
  y[0] = (2.0 / pi) * log_term * j[0] - (4.0 / pi) * s0;
  if (nmax == 0) return y;
  y[1] = -(2.0 / (pi * x)) * j[0] + (2.0 / pi) * log_term * j[1] + (2.0 / pi) * s1;
  for (int n = 1; n < nmax; ++n) {
    y[n + 1] = (2.0 * n / x) * y[n] - y[n - 1];
  }
  return y;
}

void check_y_args(int nmax, double x) {
  check_order(nmax);
  check_finite(x);
  if (nmax < 0) throw DomainError("negative maximum order");
  if (x <= 0.0) throw DomainError("bessel_y/hankel1: argument must be positive");
}

}  // namespace

std::vector<double> bessel_y_sequence(int nmax, double x) {
  check_y_args(nmax, x);
  return neumann_from_sweep(nmax, x, miller_sweep(miller_start(std::max(nmax, 1), x), x));
}

std::vector<std::complex<double>> hankel1_sequence(int nmax, double x) {
  check_y_args(nmax, x);
  const auto j = miller_sweep(miller_start(std::max(nmax, 1), x), x);
  const auto y = neumann_from_sweep(nmax, x, j);
  std::vector<std::complex<double>> h(static_cast<std::size_t>(nmax) + 1);
  for (int n = 0; n <= nmax; ++n) h[n] = {j[n], y[n]};
  return h;
}

double bessel_j(int n, double x) {
  check_order(n);
  const int an = std::abs(n);
  const double v = bessel_j_sequence(an, x)[an];
  return (n < 0 && (an % 2)) ? -v : v;
}

double bessel_y(int n, double x) {
  check_order(n);
  const int an = std::abs(n);
  const double v = bessel_y_sequence(an, x)[an];
  return (n < 0 && (an % 2)) ? -v : v;
}

std::complex<double> hankel1(int n, double x) {
  check_order(n);
  check_finite(x);
  if (x <= 0.0) throw DomainError("hankel1: argument must be positive");
  return {bessel_j(n, x), bessel_y(n, x)};
}

std::complex<double> circular_harmonic(int n, double theta) {
  const double phase = static_cast<double>(n) * theta;
  return std::complex<double>(std::cos(phase), std::sin(phase)) /
         std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace cusp::specfun
