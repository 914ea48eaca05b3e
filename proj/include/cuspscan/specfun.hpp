#pragma once

#include <complex>
#include <vector>

/// Cylinder functions of integer order and the circular-harmonic basis.
///
/// J_n is computed by Miller's downward recurrence normalised with
/// 1 = J_0 + 2 sum J_{2k}; Y_0 and Y_1 come from Neumann series in the same
/// J_n values and higher Y_n from forward recurrence. This covers the regime
/// used by the toolkit: |n| <= 200, 0 <= x <= 100.
namespace cusp::specfun {

inline constexpr int kMaxOrder = 200;

double bessel_j(int n, double x);
double bessel_y(int n, double x);
std::complex<double> hankel1(int n, double x);

/// J_0(x) .. J_nmax(x) from a single recurrence sweep.
std::vector<double> bessel_j_sequence(int nmax, double x);

/// Y_0(x) .. Y_nmax(x); x must be positive.
std::vector<double> bessel_y_sequence(int nmax, double x);

/// H^{(1)}_0(x) .. H^{(1)}_nmax(x) sharing one recurrence sweep.
std::vector<std::complex<double>> hankel1_sequence(int nmax, double x);

/// e^{i n theta} / sqrt(2 pi), orthonormal on the unit circle.
std::complex<double> circular_harmonic(int n, double theta);

}  // namespace cusp::specfun
