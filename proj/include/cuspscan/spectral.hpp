#pragma once

#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cuspscan/forward.hpp"
#include "cuspscan/geometry.hpp"

namespace cusp {

/// g_N(theta) = sum_{|n| <= N} a_n e^{in theta} / sqrt(2 pi) with ||a|| = 1.
/// `center` is the expansion point the data were referred to; the Herglotz
/// function belonging to this kernel is v_g(x - center).
struct TruncatedKernel {
  double k = 0.0;
  int order = 0;
  Point center;
  Eigen::VectorXcd coeffs;  // a_{-N} .. a_N

  cd coeff(int n) const { return coeffs(n + order); }
  cd value(double theta) const;
};

/// Column n holds sqrt(w) e^{in theta_j} / sqrt(2 pi), w = 2 pi / count, so
/// the columns are orthonormal. Requires count >= 2N + 2.
Eigen::MatrixXcd kernel_basis_matrix(int count, int order);

/// Quadrature form of F_{k,N} g: sum_j w A(:, j) g_N(d_j); length m.
Eigen::VectorXcd apply_truncated(const FarFieldMatrix &a, const TruncatedKernel &kernel);

/// Kernel applied on the observation variable: sum_i w A(i, :) g_N(x_i);
/// length n_inc. Equals apply_truncated of the reciprocal data up to the
/// reciprocity defect.
Eigen::VectorXcd apply_truncated_observation(const FarFieldMatrix &a,
                                             const TruncatedKernel &kernel);

/// Refers far-field data to a new origin c:
/// A_c(x, d) = e^{-ik c.(d - x)} A(x, d).
FarFieldMatrix recenter(const FarFieldMatrix &a, Point center);

/// ceil(e k R / 2) + extra.
int truncation_order(double k, double radius, int extra = 5);

/// L2 norm over the disk of radius R of the Herglotz function with kernel
/// e^{in theta} / sqrt(2 pi).
double herglotz_mode_norm(int n, double k, double radius);

enum class IndicatorNorm {
  /// sigma_min of A_w Y, kernels normalised in L2(S^1).
  kKernel,
  /// sigma_min of D^{-1} P^H A_w Y D^{-1}, with P the observation-side basis
  /// and D_n = herglotz_mode_norm(n, k, R): kernels normalised by the size of
  /// their Herglotz function on the prior disk.
  kHerglotz,
};

enum class IndicatorCost { kL2, kL1 };

struct IndicatorOptions {
  IndicatorNorm norm = IndicatorNorm::kHerglotz;
  IndicatorCost cost = IndicatorCost::kL2;
  Point center;           // prior disk centre
  double radius = 1.0;    // prior disk radius R
  int output_order = -1;  // kHerglotz observation modes; -1 = truncation_order(k, R)
};

struct IndicatorResult {
  double sigma = 0.0;
  TruncatedKernel kernel;
  bool degenerate = false;
};

/// Smallest singular value of the truncated operator and its right singular
/// vector (phase fixed so the largest coefficient is real positive).
IndicatorResult indicator(const FarFieldMatrix &a, int order, const IndicatorOptions &opts = {});

struct ScanOptions {
  IndicatorOptions indicator;
  int order_extra = 5;
  int order_override = -1;  // fixed N for every k when >= 0
  double dip_threshold = 0.1;
  double refine_tol = 0.0;  // golden-section bracket width; 0 disables
};

struct IndicatorSample {
  double k = 0.0;
  double sigma = 0.0;
  int order = 0;
  bool degenerate = false;
  TruncatedKernel kernel;
};

struct IndicatorCurve {
  std::vector<IndicatorSample> samples;
  double median_sigma() const;
};

struct EigenDetection {
  double k_star = 0.0;
  double sigma = 0.0;
  double dip_depth = 0.0;  // sigma / window median
  bool refined = false;
  TruncatedKernel kernel;
};

struct ScanResult {
  IndicatorCurve curve;
  std::vector<EigenDetection> detections;
  std::string diagnostic;
};

using MatrixProvider = std::function<FarFieldMatrix(double k)>;

IndicatorSample evaluate_indicator(const FarFieldMatrix &a, const ScanOptions &opts);

/// Indicator over an archive with strictly increasing k, local-minimum dip
/// detection and, when `provider` is set and refine_tol > 0, golden-section
/// refinement of every accepted dip.
ScanResult scan(const std::vector<FarFieldMatrix> &archive, const ScanOptions &opts,
                const MatrixProvider &provider = {});

/// Adds complex Gaussian noise of per-entry standard deviation
/// eps ||A||_F / sqrt(m n_inc).
void add_noise(FarFieldMatrix &a, double eps, std::mt19937_64 &rng);

}  // namespace cusp
