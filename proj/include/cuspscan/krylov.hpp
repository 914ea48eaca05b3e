#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace cusp {

struct GmresOptions {
  double tol = 1e-7;  // relative residual ||b - Ax|| / ||b||
  int max_iterations = 500;
  int restart = 50;
};

struct GmresResult {
  int iterations = 0;
  double relative_residual = 0.0;
  std::vector<double> history;
  bool converged = false;
};

using LinearOperator = std::function<void(const Eigen::VectorXcd &, Eigen::VectorXcd &)>;

/// Restarted GMRES with modified Gram-Schmidt and Givens rotations. `x` holds
/// the initial guess on entry and the iterate on return. Never throws on
/// non-convergence; callers inspect `converged`.
GmresResult gmres(const LinearOperator &apply, const Eigen::VectorXcd &b, Eigen::VectorXcd &x,
                  const GmresOptions &opts);

}  // namespace cusp
