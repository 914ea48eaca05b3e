#include "cuspscan/krylov.hpp"

#include <cmath>

namespace cusp {

using cd = std::complex<double>;

GmresResult gmres(const LinearOperator &apply, const Eigen::VectorXcd &b, Eigen::VectorXcd &x,
                  const GmresOptions &opts) {
  GmresResult res;
  const Eigen::Index n = b.size();
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    x.setZero(n);
    res.converged = true;
    return res;
  }
  if (x.size() != n) x.setZero(n);
  const int m = std::max(1, opts.restart);

  Eigen::MatrixXcd basis(n, m + 1);
  Eigen::MatrixXcd hess = Eigen::MatrixXcd::Zero(m + 1, m);
  Eigen::VectorXcd cs(m), sn(m), g(m + 1);
  Eigen::VectorXcd w(n), ax(n);

  apply(x, ax);
  Eigen::VectorXcd r = b - ax;
  double rnorm = r.norm();
  res.relative_residual = rnorm / bnorm;
  if (res.relative_residual <= opts.tol) {
    res.converged = true;
    return res;
  }

  while (res.iterations < opts.max_iterations) {
    basis.col(0) = r / rnorm;
    g.setZero();
    g(0) = rnorm;
    hess.setZero();
    int j = 0;
    for (; j < m && res.iterations < opts.max_iterations; ++j) {
      apply(basis.col(j), w);
      for (int i = 0; i <= j; ++i) {
        const cd hij = basis.col(i).dot(w);  // conj(v_i)^T w
        hess(i, j) = hij;
        w -= hij * basis.col(i);
      }
      const double wn = w.norm();
      hess(j + 1, j) = wn;
      if (wn > 0) basis.col(j + 1) = w / wn;

      for (int i = 0; i < j; ++i) {
        const cd t = std::conj(cs(i)) * hess(i, j) + std::conj(sn(i)) * hess(i + 1, j);
        hess(i + 1, j) = -sn(i) * hess(i, j) + cs(i) * hess(i + 1, j);
        hess(i, j) = t;
      }
      const cd a = hess(j, j);
      const double bb = std::abs(hess(j + 1, j));
      const double denom = std::hypot(std::abs(a), bb);
      if (denom == 0.0) {
        cs(j) = 1.0;
        sn(j) = 0.0;
      } else {
        const cd phase = std::abs(a) > 0 ? a / std::abs(a) : cd(1.0);
        cs(j) = std::abs(a) / denom;
        sn(j) = std::conj(phase) * bb / denom;
      }
      hess(j, j) = std::conj(cs(j)) * a + std::conj(sn(j)) * hess(j + 1, j);
      hess(j + 1, j) = 0.0;
      g(j + 1) = -sn(j) * g(j);
      g(j) = std::conj(cs(j)) * g(j);

      ++res.iterations;
      res.relative_residual = std::abs(g(j + 1)) / bnorm;
      res.history.push_back(res.relative_residual);
      if (res.relative_residual <= opts.tol || wn == 0.0) {
        ++j;
        break;
      }
    }
    // back-substitute the j x j triangular system
    Eigen::VectorXcd y = hess.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    x += basis.leftCols(j) * y;

    apply(x, ax);
    r = b - ax;
    rnorm = r.norm();
    res.relative_residual = rnorm / bnorm;
    if (!res.history.empty()) res.history.back() = res.relative_residual;
    if (res.relative_residual <= opts.tol) {
      res.converged = true;
      return res;
    }
  }
  return res;
}

}  // namespace cusp
