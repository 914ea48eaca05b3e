#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "cuspscan/geometry.hpp"
#include "cuspscan/krylov.hpp"

namespace cusp {

using cd = std::complex<double>;

struct PlaneWave {
  double k = 1.0;
  double angle = 0.0;  // direction d = (cos angle, sin angle)
};

struct TotalField {
  Grid grid;
  std::vector<cd> values;
  double k = 0.0;
  double incidence_angle = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

/// Far-field samples A(i, j) = u_inf(obs_i, inc_j) at one wavenumber, both
/// angle sets uniform on [0, 2 pi) starting at zero.
struct FarFieldMatrix {
  double k = 0.0;
  Eigen::MatrixXcd values;  // m x n_inc

  int m() const { return static_cast<int>(values.rows()); }
  int n_inc() const { return static_cast<int>(values.cols()); }
  double obs_angle(int i) const;
  double inc_angle(int j) const;
  double obs_weight() const;
  double inc_weight() const;
};

struct SolverOptions {
  GmresOptions gmres{};
  Rasterization rasterization = Rasterization::kCoverage;
  /// Reject grids coarser than this many cells per interior wavelength.
  double min_points_per_wavelength = 10.0;
};

/// e^{i pi/4} / sqrt(8 pi k): u^s ~ gamma * e^{ikr}/sqrt(r) * int e^{-ik xhat.y} k^2 q u dy.
cd far_field_constant(double k);

/// Discrete Lippmann-Schwinger operator u = u_inc + k^2 V[q u] on a uniform
/// grid. V is convolution with the cell-integrated outgoing Green's function
/// (i/4) H_0^(1)(k|x - y|), applied through a circulant embedding and FFTs.
/// Unknowns live only on cells with q != 0. Not safe for concurrent use of
/// one instance (FFT work buffers are shared).
class VolumeSolver {
 public:
  VolumeSolver(const MediumSpec &medium, const Grid &grid, double k, SolverOptions opts = {});
  VolumeSolver(std::vector<double> contrast, const Grid &grid, double k, SolverOptions opts = {});
  ~VolumeSolver();
  VolumeSolver(const VolumeSolver &) = delete;
  VolumeSolver &operator=(const VolumeSolver &) = delete;

  const Grid &grid() const { return grid_; }
  double k() const { return k_; }
  const std::vector<double> &contrast() const { return q_; }
  const std::vector<std::size_t> &support() const { return support_; }

  /// Plane wave e^{ik x.d} sampled on the support cells.
  Eigen::VectorXcd incident_on_support(double angle) const;

  /// Solves for u on the support given the incident field there. Throws
  /// SolverError if GMRES does not reach the tolerance.
  Eigen::VectorXcd solve_support(const Eigen::VectorXcd &incident, GmresResult *stats = nullptr) const;

  /// u^inc + k^2 V[q u] on every grid node.
  TotalField total_field(double incidence_angle) const;
  std::vector<cd> extend_to_grid(const Eigen::VectorXcd &u_support,
                                 const std::vector<cd> &incident_full) const;

  cd far_field(const Eigen::VectorXcd &u_support, double obs_angle) const;
  /// m x n_inc far-field matrix from n_inc independent solves.
  FarFieldMatrix far_field_matrix(int m, int n_inc) const;

  /// Applies the discrete volume potential to a full-grid density.
  std::vector<cd> volume_potential(const std::vector<cd> &density) const;

  /// Table of cell-integrated kernel values W(px, py) for 0 <= px < nx, 0 <= py < ny.
  const std::vector<cd> &kernel_table() const { return table_; }

 private:
  struct Fft;

  void build_kernel();

  Grid grid_;
  double k_;
  SolverOptions opts_;
  std::vector<double> q_;
  std::vector<std::size_t> support_;
  std::vector<cd> table_;
  int lx_ = 0;
  int ly_ = 0;
  std::unique_ptr<Fft> fft_;
  std::vector<cd> kernel_hat_;
};

/// Cell-integrated Green's function over the square cell of side h centred at
/// (px h, py h); exposed for testing.
cd cell_integrated_green(double k, double h, int px, int py);

TotalField solve_total_field(const MediumSpec &medium, const Grid &grid, const PlaneWave &wave,
                             double tol = 1e-7);

/// Midpoint-rule far field gamma k^2 h^2 sum e^{-ik xhat.y} q u over the grid.
cd far_field(const TotalField &total, const MediumSpec &medium, double obs_angle);

/// Minimum count of angles needed to resolve the far field, 2 ceil(kR) + 1.
int nyquist_count(double k, double radius);

FarFieldMatrix synthesize_matrix(const MediumSpec &medium, const Grid &grid, double k, int m,
                                 int n_inc, double tol = 1e-7);

/// Grid for a whole wavenumber window: cell size from the largest k so every
/// matrix in a scan shares one discretisation.
Grid solver_grid(const MediumSpec &medium, double k_max, double points_per_wavelength = 10.0);

/// ||A - P A^T P||_F / ||A||_F with P the antipodal permutation; requires
/// matched, even-sized angle sets.
double reciprocity_defect(const FarFieldMatrix &a);

/// Relative mismatch between sum_i w |A_ij|^2 and the forward-amplitude term
/// -sqrt(8 pi / k) Re(e^{i pi/4} A(d_j, d_j)), maximised over incidences.
/// Needs the incident angles to be a subset of the observation angles.
double optical_theorem_defect(const FarFieldMatrix &a);

}  // namespace cusp
