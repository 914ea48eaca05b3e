#include "cuspscan/forward.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cuspscan/errors.hpp"
#include "cuspscan/quadrature.hpp"
#include "cuspscan/specfun.hpp"

namespace cusp {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kNearCells = 4;  // |px|, |py| <= 4 use full quadrature

cd green(double k, double r) { return cd(0.0, 0.25) * specfun::hankel1_sequence(0, k * r)[0]; }

// Smallest n >= target whose only prime factors are 2, 3, 5, 7.
int fft_size(int target) {
  for (int n = std::max(target, 1);; ++n) {
    int r = n;
    for (int p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return n;
  }
}

void check_tolerance(double tol) {
  if (!(tol >= 1e-10 && tol <= 1e-4)) {
    throw ConfigError("solver tolerance must lie in [1e-10, 1e-4]");
  }
}

}  // namespace

struct VolumeSolver::Fft {
  fftw_complex *buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  Fft(int lx, int ly) {
    buf = fftw_alloc_complex(static_cast<std::size_t>(lx) * ly);
    fwd = fftw_plan_dft_2d(ly, lx, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_2d(ly, lx, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Fft() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(buf);
  }
  cd *data() { return reinterpret_cast<cd *>(buf); }
};

double FarFieldMatrix::obs_angle(int i) const { return 2.0 * kPi * i / m(); }
double FarFieldMatrix::inc_angle(int j) const { return 2.0 * kPi * j / n_inc(); }
double FarFieldMatrix::obs_weight() const { return 2.0 * kPi / m(); }
double FarFieldMatrix::inc_weight() const { return 2.0 * kPi / n_inc(); }

cd far_field_constant(double k) {
  return std::polar(1.0, 0.25 * kPi) / std::sqrt(8.0 * kPi * k);
}

cd cell_integrated_green(double k, double h, int px, int py) {
  if (px == 0 && py == 0) {
    // 8 congruent triangles; the radial integral of r H_0(kr) is exact.
    const double a = 0.5 * h;
    const auto &rule = gauss_legendre(24);
    cd sum = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double theta = 0.125 * kPi * (rule.nodes[q] + 1.0);
      const double r = a / std::cos(theta);
      const cd h1 = specfun::hankel1_sequence(1, k * r)[1];
      const cd radial = cd(0.0, 0.25) * r * h1 / k - 1.0 / (2.0 * kPi * k * k);
      sum += rule.weights[q] * 0.125 * kPi * radial;
    }
    return 8.0 * sum;
  }
  const int sub = (std::abs(px) <= 1 && std::abs(py) <= 1) ? 4 : 2;
  const auto &rule = gauss_legendre(12);
  const double hs = h / sub;
  cd sum = 0.0;
  for (int si = 0; si < sub; ++si) {
    for (int sj = 0; sj < sub; ++sj) {
      const double cx = (px - 0.5) * h + (si + 0.5) * hs;
      const double cy = (py - 0.5) * h + (sj + 0.5) * hs;
      for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
        for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
          const double x = cx + 0.5 * hs * rule.nodes[a];
          const double y = cy + 0.5 * hs * rule.nodes[b];
          sum += rule.weights[a] * rule.weights[b] * green(k, std::hypot(x, y));
        }
      }
    }
  }
  return sum * (0.25 * hs * hs);
}

VolumeSolver::VolumeSolver(const MediumSpec &medium, const Grid &grid, double k,
                           SolverOptions opts)
    : VolumeSolver(rasterize_contrast(medium, grid, opts.rasterization), grid, k, opts) {}

VolumeSolver::VolumeSolver(std::vector<double> contrast, const Grid &grid, double k,
                           SolverOptions opts)
    : grid_(grid), k_(k), opts_(opts), q_(std::move(contrast)) {
  grid_.validate();
  if (!(k > 0) || !std::isfinite(k)) throw ConfigError("wavenumber must be positive");
  if (q_.size() != grid_.size()) throw ConfigError("contrast does not match grid size");
  check_tolerance(opts_.gmres.tol);
  double qmax = 0.0;
  for (std::size_t i = 0; i < q_.size(); ++i) {
    if (q_[i] != 0.0) support_.push_back(i);
    qmax = std::max(qmax, q_[i]);
  }
  const double lambda = 2.0 * kPi / (k_ * std::sqrt(1.0 + qmax));
  if (grid_.h > lambda / opts_.min_points_per_wavelength * (1.0 + 1e-9)) {
    throw ConfigError("grid too coarse: h = " + std::to_string(grid_.h) +
                      " exceeds interior wavelength / " +
                      std::to_string(opts_.min_points_per_wavelength));
  }
  lx_ = fft_size(2 * grid_.nx - 1);
  ly_ = fft_size(2 * grid_.ny - 1);
  fft_ = std::make_unique<Fft>(lx_, ly_);
  build_kernel();
}

VolumeSolver::~VolumeSolver() = default;

void VolumeSolver::build_kernel() {
  const int nx = grid_.nx, ny = grid_.ny;
  const double h = grid_.h;
  table_.assign(static_cast<std::size_t>(nx) * ny, 0.0);
  const double far_factor = h * h * (1.0 - k_ * k_ * h * h / 24.0);
  for (int py = 0; py < ny; ++py) {
    for (int px = 0; px < nx; ++px) {
      cd w;
      if (px <= kNearCells && py <= kNearCells) {
        if (py > px && py < nx && px < ny) {
          w = table_[static_cast<std::size_t>(px) * nx + py];  // W(px, py) = W(py, px)
        } else {
          w = cell_integrated_green(k_, h, px, py);
        }
      } else {
        w = far_factor * green(k_, h * std::hypot(px, py));
      }
      table_[static_cast<std::size_t>(py) * nx + px] = w;
    }
  }
  cd *buf = fft_->data();
  std::fill(buf, buf + static_cast<std::size_t>(lx_) * ly_, cd(0.0));
  for (int jj = 0; jj < ly_; ++jj) {
    int py = jj < ny ? jj : jj - ly_;
    if (std::abs(py) >= ny) continue;
    for (int ii = 0; ii < lx_; ++ii) {
      int px = ii < nx ? ii : ii - lx_;
      if (std::abs(px) >= nx) continue;
      buf[static_cast<std::size_t>(jj) * lx_ + ii] =
          table_[static_cast<std::size_t>(std::abs(py)) * nx + std::abs(px)];
    }
  }
  fftw_execute(fft_->fwd);
  kernel_hat_.assign(buf, buf + static_cast<std::size_t>(lx_) * ly_);
  const double scale = 1.0 / (static_cast<double>(lx_) * ly_);
  for (auto &v : kernel_hat_) v *= scale;
}

std::vector<cd> VolumeSolver::volume_potential(const std::vector<cd> &density) const {
  if (density.size() != grid_.size()) throw ContractViolation("density size mismatch");
  cd *buf = fft_->data();
  std::fill(buf, buf + static_cast<std::size_t>(lx_) * ly_, cd(0.0));
  for (int j = 0; j < grid_.ny; ++j) {
    for (int i = 0; i < grid_.nx; ++i) {
      buf[static_cast<std::size_t>(j) * lx_ + i] = density[grid_.index(i, j)];
    }
  }
  fftw_execute(fft_->fwd);
  for (std::size_t i = 0; i < kernel_hat_.size(); ++i) buf[i] *= kernel_hat_[i];
  fftw_execute(fft_->bwd);
  std::vector<cd> out(grid_.size());
  for (int j = 0; j < grid_.ny; ++j) {
    for (int i = 0; i < grid_.nx; ++i) {
      out[grid_.index(i, j)] = buf[static_cast<std::size_t>(j) * lx_ + i];
    }
  }
  return out;
}

Eigen::VectorXcd VolumeSolver::incident_on_support(double angle) const {
  const double dx = std::cos(angle), dy = std::sin(angle);
  Eigen::VectorXcd b(static_cast<Eigen::Index>(support_.size()));
  for (std::size_t s = 0; s < support_.size(); ++s) {
    const Point p = grid_.node(support_[s]);
    b(static_cast<Eigen::Index>(s)) = std::polar(1.0, k_ * (p.x * dx + p.y * dy));
  }
  return b;
}

Eigen::VectorXcd VolumeSolver::solve_support(const Eigen::VectorXcd &incident,
                                             GmresResult *stats) const {
  if (incident.size() != static_cast<Eigen::Index>(support_.size())) {
    throw ContractViolation("incident vector does not match support size");
  }
  if (support_.empty()) {
    if (stats) *stats = GmresResult{0, 0.0, {}, true};
    return incident;
  }
  const double k2 = k_ * k_;
  cd *buf = fft_->data();
  const std::size_t total = static_cast<std::size_t>(lx_) * ly_;
  std::vector<std::size_t> slot(support_.size());
  for (std::size_t s = 0; s < support_.size(); ++s) {
    const std::size_t idx = support_[s];
    slot[s] = (idx / grid_.nx) * lx_ + idx % grid_.nx;
  }
  auto apply = [&](const Eigen::VectorXcd &x, Eigen::VectorXcd &y) {
    std::fill(buf, buf + total, cd(0.0));
    for (std::size_t s = 0; s < support_.size(); ++s) {
      buf[slot[s]] = q_[support_[s]] * x(static_cast<Eigen::Index>(s));
    }
    fftw_execute(fft_->fwd);
    for (std::size_t i = 0; i < total; ++i) buf[i] *= kernel_hat_[i];
    fftw_execute(fft_->bwd);
    y.resize(x.size());
    for (std::size_t s = 0; s < support_.size(); ++s) {
      const auto e = static_cast<Eigen::Index>(s);
      y(e) = x(e) - k2 * buf[slot[s]];
    }
  };
  Eigen::VectorXcd x = incident;
  GmresResult res = gmres(apply, incident, x, opts_.gmres);
  if (stats) *stats = res;
  if (!res.converged) {
    throw SolverError("GMRES did not converge at k = " + std::to_string(k_) +
                          " (relative residual " + std::to_string(res.relative_residual) + ")",
                      res.history);
  }
  return x;
}

std::vector<cd> VolumeSolver::extend_to_grid(const Eigen::VectorXcd &u_support,
                                             const std::vector<cd> &incident_full) const {
  std::vector<cd> density(grid_.size(), 0.0);
  for (std::size_t s = 0; s < support_.size(); ++s) {
    density[support_[s]] = q_[support_[s]] * u_support(static_cast<Eigen::Index>(s));
  }
  auto v = volume_potential(density);
  const double k2 = k_ * k_;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = incident_full[i] + k2 * v[i];
  return v;
}

TotalField VolumeSolver::total_field(double incidence_angle) const {
  GmresResult stats;
  const auto u = solve_support(incident_on_support(incidence_angle), &stats);
  const double dx = std::cos(incidence_angle), dy = std::sin(incidence_angle);
  std::vector<cd> inc(grid_.size());
  for (std::size_t i = 0; i < inc.size(); ++i) {
    const Point p = grid_.node(i);
    inc[i] = std::polar(1.0, k_ * (p.x * dx + p.y * dy));
  }
  TotalField out;
  out.grid = grid_;
  out.values = extend_to_grid(u, inc);
  out.k = k_;
  out.incidence_angle = incidence_angle;
  out.iterations = stats.iterations;
  out.residual = stats.relative_residual;
  return out;
}

cd VolumeSolver::far_field(const Eigen::VectorXcd &u_support, double obs_angle) const {
  const double ox = std::cos(obs_angle), oy = std::sin(obs_angle);
  cd sum = 0.0;
  for (std::size_t s = 0; s < support_.size(); ++s) {
    const Point p = grid_.node(support_[s]);
    sum += std::polar(q_[support_[s]], -k_ * (p.x * ox + p.y * oy)) *
           u_support(static_cast<Eigen::Index>(s));
  }
  return far_field_constant(k_) * k_ * k_ * grid_.h * grid_.h * sum;
}

FarFieldMatrix VolumeSolver::far_field_matrix(int m, int n_inc) const {
  if (m <= 0 || n_inc <= 0) throw ConfigError("angle counts must be positive");
  const auto ns = static_cast<Eigen::Index>(support_.size());
  FarFieldMatrix out;
  out.k = k_;
  out.values = Eigen::MatrixXcd::Zero(m, n_inc);
  if (ns == 0) return out;
  Eigen::MatrixXcd u(ns, n_inc);
  for (int j = 0; j < n_inc; ++j) {
    u.col(j) = solve_support(incident_on_support(2.0 * kPi * j / n_inc));
  }
  Eigen::MatrixXcd e(m, ns);
  for (int i = 0; i < m; ++i) {
    const double t = 2.0 * kPi * i / m;
    const double ox = std::cos(t), oy = std::sin(t);
    for (Eigen::Index s = 0; s < ns; ++s) {
      const Point p = grid_.node(support_[static_cast<std::size_t>(s)]);
      e(i, s) = std::polar(q_[support_[static_cast<std::size_t>(s)]], -k_ * (p.x * ox + p.y * oy));
    }
  }
  out.values.noalias() = e * u;
  out.values *= far_field_constant(k_) * (k_ * k_ * grid_.h * grid_.h);
  return out;
}

TotalField solve_total_field(const MediumSpec &medium, const Grid &grid, const PlaneWave &wave,
                             double tol) {
  check_tolerance(tol);
  SolverOptions opts;
  opts.gmres.tol = tol;
  VolumeSolver solver(medium, grid, wave.k, opts);
  return solver.total_field(wave.angle);
}

cd far_field(const TotalField &total, const MediumSpec &medium, double obs_angle) {
  const auto q = rasterize_contrast(medium, total.grid);
  const double ox = std::cos(obs_angle), oy = std::sin(obs_angle);
  const double k = total.k;
  cd sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] == 0.0) continue;
    const Point p = total.grid.node(i);
    sum += std::polar(q[i], -k * (p.x * ox + p.y * oy)) * total.values[i];
  }
  return far_field_constant(k) * k * k * total.grid.h * total.grid.h * sum;
}

int nyquist_count(double k, double radius) {
  return 2 * static_cast<int>(std::ceil(k * radius)) + 1;
}

FarFieldMatrix synthesize_matrix(const MediumSpec &medium, const Grid &grid, double k, int m,
                                 int n_inc, double tol) {
  check_tolerance(tol);
  const int need = nyquist_count(k, medium.geometry.origin_radius());
  if (m < need || n_inc < need) {
    throw ConfigError("angle counts below Nyquist requirement " + std::to_string(need) +
                      " at k = " + std::to_string(k));
  }
  SolverOptions opts;
  opts.gmres.tol = tol;
  VolumeSolver solver(medium, grid, k, opts);
  return solver.far_field_matrix(m, n_inc);
}

Grid solver_grid(const MediumSpec &medium, double k_max, double points_per_wavelength) {
  if (!(k_max > 0)) throw ConfigError("wavenumber must be positive");
  if (points_per_wavelength < 10.0) {
    throw ConfigError("at least 10 points per wavelength are required");
  }
  const double lambda = 2.0 * kPi / (k_max * std::sqrt(std::max(medium.n, 1.0)));
  return Grid::around(medium.geometry.bounding_box(), lambda / points_per_wavelength);
}

double reciprocity_defect(const FarFieldMatrix &a) {
  const int m = a.m();
  if (m != a.n_inc() || m % 2) {
    throw ContractViolation("reciprocity check needs matched, even-sized angle sets");
  }
  double num = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      // u(x_i, d_j) vs u(-d_j, -x_i)
      const cd mirrored = a.values((j + m / 2) % m, (i + m / 2) % m);
      num += std::norm(a.values(i, j) - mirrored);
    }
  }
  const double den = a.values.squaredNorm();
  return den > 0 ? std::sqrt(num / den) : 0.0;
}

double optical_theorem_defect(const FarFieldMatrix &a) {
  const int m = a.m(), n = a.n_inc();
  if (m % n) throw ContractViolation("incident angles must be a subset of observation angles");
  const int stride = m / n;
  const cd phase = std::polar(1.0, 0.25 * kPi);
  const double c = std::sqrt(8.0 * kPi / a.k);
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    const double energy = a.obs_weight() * a.values.col(j).squaredNorm();
    if (energy == 0.0) continue;
    const double forward = -c * std::real(phase * a.values(j * stride, j));
    worst = std::max(worst, std::abs(forward - energy) / energy);
  }
  return worst;
}

}  // namespace cusp
