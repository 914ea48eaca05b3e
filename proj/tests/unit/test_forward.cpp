#include <cmath>
#include <numbers>

#include "doctest.h"

#include "cuspscan/errors.hpp"
#include "cuspscan/forward.hpp"
#include "cuspscan/oracle.hpp"

using namespace cusp;

namespace {

constexpr double kPi = std::numbers::pi;

cd green_ref(double k, double r) {
  return cd(0.0, 0.25) * cd(std::cyl_bessel_j(0.0, k * r), std::cyl_neumann(0.0, k * r));
}

// Tensor midpoint rule with many points: slow, independent of the library's
// Gauss rules and Bessel code.
cd cell_green_midpoint(double k, double h, int px, int py, int sub) {
  const double hs = h / sub;
  cd s = 0.0;
  for (int a = 0; a < sub; ++a) {
    for (int b = 0; b < sub; ++b) {
      const double x = (px - 0.5) * h + (a + 0.5) * hs;
      const double y = (py - 0.5) * h + (b + 0.5) * hs;
      s += green_ref(k, std::hypot(x, y));
    }
  }
  return s * hs * hs;
}

// Self cell in polar coordinates: 8 triangles, composite midpoint in theta
// and in r (the r log r integrand is continuous at 0).
cd cell_green_self(double k, double h) {
  const int nt = 400, nr = 400;
  cd s = 0.0;
  for (int t = 0; t < nt; ++t) {
    const double theta = 0.25 * kPi * (t + 0.5) / nt;
    const double rmax = 0.5 * h / std::cos(theta);
    for (int i = 0; i < nr; ++i) {
      const double r = rmax * (i + 0.5) / nr;
      s += green_ref(k, r) * r * (rmax / nr);
    }
  }
  return 8.0 * s * (0.25 * kPi / nt);
}

}  // namespace

TEST_CASE("cell-integrated Green's function against brute-force quadrature") {
  const double k = 3.0, h = 0.05;
  for (auto [px, py] : {std::pair{3, 0}, {2, 2}, {7, 4}, {1, 1}, {0, 1}}) {
    const cd ref = cell_green_midpoint(k, h, px, py, 200);
    const cd got = cell_integrated_green(k, h, px, py);
    CHECK_MESSAGE(std::abs(got - ref) < 1e-6 * std::abs(ref), "cell " << px << "," << py);
  }
  const cd self = cell_integrated_green(k, h, 0, 0);
  CHECK(std::abs(self - cell_green_self(k, h)) < 1e-5 * std::abs(self));
}

TEST_CASE("FFT volume potential equals direct summation") {
  const auto medium = builtin_medium("heart", 4);
  const Grid g = Grid::around(medium.geometry.bounding_box(), 0.04);
  VolumeSolver solver(medium, g, 2.0);
  std::vector<cd> density(g.size());
  for (std::size_t i = 0; i < density.size(); ++i) {
    density[i] = cd(std::sin(0.37 * i), std::cos(0.11 * i));
  }
  const auto fast = solver.volume_potential(density);
  const auto &w = solver.kernel_table();
  double worst = 0.0, scale = 0.0;
  for (int t = 0; t < 25; ++t) {
    const int i = (t * 7) % g.nx, j = (t * 11) % g.ny;
    cd s = 0.0;
    for (int jj = 0; jj < g.ny; ++jj) {
      for (int ii = 0; ii < g.nx; ++ii) {
        s += w[static_cast<std::size_t>(std::abs(j - jj)) * g.nx + std::abs(i - ii)] *
             density[g.index(ii, jj)];
      }
    }
    worst = std::max(worst, std::abs(s - fast[g.index(i, j)]));
    scale = std::max(scale, std::abs(s));
  }
  CHECK(worst < 1e-12 * scale);
}

TEST_CASE("disk far field and near field against the Mie series") {
  const auto medium = builtin_medium("disk", 4);
  const double k = 1.0;
  const Grid g = Grid::around(medium.geometry.bounding_box(), 0.05);
  VolumeSolver solver(medium, g, k);
  const auto a = solver.far_field_matrix(16, 4);
  const auto mie = oracle::mie_solution(k, 4.0, 1.0);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < a.m(); ++i) {
    for (int j = 0; j < a.n_inc(); ++j) {
      const cd ref = oracle::mie_farfield(mie, a.inc_angle(j), a.obs_angle(i));
      num += std::norm(a.values(i, j) - ref);
      den += std::norm(ref);
    }
  }
  CHECK(std::sqrt(num / den) < 2e-3);

  const auto total = solver.total_field(0.3);
  num = den = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const cd ref = oracle::mie_field(mie, 0.3, g.node(i));
    num += std::norm(total.values[i] - ref);
    den += std::norm(ref);
  }
  CHECK(std::sqrt(num / den) < 3e-3);
}

TEST_CASE("reciprocity and optical theorem on an asymmetric scatterer") {
  const auto medium = builtin_medium("heart", 16);
  const Grid g = solver_grid(medium, 2.0, 12);
  const auto a = synthesize_matrix(medium, g, 2.0, 16, 16);
  CHECK(reciprocity_defect(a) < 1e-6);
  CHECK(optical_theorem_defect(a) < 1e-2);
}

TEST_CASE("argument checks") {
  const auto medium = builtin_medium("square", 16);
  CHECK_THROWS_AS(solver_grid(medium, 1.0, 5.0), ConfigError);
  const Grid coarse = Grid::around(medium.geometry.bounding_box(), 0.5, 2, 32);
  CHECK_THROWS_AS(VolumeSolver(medium, coarse, 20.0), ConfigError);
  CHECK(nyquist_count(3.0, 1.0) == 7);
  const Grid g = solver_grid(medium, 1.0, 10);
  CHECK_THROWS_AS(synthesize_matrix(medium, g, 1.0, 3, 3), ConfigError);
  FarFieldMatrix odd;
  odd.values = Eigen::MatrixXcd::Ones(5, 5);
  CHECK_THROWS_AS(reciprocity_defect(odd), ContractViolation);
}

TEST_CASE("GMRES failure surfaces as SolverError with a residual history") {
  const auto medium = builtin_medium("square", 16);
  SolverOptions opts;
  opts.gmres.max_iterations = 2;
  opts.gmres.restart = 2;
  const Grid g = solver_grid(medium, 1.0, 10);
  VolumeSolver solver(medium, g, 1.0, opts);
  try {
    solver.solve_support(solver.incident_on_support(0.0));
    FAIL("expected SolverError");
  } catch (const SolverError &e) {
    CHECK(e.residual_history().size() >= 1);
    CHECK(e.code() == ErrorCode::kSolver);
  }
}
