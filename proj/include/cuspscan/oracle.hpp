#pragma once

#include <complex>
#include <vector>

#include "cuspscan/geometry.hpp"

/// Closed-form references for the disk and the a-priori eigenvalue window.
namespace cusp::oracle {

using cd = std::complex<double>;

/// Separation-of-variables solution for a plane wave hitting a homogeneous
/// disk centred at the origin. Outside: u = sum i^l e^{il(theta - phi_d)}
/// (J_l(kr) + b_l H_l(kr)); inside: sum i^l e^{il(theta - phi_d)} c_l J_l(k sqrt(n) r).
struct MieSolution {
  double k = 0.0;
  double n = 0.0;
  double radius = 0.0;
  int order = 0;              // L; modes |l| <= L, b_{-l} = b_l
  std::vector<cd> scattered;  // b_0..b_L
  std::vector<cd> interior;   // c_0..c_L
  /// Largest 2x2 condition estimate over the modes.
  double conditioning = 0.0;
};

MieSolution mie_solution(double k, double n, double radius);

/// Total field at p for incidence angle phi_d.
cd mie_field(const MieSolution &sol, double incidence_angle, Point p);

/// u_inf = sqrt(2 / (pi k)) e^{-i pi/4} sum b_l e^{il(phi - phi_d)}.
cd mie_farfield(const MieSolution &sol, double incidence_angle, double obs_angle);

/// Mode-l eigenvalue of the far-field map for this normalisation: the
/// far-field operator with kernel e^{il phi} returns mie_mode_gain(l) e^{il phi}.
cd mie_mode_gain(const MieSolution &sol, int l);

/// det [[J_l(kr), J_l(k sqrt(n) r)], [k J_l'(kr), k sqrt(n) J_l'(k sqrt(n) r)]].
double transmission_determinant(int l, double k, double n, double radius);

struct TransmissionEigenvalue {
  double k = 0.0;
  int multiplicity = 1;
  std::vector<int> modes;  // |l| for every mode vanishing here
};

/// Real transmission eigenvalues of the disk in [k_lo, k_hi], sorted. Sign
/// changes of d_l on a grid of spacing <= `step`, refined by bisection.
std::vector<TransmissionEigenvalue> disk_transmission_eigs(double n, double radius, double k_lo,
                                                           double k_hi, double step = 1e-3);

/// Smallest positive transmission eigenvalue of the unit disk.
double first_disk_eigenvalue(double n);

struct SearchWindow {
  double k_lo = 0.0;
  double k_hi = 0.0;
};

/// Lower bound on the first transmission eigenvalue from the enclosing radius
/// and the Dirichlet eigenvalue of the bounding box; k_hi = factor * k_lo.
SearchWindow bound_window(const MediumSpec &medium, double factor = 4.0);

}  // namespace cusp::oracle
