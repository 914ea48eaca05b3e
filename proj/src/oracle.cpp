#include "cuspscan/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cuspscan/errors.hpp"
#include "cuspscan/specfun.hpp"

namespace cusp::oracle {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTailTolerance = 1e-12;

void check_index(double n) {
  if (!(n > 0.0) || !std::isfinite(n) || n == 1.0) {
    throw ConfigError("refractive index must be positive and different from 1");
  }
}

cd ipow(int l) {
  switch (((l % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// Derivatives from the sequence: f'_l = (f_{l-1} - f_{l+1}) / 2, f_{-1} = -f_1.
template <class T>
T derivative(const std::vector<T> &f, int l) {
  const T below = l == 0 ? -f[1] : f[l - 1];
  return 0.5 * (below - f[l + 1]);
}

void fill_coefficients(MieSolution &sol) {
  const int L = sol.order;
  const double kappa = sol.k * sol.radius;
  const double sn = std::sqrt(sol.n);
  const double m = kappa * sn;
  const auto jk = specfun::bessel_j_sequence(L + 1, kappa);
  const auto jm = specfun::bessel_j_sequence(L + 1, m);
  const auto hk = specfun::hankel1_sequence(L + 1, kappa);
  sol.scattered.assign(L + 1, 0.0);
  sol.interior.assign(L + 1, 0.0);
  sol.conditioning = 0.0;
  for (int l = 0; l <= L; ++l) {
    const double djk = derivative(jk, l);
    const double djm = derivative(jm, l);
    const cd dhk = derivative(hk, l);
    const cd t1 = dhk * jm[l];
    const cd t2 = sn * djm * hk[l];
    const cd denom = t1 - t2;
    sol.scattered[l] = (sn * djm * jk[l] - djk * jm[l]) / denom;
    sol.interior[l] = cd(0.0, 2.0 / (kPi * kappa)) / denom;
    sol.conditioning = std::max(sol.conditioning, (std::abs(t1) + std::abs(t2)) / std::abs(denom));
  }
}

}  // namespace

MieSolution mie_solution(double k, double n, double radius) {
  check_index(n);
  if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("wavenumber must be positive");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("radius must be positive");
  MieSolution sol;
  sol.k = k;
  sol.n = n;
  sol.radius = radius;
  sol.order = static_cast<int>(std::ceil(std::numbers::e * k * radius * std::sqrt(std::max(n, 1.0)) / 2.0)) + 10;
  for (;;) {
    if (sol.order + 1 > specfun::kMaxOrder) throw DomainError("disk too large for the Mie oracle");
    fill_coefficients(sol);
    const double jtail = std::abs(specfun::bessel_j(sol.order, k * radius * std::sqrt(n)));
    if (std::abs(sol.scattered.back()) < kTailTolerance &&
        std::abs(sol.interior.back()) * jtail < kTailTolerance) {
      break;
    }
    sol.order += 5;
  }
  return sol;
}

cd mie_field(const MieSolution &sol, double incidence_angle, Point p) {
  const double r = std::hypot(p.x, p.y);
  const double psi = std::atan2(p.y, p.x) - incidence_angle;
  const int L = sol.order;
  cd sum = 0.0;
  if (r < sol.radius) {
    const auto j = specfun::bessel_j_sequence(L, sol.k * std::sqrt(sol.n) * r);
    for (int l = 0; l <= L; ++l) {
      const double eps = l == 0 ? 1.0 : 2.0;
      sum += eps * ipow(l) * std::cos(l * psi) * sol.interior[l] * j[l];
    }
    return sum;
  }
  const auto h = specfun::hankel1_sequence(L, sol.k * r);
  // The incident wave is summed in closed form; its expansion would need
  // order ~ kr modes far from the disk.
  const cd incident = std::polar(1.0, sol.k * r * std::cos(psi));
  for (int l = 0; l <= L; ++l) {
    const double eps = l == 0 ? 1.0 : 2.0;
    sum += eps * ipow(l) * std::cos(l * psi) * sol.scattered[l] * h[l];
  }
  return incident + sum;
}

cd mie_farfield(const MieSolution &sol, double incidence_angle, double obs_angle) {
  const double psi = obs_angle - incidence_angle;
  cd sum = sol.scattered[0];
  for (int l = 1; l <= sol.order; ++l) sum += 2.0 * std::cos(l * psi) * sol.scattered[l];
  return std::sqrt(2.0 / (kPi * sol.k)) * std::polar(1.0, -0.25 * kPi) * sum;
}

cd mie_mode_gain(const MieSolution &sol, int l) {
  const int al = std::abs(l);
  const cd b = al <= sol.order ? sol.scattered[al] : cd(0.0);
  return 2.0 * kPi * std::sqrt(2.0 / (kPi * sol.k)) * std::polar(1.0, -0.25 * kPi) * b;
}

double transmission_determinant(int l, double k, double n, double radius) {
  l = std::abs(l);
  const double sn = std::sqrt(n);
  const auto a = specfun::bessel_j_sequence(l + 1, k * radius);
  const auto b = specfun::bessel_j_sequence(l + 1, k * sn * radius);
  return a[l] * k * sn * derivative(b, l) - k * derivative(a, l) * b[l];
}

std::vector<TransmissionEigenvalue> disk_transmission_eigs(double n, double radius, double k_lo,
                                                           double k_hi, double step) {
  check_index(n);
  if (!(radius > 0.0)) throw ConfigError("radius must be positive");
  if (!(step > 0.0) || step > 1e-3) throw ConfigError("bracketing step must lie in (0, 1e-3]");
  std::vector<TransmissionEigenvalue> out;
  k_lo = std::max(k_lo, 1e-6);
  if (!(k_hi > k_lo)) return out;

  const double sn = std::sqrt(n);
  const int lmax = std::min(
      static_cast<int>(std::ceil(k_hi * std::max(sn, 1.0) * radius)) + 10, specfun::kMaxOrder - 1);
  const int steps = static_cast<int>(std::ceil((k_hi - k_lo) / step));
  const double dk = (k_hi - k_lo) / steps;

  // d_l for every mode at one k from two shared sweeps.
  auto all_modes = [&](double k) {
    const auto a = specfun::bessel_j_sequence(lmax + 1, k * radius);
    const auto b = specfun::bessel_j_sequence(lmax + 1, k * sn * radius);
    std::vector<double> d(lmax + 1);
    for (int l = 0; l <= lmax; ++l) {
      d[l] = a[l] * k * sn * derivative(b, l) - k * derivative(a, l) * b[l];
    }
    return d;
  };

  std::vector<std::pair<double, int>> roots;
  std::vector<double> last_value(lmax + 1, 0.0);
  std::vector<double> last_k(lmax + 1, k_lo);
  for (int s = 0; s <= steps; ++s) {
    const double k = k_lo + s * dk;
    const auto d = all_modes(k);
    for (int l = 0; l <= lmax; ++l) {
      if (d[l] == 0.0) continue;
      if (last_value[l] != 0.0 && (d[l] > 0.0) != (last_value[l] > 0.0)) {
        double lo = last_k[l], hi = k;
        double flo = last_value[l];
        while (hi - lo > 1e-9) {
          const double mid = 0.5 * (lo + hi);
          const double fm = transmission_determinant(l, mid, n, radius);
          if (fm == 0.0) {
            lo = hi = mid;
            break;
          }
          if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        roots.emplace_back(0.5 * (lo + hi), l);
      }
      last_value[l] = d[l];
      last_k[l] = k;
    }
  }
  std::sort(roots.begin(), roots.end());
  for (const auto &[k, l] : roots) {
    const int mult = l == 0 ? 1 : 2;
    if (!out.empty() && k - out.back().k < 1e-7) {
      out.back().multiplicity += mult;
      out.back().modes.push_back(l);
    } else {
      out.push_back({k, mult, {l}});
    }
  }
  return out;
}

double first_disk_eigenvalue(double n) {
  check_index(n);
  for (double lo = 1e-3; lo < 200.0; lo += 2.0) {
    const auto eigs = disk_transmission_eigs(n, 1.0, lo, lo + 2.0);
    if (!eigs.empty()) return eigs.front().k;
  }
  throw DomainError("no disk transmission eigenvalue below k = 200");
}

SearchWindow bound_window(const MediumSpec &medium, double factor) {
  medium.validate();
  if (!(factor > 1.0)) throw ConfigError("window factor must exceed 1");
  const double r = medium.geometry.enclosing_radius();
  const BoundingBox box = medium.geometry.bounding_box();
  const double w = box.xmax - box.xmin, h = box.ymax - box.ymin;
  const double lambda1 = kPi * kPi * (1.0 / (w * w) + 1.0 / (h * h));
  const double disk_term = first_disk_eigenvalue(medium.n) / r;
  const double dirichlet_term = medium.n > 1.0 ? std::sqrt(lambda1 / medium.n) : std::sqrt(lambda1);
  SearchWindow win;
  win.k_lo = std::max(disk_term, dirichlet_term);
  win.k_hi = factor * win.k_lo;
  return win;
}

}  // namespace cusp::oracle
