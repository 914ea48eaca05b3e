#include "cuspscan/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/SVD>

#include "cuspscan/errors.hpp"
#include "cuspscan/specfun.hpp"

namespace cusp {
namespace {

constexpr double kPi = std::numbers::pi;

void check_wavenumber(const FarFieldMatrix &a, const TruncatedKernel &kernel) {
  if (std::abs(a.k - kernel.k) > 1e-12 * std::max(1.0, a.k)) {
    throw ContractViolation("kernel wavenumber " + std::to_string(kernel.k) +
                            " does not match data at k = " + std::to_string(a.k));
  }
}

const FarFieldMatrix &centred(const FarFieldMatrix &a, Point c, FarFieldMatrix &storage) {
  if (c.x == 0.0 && c.y == 0.0) return a;
  storage = recenter(a, c);
  return storage;
}

// Samples of g_N at `count` equispaced angles.
Eigen::VectorXcd sample_kernel(const TruncatedKernel &kernel, int count) {
  Eigen::VectorXcd g(count);
  for (int j = 0; j < count; ++j) g(j) = kernel.value(2.0 * kPi * j / count);
  return g;
}

void fix_phase(Eigen::VectorXcd &a) {
  Eigen::Index imax = 0;
  a.cwiseAbs().maxCoeff(&imax);
  const cd c = a(imax);
  if (std::abs(c) > 0.0) a *= std::conj(c) / std::abs(c);
}

double l1_cost(const Eigen::MatrixXcd &m, const Eigen::VectorXcd &x) {
  return (m * x).cwiseAbs().sum();
}

// Coordinate descent on the unit sphere, seeded from the L2 minimiser.
Eigen::VectorXcd minimise_l1(const Eigen::MatrixXcd &m, Eigen::VectorXcd x, double &best) {
  const Eigen::Index n = x.size();
  const long budget = 200 * n;
  long evals = 0;
  best = l1_cost(m, x);
  const cd dirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (double step = 0.1; step > 1e-8 && evals < budget; step *= 0.5) {
    bool improved = true;
    while (improved && evals < budget) {
      improved = false;
      for (Eigen::Index c = 0; c < n && evals < budget; ++c) {
        for (const cd &d : dirs) {
          Eigen::VectorXcd trial = x;
          trial(c) += step * d;
          trial.normalize();
          const double f = l1_cost(m, trial);
          ++evals;
          if (f < best) {
            best = f;
            x = std::move(trial);
            improved = true;
            break;
          }
        }
      }
    }
  }
  return x;
}

}  // namespace

cd TruncatedKernel::value(double theta) const {
  cd sum = 0.0;
  for (int n = -order; n <= order; ++n) sum += coeff(n) * std::polar(1.0, n * theta);
  return sum / std::sqrt(2.0 * kPi);
}

Eigen::MatrixXcd kernel_basis_matrix(int count, int order) {
  if (order < 0) throw ConfigError("truncation order must be non-negative");
  if (count < 2 * order + 2) {
    throw ConfigError("need at least " + std::to_string(2 * order + 2) +
                      " angles for truncation order " + std::to_string(order));
  }
  const double scale = std::sqrt((2.0 * kPi / count) / (2.0 * kPi));
  Eigen::MatrixXcd y(count, 2 * order + 1);
  for (int j = 0; j < count; ++j) {
    const double theta = 2.0 * kPi * j / count;
    for (int n = -order; n <= order; ++n) y(j, n + order) = std::polar(scale, n * theta);
  }
  return y;
}

Eigen::VectorXcd apply_truncated(const FarFieldMatrix &a, const TruncatedKernel &kernel) {
  check_wavenumber(a, kernel);
  FarFieldMatrix storage;
  const FarFieldMatrix &data = centred(a, kernel.center, storage);
  return data.values * (a.inc_weight() * sample_kernel(kernel, a.n_inc()));
}

Eigen::VectorXcd apply_truncated_observation(const FarFieldMatrix &a,
                                             const TruncatedKernel &kernel) {
  check_wavenumber(a, kernel);
  FarFieldMatrix storage;
  const FarFieldMatrix &data = centred(a, kernel.center, storage);
  return data.values.transpose() * (a.obs_weight() * sample_kernel(kernel, a.m()));
}

FarFieldMatrix recenter(const FarFieldMatrix &a, Point c) {
  FarFieldMatrix out = a;
  for (int i = 0; i < a.m(); ++i) {
    const double xo = a.obs_angle(i);
    for (int j = 0; j < a.n_inc(); ++j) {
      const double di = a.inc_angle(j);
      const double phase =
          -a.k * (c.x * (std::cos(di) - std::cos(xo)) + c.y * (std::sin(di) - std::sin(xo)));
      out.values(i, j) *= std::polar(1.0, phase);
    }
  }
  return out;
}

int truncation_order(double k, double radius, int extra) {
  return static_cast<int>(std::ceil(std::numbers::e * k * radius / 2.0)) + extra;
}

double herglotz_mode_norm(int n, double k, double radius) {
  n = std::abs(n);
  const auto j = specfun::bessel_j_sequence(n + 1, k * radius);
  const double below = n == 0 ? -j[1] : j[n - 1];
  const double s = 0.5 * radius * radius * (j[n] * j[n] - below * j[n + 1]);
  return 2.0 * kPi * std::sqrt(std::max(s, 0.0));
}

IndicatorResult indicator(const FarFieldMatrix &a, int order, const IndicatorOptions &opts) {
  const Eigen::MatrixXcd y = kernel_basis_matrix(a.n_inc(), order);
  const int cols = 2 * order + 1;
  IndicatorResult out;
  out.kernel.k = a.k;
  out.kernel.order = order;
  out.kernel.center = opts.center;
  out.kernel.coeffs = Eigen::VectorXcd::Zero(cols);
  if (a.values.squaredNorm() == 0.0) {
    out.degenerate = true;
    out.kernel.coeffs(order) = 1.0;
    return out;
  }

  Eigen::MatrixXcd m;
  Eigen::VectorXd din;
  if (opts.norm == IndicatorNorm::kKernel) {
    m = std::sqrt(a.obs_weight()) * (a.values * y);
  } else {
    if (!(opts.radius > 0.0)) throw ConfigError("prior radius must be positive");
    const int out_order = std::max(
        order, opts.output_order >= 0 ? opts.output_order : truncation_order(a.k, opts.radius));
    FarFieldMatrix storage;
    const FarFieldMatrix &data = centred(a, opts.center, storage);
    const Eigen::MatrixXcd p = kernel_basis_matrix(a.m(), out_order);
    din.resize(cols);
    for (int n = -order; n <= order; ++n) din(n + order) = herglotz_mode_norm(n, a.k, opts.radius);
    Eigen::VectorXd dout(2 * out_order + 1);
    for (int n = -out_order; n <= out_order; ++n) {
      dout(n + out_order) = herglotz_mode_norm(n, a.k, opts.radius);
    }
    m = dout.cwiseInverse().asDiagonal() *
        (std::sqrt(a.obs_weight()) * (p.adjoint() * (data.values * y))) *
        din.cwiseInverse().asDiagonal();
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  const auto &sv = svd.singularValues();
  Eigen::VectorXcd x = svd.matrixV().col(cols - 1);
  out.sigma = m.rows() >= cols ? sv(cols - 1) : 0.0;
  if (opts.cost == IndicatorCost::kL1) x = minimise_l1(m, x, out.sigma);

  Eigen::VectorXcd coeffs = din.size() ? Eigen::VectorXcd(din.cwiseInverse().asDiagonal() * x) : x;
  coeffs.normalize();
  fix_phase(coeffs);
  out.kernel.coeffs = coeffs;
  return out;
}

double IndicatorCurve::median_sigma() const {
  std::vector<double> s;
  for (const auto &p : samples) {
    if (!p.degenerate) s.push_back(p.sigma);
  }
  if (s.empty()) return 0.0;
  const auto mid = s.begin() + static_cast<std::ptrdiff_t>(s.size() / 2);
  std::nth_element(s.begin(), mid, s.end());
  if (s.size() % 2) return *mid;
  return 0.5 * (*mid + *std::max_element(s.begin(), mid));
}

IndicatorSample evaluate_indicator(const FarFieldMatrix &a, const ScanOptions &opts) {
  const int order = opts.order_override >= 0
                        ? opts.order_override
                        : truncation_order(a.k, opts.indicator.radius, opts.order_extra);
  if (2 * order + 2 > a.n_inc()) {
    throw ConfigError("truncation order " + std::to_string(order) + " at k = " +
                      std::to_string(a.k) + " needs more than " + std::to_string(a.n_inc()) +
                      " incident directions");
  }
  const auto r = indicator(a, order, opts.indicator);
  return {a.k, r.sigma, order, r.degenerate, r.kernel};
}

ScanResult scan(const std::vector<FarFieldMatrix> &archive, const ScanOptions &opts,
                const MatrixProvider &provider) {
  for (std::size_t i = 1; i < archive.size(); ++i) {
    if (!(archive[i].k > archive[i - 1].k)) {
      throw ConfigError("k values of the archive must be strictly increasing");
    }
  }
  ScanResult out;
  for (const auto &a : archive) out.curve.samples.push_back(evaluate_indicator(a, opts));
  const auto &s = out.curve.samples;
  const double median = out.curve.median_sigma();
  if (s.size() < 3 || median == 0.0) {
    out.diagnostic = "too few non-degenerate samples to look for dips";
    return out;
  }

  const bool refine = provider && opts.refine_tol > 0.0;
  // Coarse samples can sit on the shoulder of a narrow dip; refinement gets
  // to judge anything within a factor of five of the threshold.
  const double gate = refine ? std::min(1.0, 5.0 * opts.dip_threshold) : opts.dip_threshold;
  int minima = 0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i].degenerate || !(s[i].sigma < s[i - 1].sigma && s[i].sigma < s[i + 1].sigma)) continue;
    ++minima;
    if (s[i].sigma / median >= gate) continue;
    EigenDetection det;
    if (refine) {
      const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
      double lo = s[i - 1].k, hi = s[i + 1].k;
      IndicatorSample best = s[i];
      auto eval = [&](double k) {
        auto smp = evaluate_indicator(provider(k), opts);
        if (smp.sigma < best.sigma) best = smp;
        return smp.sigma;
      };
      double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
      double f1 = eval(x1), f2 = eval(x2);
      while (hi - lo > opts.refine_tol) {
        if (f1 < f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - phi * (hi - lo);
          f1 = eval(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + phi * (hi - lo);
          f2 = eval(x2);
        }
      }
      det.k_star = best.k;
      det.sigma = best.sigma;
      det.kernel = best.kernel;
      det.refined = true;
    } else {
      // Vertex of the parabola through sigma^2: exact for a V-shaped dip
      // sigma = |c (k - k*)| sitting on a smooth floor.
      const double k0 = s[i - 1].k, k1 = s[i].k, k2 = s[i + 1].k;
      const double f0 = s[i - 1].sigma * s[i - 1].sigma, f1 = s[i].sigma * s[i].sigma,
                   f2 = s[i + 1].sigma * s[i + 1].sigma;
      const double num = (k1 - k0) * (k1 - k0) * (f1 - f2) - (k1 - k2) * (k1 - k2) * (f1 - f0);
      const double den = (k1 - k0) * (f1 - f2) - (k1 - k2) * (f1 - f0);
      det.k_star = den != 0.0 ? std::clamp(k1 - 0.5 * num / den, k0, k2) : k1;
      det.sigma = s[i].sigma;
      det.kernel = s[i].kernel;
    }
    det.dip_depth = det.sigma / median;
    if (det.dip_depth < opts.dip_threshold) out.detections.push_back(std::move(det));
  }
  if (out.detections.empty()) {
    out.diagnostic = std::to_string(minima) + " local minima, none below dip threshold " +
                     std::to_string(opts.dip_threshold) +
                     "; the window may contain no transmission eigenvalue";
  }
  return out;
}

void add_noise(FarFieldMatrix &a, double eps, std::mt19937_64 &rng) {
  if (eps < 0.0) throw ConfigError("noise level must be non-negative");
  if (eps == 0.0) return;
  const double sd = eps * a.values.norm() / std::sqrt(static_cast<double>(a.values.size()));
  std::normal_distribution<double> normal(0.0, sd / std::sqrt(2.0));
  for (Eigen::Index j = 0; j < a.values.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.values.rows(); ++i) a.values(i, j) += cd(normal(rng), normal(rng));
  }
}

}  // namespace cusp
