#include "cuspscan/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cuspscan/errors.hpp"
#include "cuspscan/specfun.hpp"

namespace cusp {
namespace {

constexpr double kPi = std::numbers::pi;

struct Candidate {
  Point p;
  double value;
};

// Interior nodes whose modulus is strictly below (sign = 1) or above
// (sign = -1) all eight neighbours.
std::vector<Candidate> strict_extrema(const HerglotzField &field, int sign) {
  const Grid &g = field.grid;
  std::vector<Candidate> out;
  for (int j = 1; j + 1 < g.ny; ++j) {
    for (int i = 1; i + 1 < g.nx; ++i) {
      const double c = sign * std::abs(field.values[g.index(i, j)]);
      bool strict = true;
      for (int dj = -1; dj <= 1 && strict; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if ((di || dj) && !(c < sign * std::abs(field.values[g.index(i + di, j + dj)]))) {
            strict = false;
            break;
          }
        }
      }
      if (strict) out.push_back({g.node(i, j), sign * c});
    }
  }
  return out;
}

// Single-linkage clusters at radius eps; members keep input order.
std::vector<CuspCluster> single_linkage(const std::vector<Point> &pts, double eps) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (distance(pts[i], pts[j]) <= eps) {
        const auto a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<CuspCluster> clusters;
  std::vector<long> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(clusters.size());
      clusters.emplace_back();
    }
    clusters[slot[r]].members.push_back(pts[i]);
  }
  for (auto &c : clusters) {
    Point sum;
    for (const auto &m : c.members) sum = sum + m;
    c.representative = (1.0 / static_cast<double>(c.members.size())) * sum;
  }
  return clusters;
}

// True when the candidates within `radius` of p are numerous and spread along
// a line: minor/major principal variance below `ratio`.
bool on_nodal_line(Point p, const std::vector<Point> &all, const CuspParams &params) {
  std::vector<Point> near;
  for (const auto &q : all) {
    if (distance(p, q) <= params.line_radius) near.push_back(q);
  }
  if (static_cast<int>(near.size()) < params.nodal_line_count) return false;
  Point mean;
  for (const auto &q : near) mean = mean + q;
  mean = (1.0 / static_cast<double>(near.size())) * mean;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto &q : near) {
    const Point d = q - mean;
    sxx += d.x * d.x;
    syy += d.y * d.y;
    sxy += d.x * d.y;
  }
  const double tr = sxx + syy;
  const double disc = std::sqrt(std::max(0.0, 0.25 * (sxx - syy) * (sxx - syy) + sxy * sxy));
  const double major = 0.5 * tr + disc;
  const double minor = 0.5 * tr - disc;
  return major > 0.0 && minor < params.collinearity * major;
}

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

cd herglotz_value(const TruncatedKernel &kernel, Point p) {
  const double dx = p.x - kernel.center.x, dy = p.y - kernel.center.y;
  const double r = std::hypot(dx, dy);
  const double theta = std::atan2(dy, dx);
  const int big_n = kernel.order;
  const auto j = specfun::bessel_j_sequence(big_n, kernel.k * r);
  cd sum = kernel.coeff(0) * j[0];
  cd in = 1.0;
  for (int n = 1; n <= big_n; ++n) {
    in *= cd(0.0, 1.0);
    // J_{-n} = (-1)^n J_n and i^{-n} = (-1)^n i^n, so both orders share i^n J_n.
    sum += in * j[n] * (kernel.coeff(n) * std::polar(1.0, n * theta) +
                        kernel.coeff(-n) * std::polar(1.0, -n * theta));
  }
  return std::sqrt(2.0 * kPi) * sum;
}

HerglotzField herglotz_eval(const TruncatedKernel &kernel, const Grid &grid) {
  grid.validate();
  if (!(kernel.k > 0.0)) throw ConfigError("kernel wavenumber must be positive");
  const double lambda = 2.0 * kPi / kernel.k;
  if (grid.h > lambda / 10.0 * (1.0 + 1e-9)) {
    throw ConfigError("search grid coarser than 10 points per wavelength");
  }
  HerglotzField out;
  out.grid = grid;
  out.k = kernel.k;
  out.kernel = kernel;
  out.values.resize(grid.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = herglotz_value(kernel, grid.node(i));
    peak = std::max(peak, std::abs(out.values[i]));
  }
  if (peak > 0.0) {
    for (auto &v : out.values) v /= peak;
    out.scale = peak;
  }
  return out;
}

BoundingBox prior_search_box(Point center, double radius, double factor) {
  if (!(radius > 0.0) || !(factor > 0.0)) throw ConfigError("search box needs a positive radius");
  const double hw = factor * radius;
  return {center.x - hw, center.x + hw, center.y - hw, center.y + hw};
}

Grid search_grid(const BoundingBox &box, double k, int min_nodes) {
  const double wx = box.xmax - box.xmin, wy = box.ymax - box.ymin;
  if (!(wx > 0.0) || !(wy > 0.0)) throw ConfigError("search box is empty");
  if (!(k > 0.0)) throw ConfigError("wavenumber must be positive");
  const double h = std::min(std::min(wx, wy) / std::max(min_nodes, 2), 2.0 * kPi / k / 10.0);
  const int nx = static_cast<int>(std::ceil(wx / h - 1e-9));
  const int ny = static_cast<int>(std::ceil(wy / h - 1e-9));
  Grid g{0.5 * (box.xmin + box.xmax) - 0.5 * nx * h, 0.5 * (box.ymin + box.ymax) - 0.5 * ny * h,
         h, nx, ny};
  g.validate();
  return g;
}

CuspReport detect_cusps(const HerglotzField &field, CuspMode mode, const CuspParams &params) {
  const Grid &g = field.grid;
  g.validate();
  if (field.values.size() != g.size()) throw ContractViolation("field size does not match grid");
  if (!(field.k > 0.0)) throw ConfigError("field wavenumber must be positive");

  CuspReport report;
  CuspParams &p = report.params;
  p = params;
  const double lambda = 2.0 * kPi / field.k;
  const double half = 0.5 * std::min(g.nx * g.h, g.ny * g.h);
  if (p.length_scale <= 0.0) p.length_scale = half / 1.5;
  if (p.cluster_radius <= 0.0) p.cluster_radius = std::min(lambda, p.length_scale) / 4.0;
  if (p.line_radius <= 0.0) p.line_radius = 0.5 * p.length_scale;
  if (p.isolation_radius <= 0.0) p.isolation_radius = lambda;

  double peak = 0.0;
  for (const auto &v : field.values) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0)) {
    report.diagnostic = "field vanishes identically";
    return report;
  }

  if (mode != CuspMode::kLocalizing) {
    std::vector<Point> deep;
    for (const auto &c : strict_extrema(field, 1)) {
      if (c.value <= p.tau_vanishing * peak) deep.push_back(c.p);
    }
    std::vector<Point> kept;
    for (const auto &q : deep) {
      (on_nodal_line(q, deep, p) ? report.curve_artifacts : kept).push_back(q);
    }
    report.vanishing = single_linkage(kept, p.cluster_radius);
  }

  if (mode != CuspMode::kVanishing) {
    const auto maxima = strict_extrema(field, -1);
    std::vector<Point> kept;
    for (const auto &c : maxima) {
      if (c.value < p.tau_localizing * peak) continue;
      bool isolated = true;
      for (const auto &o : maxima) {
        if (&o != &c && o.value >= p.tau_localizing * c.value &&
            distance(o.p, c.p) <= p.isolation_radius) {
          isolated = false;
          break;
        }
      }
      if (isolated) kept.push_back(c.p);
    }
    report.localizing = single_linkage(kept, p.cluster_radius);
  }

  if (report.vanishing.empty() && report.localizing.empty()) {
    report.diagnostic = "no candidates; thresholds may need adjustment";
  } else if (report.vanishing.size() >= 3) {
    try {
      report.polygon = polygon_from_cusps(report);
    } catch (const ReconstructionError &) {
      // collinear representatives: report without a polygon
    }
  }
  return report;
}

std::vector<Point> convex_hull(std::vector<Point> points) {
  std::sort(points.begin(), points.end(),
            [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  points.erase(std::unique(points.begin(), points.end(),
                           [](Point a, Point b) { return a.x == b.x && a.y == b.y; }),
               points.end());
  if (points.size() < 3) return points;
  double span = 0.0;
  for (const auto &q : points) span = std::max({span, std::abs(q.x - points[0].x), std::abs(q.y - points[0].y)});
  const double tol = 1e-9 * span * span;
  std::vector<Point> hull(2 * points.size());
  std::size_t m = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    while (m >= 2 && cross(hull[m - 2], hull[m - 1], points[i]) <= tol) --m;
    hull[m++] = points[i];
  }
  for (std::size_t i = points.size() - 1, lower = m + 1; i-- > 0;) {
    while (m >= lower && cross(hull[m - 2], hull[m - 1], points[i]) <= tol) --m;
    hull[m++] = points[i];
  }
  hull.resize(m - 1);
  return hull;
}

std::vector<Point> polygon_from_cusps(const CuspReport &report) {
  if (report.vanishing.size() < 3) throw ReconstructionError("insufficient corners");
  std::vector<Point> reps;
  for (const auto &c : report.vanishing) reps.push_back(c.representative);
  auto hull = convex_hull(std::move(reps));
  if (hull.size() < 3) throw ReconstructionError("insufficient corners: representatives are collinear");
  return hull;
}

}  // namespace cusp
