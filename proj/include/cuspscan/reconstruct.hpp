#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cuspscan/geometry.hpp"
#include "cuspscan/spectral.hpp"

namespace cusp {

/// Herglotz wave function v_g(x) = int e^{ik x.d} g(d) ds(d) of a detected
/// kernel on a search grid, scaled so that max |v_g| = 1.
struct HerglotzField {
  Grid grid;
  std::vector<cd> values;
  double k = 0.0;
  double scale = 1.0;  // values = raw / scale
  TruncatedKernel kernel;
};

/// Unnormalised v_g(p) = sqrt(2 pi) sum a_n i^n J_n(k r) e^{in theta}, with
/// (r, theta) the polar coordinates of p - kernel.center.
cd herglotz_value(const TruncatedKernel &kernel, Point p);

HerglotzField herglotz_eval(const TruncatedKernel &kernel, const Grid &grid);

/// Square box centred on the prior disk, half-width `factor` times its radius.
BoundingBox prior_search_box(Point center, double radius, double factor = 1.5);

/// Node grid over `box` with at least `min_nodes` nodes along the shorter side
/// and at least ten nodes per wavelength.
Grid search_grid(const BoundingBox &box, double k, int min_nodes = 200);

enum class CuspMode { kAuto, kVanishing, kLocalizing };

/// Zero-valued lengths are resolved from the field. The length scale L
/// defaults to the shorter half-side of the search box divided by 1.5, which
/// is the prior radius for prior_search_box.
struct CuspParams {
  double tau_vanishing = 0.05;
  double tau_localizing = 0.95;
  double length_scale = 0.0;
  double cluster_radius = 0.0;    // 0 = min(lambda / 4, L / 4)
  double line_radius = 0.0;       // 0 = L / 2
  double isolation_radius = 0.0;  // 0 = lambda
  int nodal_line_count = 5;
  double collinearity = 0.1;  // minor/major variance ratio below which a run is a line
};

struct CuspCluster {
  Point representative;  // centroid of the members
  std::vector<Point> members;
};

struct CuspReport {
  std::vector<CuspCluster> vanishing;
  std::vector<CuspCluster> localizing;
  std::vector<Point> curve_artifacts;  // vanishing candidates demoted as nodal-line points
  std::optional<std::vector<Point>> polygon;
  CuspParams params;  // with the wavelength-dependent defaults resolved
  std::string diagnostic;
};

CuspReport detect_cusps(const HerglotzField &field, CuspMode mode = CuspMode::kAuto,
                        const CuspParams &params = {});

/// Convex hull, counterclockwise, no collinear vertices.
std::vector<Point> convex_hull(std::vector<Point> points);

/// Convex hull of the vanishing representatives. Throws ReconstructionError
/// with fewer than three representatives or when they are collinear.
std::vector<Point> polygon_from_cusps(const CuspReport &report);

}  // namespace cusp
