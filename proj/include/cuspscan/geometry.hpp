#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cusp {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
double distance(Point a, Point b);

struct BoundingBox {
  double xmin, xmax, ymin, ymax;
};

/// Simple polygon, vertices counterclockwise, first vertex not repeated.
struct Polygon {
  std::vector<Point> vertices;
};

/// Closed polyline sampled from a named parametric family
/// (samples.front() == samples.back()).
struct ParametricCurve {
  std::string family;
  std::vector<double> params;
  double rotation = 0.0;  // radians, about the origin, applied before translation
  Point translation;
  std::vector<Point> samples;
};

struct Disk {
  Point center;
  double radius = 1.0;
};

enum class CuspKind { kVanishing, kLocalizing };

/// Boundary point where the tangent jumps. Vanishing corners have interior
/// angle below pi, localizing ones above.
struct Corner {
  Point location;
  CuspKind kind = CuspKind::kVanishing;
};

class Geometry {
 public:
  using Shape = std::variant<Polygon, ParametricCurve, Disk>;

  explicit Geometry(Shape shape, std::vector<Corner> corners = {});

  const Shape &shape() const { return shape_; }
  const std::vector<Corner> &corners() const { return corners_; }

  /// Even-odd rule; points on the boundary may go either way.
  bool contains(Point p) const;
  BoundingBox bounding_box() const;
  double area() const;
  /// Counterclockwise boundary polygon (not closed). Disks are replaced by an
  /// area-preserving regular polygon.
  const std::vector<Point> &outline() const { return outline_; }
  /// Radius of the smallest disk containing the geometry.
  double enclosing_radius() const;
  /// Centre and radius of that disk.
  std::pair<Point, double> enclosing_circle() const;
  /// max |x| over the geometry, i.e. radius of the origin-centred enclosing disk.
  double origin_radius() const;

 private:
  Shape shape_;
  std::vector<Corner> corners_;
  std::vector<Point> outline_;
};

Polygon make_polygon(std::vector<Point> vertices);
ParametricCurve make_curve(const std::string &family, std::vector<double> params,
                           double rotation, Point translation, int samples = 2048);

struct MediumSpec {
  std::string name;
  Geometry geometry;
  double n = 2.0;  // refractive index inside D

  double contrast() const { return n - 1.0; }
  void validate() const;
};

MediumSpec builtin_medium(const std::string &name, double n);
std::vector<std::string> builtin_medium_names();

/// Cell-centred uniform grid with square cells of size h. Node (i, j) sits at
/// (x0 + (i + 1/2) h, y0 + (j + 1/2) h); storage is row-major in j.
struct Grid {
  double x0 = 0.0;
  double y0 = 0.0;
  double h = 1.0;
  int nx = 0;
  int ny = 0;

  static Grid from_box(double xmin, double xmax, double ymin, double ymax, int nx, int ny);
  /// Smallest grid with cell size <= h_max covering bbox plus `margin` cells on
  /// every side and at least `min_cells` cells per axis.
  static Grid around(const BoundingBox &bbox, double h_max, int margin = 2, int min_cells = 32);

  double xmax() const { return x0 + nx * h; }
  double ymax() const { return y0 + ny * h; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  Point node(int i, int j) const { return {x0 + (i + 0.5) * h, y0 + (j + 0.5) * h}; }
  Point node(std::size_t idx) const {
    return node(static_cast<int>(idx % nx), static_cast<int>(idx / nx));
  }
  void validate() const;
};

enum class Rasterization { kCellCenter, kCoverage };

/// Samples q = n - 1 on the grid. kCoverage weights each cell by the exact
/// fraction of its area inside D, kCellCenter uses the even-odd test at the
/// cell centre.
std::vector<double> rasterize_contrast(const MediumSpec &medium, const Grid &grid,
                                       Rasterization mode = Rasterization::kCoverage);

/// Area of polygon (any orientation, possibly non-convex) intersected with an
/// axis-aligned rectangle.
double clipped_area(const std::vector<Point> &polygon, double xlo, double xhi, double ylo,
                    double yhi);

double signed_area(const std::vector<Point> &polygon);

}  // namespace cusp
