#include "cuspscan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "cuspscan/errors.hpp"

namespace cusp {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kDiskOutlineVertices = 4096;

// Sutherland-Hodgman against one axis-aligned half-plane. The clip window is
// convex so winding-weighted area is preserved even for non-convex input.
std::vector<Point> clip_halfplane(const std::vector<Point> &poly, bool along_x, double value,
                                  bool keep_greater) {
  std::vector<Point> out;
  if (poly.empty()) return out;
  out.reserve(poly.size() + 4);
  auto coord = [&](Point p) { return along_x ? p.x : p.y; };
  auto inside = [&](Point p) { return keep_greater ? coord(p) >= value : coord(p) <= value; };
  auto cross = [&](Point a, Point b) {
    const double t = (value - coord(a)) / (coord(b) - coord(a));
    Point r{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    if (along_x) r.x = value; else r.y = value;
    return r;
  };
  Point prev = poly.back();
  bool prev_in = inside(prev);
  for (const Point &cur : poly) {
    const bool cur_in = inside(cur);
    if (cur_in) {
      if (!prev_in) out.push_back(cross(prev, cur));
      out.push_back(cur);
    } else if (prev_in) {
      out.push_back(cross(prev, cur));
    }
    prev = cur;
    prev_in = cur_in;
  }
  return out;
}

bool even_odd(const std::vector<Point> &poly, Point p) {
  bool in = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point &a = poly[i];
    const Point &b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double xc = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < xc) in = !in;
    }
  }
  return in;
}

struct Circle {
  Point c;
  double r2;
};

bool in_circle(const Circle &c, Point p) {
  const double dx = p.x - c.c.x, dy = p.y - c.c.y;
  return dx * dx + dy * dy <= c.r2 * (1.0 + 1e-12) + 1e-300;
}

Circle circle2(Point a, Point b) {
  Point c{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
  const double dx = a.x - c.x, dy = a.y - c.y;
  return {c, dx * dx + dy * dy};
}

Circle circle3(Point a, Point b, Point c) {
  const double bx = b.x - a.x, by = b.y - a.y, cx = c.x - a.x, cy = c.y - a.y;
  const double d = 2.0 * (bx * cy - by * cx);
  if (std::abs(d) < 1e-300) {
    // collinear: take the widest pair
    Circle best = circle2(a, b);
    for (const auto &cand : {circle2(a, c), circle2(b, c)}) {
      if (cand.r2 > best.r2) best = cand;
    }
    return best;
  }
  const double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  const double ux = (cy * b2 - by * c2) / d;
  const double uy = (bx * c2 - cx * b2) / d;
  return {{a.x + ux, a.y + uy}, ux * ux + uy * uy};
}

// Welzl's algorithm in its iterative move-to-front form.
Circle min_enclosing_circle(std::vector<Point> pts) {
  std::mt19937 rng(12345u);
  std::shuffle(pts.begin(), pts.end(), rng);
  Circle c{pts[0], 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (in_circle(c, pts[i])) continue;
    c = {pts[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (in_circle(c, pts[j])) continue;
      c = circle2(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (!in_circle(c, pts[k])) c = circle3(pts[i], pts[j], pts[k]);
      }
    }
  }
  return c;
}

}  // namespace

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double signed_area(const std::vector<Point> &polygon) {
  double s = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    s += polygon[j].x * polygon[i].y - polygon[i].x * polygon[j].y;
  }
  return 0.5 * s;
}

double clipped_area(const std::vector<Point> &polygon, double xlo, double xhi, double ylo,
                    double yhi) {
  auto p = clip_halfplane(polygon, true, xlo, true);
  p = clip_halfplane(p, true, xhi, false);
  p = clip_halfplane(p, false, ylo, true);
  p = clip_halfplane(p, false, yhi, false);
  return p.size() < 3 ? 0.0 : std::abs(signed_area(p));
}

Polygon make_polygon(std::vector<Point> vertices) {
  if (vertices.size() < 3) throw ConfigError("polygon needs at least 3 vertices");
  if (signed_area(vertices) < 0) std::reverse(vertices.begin(), vertices.end());
  return Polygon{std::move(vertices)};
}

ParametricCurve make_curve(const std::string &family, std::vector<double> params,
                           double rotation, Point translation, int samples) {
  if (samples < 512) throw ConfigError("parametric curve needs at least 512 samples");
  std::function<Point(double)> f;
  if (family == "raindrop") {
    if (params.size() != 2) throw ConfigError("raindrop expects parameters [a, b]");
    const double a = params[0], b = params[1];
    f = [a, b](double t) { return Point{a * std::sin(0.5 * t), -b * std::sin(t)}; };
  } else if (family == "heart") {
    if (!params.empty()) throw ConfigError("heart takes no parameters");
    f = [](double t) {
      const double w = 1.0 - std::cos(t);
      return Point{w * (1.5 * std::sin(t) - 0.5 * std::sin(2 * t)) / 4.0 - 1.0,
                   w * (std::cos(t) - 0.5 * std::cos(2 * t)) / 4.0 - 0.5};
    };
  } else {
    throw ConfigError("unknown curve family '" + family + "'");
  }
  const double cr = std::cos(rotation), sr = std::sin(rotation);
  std::vector<Point> pts;
  pts.reserve(samples + 1);
  for (int i = 0; i < samples; ++i) {
    const Point p = f(2.0 * kPi * i / samples);
    pts.push_back({cr * p.x - sr * p.y + translation.x, sr * p.x + cr * p.y + translation.y});
  }
  if (signed_area(pts) < 0) std::reverse(pts.begin() + 1, pts.end());
  pts.push_back(pts.front());
  return ParametricCurve{family, std::move(params), rotation, translation, std::move(pts)};
}

Geometry::Geometry(Shape shape, std::vector<Corner> corners)
    : shape_(std::move(shape)), corners_(std::move(corners)) {
  if (const auto *poly = std::get_if<Polygon>(&shape_)) {
    if (poly->vertices.size() < 3) throw ConfigError("polygon needs at least 3 vertices");
    outline_ = poly->vertices;
    if (signed_area(outline_) <= 0) throw ConfigError("polygon must be counterclockwise");
  } else if (const auto *curve = std::get_if<ParametricCurve>(&shape_)) {
    const auto &s = curve->samples;
    if (s.size() < 513) throw ConfigError("parametric curve needs at least 512 samples");
    if (distance(s.front(), s.back()) > 1e-12) throw ConfigError("parametric curve not closed");
    outline_.assign(s.begin(), s.end() - 1);
    if (signed_area(outline_) <= 0) throw ConfigError("curve must be counterclockwise");
  } else {
    const auto &d = std::get<Disk>(shape_);
    if (!(d.radius > 0)) throw ConfigError("disk radius must be positive");
    const int nv = kDiskOutlineVertices;
    const double rho =
        d.radius * std::sqrt(2.0 * kPi / (nv * std::sin(2.0 * kPi / nv)));
    outline_.reserve(nv);
    for (int i = 0; i < nv; ++i) {
      const double t = 2.0 * kPi * i / nv;
      outline_.push_back({d.center.x + rho * std::cos(t), d.center.y + rho * std::sin(t)});
    }
  }
}

bool Geometry::contains(Point p) const {
  if (const auto *d = std::get_if<Disk>(&shape_)) return distance(p, d->center) < d->radius;
  return even_odd(outline_, p);
}

BoundingBox Geometry::bounding_box() const {
  if (const auto *d = std::get_if<Disk>(&shape_)) {
    return {d->center.x - d->radius, d->center.x + d->radius, d->center.y - d->radius,
            d->center.y + d->radius};
  }
  BoundingBox b{outline_[0].x, outline_[0].x, outline_[0].y, outline_[0].y};
  for (const auto &p : outline_) {
    b.xmin = std::min(b.xmin, p.x);
    b.xmax = std::max(b.xmax, p.x);
    b.ymin = std::min(b.ymin, p.y);
    b.ymax = std::max(b.ymax, p.y);
  }
  return b;
}

double Geometry::area() const {
  if (const auto *d = std::get_if<Disk>(&shape_)) return kPi * d->radius * d->radius;
  return signed_area(outline_);
}

double Geometry::enclosing_radius() const { return enclosing_circle().second; }

std::pair<Point, double> Geometry::enclosing_circle() const {
  if (const auto *d = std::get_if<Disk>(&shape_)) return {d->center, d->radius};
  const Circle c = min_enclosing_circle(outline_);
  return {c.c, std::sqrt(c.r2)};
}

double Geometry::origin_radius() const {
  if (const auto *d = std::get_if<Disk>(&shape_)) {
    return std::hypot(d->center.x, d->center.y) + d->radius;
  }
  double r = 0.0;
  for (const auto &p : outline_) r = std::max(r, std::hypot(p.x, p.y));
  return r;
}

void MediumSpec::validate() const {
  if (!std::isfinite(n) || n <= 0.0) throw ConfigError("refractive index must be positive");
  if (n == 1.0) throw ConfigError("refractive index n = 1 gives zero contrast");
}

std::vector<std::string> builtin_medium_names() {
  return {"rain_small", "rain_regular", "heart", "square", "hexagon", "disk"};
}

MediumSpec builtin_medium(const std::string &name, double n) {
  auto make = [&](Geometry g) {
    MediumSpec m{name, std::move(g), n};
    m.validate();
    return m;
  };
  if (name == "rain_small") {
    return make(Geometry(make_curve("raindrop", {0.2, 0.1}, 1.5 * kPi, {0.0, 0.0}),
                         {{{0.0, 0.0}, CuspKind::kVanishing}}));
  }
  if (name == "rain_regular") {
    return make(Geometry(make_curve("raindrop", {1.0, 0.5}, 0.0, {2.0, 3.0}),
                         {{{2.0, 3.0}, CuspKind::kVanishing}}));
  }
  if (name == "heart") {
    return make(Geometry(make_curve("heart", {}, 0.0, {0.0, 0.0}),
                         {{{-1.0, -0.5}, CuspKind::kLocalizing}}));
  }
  if (name == "square") {
    std::vector<Point> v{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    std::vector<Corner> c;
    for (const auto &p : v) c.push_back({p, CuspKind::kVanishing});
    return make(Geometry(make_polygon(v), c));
  }
  if (name == "hexagon") {
    std::vector<Point> v;
    std::vector<Corner> c;
    for (int i = 0; i < 6; ++i) {
      const double t = kPi * i / 3.0;
      v.push_back({2.0 * std::cos(t), 2.0 * std::sin(t)});
      c.push_back({v.back(), CuspKind::kVanishing});
    }
    return make(Geometry(make_polygon(v), c));
  }
  if (name == "disk") {
    return make(Geometry(Disk{{0.0, 0.0}, 1.0}));
  }
  throw ConfigError("unknown builtin medium '" + name + "'");
}

Grid Grid::from_box(double xmin, double xmax, double ymin, double ymax, int nx, int ny) {
  if (!(xmax > xmin) || !(ymax > ymin) || nx <= 0 || ny <= 0) {
    throw ConfigError("grid box is empty");
  }
  const double hx = (xmax - xmin) / nx;
  const double hy = (ymax - ymin) / ny;
  if (std::abs(hx - hy) > 1e-9 * hx) throw ConfigError("grid cells must be square");
  Grid g{xmin, ymin, hx, nx, ny};
  g.validate();
  return g;
}

Grid Grid::around(const BoundingBox &bbox, double h_max, int margin, int min_cells) {
  if (!(h_max > 0)) throw ConfigError("grid spacing must be positive");
  const double w = bbox.xmax - bbox.xmin;
  const double hgt = bbox.ymax - bbox.ymin;
  double h = h_max;
  const int interior = std::max(min_cells - 2 * margin, 1);
  if (std::max(w, hgt) / h < interior) h = std::max(w, hgt) / interior;
  const int nx = std::max(static_cast<int>(std::ceil(w / h)) + 2 * margin, min_cells);
  const int ny = std::max(static_cast<int>(std::ceil(hgt / h)) + 2 * margin, min_cells);
  const double cx = 0.5 * (bbox.xmin + bbox.xmax);
  const double cy = 0.5 * (bbox.ymin + bbox.ymax);
  return Grid{cx - 0.5 * nx * h, cy - 0.5 * ny * h, h, nx, ny};
}

void Grid::validate() const {
  if (!(h > 0) || !std::isfinite(h)) throw ConfigError("grid spacing must be positive");
  if (nx < 32 || ny < 32) throw ConfigError("grid resolution must be at least 32 per axis");
}

std::vector<double> rasterize_contrast(const MediumSpec &medium, const Grid &grid,
                                       Rasterization mode) {
  medium.validate();
  grid.validate();
  const BoundingBox b = medium.geometry.bounding_box();
  const double tol = 1e-9 * grid.h;
  if (b.xmin - grid.x0 < 2 * grid.h - tol || grid.xmax() - b.xmax < 2 * grid.h - tol ||
      b.ymin - grid.y0 < 2 * grid.h - tol || grid.ymax() - b.ymax < 2 * grid.h - tol) {
    throw ConfigError("grid does not contain the geometry with a 2-cell margin");
  }
  const double q = medium.contrast();
  std::vector<double> out(grid.size(), 0.0);
  if (mode == Rasterization::kCellCenter) {
    for (int j = 0; j < grid.ny; ++j) {
      for (int i = 0; i < grid.nx; ++i) {
        if (medium.geometry.contains(grid.node(i, j))) out[grid.index(i, j)] = q;
      }
    }
    return out;
  }
  const auto &outline = medium.geometry.outline();
  const double cell_area = grid.h * grid.h;
  for (int j = 0; j < grid.ny; ++j) {
    const double ylo = grid.y0 + j * grid.h;
    auto strip = clip_halfplane(outline, false, ylo, true);
    strip = clip_halfplane(strip, false, ylo + grid.h, false);
    if (strip.size() < 3) continue;
    double sx0 = strip[0].x, sx1 = strip[0].x;
    for (const auto &p : strip) {
      sx0 = std::min(sx0, p.x);
      sx1 = std::max(sx1, p.x);
    }
    const int i0 = std::max(0, static_cast<int>(std::floor((sx0 - grid.x0) / grid.h)));
    const int i1 = std::min(grid.nx - 1, static_cast<int>(std::floor((sx1 - grid.x0) / grid.h)));
    for (int i = i0; i <= i1; ++i) {
      const double xlo = grid.x0 + i * grid.h;
      auto cell = clip_halfplane(strip, true, xlo, true);
      cell = clip_halfplane(cell, true, xlo + grid.h, false);
      if (cell.size() < 3) continue;
      const double frac = std::min(1.0, std::abs(signed_area(cell)) / cell_area);
      if (frac > 1e-14) out[grid.index(i, j)] = q * frac;
    }
  }
  return out;
}

}  // namespace cusp
