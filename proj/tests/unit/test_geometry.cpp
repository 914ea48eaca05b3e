#include <cmath>
#include <tuple>
#include <numbers>

#include "doctest.h"

#include "cuspscan/errors.hpp"
#include "cuspscan/geometry.hpp"
#include "cuspscan/quadrature.hpp"

using namespace cusp;

namespace {

constexpr double kPi = std::numbers::pi;

// Area of the heart curve by Green's theorem on the analytic parametrisation.
double heart_area_reference() {
  auto x = [](double t) { return (1 - std::cos(t)) * (1.5 * std::sin(t) - 0.5 * std::sin(2 * t)) / 4; };
  auto y = [](double t) { return (1 - std::cos(t)) * (std::cos(t) - 0.5 * std::cos(2 * t)) / 4; };
  const int n = 20000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t0 = 2 * kPi * i / n, t1 = 2 * kPi * (i + 1) / n;
    s += x(t0) * y(t1) - x(t1) * y(t0);
  }
  return std::abs(0.5 * s);
}

}  // namespace

TEST_CASE("builtin areas") {
  CHECK(builtin_medium("square", 16).geometry.area() == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(builtin_medium("hexagon", 25).geometry.area() ==
        doctest::Approx(6.0 * std::sqrt(3.0)).epsilon(1e-12));
  CHECK(builtin_medium("disk", 16).geometry.area() == doctest::Approx(kPi).epsilon(1e-9));
  CHECK(builtin_medium("heart", 16).geometry.area() ==
        doctest::Approx(heart_area_reference()).epsilon(1e-4));
  const double rr = builtin_medium("rain_regular", 4).geometry.area();
  CHECK(builtin_medium("rain_small", 4).geometry.area() == doctest::Approx(rr / 25.0).epsilon(1e-6));
}

TEST_CASE("heart corner is at the inward cusp") {
  const auto m = builtin_medium("heart", 16);
  REQUIRE(m.geometry.corners().size() == 1);
  CHECK(m.geometry.corners()[0].kind == CuspKind::kLocalizing);
  CHECK(distance(m.geometry.corners()[0].location, {-1.0, -0.5}) < 1e-12);
  CHECK(m.geometry.contains({-1.0, -0.8}));
  CHECK_FALSE(m.geometry.contains({-1.0, -0.45}));
}

TEST_CASE("enclosing circles") {
  auto [c, r] = builtin_medium("square", 16).geometry.enclosing_circle();
  CHECK(distance(c, {0, 0}) < 1e-9);
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  std::tie(c, r) = builtin_medium("hexagon", 25).geometry.enclosing_circle();
  CHECK(r == doctest::Approx(2.0).epsilon(1e-9));
  // Every outline vertex inside, and two or more on the circle. The disk
  // outline is area preserving and pokes slightly outside.
  for (const auto &name : builtin_medium_names()) {
    if (name == "disk") continue;
    const auto g = builtin_medium(name, 4).geometry;
    std::tie(c, r) = g.enclosing_circle();
    int on = 0;
    for (const auto &v : g.outline()) {
      CHECK(distance(v, c) <= r * (1 + 1e-9));
      if (distance(v, c) > r * (1 - 1e-6)) ++on;
    }
    CHECK(on >= 2);
    CHECK(g.enclosing_radius() == doctest::Approx(r));
  }
}

TEST_CASE("clipped area of a unit square") {
  const std::vector<Point> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(clipped_area(sq, 0.5, 2, -1, 2) == doctest::Approx(0.5));
  CHECK(clipped_area(sq, 0.25, 0.75, 0.25, 0.75) == doctest::Approx(0.25));
  CHECK(clipped_area(sq, 2, 3, 2, 3) == doctest::Approx(0.0));
  const std::vector<Point> tri{{0, 0}, {1, 0}, {0, 1}};
  CHECK(clipped_area(tri, 0, 0.5, 0, 0.5) == doctest::Approx(0.25));
}

TEST_CASE("coverage rasterisation conserves the contrast mass") {
  for (const char *name : {"square", "hexagon", "heart", "rain_regular"}) {
    const auto m = builtin_medium(name, 4);
    const Grid g = Grid::around(m.geometry.bounding_box(), 0.03);
    const auto q = rasterize_contrast(m, g);
    double mass = 0.0;
    for (double v : q) mass += v * g.h * g.h;
    CHECK_MESSAGE(mass == doctest::Approx(3.0 * m.geometry.area()).epsilon(1e-3), name);
  }
}

TEST_CASE("invalid media") {
  CHECK_THROWS_AS(builtin_medium("triangle", 2), ConfigError);
  CHECK_THROWS_AS(builtin_medium("square", -1), ConfigError);
  CHECK_THROWS_AS(make_polygon({{0, 0}, {1, 0}}), ConfigError);
}
