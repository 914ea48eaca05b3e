#include <cmath>
#include <functional>
#include <numbers>

#include "doctest.h"

#include "cuspscan/errors.hpp"
#include "cuspscan/reconstruct.hpp"

using namespace cusp;

namespace {

constexpr double kPi = std::numbers::pi;

TruncatedKernel sample_kernel(double k, int order, Point center = {}) {
  TruncatedKernel kernel;
  kernel.k = k;
  kernel.order = order;
  kernel.center = center;
  kernel.coeffs.resize(2 * order + 1);
  for (int n = -order; n <= order; ++n) kernel.coeffs(n + order) = cd(std::cos(1.3 * n + 0.2), std::sin(0.7 * n * n));
  kernel.coeffs.normalize();
  return kernel;
}

// Nodes at -1, -0.99, ..., 1 on both axes.
Grid unit_grid() { return Grid{-1.005, -1.005, 0.01, 201, 201}; }

HerglotzField synthetic(const Grid &g, double k, const std::function<double(Point)> &modulus) {
  HerglotzField f;
  f.grid = g;
  f.k = k;
  for (std::size_t i = 0; i < g.size(); ++i) f.values.push_back(std::polar(modulus(g.node(i)), 0.3));
  return f;
}

}  // namespace

TEST_CASE("single-mode kernel gives a Bessel function") {
  TruncatedKernel kernel;
  kernel.k = 3.0;
  kernel.order = 0;
  kernel.coeffs = Eigen::VectorXcd::Ones(1);
  for (double r : {0.0, 0.4, 1.7}) {
    CHECK(std::abs(herglotz_value(kernel, {r * 0.6, r * 0.8}) -
                   std::sqrt(2 * kPi) * std::cyl_bessel_j(0.0, 3.0 * r)) < 1e-13);
  }
}

TEST_CASE("mode expansion agrees with direct quadrature of the Herglotz integral") {
  const auto kernel = sample_kernel(4.0, 9, {0.2, -0.1});
  const int count = 512;
  for (Point p : {Point{0.0, 0.0}, Point{0.7, -0.4}, Point{-1.2, 0.9}}) {
    cd sum = 0.0;
    for (int j = 0; j < count; ++j) {
      const double t = 2 * kPi * j / count;
      const double phase = kernel.k * ((p.x - kernel.center.x) * std::cos(t) + (p.y - kernel.center.y) * std::sin(t));
      sum += std::polar(1.0, phase) * kernel.value(t);
    }
    sum *= 2 * kPi / count;
    CHECK(std::abs(herglotz_value(kernel, p) - sum) < 1e-8);
  }
}

TEST_CASE("rotating the kernel rotates the field") {
  const auto kernel = sample_kernel(2.5, 6);
  const double alpha = 0.9;
  auto rotated = kernel;
  for (int n = -6; n <= 6; ++n) rotated.coeffs(n + 6) *= std::polar(1.0, -n * alpha);
  for (Point p : {Point{0.3, 0.5}, Point{-0.8, 0.1}}) {
    const Point q{std::cos(alpha) * p.x - std::sin(alpha) * p.y, std::sin(alpha) * p.x + std::cos(alpha) * p.y};
    CHECK(std::abs(herglotz_value(rotated, q) - herglotz_value(kernel, p)) < 1e-12);
  }
}

TEST_CASE("Herglotz field solves the Helmholtz equation to second order") {
  const auto kernel = sample_kernel(3.0, 8);
  const Point p{0.31, -0.27};
  auto residual = [&](double h) {
    auto v = [&](double dx, double dy) { return herglotz_value(kernel, {p.x + dx, p.y + dy}); };
    const cd lap = (v(h, 0) + v(-h, 0) + v(0, h) + v(0, -h) - 4.0 * v(0, 0)) / (h * h);
    return std::abs(lap + kernel.k * kernel.k * v(0, 0));
  };
  const double r1 = residual(0.02), r2 = residual(0.01);
  CHECK(std::log2(r1 / r2) >= 1.8);
}

TEST_CASE("field normalisation ignores kernel phase and scale") {
  const auto kernel = sample_kernel(2.0, 5);
  auto scaled = kernel;
  scaled.coeffs *= cd(0.0, 3.0);
  const Grid g = search_grid({-1, 1, -1, 1}, 2.0, 40);
  const auto a = herglotz_eval(kernel, g), b = herglotz_eval(scaled, g);
  double peak = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    CHECK(std::abs(a.values[i]) == doctest::Approx(std::abs(b.values[i])).epsilon(1e-12));
    peak = std::max(peak, std::abs(a.values[i]));
  }
  CHECK(peak == doctest::Approx(1.0));
  CHECK(b.scale == doctest::Approx(3.0 * a.scale));
}

TEST_CASE("search grid resolution") {
  const Grid g = search_grid({-2, 2, -1, 1}, 1.0, 200);
  CHECK(g.h == doctest::Approx(0.01));
  CHECK(g.nx == 400);
  CHECK(g.ny == 200);
  CHECK(g.x0 == doctest::Approx(-2.0));
  const Grid fine = search_grid({-2, 2, -2, 2}, 100.0, 200);
  CHECK(fine.h <= 2 * kPi / 100.0 / 10.0 * (1 + 1e-12));
  CHECK_THROWS_AS(herglotz_eval(sample_kernel(100.0, 3), Grid{-1, -1, 0.1, 20, 20}), ConfigError);
  const auto box = prior_search_box({1, 2}, 2.0);
  CHECK(box.xmin == doctest::Approx(-2.0));
  CHECK(box.ymax == doctest::Approx(5.0));
}

TEST_CASE("vanishing points are found and nodal lines are set aside") {
  const std::vector<Point> zeros{{-0.5, -0.5}, {0.5, -0.5}, {0.0, -0.1}};
  const auto f = synthetic(unit_grid(), 2.0, [&](Point p) {
    double d = 1.0;
    for (const auto &z : zeros) d = std::min(d, distance(p, z));
    const double line = std::abs(p.y - 0.5) + 0.01 * (1.0 - std::cos(2 * kPi * p.x / 0.05));
    return std::min(d, line);
  });
  const auto report = detect_cusps(f, CuspMode::kVanishing);
  REQUIRE(report.vanishing.size() == 3);
  for (const auto &z : zeros) {
    bool hit = false;
    for (const auto &c : report.vanishing) hit = hit || distance(c.representative, z) < 1e-9;
    CHECK(hit);
  }
  CHECK(report.curve_artifacts.size() >= 30);
  for (const auto &q : report.curve_artifacts) CHECK(std::abs(q.y - 0.5) < 1e-9);
  CHECK(report.localizing.empty());
  REQUIRE(report.polygon);
  CHECK(report.polygon->size() == 3);
  CHECK(report.params.length_scale == doctest::Approx(1.005 / 1.5));
  CHECK(report.params.cluster_radius == doctest::Approx(1.005 / 6.0));
}

TEST_CASE("nearby minima merge into one cluster") {
  const std::vector<Point> zeros{{0.0, 0.0}, {0.03, 0.0}};
  const auto f = synthetic(unit_grid(), 2.0, [&](Point p) {
    return std::min(distance(p, zeros[0]), distance(p, zeros[1])) + 0.05 * p.y * p.y;
  });
  const auto report = detect_cusps(f, CuspMode::kVanishing);
  REQUIRE(report.vanishing.size() == 1);
  CHECK(report.vanishing[0].members.size() == 2);
  CHECK(report.vanishing[0].representative.x == doctest::Approx(0.015));
  CHECK_FALSE(report.polygon);
}

TEST_CASE("localizing points must be high and isolated") {
  const auto f = synthetic(unit_grid(), 4.0, [](Point p) {
    auto bump = [&](Point c, double a) { return a * std::exp(-(std::pow(p.x - c.x, 2) + std::pow(p.y - c.y, 2)) / 0.01); };
    return bump({0.3, 0.3}, 1.0) + bump({-0.6, 0.2}, 0.8) + 0.05;
  });
  const auto report = detect_cusps(f, CuspMode::kLocalizing);
  REQUIRE(report.localizing.size() == 1);
  CHECK(distance(report.localizing[0].representative, {0.3, 0.3}) < 1e-9);
  CHECK(report.vanishing.empty());

  // Two equal peaks within a wavelength of each other are not a corner signature.
  const auto twin = synthetic(unit_grid(), 4.0, [](Point p) {
    auto bump = [&](Point c) { return std::exp(-(std::pow(p.x - c.x, 2) + std::pow(p.y - c.y, 2)) / 0.01); };
    return bump({0.3, 0.3}) + bump({0.3, -0.3});
  });
  const auto none = detect_cusps(twin, CuspMode::kLocalizing);
  CHECK(none.localizing.empty());
  CHECK(none.diagnostic.find("thresholds") != std::string::npos);
}

TEST_CASE("convex hull") {
  const auto hull = convex_hull({{0, 0}, {1, 0}, {0.5, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {1, 1}});
  REQUIRE(hull.size() == 4);
  CHECK(signed_area(hull) == doctest::Approx(1.0));
  CHECK(convex_hull({{0, 0}, {1, 1}}).size() == 2);

  CuspReport report;
  for (Point p : {Point{0, 0}, Point{1, 1}, Point{2, 2}}) report.vanishing.push_back({p, {p}});
  CHECK_THROWS_AS(polygon_from_cusps(report), ReconstructionError);
  report.vanishing.pop_back();
  CHECK_THROWS_AS(polygon_from_cusps(report), ReconstructionError);
  report.vanishing.push_back({{0, 2}, {{0, 2}}});
  CHECK(polygon_from_cusps(report).size() == 3);
}

TEST_CASE("field and grid must agree") {
  auto f = synthetic(unit_grid(), 2.0, [](Point) { return 1.0; });
  f.values.pop_back();
  CHECK_THROWS_AS(detect_cusps(f), ContractViolation);
}
