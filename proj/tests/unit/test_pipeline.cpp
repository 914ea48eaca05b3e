#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "cuspscan/errors.hpp"
#include "cuspscan/oracle.hpp"
#include "cuspscan/pipeline.hpp"

using namespace cusp;

namespace {

std::filesystem::path scratch(const std::string &name) {
  const auto dir = std::filesystem::temp_directory_path() / "cuspscan_test_pipeline" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig tiny() {
  RunConfig c;
  c.medium = "disk";
  c.n = 4.0;
  c.window = std::make_pair(0.5, 0.52);
  c.points_per_wavelength = 10.0;
  c.obs_count = 16;
  c.inc_count = 16;
  return c;
}

}  // namespace

TEST_CASE("k grid") {
  const auto ks = k_grid(0.5, 2.0, 0.01);
  CHECK(ks.size() == 151);
  CHECK(ks.front() == 0.5);
  CHECK(ks.back() == doctest::Approx(2.0));
  CHECK(k_grid(1.0, 1.0, 0.1).size() == 1);
  CHECK(k_grid(1.0, 1.25, 0.1).size() == 3);
  try {
    k_grid(2.0, 1.0, 0.01);
    FAIL("expected an error");
  } catch (const ConfigError &e) {
    CHECK(std::string(e.what()) == "empty k grid");
  }
}

TEST_CASE("auto window and prior") {
  RunConfig c;
  c.medium = "hexagon";
  c.n = 25.0;
  const auto medium = build_medium(c);
  const auto [lo, hi] = resolve_window(c, medium);
  const auto w = oracle::bound_window(medium);
  CHECK(lo == w.k_lo);
  CHECK(hi == w.k_hi);
  const auto prior = resolve_prior(c, medium);
  CHECK(prior.radius == doctest::Approx(medium.geometry.enclosing_radius()));
  c.prior_center = Point{10.0, 0.0};
  CHECK(resolve_prior(c, medium).radius > 10.0);
}

TEST_CASE("user polygons in either orientation") {
  RunConfig c;
  c.medium = "polygon";
  c.vertices = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
  const auto m = build_medium(c);
  CHECK(m.geometry.area() == doctest::Approx(1.0));
}

TEST_CASE("synthesis resumes and is deterministic") {
  const auto dir = scratch("resume");
  const auto cfg = tiny();
  const auto path = (dir / "archive.json").string();
  const auto first = synthesize_archive(cfg, path);
  CHECK(first.computed == 3);
  CHECK(first.total == 3);
  const auto bytes = slurp(path);
  const auto again = synthesize_archive(cfg, path);
  CHECK(again.computed == 0);
  CHECK(again.skipped == 3);
  CHECK(slurp(path) == bytes);

  const auto other = (scratch("resume2") / "archive.json").string();
  synthesize_archive(cfg, other);
  CHECK(slurp(other) == bytes);

  auto wider = cfg;
  wider.window = std::make_pair(0.5, 0.54);
  const auto grown = synthesize_archive(wider, path);
  CHECK(grown.computed == 2);
  CHECK(read_archive(path).matrices().size() == 5);

  auto mismatched = cfg;
  mismatched.obs_count = 20;
  CHECK_THROWS_AS(synthesize_archive(mismatched, path), ConfigError);
}

TEST_CASE("too few angles for the wavenumber") {
  auto cfg = tiny();
  cfg.window = std::make_pair(20.0, 20.0);
  cfg.obs_count = 8;
  cfg.inc_count = 8;
  try {
    synthesize_archive(cfg, (scratch("nyquist") / "a.json").string());
    FAIL("expected an error");
  } catch (const ConfigError &e) {
    CHECK(std::string(e.what()).find("k = 20") != std::string::npos);
  }
}

TEST_CASE("noise depends on seed and k only") {
  FarFieldMatrix a;
  a.k = 1.25;
  a.values = Eigen::MatrixXcd::Ones(8, 8);
  RunConfig c;
  c.noise = 0.1;
  c.seed = 42;
  auto x = a, y = a, z = a;
  apply_noise(c, x);
  apply_noise(c, y);
  CHECK(x.values == y.values);
  z.k = 1.26;
  apply_noise(c, z);
  CHECK(x.values != z.values);
  c.seed = 43;
  auto w = a;
  apply_noise(c, w);
  CHECK(x.values != w.values);
}

TEST_CASE("detections survive a JSON round trip") {
  ScanResult r;
  EigenDetection d;
  d.k_star = 0.93978123456789;
  d.sigma = 1.234e-5;
  d.dip_depth = 0.01;
  d.refined = true;
  d.kernel.k = d.k_star;
  d.kernel.order = 2;
  d.kernel.center = {0.1, -1.0 / 3.0};
  d.kernel.coeffs = Eigen::VectorXcd::Constant(5, cd(1.0 / 3.0, -2.0 / 7.0));
  r.detections.push_back(d);
  const auto text = dump_json(detections_to_json(r, RunConfig{}));
  const auto back = detections_from_json(nlohmann::json::parse(text));
  REQUIRE(back.size() == 1);
  CHECK(back[0].k_star == d.k_star);
  CHECK(back[0].kernel.coeffs == d.kernel.coeffs);
  CHECK(back[0].kernel.center.y == d.kernel.center.y);
  CHECK(back[0].refined);
  auto bad = nlohmann::json::parse(text);
  bad["detections"][0]["kernel"]["order"] = 3;
  CHECK_THROWS_AS(detections_from_json(bad), IoError);
}

TEST_CASE("scan and reconstruction on a small disk run") {
  auto cfg = tiny();
  cfg.window = std::make_pair(0.5, 0.6);
  cfg.step = 0.05;
  const auto dir = scratch("scan");
  const auto path = (dir / "archive.json").string();
  synthesize_archive(cfg, path);
  const auto result = scan_archive(cfg, read_archive(path));
  CHECK(result.curve.samples.size() == 3);
  const auto csv = indicator_csv(result.curve);
  CHECK(csv.rfind("k,sigma,order,degenerate\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

  EigenDetection det;
  det.k_star = 0.55;
  det.kernel = result.curve.samples[1].kernel;
  const auto rec = reconstruct_detection(cfg, det);
  CHECK(rec.field.grid.nx >= 200);
  const auto report = report_to_json(rec);
  CHECK(report.contains("vanishing"));
  CHECK(report.at("thresholds").at("tau_vanishing") == 0.05);
}
