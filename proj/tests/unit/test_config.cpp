#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "cuspscan/config.hpp"
#include "cuspscan/errors.hpp"

using namespace cusp;
using nlohmann::json;

TEST_CASE("defaults") {
  const RunConfig c;
  CHECK(c.medium == "square");
  CHECK(c.n == 16.0);
  CHECK(c.step == 0.01);
  CHECK(c.dip_threshold == 0.1);
  CHECK(c.tau_vanishing == 0.05);
  CHECK(c.tau_localizing == 0.95);
  CHECK(c.points_per_wavelength >= 10.0);
  CHECK_FALSE(c.window);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("JSON round trip") {
  RunConfig c;
  c.medium = "polygon";
  c.vertices = {{0, 0}, {1, 0}, {0, 1}};
  c.window = std::make_pair(0.5, 2.0);
  c.prior_center = Point{0.1, 0.2};
  c.search_box = BoundingBox{-4, 4, -4, 4};
  c.cusp_mode = CuspMode::kLocalizing;
  c.indicator = IndicatorNorm::kKernel;
  c.cost = IndicatorCost::kL1;
  c.seed = 18446744073709551615ull;
  c.noise = 0.05;
  const auto back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK(back.seed == c.seed);
  CHECK(back.vertices.size() == 3);
  CHECK(back.window->second == 2.0);
  CHECK(back.cusp_mode == CuspMode::kLocalizing);
  CHECK_FALSE(config_from_json(config_to_json(RunConfig{})).prior_radius);
}

TEST_CASE("unknown keys and bad values are rejected") {
  CHECK_THROWS_AS(config_from_json({{"mediun", "square"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"n", "16"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"n", 1.0}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"n", -2.0}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"medium", "pentagon"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"window", {2.0, 0.5}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"window", {0.5}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"obs_count", 6.5}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"cusp_mode", "sideways"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"seed", -1}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"points_per_wavelength", 5.0}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"vertices", {{0, 0}, {1, 0}, {0, 1}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::array()), ConfigError);
  try {
    config_from_json({{"window", {2.0, 0.5}}});
  } catch (const ConfigError &e) {
    CHECK(std::string(e.what()).find("empty k grid") != std::string::npos);
  }
}

TEST_CASE("overlay changes only the given keys") {
  RunConfig c;
  c.n = 25.0;
  apply_config_json(c, {{"medium", "hexagon"}, {"window", "auto"}, {"order", 12}});
  CHECK(c.medium == "hexagon");
  CHECK(c.n == 25.0);
  CHECK(c.order == 12);
  apply_config_json(c, {{"order", "auto"}});
  CHECK(c.order == -1);
}

TEST_CASE("config files") {
  const auto path = std::filesystem::temp_directory_path() / "cuspscan_test_config.json";
  std::ofstream(path) << R"({"medium": "heart", "n": 16, "window": [1.9, 2.3]})";
  const auto c = load_config(path.string());
  CHECK(c.medium == "heart");
  CHECK(c.window->first == 1.9);
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(load_config(path.string()), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/cuspscan.json"), IoError);
}
