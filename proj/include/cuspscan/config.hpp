#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cuspscan/geometry.hpp"
#include "cuspscan/reconstruct.hpp"
#include "cuspscan/spectral.hpp"

namespace cusp {

/// Everything a run needs. JSON keys match the member names; optional members
/// take the string "auto" in JSON.
struct RunConfig {
  std::string medium = "square";  // builtin name, or "polygon" with `vertices`
  double n = 16.0;
  std::vector<Point> vertices;

  double points_per_wavelength = 20.0;
  int obs_count = 64;
  int inc_count = 64;
  double solver_tol = 1e-7;

  std::optional<std::pair<double, double>> window;  // auto = oracle bound window
  double step = 0.01;

  int order = -1;  // fixed truncation order; -1 = ceil(e k R / 2) + order_extra
  int order_extra = 5;
  IndicatorNorm indicator = IndicatorNorm::kHerglotz;
  IndicatorCost cost = IndicatorCost::kL2;
  double dip_threshold = 0.1;
  double refine_tol = 1e-3;  // 0 disables golden-section refinement

  std::optional<Point> prior_center;  // auto = minimal enclosing circle
  std::optional<double> prior_radius;

  std::optional<BoundingBox> search_box;  // auto = prior box scaled by search_box_factor
  double search_box_factor = 1.5;
  int search_nodes = 200;
  CuspMode cusp_mode = CuspMode::kAuto;
  double tau_vanishing = 0.05;
  double tau_localizing = 0.95;
  double cluster_radius = 0.0;
  double line_radius = 0.0;

  double noise = 0.0;
  std::uint64_t seed = 0;

  std::string output_dir = "cuspscan_out";

  /// Range and consistency checks; throws ConfigError.
  void validate() const;
};

/// Strict parse: unknown keys and wrong types are ConfigError.
RunConfig config_from_json(const nlohmann::json &j);
/// Overlays the keys present in `j` onto `base`.
void apply_config_json(RunConfig &base, const nlohmann::json &j);
nlohmann::json config_to_json(const RunConfig &c);
RunConfig load_config(const std::string &path);

const char *cusp_mode_name(CuspMode mode);
CuspMode parse_cusp_mode(const std::string &s);

}  // namespace cusp
