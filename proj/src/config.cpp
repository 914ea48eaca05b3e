#include "cuspscan/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>

#include "cuspscan/errors.hpp"

namespace cusp {

using nlohmann::json;

namespace {

bool is_auto(const json &v) { return v.is_string() && v.get<std::string>() == "auto"; }

template <class T>
T get_as(const json &v, const std::string &key) {
  try {
    return v.get<T>();
  } catch (const json::exception &) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

double get_number(const json &v, const std::string &key) {
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

int get_int(const json &v, const std::string &key) {
  if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
  return v.get<int>();
}

std::vector<double> get_numbers(const json &v, const std::string &key, std::size_t count) {
  const auto xs = get_as<std::vector<double>>(v, key);
  if (xs.size() != count) {
    throw ConfigError("config key '" + key + "' needs " + std::to_string(count) + " numbers");
  }
  return xs;
}

using Setter = std::function<void(RunConfig &, const json &, const std::string &)>;

const std::map<std::string, Setter> &setters() {
  static const std::map<std::string, Setter> table = {
      {"medium", [](RunConfig &c, const json &v, const std::string &k) { c.medium = get_as<std::string>(v, k); }},
      {"n", [](RunConfig &c, const json &v, const std::string &k) { c.n = get_number(v, k); }},
      {"vertices",
       [](RunConfig &c, const json &v, const std::string &k) {
         c.vertices.clear();
         for (const auto &p : get_as<std::vector<std::vector<double>>>(v, k)) {
           if (p.size() != 2) throw ConfigError("config key 'vertices' needs [x, y] pairs");
           c.vertices.push_back({p[0], p[1]});
         }
       }},
      {"points_per_wavelength",
       [](RunConfig &c, const json &v, const std::string &k) { c.points_per_wavelength = get_number(v, k); }},
      {"obs_count", [](RunConfig &c, const json &v, const std::string &k) { c.obs_count = get_int(v, k); }},
      {"inc_count", [](RunConfig &c, const json &v, const std::string &k) { c.inc_count = get_int(v, k); }},
      {"solver_tol", [](RunConfig &c, const json &v, const std::string &k) { c.solver_tol = get_number(v, k); }},
      {"window",
       [](RunConfig &c, const json &v, const std::string &k) {
         if (is_auto(v)) {
           c.window.reset();
         } else {
           const auto w = get_numbers(v, k, 2);
           c.window = std::make_pair(w[0], w[1]);
         }
       }},
      {"step", [](RunConfig &c, const json &v, const std::string &k) { c.step = get_number(v, k); }},
      {"order",
       [](RunConfig &c, const json &v, const std::string &k) { c.order = is_auto(v) ? -1 : get_int(v, k); }},
      {"order_extra", [](RunConfig &c, const json &v, const std::string &k) { c.order_extra = get_int(v, k); }},
      {"indicator",
       [](RunConfig &c, const json &v, const std::string &k) {
         const auto s = get_as<std::string>(v, k);
         if (s == "herglotz") {
           c.indicator = IndicatorNorm::kHerglotz;
         } else if (s == "kernel") {
           c.indicator = IndicatorNorm::kKernel;
         } else {
           throw ConfigError("indicator must be 'herglotz' or 'kernel'");
         }
       }},
      {"cost",
       [](RunConfig &c, const json &v, const std::string &k) {
         const auto s = get_as<std::string>(v, k);
         if (s == "l2") {
           c.cost = IndicatorCost::kL2;
         } else if (s == "l1") {
           c.cost = IndicatorCost::kL1;
         } else {
           throw ConfigError("cost must be 'l2' or 'l1'");
         }
       }},
      {"dip_threshold", [](RunConfig &c, const json &v, const std::string &k) { c.dip_threshold = get_number(v, k); }},
      {"refine_tol", [](RunConfig &c, const json &v, const std::string &k) { c.refine_tol = get_number(v, k); }},
      {"prior_center",
       [](RunConfig &c, const json &v, const std::string &k) {
         if (is_auto(v)) {
           c.prior_center.reset();
         } else {
           const auto p = get_numbers(v, k, 2);
           c.prior_center = Point{p[0], p[1]};
         }
       }},
      {"prior_radius",
       [](RunConfig &c, const json &v, const std::string &k) {
         if (is_auto(v)) {
           c.prior_radius.reset();
         } else {
           c.prior_radius = get_number(v, k);
         }
       }},
      {"search_box",
       [](RunConfig &c, const json &v, const std::string &k) {
         if (is_auto(v)) {
           c.search_box.reset();
         } else {
           const auto b = get_numbers(v, k, 4);
           c.search_box = BoundingBox{b[0], b[1], b[2], b[3]};
         }
       }},
      {"search_box_factor",
       [](RunConfig &c, const json &v, const std::string &k) { c.search_box_factor = get_number(v, k); }},
      {"search_nodes", [](RunConfig &c, const json &v, const std::string &k) { c.search_nodes = get_int(v, k); }},
      {"cusp_mode",
       [](RunConfig &c, const json &v, const std::string &k) { c.cusp_mode = parse_cusp_mode(get_as<std::string>(v, k)); }},
      {"tau_vanishing", [](RunConfig &c, const json &v, const std::string &k) { c.tau_vanishing = get_number(v, k); }},
      {"tau_localizing",
       [](RunConfig &c, const json &v, const std::string &k) { c.tau_localizing = get_number(v, k); }},
      {"cluster_radius",
       [](RunConfig &c, const json &v, const std::string &k) { c.cluster_radius = get_number(v, k); }},
      {"line_radius", [](RunConfig &c, const json &v, const std::string &k) { c.line_radius = get_number(v, k); }},
      {"noise", [](RunConfig &c, const json &v, const std::string &k) { c.noise = get_number(v, k); }},
      {"seed",
       [](RunConfig &c, const json &v, const std::string &k) {
         if (!v.is_number_unsigned()) throw ConfigError("config key '" + k + "' must be a non-negative integer");
         c.seed = v.get<std::uint64_t>();
       }},
      {"output_dir", [](RunConfig &c, const json &v, const std::string &k) { c.output_dir = get_as<std::string>(v, k); }},
  };
  return table;
}

}  // namespace

const char *cusp_mode_name(CuspMode mode) {
  switch (mode) {
    case CuspMode::kAuto: return "auto";
    case CuspMode::kVanishing: return "vanishing";
    case CuspMode::kLocalizing: return "localizing";
  }
  return "auto";
}

CuspMode parse_cusp_mode(const std::string &s) {
  if (s == "auto") return CuspMode::kAuto;
  if (s == "vanishing") return CuspMode::kVanishing;
  if (s == "localizing") return CuspMode::kLocalizing;
  throw ConfigError("cusp_mode must be auto, vanishing or localizing");
}

void RunConfig::validate() const {
  auto require = [](bool ok, const char *what) {
    if (!ok) throw ConfigError(what);
  };
  require(std::isfinite(n) && n > 0.0, "n must be positive");
  require(n != 1.0, "n = 1 gives no scatterer");
  if (medium == "polygon") {
    require(vertices.size() >= 3, "medium 'polygon' needs at least three vertices");
  } else {
    const auto names = builtin_medium_names();
    require(std::find(names.begin(), names.end(), medium) != names.end(), "unknown medium name");
    require(vertices.empty(), "vertices are only used with medium 'polygon'");
  }
  require(points_per_wavelength >= 10.0, "points_per_wavelength must be at least 10");
  require(obs_count >= 2 && inc_count >= 2, "angle counts must be at least 2");
  require(solver_tol > 0.0 && solver_tol < 1.0, "solver_tol must lie in (0, 1)");
  if (window) {
    require(window->first > 0.0, "window must start at a positive wavenumber");
    require(window->second >= window->first, "empty k grid");
  }
  require(step > 0.0, "step must be positive");
  require(order >= -1, "order must be a non-negative integer or auto");
  require(order_extra >= 0, "order_extra must be non-negative");
  require(dip_threshold > 0.0 && dip_threshold <= 1.0, "dip_threshold must lie in (0, 1]");
  require(refine_tol >= 0.0, "refine_tol must be non-negative");
  if (prior_radius) require(*prior_radius > 0.0, "prior_radius must be positive");
  if (search_box) {
    require(search_box->xmax > search_box->xmin && search_box->ymax > search_box->ymin,
            "search_box must be [xmin, xmax, ymin, ymax] with positive extent");
  }
  require(search_box_factor > 0.0, "search_box_factor must be positive");
  require(search_nodes >= 10, "search_nodes must be at least 10");
  require(tau_vanishing > 0.0 && tau_vanishing < 1.0, "tau_vanishing must lie in (0, 1)");
  require(tau_localizing > 0.0 && tau_localizing <= 1.0, "tau_localizing must lie in (0, 1]");
  require(cluster_radius >= 0.0 && line_radius >= 0.0, "cluster and line radii must be non-negative");
  require(noise >= 0.0, "noise must be non-negative");
  require(!output_dir.empty(), "output_dir must not be empty");
}

void apply_config_json(RunConfig &base, const json &j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  const auto &table = setters();
  for (const auto &[key, value] : j.items()) {
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(base, value, key);
  }
}

RunConfig config_from_json(const json &j) {
  RunConfig c;
  apply_config_json(c, j);
  c.validate();
  return c;
}

json config_to_json(const RunConfig &c) {
  json j;
  j["medium"] = c.medium;
  j["n"] = c.n;
  json verts = json::array();
  for (const auto &p : c.vertices) verts.push_back({p.x, p.y});
  j["vertices"] = verts;
  j["points_per_wavelength"] = c.points_per_wavelength;
  j["obs_count"] = c.obs_count;
  j["inc_count"] = c.inc_count;
  j["solver_tol"] = c.solver_tol;
  j["window"] = c.window ? json{c.window->first, c.window->second} : json("auto");
  j["step"] = c.step;
  j["order"] = c.order >= 0 ? json(c.order) : json("auto");
  j["order_extra"] = c.order_extra;
  j["indicator"] = c.indicator == IndicatorNorm::kHerglotz ? "herglotz" : "kernel";
  j["cost"] = c.cost == IndicatorCost::kL2 ? "l2" : "l1";
  j["dip_threshold"] = c.dip_threshold;
  j["refine_tol"] = c.refine_tol;
  j["prior_center"] = c.prior_center ? json{c.prior_center->x, c.prior_center->y} : json("auto");
  j["prior_radius"] = c.prior_radius ? json(*c.prior_radius) : json("auto");
  j["search_box"] = c.search_box ? json{c.search_box->xmin, c.search_box->xmax, c.search_box->ymin,
                                        c.search_box->ymax}
                                 : json("auto");
  j["search_box_factor"] = c.search_box_factor;
  j["search_nodes"] = c.search_nodes;
  j["cusp_mode"] = cusp_mode_name(c.cusp_mode);
  j["tau_vanishing"] = c.tau_vanishing;
  j["tau_localizing"] = c.tau_localizing;
  j["cluster_radius"] = c.cluster_radius;
  j["line_radius"] = c.line_radius;
  j["noise"] = c.noise;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  return j;
}

RunConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception &e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + std::string(e.what()));
  }
  return config_from_json(j);
}

}  // namespace cusp
