#include "cuspscan/pipeline.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include "cuspscan/errors.hpp"
#include "cuspscan/oracle.hpp"

namespace cusp {

using nlohmann::json;

namespace {

std::string fmt_k(double k) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", k);
  return buf;
}

json point_json(Point p) { return json{p.x, p.y}; }

json clusters_json(const std::vector<CuspCluster> &clusters) {
  json out = json::array();
  for (const auto &c : clusters) {
    json members = json::array();
    for (const auto &m : c.members) members.push_back(point_json(m));
    out.push_back({{"representative", point_json(c.representative)}, {"members", members}});
  }
  return out;
}

}  // namespace

MediumSpec build_medium(const RunConfig &config) {
  if (config.medium == "polygon") {
    MediumSpec m{"polygon", Geometry(make_polygon(config.vertices)), config.n};
    m.validate();
    return m;
  }
  return builtin_medium(config.medium, config.n);
}

std::vector<double> k_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo) || !(lo > 0.0)) throw ConfigError("empty k grid");
  const long count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> ks;
  ks.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) ks.push_back(lo + static_cast<double>(i) * step);
  return ks;
}

std::pair<double, double> resolve_window(const RunConfig &config, const MediumSpec &medium) {
  if (config.window) return *config.window;
  const auto w = oracle::bound_window(medium);
  return {w.k_lo, w.k_hi};
}

Prior resolve_prior(const RunConfig &config, const MediumSpec &medium) {
  const auto [c, r] = medium.geometry.enclosing_circle();
  Prior p{config.prior_center.value_or(c), config.prior_radius.value_or(r)};
  if (config.prior_center && !config.prior_radius) {
    // Radius about a user-chosen centre: farthest outline vertex.
    double far = 0.0;
    for (const auto &v : medium.geometry.outline()) far = std::max(far, distance(v, p.center));
    p.radius = far;
  }
  return p;
}

Grid synthesis_grid(const RunConfig &config, const MediumSpec &medium) {
  const auto [lo, hi] = resolve_window(config, medium);
  (void)lo;
  return solver_grid(medium, hi, config.points_per_wavelength);
}

FarFieldMatrix synthesize_one(const RunConfig &config, const MediumSpec &medium, const Grid &grid,
                              double k) {
  try {
    return synthesize_matrix(medium, grid, k, config.obs_count, config.inc_count, config.solver_tol);
  } catch (const SolverError &e) {
    throw SolverError("k = " + fmt_k(k) + ": " + e.what(), e.residual_history());
  } catch (const ConfigError &e) {
    throw ConfigError("k = " + fmt_k(k) + ": " + e.what());
  } catch (const Error &e) {
    throw Error(e.code(), "k = " + fmt_k(k) + ": " + e.what());
  }
}

SynthesisSummary synthesize_archive(const RunConfig &config, const std::string &archive_path,
                                    const std::function<void(double)> &on_k) {
  const auto medium = build_medium(config);
  const auto [lo, hi] = resolve_window(config, medium);
  const auto ks = k_grid(lo, hi, config.step);
  FarFieldArchive archive(config.obs_count, config.inc_count);
  if (std::filesystem::exists(archive_path)) {
    archive = read_archive(archive_path);
    if (archive.m() != config.obs_count || archive.n_inc() != config.inc_count) {
      throw ConfigError("existing archive has different angle counts");
    }
  }
  const Grid grid = synthesis_grid(config, medium);
  SynthesisSummary summary;
  summary.total = ks.size();
  const double tol = 1e-9 * config.step;
  for (double k : ks) {
    if (archive.find(k, tol) >= 0) {
      ++summary.skipped;
      continue;
    }
    if (on_k) on_k(k);
    archive.insert(synthesize_one(config, medium, grid, k));
    write_archive(archive, archive_path);
    ++summary.computed;
  }
  if (summary.computed == 0 && !std::filesystem::exists(archive_path)) {
    write_archive(archive, archive_path);
  }
  return summary;
}

void apply_noise(const RunConfig &config, FarFieldMatrix &a) {
  if (config.noise <= 0.0) return;
  const auto bits = std::bit_cast<std::uint64_t>(a.k);
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(bits), static_cast<std::uint32_t>(bits >> 32)};
  std::mt19937_64 rng(seq);
  add_noise(a, config.noise, rng);
}

ScanOptions scan_options(const RunConfig &config, const Prior &prior) {
  ScanOptions opts;
  opts.indicator.norm = config.indicator;
  opts.indicator.cost = config.cost;
  opts.indicator.center = prior.center;
  opts.indicator.radius = prior.radius;
  opts.order_extra = config.order_extra;
  opts.order_override = config.order;
  opts.dip_threshold = config.dip_threshold;
  opts.refine_tol = config.refine_tol;
  return opts;
}

ScanResult scan_archive(const RunConfig &config, const FarFieldArchive &archive) {
  if (archive.empty()) throw ConfigError("archive holds no matrices");
  const auto medium = build_medium(config);
  const Prior prior = resolve_prior(config, medium);
  std::vector<FarFieldMatrix> data = archive.matrices();
  for (auto &a : data) apply_noise(config, a);
  MatrixProvider provider;
  if (config.refine_tol > 0.0) {
    const Grid grid = synthesis_grid(config, medium);
    provider = [&config, medium, grid](double k) {
      auto a = synthesize_one(config, medium, grid, k);
      apply_noise(config, a);
      return a;
    };
  }
  return scan(data, scan_options(config, prior), provider);
}

std::string indicator_csv(const IndicatorCurve &curve) {
  std::ostringstream out;
  out << "k,sigma,order,degenerate\n";
  char buf[128];
  for (const auto &s : curve.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%d\n", s.k, s.sigma, s.order, s.degenerate ? 1 : 0);
    out << buf;
  }
  return out.str();
}

json kernel_to_json(const TruncatedKernel &kernel) {
  json coeffs = json::array();
  for (Eigen::Index i = 0; i < kernel.coeffs.size(); ++i) {
    coeffs.push_back({kernel.coeffs(i).real(), kernel.coeffs(i).imag()});
  }
  return {{"k", kernel.k}, {"order", kernel.order}, {"center", point_json(kernel.center)},
          {"coeffs", coeffs}};
}

TruncatedKernel kernel_from_json(const json &j) {
  try {
    TruncatedKernel kernel;
    kernel.k = j.at("k").get<double>();
    kernel.order = j.at("order").get<int>();
    const auto c = j.at("center").get<std::vector<double>>();
    if (c.size() != 2) throw IoError("kernel center needs two numbers");
    kernel.center = {c[0], c[1]};
    const auto &coeffs = j.at("coeffs");
    if (kernel.order < 0 || coeffs.size() != static_cast<std::size_t>(2 * kernel.order + 1)) {
      throw IoError("kernel has " + std::to_string(coeffs.size()) + " coefficients for order " +
                    std::to_string(kernel.order));
    }
    kernel.coeffs.resize(2 * kernel.order + 1);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      const auto z = coeffs[i].get<std::vector<double>>();
      if (z.size() != 2) throw IoError("kernel coefficients must be [re, im] pairs");
      kernel.coeffs(static_cast<Eigen::Index>(i)) = {z[0], z[1]};
    }
    return kernel;
  } catch (const json::exception &e) {
    throw IoError(std::string("malformed kernel: ") + e.what());
  }
}

json detections_to_json(const ScanResult &result, const RunConfig &config) {
  json dets = json::array();
  for (const auto &d : result.detections) {
    dets.push_back({{"k_star", d.k_star},
                    {"sigma", d.sigma},
                    {"dip_depth", d.dip_depth},
                    {"refined", d.refined},
                    {"kernel", kernel_to_json(d.kernel)}});
  }
  return {{"format_version", 1},
          {"medium", config.medium},
          {"n", config.n},
          {"median_sigma", result.curve.median_sigma()},
          {"detections", dets},
          {"diagnostic", result.diagnostic}};
}

std::vector<EigenDetection> detections_from_json(const json &j) {
  try {
    std::vector<EigenDetection> out;
    for (const auto &d : j.at("detections")) {
      EigenDetection e;
      e.k_star = d.at("k_star").get<double>();
      e.sigma = d.at("sigma").get<double>();
      e.dip_depth = d.at("dip_depth").get<double>();
      e.refined = d.at("refined").get<bool>();
      e.kernel = kernel_from_json(d.at("kernel"));
      out.push_back(std::move(e));
    }
    return out;
  } catch (const json::exception &e) {
    throw IoError(std::string("malformed detections file: ") + e.what());
  }
}

BoundingBox resolve_search_box(const RunConfig &config, const Prior &prior) {
  if (config.search_box) return *config.search_box;
  return prior_search_box(prior.center, prior.radius, config.search_box_factor);
}

CuspParams cusp_params(const RunConfig &config) {
  CuspParams p;
  p.tau_vanishing = config.tau_vanishing;
  p.tau_localizing = config.tau_localizing;
  p.cluster_radius = config.cluster_radius;
  p.line_radius = config.line_radius;
  return p;
}

Reconstruction reconstruct_detection(const RunConfig &config, const EigenDetection &detection) {
  const auto medium = build_medium(config);
  const Prior prior = resolve_prior(config, medium);
  const auto box = resolve_search_box(config, prior);
  const Grid grid = search_grid(box, detection.kernel.k, config.search_nodes);
  Reconstruction r;
  r.field = herglotz_eval(detection.kernel, grid);
  r.report = detect_cusps(r.field, config.cusp_mode, cusp_params(config));
  return r;
}

std::string field_csv(const HerglotzField &field) {
  std::ostringstream out;
  out << "x,y,re,im,abs\n";
  char buf[160];
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const Point p = field.grid.node(i);
    const cd v = field.values[i];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", p.x, p.y, v.real(), v.imag(),
                  std::abs(v));
    out << buf;
  }
  return out.str();
}

json report_to_json(const Reconstruction &r) {
  const auto &rep = r.report;
  json artifacts = json::array();
  for (const auto &p : rep.curve_artifacts) artifacts.push_back(point_json(p));
  json polygon = nullptr;
  if (rep.polygon) {
    polygon = json::array();
    for (const auto &p : *rep.polygon) polygon.push_back(point_json(p));
  }
  const Grid &g = r.field.grid;
  return {{"format_version", 1},
          {"k", r.field.k},
          {"search_box", {g.x0, g.xmax(), g.y0, g.ymax()}},
          {"grid", {g.nx, g.ny}},
          {"vanishing", clusters_json(rep.vanishing)},
          {"localizing", clusters_json(rep.localizing)},
          {"curve_artifacts", artifacts},
          {"polygon", polygon},
          {"thresholds",
           {{"tau_vanishing", rep.params.tau_vanishing},
            {"tau_localizing", rep.params.tau_localizing},
            {"cluster_radius", rep.params.cluster_radius},
            {"line_radius", rep.params.line_radius},
            {"isolation_radius", rep.params.isolation_radius},
            {"nodal_line_count", rep.params.nodal_line_count},
            {"collinearity", rep.params.collinearity}}},
          {"diagnostic", rep.diagnostic}};
}

std::string dump_json(const json &j) { return j.dump(2) + "\n"; }

}  // namespace cusp
