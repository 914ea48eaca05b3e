// Command-line front end: synthesize, scan, reconstruct, oracle, pipeline.
//
// Every failure prints one line "error <CODE>: message" on stderr and exits
// with the status of its error category. A scan that finds no eigenvalue
// exits with kNoDetection after writing its outputs.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cuspscan/archive.hpp"
#include "cuspscan/config.hpp"
#include "cuspscan/errors.hpp"
#include "cuspscan/oracle.hpp"
#include "cuspscan/pipeline.hpp"

namespace {

using nlohmann::json;
using namespace cusp;

constexpr int kNoDetection = 8;

// Config flags shared by the run subcommands; values only land in the
// overlay when given on the command line.
struct ConfigFlags {
  std::string config_path;
  std::map<std::string, double> numbers;
  std::map<std::string, int> ints;
  std::map<std::string, std::string> strings;
  std::map<std::string, std::vector<double>> vectors;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App *app) {
    app->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    for (const char *key : {"n", "points_per_wavelength", "solver_tol", "step", "dip_threshold",
                            "refine_tol", "search_box_factor", "tau_vanishing", "tau_localizing",
                            "cluster_radius", "line_radius", "noise", "prior_radius"}) {
      app->add_option_function<double>(flag(key), [this, key](double v) { numbers[key] = v; });
    }
    for (const char *key : {"obs_count", "inc_count", "order", "order_extra", "search_nodes"}) {
      app->add_option_function<int>(flag(key), [this, key](int v) { ints[key] = v; });
    }
    for (const char *key : {"medium", "indicator", "cost", "cusp_mode", "output_dir"}) {
      app->add_option_function<std::string>(flag(key), [this, key](const std::string &v) { strings[key] = v; });
    }
    const std::pair<const char *, int> vec_keys[] = {{"window", 2}, {"prior_center", 2}, {"search_box", 4}};
    for (const auto &[key, count] : vec_keys) {
      app->add_option_function<std::vector<double>>(
             flag(key), [this, key = std::string(key)](const std::vector<double> &v) { vectors[key] = v; })
          ->expected(count);
    }
    app->add_option_function<std::uint64_t>("--seed", [this](std::uint64_t v) { seed = v; });
  }

  RunConfig resolve() const {
    RunConfig config;
    if (!config_path.empty()) config = load_config(config_path);
    json overlay = json::object();
    for (const auto &[k, v] : numbers) overlay[k] = v;
    for (const auto &[k, v] : ints) overlay[k] = v;
    for (const auto &[k, v] : strings) overlay[k] = v;
    for (const auto &[k, v] : vectors) overlay[k] = v;
    if (seed) overlay["seed"] = *seed;
    apply_config_json(config, overlay);
    config.validate();
    return config;
  }

  static std::string flag(std::string key) {
    for (auto &c : key) {
      if (c == '_') c = '-';
    }
    return "--" + key;
  }
};

std::string out_path(const RunConfig &config, const std::string &name) {
  return (std::filesystem::path(config.output_dir) / name).string();
}

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json read_json(const std::string &path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception &e) {
    throw IoError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void run_synthesize(const RunConfig &config, const std::string &archive) {
  const auto s = synthesize_archive(config, archive, [](double k) {
    std::fprintf(stderr, "synthesize k = %.6g\n", k);
  });
  std::fprintf(stderr, "archive %s: %d computed, %d already present, %zu total\n", archive.c_str(),
               s.computed, s.skipped, s.total);
}

// Returns the number of detections.
std::size_t run_scan(const RunConfig &config, const std::string &archive,
                     const std::string &detections) {
  const auto result = scan_archive(config, read_archive(archive));
  write_text_atomic(out_path(config, "indicator.csv"), indicator_csv(result.curve));
  write_text_atomic(detections, dump_json(detections_to_json(result, config)));
  for (const auto &d : result.detections) {
    std::printf("k* = %.6f  sigma = %.3e  depth = %.3f\n", d.k_star, d.sigma, d.dip_depth);
  }
  if (result.detections.empty()) std::fprintf(stderr, "no detection: %s\n", result.diagnostic.c_str());
  return result.detections.size();
}

void run_reconstruct(const RunConfig &config, const std::string &detections, int index) {
  const auto dets = detections_from_json(read_json(detections));
  if (dets.empty()) throw ReconstructionError("detections file holds no eigenvalue");
  if (index < 0 || index >= static_cast<int>(dets.size())) {
    throw ConfigError("detection index " + std::to_string(index) + " out of range");
  }
  const auto r = reconstruct_detection(config, dets[index]);
  write_text_atomic(out_path(config, "field.csv"), field_csv(r.field));
  write_text_atomic(out_path(config, "report.json"), dump_json(report_to_json(r)));
  for (const auto &c : r.report.vanishing) {
    std::printf("vanishing  (%.4f, %.4f)  %zu points\n", c.representative.x, c.representative.y,
                c.members.size());
  }
  for (const auto &c : r.report.localizing) {
    std::printf("localizing (%.4f, %.4f)  %zu points\n", c.representative.x, c.representative.y,
                c.members.size());
  }
  if (!r.report.diagnostic.empty()) std::fprintf(stderr, "%s\n", r.report.diagnostic.c_str());
}

int fail(const std::string &code, const std::string &message, int status) {
  std::string line = message;
  for (auto &c : line) {
    if (c == '\n') c = ' ';
  }
  std::fprintf(stderr, "error %s: %s\n", code.c_str(), line.c_str());
  return status;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Transmission eigenvalue scan and corner recovery from far-field data"};
  app.require_subcommand(1);

  ConfigFlags flags;
  std::string archive_path, detections_path;
  int detection_index = 0;

  auto *syn = app.add_subcommand("synthesize", "Solve forward problems over the k window");
  flags.attach(syn);
  syn->add_option("--archive", archive_path, "Archive file (default <output_dir>/archive.json)");

  auto *scn = app.add_subcommand("scan", "Indicator curve and eigenvalue detections");
  flags.attach(scn);
  scn->add_option("--archive", archive_path, "Archive file (default <output_dir>/archive.json)");
  scn->add_option("--detections", detections_path, "Output (default <output_dir>/detections.json)");

  auto *rec = app.add_subcommand("reconstruct", "Herglotz field and corner points of a detection");
  flags.attach(rec);
  rec->add_option("--detections", detections_path, "Detections file (default <output_dir>/detections.json)");
  rec->add_option("--index", detection_index, "Which detection to use")->capture_default_str();

  auto *pipe = app.add_subcommand("pipeline", "synthesize, scan and reconstruct the first detection");
  flags.attach(pipe);

  auto *orc = app.add_subcommand("oracle", "Reference values");
  orc->require_subcommand(1);
  double o_n = 0.0, o_radius = 1.0, o_step = 1e-3, o_factor = 4.0;
  std::vector<double> o_window;
  std::string o_medium;
  auto *eigs = orc->add_subcommand("disk-eigs", "Transmission eigenvalues of a disk");
  eigs->add_option("--n", o_n, "Refractive index")->required();
  eigs->add_option("--radius", o_radius, "Disk radius")->capture_default_str();
  eigs->add_option("--window", o_window, "k_lo k_hi")->expected(2)->required();
  eigs->add_option("--step", o_step, "Sign-change scan step")->capture_default_str();
  auto *bounds = orc->add_subcommand("bounds", "Search window from the enclosing radius");
  bounds->add_option("--medium", o_medium, "Builtin medium name")->required();
  bounds->add_option("--n", o_n, "Refractive index")->required();
  bounds->add_option("--factor", o_factor, "k_hi / k_lo")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    return fail(error_code_name(ErrorCode::kConfig), e.what(), error_exit_status(ErrorCode::kConfig));
  }

  try {
    if (eigs->parsed()) {
      const auto list = oracle::disk_transmission_eigs(o_n, o_radius, o_window[0], o_window[1], o_step);
      json out = json::array();
      for (const auto &e : list) out.push_back({{"k", e.k}, {"multiplicity", e.multiplicity}, {"modes", e.modes}});
      std::cout << dump_json(out);
      return 0;
    }
    if (bounds->parsed()) {
      const auto w = oracle::bound_window(builtin_medium(o_medium, o_n), o_factor);
      std::cout << dump_json({{"medium", o_medium}, {"n", o_n}, {"k_lo", w.k_lo}, {"k_hi", w.k_hi}});
      return 0;
    }

    const RunConfig config = flags.resolve();
    const std::string archive = archive_path.empty() ? out_path(config, "archive.json") : archive_path;
    const std::string detections =
        detections_path.empty() ? out_path(config, "detections.json") : detections_path;

    if (syn->parsed()) {
      run_synthesize(config, archive);
      return 0;
    }
    if (scn->parsed()) return run_scan(config, archive, detections) ? 0 : kNoDetection;
    if (rec->parsed()) {
      run_reconstruct(config, detections, detection_index);
      return 0;
    }
    if (pipe->parsed()) {
      write_text_atomic(out_path(config, "config.json"), dump_json(config_to_json(config)));
      run_synthesize(config, archive);
      if (run_scan(config, archive, detections) == 0) return kNoDetection;
      run_reconstruct(config, detections, 0);
      return 0;
    }
  } catch (const Error &e) {
    return fail(error_code_name(e.code()), e.what(), error_exit_status(e.code()));
  } catch (const std::exception &e) {
    return fail("INTERNAL_ERROR", e.what(), 1);
  }
  return 0;
}
