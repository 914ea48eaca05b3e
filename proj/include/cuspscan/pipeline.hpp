#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cuspscan/archive.hpp"
#include "cuspscan/config.hpp"
#include "cuspscan/forward.hpp"
#include "cuspscan/reconstruct.hpp"
#include "cuspscan/spectral.hpp"

namespace cusp {

MediumSpec build_medium(const RunConfig &config);

/// lo, lo + step, ..., up to hi (hi included when it lies on the lattice).
/// Throws ConfigError("empty k grid") when there is nothing to scan.
std::vector<double> k_grid(double lo, double hi, double step);

std::pair<double, double> resolve_window(const RunConfig &config, const MediumSpec &medium);

struct Prior {
  Point center;
  double radius = 1.0;
};
Prior resolve_prior(const RunConfig &config, const MediumSpec &medium);

/// One discretisation for the whole window, sized for its upper end.
Grid synthesis_grid(const RunConfig &config, const MediumSpec &medium);

FarFieldMatrix synthesize_one(const RunConfig &config, const MediumSpec &medium, const Grid &grid,
                              double k);

struct SynthesisSummary {
  int computed = 0;
  int skipped = 0;
  std::size_t total = 0;
};

/// Fills `archive_path` with every k of the window that it does not hold yet,
/// rewriting the file after each solve so an interrupted run can resume.
/// Errors carry the offending k in their message.
SynthesisSummary synthesize_archive(const RunConfig &config, const std::string &archive_path,
                                    const std::function<void(double)> &on_k = {});

/// Adds the configured measurement noise with a generator seeded from
/// (seed, k), so the perturbation of a matrix does not depend on scan order.
void apply_noise(const RunConfig &config, FarFieldMatrix &a);

ScanOptions scan_options(const RunConfig &config, const Prior &prior);

/// Indicator scan over the archive; refinement solves new forward problems
/// on the synthesis grid when refine_tol > 0.
ScanResult scan_archive(const RunConfig &config, const FarFieldArchive &archive);

std::string indicator_csv(const IndicatorCurve &curve);
nlohmann::json kernel_to_json(const TruncatedKernel &kernel);
TruncatedKernel kernel_from_json(const nlohmann::json &j);
nlohmann::json detections_to_json(const ScanResult &result, const RunConfig &config);
std::vector<EigenDetection> detections_from_json(const nlohmann::json &j);

struct Reconstruction {
  HerglotzField field;
  CuspReport report;
};

BoundingBox resolve_search_box(const RunConfig &config, const Prior &prior);
CuspParams cusp_params(const RunConfig &config);
Reconstruction reconstruct_detection(const RunConfig &config, const EigenDetection &detection);

std::string field_csv(const HerglotzField &field);
nlohmann::json report_to_json(const Reconstruction &r);

/// JSON text with a fixed layout; numbers use the shortest round-trip form.
std::string dump_json(const nlohmann::json &j);

}  // namespace cusp
