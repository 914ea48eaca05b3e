#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "cuspscan/forward.hpp"

namespace cusp {

/// Far-field matrices of one configuration, keyed by wavenumber.
///
/// On disk this is a JSON object
///   {"format_version": 1, "k_list": [...], "obs_angles_count": m,
///    "inc_angles_count": n_inc, "matrices": [[re, im, re, im, ...], ...]}
/// with each matrix stored row-major (observation index outer). Angles are
/// implicit: uniform on [0, 2 pi) starting at zero.
class FarFieldArchive {
 public:
  FarFieldArchive() = default;
  FarFieldArchive(int m, int n_inc);

  int m() const { return m_; }
  int n_inc() const { return n_inc_; }
  const std::vector<FarFieldMatrix> &matrices() const { return matrices_; }
  std::vector<double> k_list() const;
  bool empty() const { return matrices_.empty(); }

  /// Index of a stored k within `tol`, or -1.
  long find(double k, double tol = 1e-12) const;
  /// Inserts in k order; replaces an entry at the same k.
  void insert(FarFieldMatrix a);

  nlohmann::json to_json() const;
  static FarFieldArchive from_json(const nlohmann::json &j);

 private:
  int m_ = 0;
  int n_inc_ = 0;
  std::vector<FarFieldMatrix> matrices_;
};

/// Throws IoError on unreadable or malformed files.
FarFieldArchive read_archive(const std::string &path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_archive(const FarFieldArchive &archive, const std::string &path);

/// Atomic text write shared by every output file.
void write_text_atomic(const std::string &path, const std::string &text);

}  // namespace cusp
