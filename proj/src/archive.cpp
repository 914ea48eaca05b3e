#include "cuspscan/archive.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "cuspscan/errors.hpp"

namespace cusp {

using nlohmann::json;

FarFieldArchive::FarFieldArchive(int m, int n_inc) : m_(m), n_inc_(n_inc) {
  if (m <= 0 || n_inc <= 0) throw ConfigError("archive angle counts must be positive");
}

std::vector<double> FarFieldArchive::k_list() const {
  std::vector<double> ks;
  ks.reserve(matrices_.size());
  for (const auto &a : matrices_) ks.push_back(a.k);
  return ks;
}

long FarFieldArchive::find(double k, double tol) const {
  for (std::size_t i = 0; i < matrices_.size(); ++i) {
    if (std::abs(matrices_[i].k - k) <= tol) return static_cast<long>(i);
  }
  return -1;
}

void FarFieldArchive::insert(FarFieldMatrix a) {
  if (a.m() != m_ || a.n_inc() != n_inc_) {
    throw ContractViolation("matrix shape does not match the archive");
  }
  auto it = std::lower_bound(matrices_.begin(), matrices_.end(), a.k,
                             [](const FarFieldMatrix &x, double k) { return x.k < k; });
  if (it != matrices_.end() && it->k == a.k) {
    *it = std::move(a);
  } else {
    matrices_.insert(it, std::move(a));
  }
}

json FarFieldArchive::to_json() const {
  json mats = json::array();
  for (const auto &a : matrices_) {
    std::vector<double> flat;
    flat.reserve(2 * static_cast<std::size_t>(m_) * n_inc_);
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_inc_; ++j) {
        flat.push_back(a.values(i, j).real());
        flat.push_back(a.values(i, j).imag());
      }
    }
    mats.push_back(std::move(flat));
  }
  return json{{"format_version", 1},
              {"k_list", k_list()},
              {"obs_angles_count", m_},
              {"inc_angles_count", n_inc_},
              {"matrices", std::move(mats)}};
}

FarFieldArchive FarFieldArchive::from_json(const json &j) {
  try {
    if (j.at("format_version").get<int>() != 1) throw IoError("unsupported archive format_version");
    FarFieldArchive out(j.at("obs_angles_count").get<int>(), j.at("inc_angles_count").get<int>());
    const auto ks = j.at("k_list").get<std::vector<double>>();
    const auto &mats = j.at("matrices");
    if (!mats.is_array() || mats.size() != ks.size()) {
      throw IoError("archive k_list and matrices differ in length");
    }
    const std::size_t len = 2 * static_cast<std::size_t>(out.m_) * out.n_inc_;
    for (std::size_t s = 0; s < ks.size(); ++s) {
      if (s > 0 && !(ks[s] > ks[s - 1])) throw IoError("archive k_list is not strictly increasing");
      const auto flat = mats[s].get<std::vector<double>>();
      if (flat.size() != len) {
        throw IoError("archive matrix " + std::to_string(s) + " has length " +
                      std::to_string(flat.size()) + ", expected " + std::to_string(len));
      }
      FarFieldMatrix a;
      a.k = ks[s];
      a.values.resize(out.m_, out.n_inc_);
      for (int i = 0; i < out.m_; ++i) {
        for (int c = 0; c < out.n_inc_; ++c) {
          const std::size_t at = 2 * (static_cast<std::size_t>(i) * out.n_inc_ + c);
          a.values(i, c) = {flat[at], flat[at + 1]};
        }
      }
      out.matrices_.push_back(std::move(a));
    }
    return out;
  } catch (const json::exception &e) {
    throw IoError(std::string("malformed archive: ") + e.what());
  } catch (const ConfigError &e) {
    throw IoError(std::string("malformed archive: ") + e.what());
  }
}

FarFieldArchive read_archive(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open archive '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception &e) {
    throw IoError("archive '" + path + "' is not valid JSON: " + e.what());
  }
  return FarFieldArchive::from_json(j);
}

void write_text_atomic(const std::string &path, const std::string &text) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(target.parent_path(), ec);
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp + "'");
    out << text;
    out.flush();
    if (!out) throw IoError("write to '" + tmp + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename temporary file onto '" + path + "'");
  }
}

void write_archive(const FarFieldArchive &archive, const std::string &path) {
  write_text_atomic(path, archive.to_json().dump());
}

}  // namespace cusp
