#pragma once

// Text file formats.
//
//   corpus CSV       doc_id,word_index,x0,...,x{dim-1}
//   memberships CSV  doc_id,word_index,z0,...,z{K-1}
//   truth CSV        doc_id,word_index,s,pi0..pi{K-1},z0..z{K-1}
//   layout CSV       doc_id,word_index,row,col
//   trace CSV        sweep,log_joint,acc_pi,acc_s,acc_z,acc_mu,acc_sigma
//   state file       "key = value" lines (see write_state_file)
//   config file      "key = value" lines, '#' starts a comment
//
// Reals are written with 17 significant digits so files round-trip exactly.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pmlda/features.hpp"
#include "pmlda/sampler.hpp"
#include "pmlda/segmentation.hpp"
#include "pmlda/types.hpp"

namespace pmlda {

std::string format_real(double v);
Vec parse_real_list(const std::string& text);  // comma- or space-separated

/// Flat key-value configuration.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text);
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  std::optional<std::string> get(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_real(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  Vec get_reals(const std::string& key, const Vec& fallback) const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

void write_corpus_csv(const std::filesystem::path& path, const Corpus& corpus);
Corpus read_corpus_csv(const std::filesystem::path& path);

void write_memberships_csv(const std::filesystem::path& path, const WordMemberships& memberships);
WordMemberships read_memberships_csv(const std::filesystem::path& path);
WordMemberships memberships_of(const ModelState& state);

void write_truth_csv(const std::filesystem::path& path, const std::vector<DocState>& truth);

void write_layout_csv(const std::filesystem::path& path, const DocLayout& layout);
/// Image size is taken from the "# size height width" header line when present,
/// otherwise from the largest coordinates.
DocLayout read_layout_csv(const std::filesystem::path& path);

void write_trace_csv(const std::filesystem::path& path, const Trace& trace);

/// Keys: K, dim, sigma2, log_joint, mean.<k>, doc.<d>.pi, doc.<d>.s, plus any extras.
void write_state_file(const std::filesystem::path& path, const ModelState& state,
                      const std::map<std::string, std::string>& extras = {});
/// Reads topics and per-document pi/s; memberships are not part of the file.
ModelState read_state_file(const std::filesystem::path& path);

/// Row-major matrix of reals, one image row per line.
void write_matrix_csv(const std::filesystem::path& path, std::span<const double> values, int height, int width);
std::vector<double> read_matrix_csv(const std::filesystem::path& path, int& height, int& width);

/// Binary mask from a PGM (nonzero is true) or CSV of numbers (nonzero is true).
std::vector<std::uint8_t> read_mask(const std::filesystem::path& path, int& height, int& width);

void write_roc_csv(const std::filesystem::path& path, const RocCurve& roc);

}  // namespace pmlda
