#pragma once

// Membership maps, crisp and transition derivatives, and pixel-level ROC.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pmlda/features.hpp"
#include "pmlda/types.hpp"

namespace pmlda {

struct MembershipMap {
  int height = 0;
  int width = 0;
  std::size_t K = 0;
  std::vector<double> values;         // K planes of height * width
  std::vector<std::uint8_t> covered;  // 1 where at least one word contributed

  std::size_t pixels() const { return static_cast<std::size_t>(height) * width; }
  double at(std::size_t k, std::size_t p) const { return values[k * pixels() + p]; }
  std::span<const double> plane(std::size_t k) const { return {values.data() + k * pixels(), pixels()}; }
};

/// Per-document, per-word membership vectors (same nesting as a corpus).
using WordMemberships = std::vector<std::vector<Vec>>;

/// Each pixel is the arithmetic mean of the memberships of all words mapped to it.
MembershipMap assemble_maps(const WordMemberships& memberships, const DocLayout& layout, int height, int width);

/// Argmax topic per pixel, ties to the lowest index; -1 where uncovered.
std::vector<int> crisp_map(const MembershipMap& map);

/// 1 where some topic membership lies in [lo, hi]; 0 elsewhere and where uncovered.
std::vector<std::uint8_t> transition_map(const MembershipMap& map, double lo = 0.4, double hi = 0.6);

struct RocCurve {
  std::vector<double> fpr;
  std::vector<double> tpr;
  std::vector<double> thresholds;  // a pixel is positive when score >= threshold
  double auc = 0.0;
};

/// Threshold sweep over +inf, every distinct score (descending), and -inf.
/// Pixels with mask == 0 are ignored when a mask is given.
RocCurve roc_curve(std::span<const double> scores, std::span<const std::uint8_t> truth,
                   std::span<const std::uint8_t> mask = {});

/// Topic whose membership plane has the largest AUC against truth (ties to the
/// lowest index), evaluated on covered pixels; an override is returned as-is
/// after a range check.
std::size_t pick_topic_for_class(const MembershipMap& map, std::span<const std::uint8_t> truth,
                                 std::optional<std::size_t> override_topic = std::nullopt);

}  // namespace pmlda
