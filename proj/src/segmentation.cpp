#include "pmlda/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pmlda/errors.hpp"

namespace pmlda {

MembershipMap assemble_maps(const WordMemberships& memberships, const DocLayout& layout, int height, int width) {
  require(height > 0 && width > 0, "assemble_maps: empty image size");
  require(layout.height == height && layout.width == width, "assemble_maps: layout size differs from image size");
  require(memberships.size() == layout.docs.size(), "assemble_maps: document count differs from layout");
  std::size_t K = 0;
  for (const auto& doc : memberships)
    if (!doc.empty()) {
      K = doc.front().size();
      break;
    }
  require(K >= 1, "assemble_maps: no memberships");

  MembershipMap map;
  map.height = height;
  map.width = width;
  map.K = K;
  map.values.assign(K * map.pixels(), 0.0);
  map.covered.assign(map.pixels(), 0);
  std::vector<std::size_t> counts(map.pixels(), 0);
  for (std::size_t d = 0; d < memberships.size(); ++d) {
    require(memberships[d].size() == layout.docs[d].size(), "assemble_maps: word count differs from layout");
    for (std::size_t n = 0; n < memberships[d].size(); ++n) {
      const PixelCoord pc = layout.docs[d][n];
      require(pc.row >= 0 && pc.row < height && pc.col >= 0 && pc.col < width, "assemble_maps: coordinate out of bounds");
      require(memberships[d][n].size() == K, "assemble_maps: inconsistent K");
      const std::size_t p = static_cast<std::size_t>(pc.row) * width + pc.col;
      for (std::size_t k = 0; k < K; ++k) map.values[k * map.pixels() + p] += memberships[d][n][k];
      ++counts[p];
    }
  }
  for (std::size_t p = 0; p < map.pixels(); ++p) {
    if (counts[p] == 0) continue;
    map.covered[p] = 1;
    for (std::size_t k = 0; k < K; ++k) map.values[k * map.pixels() + p] /= static_cast<double>(counts[p]);
  }
  return map;
}

std::vector<int> crisp_map(const MembershipMap& map) {
  std::vector<int> out(map.pixels(), -1);
  for (std::size_t p = 0; p < map.pixels(); ++p) {
    if (!map.covered[p]) continue;
    std::size_t best = 0;
    for (std::size_t k = 1; k < map.K; ++k)
      if (map.at(k, p) > map.at(best, p)) best = k;
    out[p] = static_cast<int>(best);
  }
  return out;
}

std::vector<std::uint8_t> transition_map(const MembershipMap& map, double lo, double hi) {
  require(lo <= hi, "transition_map: lo must not exceed hi");
  std::vector<std::uint8_t> out(map.pixels(), 0);
  for (std::size_t p = 0; p < map.pixels(); ++p) {
    if (!map.covered[p]) continue;
    for (std::size_t k = 0; k < map.K; ++k) {
      const double v = map.at(k, p);
      if (v >= lo && v <= hi) {
        out[p] = 1;
        break;
      }
    }
  }
  return out;
}

RocCurve roc_curve(std::span<const double> scores, std::span<const std::uint8_t> truth,
                   std::span<const std::uint8_t> mask) {
  require(scores.size() == truth.size(), "roc_curve: scores and truth differ in size");
  require(mask.empty() || mask.size() == scores.size(), "roc_curve: mask differs in size");
  std::vector<std::size_t> idx;
  idx.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!mask.empty() && !mask[i]) continue;
    require(!std::isnan(scores[i]), "roc_curve: NaN score");
    idx.push_back(i);
  }
  std::size_t positives = 0;
  for (std::size_t i : idx) positives += truth[i] ? 1 : 0;
  const std::size_t negatives = idx.size() - positives;
  require(positives > 0 && negatives > 0, "roc_curve: truth must contain both classes");

  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  RocCurve roc;
  roc.thresholds.push_back(std::numeric_limits<double>::infinity());
  roc.fpr.push_back(0.0);
  roc.tpr.push_back(0.0);
  std::size_t tp = 0;
  std::size_t fp = 0;
  double area = 0.0;  // in units of (positives * negatives), doubled for the trapezoid
  for (std::size_t i = 0; i < idx.size();) {
    const double s = scores[idx[i]];
    std::size_t dtp = 0;
    std::size_t dfp = 0;
    for (; i < idx.size() && scores[idx[i]] == s; ++i) (truth[idx[i]] ? dtp : dfp) += 1;
    area += static_cast<double>(dfp) * static_cast<double>(2 * tp + dtp);
    tp += dtp;
    fp += dfp;
    roc.thresholds.push_back(s);
    roc.fpr.push_back(static_cast<double>(fp) / static_cast<double>(negatives));
    roc.tpr.push_back(static_cast<double>(tp) / static_cast<double>(positives));
  }
  roc.thresholds.push_back(-std::numeric_limits<double>::infinity());
  roc.fpr.push_back(1.0);
  roc.tpr.push_back(1.0);
  roc.auc = area / (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
  return roc;
}

std::size_t pick_topic_for_class(const MembershipMap& map, std::span<const std::uint8_t> truth,
                                 std::optional<std::size_t> override_topic) {
  require(truth.size() == map.pixels(), "pick_topic_for_class: truth mask size differs from map");
  if (override_topic) {
    require(*override_topic < map.K, "pick_topic_for_class: topic index out of range");
    return *override_topic;
  }
  std::size_t best = 0;
  double best_auc = -1.0;
  for (std::size_t k = 0; k < map.K; ++k) {
    const double auc = roc_curve(map.plane(k), truth, map.covered).auc;
    if (auc > best_auc) {
      best_auc = auc;
      best = k;
    }
  }
  return best;
}

}  // namespace pmlda
