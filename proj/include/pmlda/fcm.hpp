#pragma once

// Fuzzy C-means: alternating membership and centre updates minimizing
//   J = sum_i sum_k u_ik^m ||x_i - c_k||^2.

#include <cstdint>
#include <span>
#include <vector>

#include "pmlda/types.hpp"

namespace pmlda {

struct FcmOptions {
  std::size_t clusters = 2;
  double m = 1.5;
  double tol = 1e-6;        // stop when no centre moves farther than this
  std::size_t max_iter = 300;
  std::uint64_t seed = 0;
};

struct FcmResult {
  std::vector<Vec> centers;
  std::vector<Vec> memberships;  // N x C
  Vec objective_series;          // J after each full iteration
  std::size_t iterations = 0;
  bool converged = false;
};

/// Membership of one point. A point coinciding with a centre gets full
/// membership in the lowest-index coincident centre.
Vec fcm_membership(std::span<const double> x, std::span<const Vec> centers, double m);

double fcm_objective(std::span<const Vec> data, std::span<const Vec> memberships,
                     std::span<const Vec> centers, double m);

FcmResult fcm(std::span<const Vec> data, const FcmOptions& options);

/// Flattens a corpus into one list of words in document order.
std::vector<Vec> flatten_words(const Corpus& corpus);

}  // namespace pmlda
