#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pmlda {

using Vec = std::vector<double>;

/// Lower bound applied to simplex components before any log is taken.
inline constexpr double kSimplexEps = 1e-10;

struct Hyperparams {
  Vec alpha;                 // Dirichlet concentration on topic proportions, length K
  double lambda = 1.0;       // exponential rate on the per-document scaling factor
  std::size_t K = 2;
  double f = 1.0;            // covariance scale of the topic-mean proposal
  std::size_t T = 1;         // sweeps
  std::uint64_t seed = 0;

  void validate() const;
};

/// Gaussian with diagonal covariance.
struct DiagGaussian {
  Vec mean;
  Vec cov_diag;

  std::size_t dim() const { return mean.size(); }
};

/// Topic Gaussians with distinct means and one shared isotropic variance.
struct TopicParams {
  std::vector<Vec> means;
  double sigma2 = 1.0;

  std::size_t K() const { return means.size(); }
  std::size_t dim() const { return means.empty() ? 0 : means.front().size(); }
  DiagGaussian topic(std::size_t k) const;
  std::vector<DiagGaussian> as_gaussians() const;
  void validate() const;
};

struct PixelCoord {
  int row = 0;
  int col = 0;

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

struct Document {
  std::vector<Vec> words;
  std::vector<PixelCoord> geometry;  // empty, or one coordinate per word

  std::size_t size() const { return words.size(); }
  std::size_t dim() const { return words.empty() ? 0 : words.front().size(); }
  void validate() const;
};

using Corpus = std::vector<Document>;

void validate_corpus(const Corpus& corpus);

struct DocState {
  Vec pi;
  double s = 1.0;
  std::vector<Vec> z;  // N x K, rows on the simplex

  void validate(std::size_t K, std::size_t N) const;
};

struct ModelState {
  std::vector<DocState> docs;
  TopicParams topics;
  double log_joint = 0.0;
};

/// Mean and per-dimension variance of all words in a corpus.
struct DataStats {
  Vec mean;
  Vec cov_diag;
};

DataStats compute_data_stats(const Corpus& corpus);

/// Clamps each component to [eps, 1 - eps] and renormalizes.
Vec clamp_simplex(std::span<const double> x, double eps = kSimplexEps);

bool on_simplex(std::span<const double> x, double tol);

}  // namespace pmlda
