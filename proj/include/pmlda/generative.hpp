#pragma once

// Forward simulation of the PM-LDA generative process:
//   pi ~ Dir(alpha), s ~ Exp(lambda), z_n ~ Dir(s pi), x_n ~ blend(z_n, topics).

#include <optional>
#include <vector>

#include "pmlda/rng.hpp"
#include "pmlda/types.hpp"

namespace pmlda {

struct GenSpec {
  Vec alpha;
  double lambda = 1.0;
  std::optional<Vec> fixed_pi;
  std::optional<double> fixed_s;
  std::optional<Vec> fixed_z;  // forces every membership, bypassing Dir(s pi)
  std::vector<DiagGaussian> topics;
  std::size_t D = 1;
  std::size_t N = 1;
  std::uint64_t seed = 0;

  std::size_t K() const { return topics.size(); }
  void validate() const;
};

struct GeneratedDocument {
  Document doc;
  DocState truth;
};

struct GeneratedCorpus {
  Corpus corpus;
  std::vector<DocState> truth;
  std::vector<DiagGaussian> topics;

  /// Truth as a sampler state; requires one shared isotropic covariance.
  ModelState as_model_state() const;
};

/// Draws z ~ Dir(s pi). Concentrations below 1e-8 are raised to 1e-8 (warned once).
Vec sample_membership(std::span<const double> pi, double s, Rng& rng);

GeneratedDocument sample_document(const GenSpec& spec, Rng& rng);

/// Document d is drawn from stream (seed, generate, d).
GeneratedCorpus sample_corpus(const GenSpec& spec);

}  // namespace pmlda
