#pragma once

// Metropolis-within-Gibbs MAP inference for PM-LDA.
//
// One sweep visits, in order: for each document pi, s, then every z_n; then
// each topic mean; then the shared variance. Document blocks only read topic
// parameters, which change after all documents are done, so they run
// concurrently. Each (sweep, document) pair owns its own random stream.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pmlda/rng.hpp"
#include "pmlda/types.hpp"

namespace pmlda {

enum class Block : std::size_t { pi = 0, s = 1, z = 2, mu = 3, sigma = 4 };
inline constexpr std::size_t kBlockCount = 5;

struct SamplerConfig {
  Hyperparams hp;
  std::size_t thin = 0;        // keep every thin-th state; 0 keeps only the MAP state
  double sigma_floor = 1e-6;   // lower end of the variance proposal
  std::optional<Vec> fixed_pi;      // pins every pi^d and skips its block
  std::optional<double> fixed_s;    // pins every s^d and skips its block
  bool freeze_proposals = false;    // test hook: every proposal is the current value
  int threads = 0;                  // 0 uses the OpenMP default

  void validate() const;
};

struct StepOptions {
  bool freeze = false;
  double sigma_floor = 1e-6;
};

struct StepResult {
  bool accepted = false;
  double log_accept = 0.0;  // ln min{1, ratio}
};

struct AcceptanceCounts {
  std::array<std::size_t, kBlockCount> proposed{};
  std::array<std::size_t, kBlockCount> accepted{};

  void record(Block b, bool ok) {
    ++proposed[static_cast<std::size_t>(b)];
    if (ok) ++accepted[static_cast<std::size_t>(b)];
  }
  void merge(const AcceptanceCounts& other);
  double rate(Block b) const;
};

struct Trace {
  ModelState best_state;
  double best_log_joint = 0.0;
  std::size_t best_sweep = 0;
  Vec log_joint_series;                                     // one per sweep
  std::vector<std::array<double, kBlockCount>> acceptance_series;  // running ratios per sweep
  std::array<double, kBlockCount> acceptance_rates{};
  std::vector<ModelState> thinned_samples;
  double sigma_bound = 0.0;  // upper end S of the variance proposal
};

/// Deterministic starting point: pi = alpha / sum(alpha), s = 1 / lambda, z_n = pi,
/// means drawn from N(mu_D, Sigma_D), variance = mean per-dimension data variance.
ModelState init_state(const Corpus& corpus, const SamplerConfig& config, Rng& rng);

/// S = (max_n d^2(x_n, mu_D) - min_n d^2(x_n, mu_D)) / 2.
double sigma_proposal_bound(const Corpus& corpus, const DataStats& stats);

// Acceptance log-probabilities for a given candidate, exactly as each block's ratio.
double log_accept_pi(const Document& doc, const DocState& state, std::span<const double> candidate,
                     const Hyperparams& hp, const TopicParams& topics);
double log_accept_s(const Document& doc, const DocState& state, double candidate,
                    const Hyperparams& hp, const TopicParams& topics);
double log_accept_z(const Document& doc, std::size_t n, const DocState& state,
                    std::span<const double> candidate, const TopicParams& topics);
double log_accept_mu(std::size_t k, const ModelState& state, const Corpus& corpus,
                     const DataStats& stats, const Hyperparams& hp,
                     std::span<const double> candidate);
double log_accept_sigma(const ModelState& state, const Corpus& corpus, double candidate);

/// Draws the uniform and applies candidate if accepted.
bool metropolis_accept(double log_accept, Rng& rng);

// Evaluate-and-apply for a caller-supplied candidate.
StepResult apply_pi(const Document& doc, DocState& state, std::span<const double> candidate,
                    const Hyperparams& hp, const TopicParams& topics, Rng& rng);
StepResult apply_s(const Document& doc, DocState& state, double candidate, const Hyperparams& hp,
                   const TopicParams& topics, Rng& rng);
StepResult apply_z(const Document& doc, std::size_t n, DocState& state,
                   std::span<const double> candidate, const TopicParams& topics, Rng& rng);

// Full steps: draw a candidate from the block's proposal, then accept or reject.
StepResult step_pi(const Document& doc, DocState& state, const Hyperparams& hp,
                   const TopicParams& topics, Rng& rng, const StepOptions& opts = {});
StepResult step_s(const Document& doc, DocState& state, const Hyperparams& hp,
                  const TopicParams& topics, Rng& rng, const StepOptions& opts = {});
StepResult step_z(const Document& doc, std::size_t n, DocState& state, const Hyperparams& hp,
                  const TopicParams& topics, Rng& rng, const StepOptions& opts = {});
StepResult step_mu(std::size_t k, ModelState& state, const Corpus& corpus, const DataStats& stats,
                   const Hyperparams& hp, Rng& rng, const StepOptions& opts = {});
/// A bound S at or below the floor leaves sigma2 unchanged and reports a rejection.
StepResult step_sigma(ModelState& state, const Corpus& corpus, double sigma_bound, Rng& rng,
                      const StepOptions& opts = {});

Trace run_inference(const Corpus& corpus, const SamplerConfig& config);

/// Throws InputError if any simplex or positivity invariant is broken.
void validate_state(const ModelState& state, const Corpus& corpus);

}  // namespace pmlda
