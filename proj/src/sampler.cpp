#include "pmlda/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pmlda/errors.hpp"
#include "pmlda/model.hpp"

namespace pmlda {

namespace {

int resolve_threads(int requested) {
#ifdef _OPENMP
  return requested > 0 ? requested : omp_get_max_threads();
#else
  (void)requested;
  return 1;
#endif
}

// Runs fn(d) for every document, rethrowing the lowest-index failure.
template <typename Fn>
void for_each_doc(std::size_t count, int threads, Fn&& fn) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::ptrdiff_t d = 0; d < n; ++d) {
    try {
      fn(static_cast<std::size_t>(d));
    } catch (...) {
      errors[d] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double ordered_sum(const Vec& values) {
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

double corpus_word_ll(const Corpus& corpus, const std::vector<DocState>& docs,
                      const TopicParams& topics, int threads) {
  Vec per_doc(corpus.size(), 0.0);
  for_each_doc(corpus.size(), threads, [&](std::size_t d) {
    per_doc[d] = doc_word_log_likelihood(corpus[d], docs[d], topics);
  });
  return ordered_sum(per_doc);
}

double corpus_log_joint(const Corpus& corpus, const ModelState& state, const Hyperparams& hp,
                        int threads) {
  Vec per_doc(corpus.size(), 0.0);
  for_each_doc(corpus.size(), threads, [&](std::size_t d) {
    per_doc[d] = doc_log_joint(corpus[d], state.docs[d], hp, state.topics);
  });
  return ordered_sum(per_doc);
}

// Terms of a document's log joint that depend on pi.
double pi_dependent_terms(const DocState& state, std::span<const double> pi,
                          const Hyperparams& hp) {
  const MembershipPrior prior(pi, state.s);
  double acc = dirichlet_log_pdf(pi, hp.alpha);
  for (const auto& zn : state.z) acc += prior.log_pdf(zn);
  return acc;
}

// Terms of a document's log joint that depend on s.
double s_dependent_terms(const DocState& state, double s, const Hyperparams& hp) {
  const MembershipPrior prior(state.pi, s);
  double acc = exponential_log_pdf(s, hp.lambda);
  for (const auto& zn : state.z) acc += prior.log_pdf(zn);
  return acc;
}

Vec proposal_cov(const DataStats& stats, double f) {
  Vec cov(stats.cov_diag.size());
  for (std::size_t i = 0; i < cov.size(); ++i) cov[i] = f * stats.cov_diag[i];
  return cov;
}

Vec draw_mean_proposal(const DataStats& stats, double f, Rng& rng) {
  Vec out(stats.mean.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = stats.mean[i] + std::sqrt(f * stats.cov_diag[i]) * rng.normal();
  return out;
}

double mu_log_accept_given(double current_ll, double candidate_ll, std::span<const double> current,
                           std::span<const double> candidate, const DataStats& stats, double f) {
  const Vec cov = proposal_cov(stats, f);
  const double log_ratio = (candidate_ll + gaussian_log_pdf(current, stats.mean, cov)) -
                           (current_ll + gaussian_log_pdf(candidate, stats.mean, cov));
  return std::min(0.0, log_ratio);
}

double z_log_accept_given(const Document& doc, std::size_t n, const DocState& state,
                          std::span<const double> candidate, const TopicParams& topics,
                          const MembershipPrior& prior) {
  const auto& x = doc.words[n];
  const double cand = word_log_likelihood(x, candidate, topics) + prior.log_pdf(candidate);
  const double curr = word_log_likelihood(x, state.z[n], topics) + prior.log_pdf(state.z[n]);
  return std::min(0.0, cand - curr);
}

StepResult sigma_step_impl(ModelState& state, const Corpus& corpus, double sigma_bound, Rng& rng,
                           const StepOptions& opts, int threads) {
  StepResult r;
  if (!(sigma_bound > opts.sigma_floor)) {
    r.accepted = false;
    r.log_accept = -std::numeric_limits<double>::infinity();
    return r;
  }
  const double candidate = opts.freeze
                               ? state.topics.sigma2
                               : opts.sigma_floor + (sigma_bound - opts.sigma_floor) * rng.uniform_open_zero();
  TopicParams proposed = state.topics;
  proposed.sigma2 = candidate;
  const double current_ll = corpus_word_ll(corpus, state.docs, state.topics, threads);
  const double candidate_ll = corpus_word_ll(corpus, state.docs, proposed, threads);
  r.log_accept = std::min(0.0, candidate_ll - current_ll);
  r.accepted = metropolis_accept(r.log_accept, rng);
  if (r.accepted) state.topics.sigma2 = candidate;
  return r;
}

DataStats floored_stats(const Corpus& corpus, double floor) {
  DataStats stats = compute_data_stats(corpus);
  for (double& c : stats.cov_diag) c = std::max(c, floor);
  return stats;
}

}  // namespace

void SamplerConfig::validate() const {
  hp.validate();
  require(sigma_floor > 0.0, "sigma_floor must be positive");
  if (fixed_pi) {
    require(fixed_pi->size() == hp.K, "fixed pi must have K components");
    require(on_simplex(*fixed_pi, 1e-9), "fixed pi must lie on the simplex");
  }
  if (fixed_s) require(*fixed_s > 0.0 && std::isfinite(*fixed_s), "fixed s must be positive");
}

void AcceptanceCounts::merge(const AcceptanceCounts& other) {
  for (std::size_t b = 0; b < kBlockCount; ++b) {
    proposed[b] += other.proposed[b];
    accepted[b] += other.accepted[b];
  }
}

double AcceptanceCounts::rate(Block b) const {
  const auto i = static_cast<std::size_t>(b);
  return proposed[i] == 0 ? 0.0 : static_cast<double>(accepted[i]) / static_cast<double>(proposed[i]);
}

ModelState init_state(const Corpus& corpus, const SamplerConfig& config, Rng& rng) {
  validate_corpus(corpus);
  config.validate();
  const Hyperparams& hp = config.hp;
  const DataStats stats = floored_stats(corpus, config.sigma_floor);

  Vec pi;
  if (config.fixed_pi) {
    pi = clamp_simplex(*config.fixed_pi);
  } else {
    double total = 0.0;
    for (double a : hp.alpha) total += a;
    pi.resize(hp.K);
    for (std::size_t k = 0; k < hp.K; ++k) pi[k] = hp.alpha[k] / total;
    pi = clamp_simplex(pi);
  }
  const double s = config.fixed_s ? *config.fixed_s : 1.0 / hp.lambda;

  ModelState state;
  state.docs.reserve(corpus.size());
  for (const auto& doc : corpus) state.docs.push_back(DocState{pi, s, std::vector<Vec>(doc.size(), pi)});

  state.topics.means.resize(hp.K);
  for (auto& m : state.topics.means) m = draw_mean_proposal(stats, 1.0, rng);
  double mean_var = 0.0;
  for (double c : compute_data_stats(corpus).cov_diag) mean_var += c;
  mean_var /= static_cast<double>(stats.cov_diag.size());
  state.topics.sigma2 = std::max(mean_var, config.sigma_floor);
  state.log_joint = corpus_log_posterior(state, corpus, hp);
  return state;
}

double sigma_proposal_bound(const Corpus& corpus, const DataStats& stats) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& doc : corpus) {
    for (const auto& w : doc.words) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        const double diff = w[i] - stats.mean[i];
        d2 += diff * diff;
      }
      lo = std::min(lo, d2);
      hi = std::max(hi, d2);
    }
  }
  return 0.5 * (hi - lo);
}

double log_accept_pi(const Document& doc, const DocState& state, std::span<const double> candidate,
                     const Hyperparams& hp, const TopicParams& topics) {
  (void)doc;
  (void)topics;  // word terms do not involve pi
  const double prior_current = dirichlet_log_pdf(state.pi, hp.alpha);
  const double prior_candidate = dirichlet_log_pdf(candidate, hp.alpha);
  const double log_ratio = (pi_dependent_terms(state, candidate, hp) + prior_current) -
                           (pi_dependent_terms(state, state.pi, hp) + prior_candidate);
  return std::min(0.0, log_ratio);
}

double log_accept_s(const Document& doc, const DocState& state, double candidate,
                    const Hyperparams& hp, const TopicParams& topics) {
  (void)doc;
  (void)topics;
  const double prior_current = exponential_log_pdf(state.s, hp.lambda);
  const double prior_candidate = exponential_log_pdf(candidate, hp.lambda);
  const double log_ratio = (s_dependent_terms(state, candidate, hp) + prior_current) -
                           (s_dependent_terms(state, state.s, hp) + prior_candidate);
  return std::min(0.0, log_ratio);
}

double log_accept_z(const Document& doc, std::size_t n, const DocState& state,
                    std::span<const double> candidate, const TopicParams& topics) {
  require(n < doc.size(), "log_accept_z: word index out of range");
  return z_log_accept_given(doc, n, state, candidate, topics, MembershipPrior(state.pi, state.s));
}

double log_accept_mu(std::size_t k, const ModelState& state, const Corpus& corpus,
                     const DataStats& stats, const Hyperparams& hp,
                     std::span<const double> candidate) {
  require(k < state.topics.K(), "log_accept_mu: topic index out of range");
  TopicParams proposed = state.topics;
  proposed.means[k].assign(candidate.begin(), candidate.end());
  const double current_ll = corpus_word_ll(corpus, state.docs, state.topics, 1);
  const double candidate_ll = corpus_word_ll(corpus, state.docs, proposed, 1);
  return mu_log_accept_given(current_ll, candidate_ll, state.topics.means[k], candidate, stats, hp.f);
}

double log_accept_sigma(const ModelState& state, const Corpus& corpus, double candidate) {
  TopicParams proposed = state.topics;
  proposed.sigma2 = candidate;
  const double current_ll = corpus_word_ll(corpus, state.docs, state.topics, 1);
  const double candidate_ll = corpus_word_ll(corpus, state.docs, proposed, 1);
  return std::min(0.0, candidate_ll - current_ll);
}

bool metropolis_accept(double log_accept, Rng& rng) {
  const double u = rng.uniform();
  if (log_accept >= 0.0) return true;
  return std::log(u) < log_accept;
}

StepResult apply_pi(const Document& doc, DocState& state, std::span<const double> candidate,
                    const Hyperparams& hp, const TopicParams& topics, Rng& rng) {
  StepResult r;
  r.log_accept = log_accept_pi(doc, state, candidate, hp, topics);
  r.accepted = metropolis_accept(r.log_accept, rng);
  if (r.accepted) state.pi.assign(candidate.begin(), candidate.end());
  return r;
}

StepResult apply_s(const Document& doc, DocState& state, double candidate, const Hyperparams& hp,
                   const TopicParams& topics, Rng& rng) {
  StepResult r;
  r.log_accept = log_accept_s(doc, state, candidate, hp, topics);
  r.accepted = metropolis_accept(r.log_accept, rng);
  if (r.accepted) state.s = candidate;
  return r;
}

StepResult apply_z(const Document& doc, std::size_t n, DocState& state,
                   std::span<const double> candidate, const TopicParams& topics, Rng& rng) {
  StepResult r;
  r.log_accept = log_accept_z(doc, n, state, candidate, topics);
  r.accepted = metropolis_accept(r.log_accept, rng);
  if (r.accepted) state.z[n].assign(candidate.begin(), candidate.end());
  return r;
}

StepResult step_pi(const Document& doc, DocState& state, const Hyperparams& hp,
                   const TopicParams& topics, Rng& rng, const StepOptions& opts) {
  const Vec candidate = opts.freeze ? state.pi : sample_dirichlet(hp.alpha, rng);
  return apply_pi(doc, state, candidate, hp, topics, rng);
}

StepResult step_s(const Document& doc, DocState& state, const Hyperparams& hp,
                  const TopicParams& topics, Rng& rng, const StepOptions& opts) {
  double candidate = state.s;
  if (!opts.freeze) {
    // an exactly-zero draw would leave the support; redraw from the same stream
    do candidate = rng.exponential(hp.lambda);
    while (!(candidate > 0.0));
  }
  return apply_s(doc, state, candidate, hp, topics, rng);
}

StepResult step_z(const Document& doc, std::size_t n, DocState& state, const Hyperparams& hp,
                  const TopicParams& topics, Rng& rng, const StepOptions& opts) {
  require(n < doc.size(), "step_z: word index out of range");
  const Vec candidate = opts.freeze ? state.z[n] : sample_dirichlet(Vec(hp.K, 1.0), rng);
  return apply_z(doc, n, state, candidate, topics, rng);
}

StepResult step_mu(std::size_t k, ModelState& state, const Corpus& corpus, const DataStats& stats,
                   const Hyperparams& hp, Rng& rng, const StepOptions& opts) {
  require(k < state.topics.K(), "step_mu: topic index out of range");
  const Vec candidate = opts.freeze ? state.topics.means[k] : draw_mean_proposal(stats, hp.f, rng);
  StepResult r;
  r.log_accept = log_accept_mu(k, state, corpus, stats, hp, candidate);
  r.accepted = metropolis_accept(r.log_accept, rng);
  if (r.accepted) state.topics.means[k] = candidate;
  return r;
}

StepResult step_sigma(ModelState& state, const Corpus& corpus, double sigma_bound, Rng& rng,
                      const StepOptions& opts) {
  return sigma_step_impl(state, corpus, sigma_bound, rng, opts, 1);
}

void validate_state(const ModelState& state, const Corpus& corpus) {
  require(state.docs.size() == corpus.size(), "state has wrong number of documents");
  state.topics.validate();
  for (std::size_t d = 0; d < corpus.size(); ++d)
    state.docs[d].validate(state.topics.K(), corpus[d].size());
}

Trace run_inference(const Corpus& corpus, const SamplerConfig& config) {
  validate_corpus(corpus);
  config.validate();
  const Hyperparams& hp = config.hp;
  const int threads = resolve_threads(config.threads);
  const DataStats stats = floored_stats(corpus, config.sigma_floor);
  const StepOptions opts{config.freeze_proposals, config.sigma_floor};

  Trace trace;
  trace.sigma_bound = sigma_proposal_bound(corpus, compute_data_stats(corpus));

  Rng init_rng = make_stream(hp.seed, StreamTag::init);
  ModelState state = init_state(corpus, config, init_rng);
  AcceptanceCounts totals;

  for (std::size_t t = 1; t <= hp.T; ++t) {
    std::vector<AcceptanceCounts> doc_counts(corpus.size());
    for_each_doc(corpus.size(), threads, [&](std::size_t d) {
      Rng rng = make_stream(hp.seed, StreamTag::doc_block, t, d);
      DocState& ds = state.docs[d];
      const Document& doc = corpus[d];
      AcceptanceCounts& counts = doc_counts[d];
      if (!config.fixed_pi) counts.record(Block::pi, step_pi(doc, ds, hp, state.topics, rng, opts).accepted);
      if (!config.fixed_s) counts.record(Block::s, step_s(doc, ds, hp, state.topics, rng, opts).accepted);
      const MembershipPrior prior(ds.pi, ds.s);
      const Vec uniform_conc(hp.K, 1.0);
      for (std::size_t n = 0; n < doc.size(); ++n) {
        const Vec candidate = opts.freeze ? ds.z[n] : sample_dirichlet(uniform_conc, rng);
        const double log_accept = z_log_accept_given(doc, n, ds, candidate, state.topics, prior);
        const bool ok = metropolis_accept(log_accept, rng);
        if (ok) ds.z[n] = candidate;
        counts.record(Block::z, ok);
      }
    });
    for (const auto& c : doc_counts) totals.merge(c);

    {
      Rng rng = make_stream(hp.seed, StreamTag::mu_block, t);
      double current_ll = corpus_word_ll(corpus, state.docs, state.topics, threads);
      for (std::size_t k = 0; k < hp.K; ++k) {
        const Vec candidate = opts.freeze ? state.topics.means[k] : draw_mean_proposal(stats, hp.f, rng);
        TopicParams proposed = state.topics;
        proposed.means[k] = candidate;
        const double candidate_ll = corpus_word_ll(corpus, state.docs, proposed, threads);
        const double log_accept =
            mu_log_accept_given(current_ll, candidate_ll, state.topics.means[k], candidate, stats, hp.f);
        const bool ok = metropolis_accept(log_accept, rng);
        if (ok) {
          state.topics = std::move(proposed);
          current_ll = candidate_ll;
        }
        totals.record(Block::mu, ok);
      }
    }
    {
      Rng rng = make_stream(hp.seed, StreamTag::sigma_block, t);
      totals.record(Block::sigma, sigma_step_impl(state, corpus, trace.sigma_bound, rng, opts, threads).accepted);
    }

    state.log_joint = corpus_log_joint(corpus, state, hp, threads);
    if (!std::isfinite(state.log_joint))
      throw NumericalError("log joint became non-finite at sweep " + std::to_string(t));
#ifndef NDEBUG
    validate_state(state, corpus);
#endif

    trace.log_joint_series.push_back(state.log_joint);
    std::array<double, kBlockCount> rates{};
    for (std::size_t b = 0; b < kBlockCount; ++b) rates[b] = totals.rate(static_cast<Block>(b));
    trace.acceptance_series.push_back(rates);
    if (t == 1 || state.log_joint > trace.best_log_joint) {
      trace.best_state = state;
      trace.best_log_joint = state.log_joint;
      trace.best_sweep = t;
    }
    if (config.thin > 0 && t % config.thin == 0) trace.thinned_samples.push_back(state);
  }
  for (std::size_t b = 0; b < kBlockCount; ++b) trace.acceptance_rates[b] = totals.rate(static_cast<Block>(b));
  return trace;
}

}  // namespace pmlda
