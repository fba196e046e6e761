#include "pmlda/model.hpp"

#include <cmath>
#include <numbers>

#include "pmlda/errors.hpp"

namespace pmlda {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// One dimension of ln N(x | m, c). Every Gaussian evaluation in the library goes
// through this so that equal inputs give bit-identical results on every path.
inline double gaussian_term(double x, double m, double c) {
  const double d = x - m;
  return -0.5 * (std::log(kTwoPi * c) + d * d / c);
}

inline double safe_log(double v) { return std::log(v < kSimplexEps ? kSimplexEps : v); }

void check_simplex(std::span<const double> z, const char* what) {
  if (!on_simplex(z, 1e-9)) throw InputError(std::string(what) + " is off the simplex");
}

}  // namespace

double dirichlet_log_pdf(std::span<const double> x, std::span<const double> a) {
  require(x.size() == a.size() && !x.empty(), "dirichlet_log_pdf: dimension mismatch");
  check_simplex(x, "dirichlet_log_pdf: x");
  double a_sum = 0.0;
  double log_norm = 0.0;
  for (double ak : a) {
    require(ak > 0.0 && std::isfinite(ak), "dirichlet_log_pdf: concentration must be positive");
    a_sum += ak;
    log_norm -= std::lgamma(ak);
  }
  log_norm += std::lgamma(a_sum);
  double kernel = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) kernel += (a[k] - 1.0) * safe_log(x[k]);
  return log_norm + kernel;
}

double gaussian_log_pdf(std::span<const double> x, std::span<const double> mean,
                        std::span<const double> cov_diag) {
  require(x.size() == mean.size() && x.size() == cov_diag.size(),
          "gaussian_log_pdf: dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(cov_diag[i] > 0.0, "gaussian_log_pdf: variance must be positive");
    acc += gaussian_term(x[i], mean[i], cov_diag[i]);
  }
  return acc;
}

double exponential_log_pdf(double s, double lambda) {
  require(lambda > 0.0, "exponential_log_pdf: rate must be positive");
  require(s >= 0.0, "exponential_log_pdf: support is s >= 0");
  return std::log(lambda) - lambda * s;
}

DiagGaussian blend_topics(std::span<const double> z, std::span<const DiagGaussian> topics) {
  require(z.size() == topics.size() && !topics.empty(), "blend_topics: z and topics differ in length");
  check_simplex(z, "blend_topics: z");
  const std::size_t dim = topics.front().dim();
  for (const auto& t : topics) {
    require(t.mean.size() == dim && t.cov_diag.size() == dim, "blend_topics: topic dimension mismatch");
    for (double c : t.cov_diag) require(c > 0.0, "blend_topics: zero-variance topic");
  }
  DiagGaussian out{Vec(dim, 0.0), Vec(dim, 0.0)};
  for (std::size_t i = 0; i < dim; ++i) {
    bool shared = true;
    for (const auto& t : topics) shared = shared && t.cov_diag[i] == topics.front().cov_diag[i];
    if (shared) {
      double m = 0.0;
      for (std::size_t k = 0; k < z.size(); ++k) m += z[k] * topics[k].mean[i];
      out.mean[i] = m;
      out.cov_diag[i] = topics.front().cov_diag[i];
    } else {
      double precision = 0.0;
      double weighted = 0.0;
      for (std::size_t k = 0; k < z.size(); ++k) {
        precision += z[k] / topics[k].cov_diag[i];
        weighted += z[k] * topics[k].mean[i] / topics[k].cov_diag[i];
      }
      out.mean[i] = weighted / precision;
      out.cov_diag[i] = 1.0 / precision;
    }
  }
  return out;
}

double word_log_likelihood(std::span<const double> x, std::span<const double> z,
                           const TopicParams& topics) {
  require(z.size() == topics.K(), "word_log_likelihood: z has wrong length");
  require(x.size() == topics.dim(), "word_log_likelihood: word has wrong dimension");
  require(topics.sigma2 > 0.0, "word_log_likelihood: zero-variance topic");
  check_simplex(z, "word_log_likelihood: z");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double m = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) m += z[k] * topics.means[k][i];
    acc += gaussian_term(x[i], m, topics.sigma2);
  }
  return acc;
}

MembershipPrior::MembershipPrior(std::span<const double> pi, double s)
    : concentration_minus_one_(pi.size()), log_norm_(0.0) {
  require(s > 0.0, "membership prior: s must be positive");
  double total = 0.0;
  for (std::size_t k = 0; k < pi.size(); ++k) {
    const double c = s * pi[k];
    require(c > 0.0, "membership prior: concentration must be positive");
    total += c;
    log_norm_ -= std::lgamma(c);
    concentration_minus_one_[k] = c - 1.0;
  }
  log_norm_ += std::lgamma(total);
}

double MembershipPrior::log_pdf(std::span<const double> z) const {
  double kernel = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) kernel += concentration_minus_one_[k] * safe_log(z[k]);
  return log_norm_ + kernel;
}

double membership_log_pdf(std::span<const double> z, std::span<const double> pi, double s) {
  require(z.size() == pi.size(), "membership_log_pdf: dimension mismatch");
  check_simplex(z, "membership_log_pdf: z");
  return MembershipPrior(pi, s).log_pdf(z);
}

double doc_word_log_likelihood(const Document& doc, const DocState& state,
                               const TopicParams& topics) {
  double acc = 0.0;
  for (std::size_t n = 0; n < doc.size(); ++n)
    acc += word_log_likelihood(doc.words[n], state.z[n], topics);
  return acc;
}

LogJointTerms doc_log_joint_terms(const Document& doc, const DocState& state,
                                  const Hyperparams& hp, const TopicParams& topics) {
  require(state.z.size() == doc.size(), "doc_log_joint: state and document differ in word count");
  require(state.pi.size() == hp.K && topics.K() == hp.K, "doc_log_joint: inconsistent K");
  LogJointTerms t;
  t.pi_prior = dirichlet_log_pdf(state.pi, hp.alpha);
  t.s_prior = exponential_log_pdf(state.s, hp.lambda);
  t.words = doc_word_log_likelihood(doc, state, topics);
  const MembershipPrior prior(state.pi, state.s);
  for (const auto& zn : state.z) t.memberships += prior.log_pdf(zn);
  return t;
}

double doc_log_joint(const Document& doc, const DocState& state, const Hyperparams& hp,
                     const TopicParams& topics) {
  return doc_log_joint_terms(doc, state, hp, topics).total();
}

double corpus_log_posterior(const ModelState& state, const Corpus& corpus, const Hyperparams& hp) {
  require(state.docs.size() == corpus.size(), "corpus_log_posterior: document count mismatch");
  const auto D = static_cast<std::ptrdiff_t>(corpus.size());
  Vec per_doc(corpus.size(), 0.0);
  bool failed = false;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t d = 0; d < D; ++d) {
    try {
      per_doc[d] = doc_log_joint(corpus[d], state.docs[d], hp, state.topics);
    } catch (...) {
#pragma omp atomic write
      failed = true;
    }
  }
  if (failed) {
    // rerun serially to surface the first error with its message
    for (std::ptrdiff_t d = 0; d < D; ++d) doc_log_joint(corpus[d], state.docs[d], hp, state.topics);
  }
  double total = 0.0;
  for (double v : per_doc) total += v;
  return total;
}

}  // namespace pmlda
