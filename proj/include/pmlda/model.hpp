#pragma once

// Densities and the PM-LDA log joint.
//
// Per-word likelihood is the normalized Gaussian whose natural parameters are
// the membership-weighted sum of the topic natural parameters. For diagonal
// covariances that is a precision-weighted blend per dimension:
//
//   precision_i = sum_k z_k / cov_ki
//   mean_i      = (sum_k z_k mean_ki / cov_ki) / precision_i
//
// and, when every topic shares cov_i, simply mean_i = sum_k z_k mean_ki.

#include <span>
#include <vector>

#include "pmlda/types.hpp"

namespace pmlda {

double dirichlet_log_pdf(std::span<const double> x, std::span<const double> a);

double gaussian_log_pdf(std::span<const double> x, std::span<const double> mean,
                        std::span<const double> cov_diag);

/// ln Exp(s | lambda) = ln lambda - lambda s.
double exponential_log_pdf(double s, double lambda);

DiagGaussian blend_topics(std::span<const double> z, std::span<const DiagGaussian> topics);

double word_log_likelihood(std::span<const double> x, std::span<const double> z,
                           const TopicParams& topics);

/// ln Dir(z | s * pi).
double membership_log_pdf(std::span<const double> z, std::span<const double> pi, double s);

/// The four additive pieces of a document's log joint.
struct LogJointTerms {
  double pi_prior = 0.0;     // ln Dir(pi | alpha)
  double s_prior = 0.0;      // ln Exp(s | lambda)
  double words = 0.0;        // sum_n ln p(x_n | z_n, topics)
  double memberships = 0.0;  // sum_n ln Dir(z_n | s pi)

  double total() const { return pi_prior + s_prior + words + memberships; }
};

LogJointTerms doc_log_joint_terms(const Document& doc, const DocState& state,
                                  const Hyperparams& hp, const TopicParams& topics);

double doc_log_joint(const Document& doc, const DocState& state, const Hyperparams& hp,
                     const TopicParams& topics);

/// Sum of per-document log joints, accumulated in document order.
double corpus_log_posterior(const ModelState& state, const Corpus& corpus,
                            const Hyperparams& hp);

/// Precomputed ln Dir(. | s pi) for repeated evaluation against one (pi, s).
class MembershipPrior {
 public:
  MembershipPrior(std::span<const double> pi, double s);

  double log_pdf(std::span<const double> z) const;

 private:
  Vec concentration_minus_one_;
  double log_norm_;
};

/// Sum over a document's words of ln p(x_n | z_n, topics).
double doc_word_log_likelihood(const Document& doc, const DocState& state,
                               const TopicParams& topics);

}  // namespace pmlda
