#include "pmlda/generative.hpp"

#include <cmath>
#include <exception>
#include <iostream>
#include <mutex>

#include "pmlda/errors.hpp"
#include "pmlda/model.hpp"

namespace pmlda {

namespace {

constexpr double kMinConcentration = 1e-8;

void warn_concentration_clamped() {
  static std::once_flag once;
  std::call_once(once, [] {
    std::cerr << "pmlda: warning: membership concentration below " << kMinConcentration
              << " clamped\n";
  });
}

}  // namespace

void GenSpec::validate() const {
  require(K() >= 2, "generative spec needs at least two topics");
  require(D >= 1 && N >= 1, "generative spec needs D >= 1 and N >= 1");
  const std::size_t dim = topics.front().dim();
  for (const auto& t : topics) {
    require(t.dim() == dim && t.cov_diag.size() == dim && dim >= 1, "topic dimension mismatch");
    for (double c : t.cov_diag) require(c > 0.0, "topic variances must be positive");
  }
  if (fixed_pi) {
    require(fixed_pi->size() == K() && on_simplex(*fixed_pi, 1e-9), "fixed pi must be a K-simplex point");
  } else {
    require(alpha.size() == K(), "alpha must have K components");
    for (double a : alpha) require(a > 0.0, "alpha components must be positive");
  }
  if (fixed_s) {
    require(*fixed_s > 0.0, "fixed s must be positive");
  } else {
    require(lambda > 0.0, "lambda must be positive");
  }
  if (fixed_z) require(fixed_z->size() == K() && on_simplex(*fixed_z, 1e-9), "fixed z must be a K-simplex point");
}

ModelState GeneratedCorpus::as_model_state() const {
  require(!topics.empty(), "no topics");
  const double sigma2 = topics.front().cov_diag.front();
  ModelState state;
  for (const auto& t : topics) {
    for (double c : t.cov_diag)
      require(c == sigma2, "truth topics do not share one isotropic covariance");
    state.topics.means.push_back(t.mean);
  }
  state.topics.sigma2 = sigma2;
  state.docs = truth;
  return state;
}

Vec sample_membership(std::span<const double> pi, double s, Rng& rng) {
  require(s > 0.0, "sample_membership: s must be positive");
  require(on_simplex(pi, 1e-9), "sample_membership: pi is off the simplex");
  Vec conc(pi.size());
  for (std::size_t k = 0; k < pi.size(); ++k) {
    conc[k] = s * pi[k];
    if (!(conc[k] >= kMinConcentration)) {
      conc[k] = kMinConcentration;
      warn_concentration_clamped();
    }
  }
  return sample_dirichlet(conc, rng);
}

GeneratedDocument sample_document(const GenSpec& spec, Rng& rng) {
  spec.validate();
  GeneratedDocument out;
  DocState& st = out.truth;
  st.pi = spec.fixed_pi ? clamp_simplex(*spec.fixed_pi) : sample_dirichlet(spec.alpha, rng);
  if (spec.fixed_s) {
    st.s = *spec.fixed_s;
  } else {
    do st.s = rng.exponential(spec.lambda);
    while (!(st.s > 0.0));
  }
  st.z.reserve(spec.N);
  out.doc.words.reserve(spec.N);
  for (std::size_t n = 0; n < spec.N; ++n) {
    Vec z = spec.fixed_z ? *spec.fixed_z : sample_membership(st.pi, st.s, rng);
    const DiagGaussian g = blend_topics(z, spec.topics);
    Vec x(g.dim());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = g.mean[i] + std::sqrt(g.cov_diag[i]) * rng.normal();
    out.doc.words.push_back(std::move(x));
    st.z.push_back(std::move(z));
  }
  return out;
}

GeneratedCorpus sample_corpus(const GenSpec& spec) {
  spec.validate();
  GeneratedCorpus out;
  out.topics = spec.topics;
  out.corpus.resize(spec.D);
  out.truth.resize(spec.D);
  std::vector<std::exception_ptr> errors(spec.D);
  const auto D = static_cast<std::ptrdiff_t>(spec.D);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t d = 0; d < D; ++d) {
    try {
      Rng rng = make_stream(spec.seed, StreamTag::generate, static_cast<std::uint64_t>(d));
      GeneratedDocument g = sample_document(spec, rng);
      out.corpus[d] = std::move(g.doc);
      out.truth[d] = std::move(g.truth);
    } catch (...) {
      errors[d] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace pmlda
