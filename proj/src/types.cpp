#include "pmlda/types.hpp"

#include <cmath>
#include <string>

#include "pmlda/errors.hpp"

namespace pmlda {

void Hyperparams::validate() const {
  require(K >= 2, "K must be at least 2");
  require(alpha.size() == K, "alpha must have K components");
  for (double a : alpha) require(a > 0.0 && std::isfinite(a), "alpha components must be positive");
  require(lambda > 0.0 && std::isfinite(lambda), "lambda must be positive");
  require(f > 0.0 && std::isfinite(f), "f must be positive");
  require(T >= 1, "T must be at least 1");
}

DiagGaussian TopicParams::topic(std::size_t k) const {
  return DiagGaussian{means.at(k), Vec(dim(), sigma2)};
}

std::vector<DiagGaussian> TopicParams::as_gaussians() const {
  std::vector<DiagGaussian> out;
  out.reserve(K());
  for (std::size_t k = 0; k < K(); ++k) out.push_back(topic(k));
  return out;
}

void TopicParams::validate() const {
  require(K() >= 2, "need at least two topics");
  require(sigma2 > 0.0 && std::isfinite(sigma2), "sigma2 must be positive");
  for (const auto& m : means) {
    require(m.size() == dim() && !m.empty(), "topic means must share a non-zero dimension");
    for (double v : m) require(std::isfinite(v), "topic means must be finite");
  }
}

void Document::validate() const {
  require(!words.empty(), "document has no words");
  const std::size_t d = words.front().size();
  require(d >= 1, "words must have dimension >= 1");
  for (const auto& w : words) require(w.size() == d, "all words in a document must share a dimension");
  require(geometry.empty() || geometry.size() == words.size(),
          "document geometry must be empty or one coordinate per word");
}

void validate_corpus(const Corpus& corpus) {
  require(!corpus.empty(), "corpus is empty");
  for (const auto& doc : corpus) {
    doc.validate();
    require(doc.dim() == corpus.front().dim(), "all documents must share a word dimension");
  }
}

void DocState::validate(std::size_t K, std::size_t N) const {
  require(pi.size() == K, "pi has wrong length");
  require(on_simplex(pi, 1e-12), "pi is off the simplex");
  for (double p : pi) require(p > 0.0 && p < 1.0, "pi components must lie in (0,1)");
  require(s > 0.0 && std::isfinite(s), "s must be positive");
  require(z.size() == N, "z has wrong number of rows");
  for (const auto& row : z) {
    require(row.size() == K, "z row has wrong length");
    require(on_simplex(row, 1e-12), "z row is off the simplex");
    for (double v : row) require(v > 0.0 && v < 1.0, "z components must lie in (0,1)");
  }
}

DataStats compute_data_stats(const Corpus& corpus) {
  validate_corpus(corpus);
  const std::size_t dim = corpus.front().dim();
  DataStats stats{Vec(dim, 0.0), Vec(dim, 0.0)};
  std::size_t count = 0;
  for (const auto& doc : corpus) {
    for (const auto& w : doc.words) {
      for (std::size_t i = 0; i < dim; ++i) stats.mean[i] += w[i];
      ++count;
    }
  }
  for (double& m : stats.mean) m /= static_cast<double>(count);
  for (const auto& doc : corpus) {
    for (const auto& w : doc.words) {
      for (std::size_t i = 0; i < dim; ++i) {
        const double d = w[i] - stats.mean[i];
        stats.cov_diag[i] += d * d;
      }
    }
  }
  for (double& c : stats.cov_diag) c /= static_cast<double>(count);
  return stats;
}

Vec clamp_simplex(std::span<const double> x, double eps) {
  Vec out(x.begin(), x.end());
  double sum = 0.0;
  for (double& v : out) {
    if (!(v >= eps)) v = eps;  // also catches NaN
    if (v > 1.0 - eps) v = 1.0 - eps;
    sum += v;
  }
  for (double& v : out) v /= sum;
  return out;
}

bool on_simplex(std::span<const double> x, double tol) {
  double sum = 0.0;
  for (double v : x) {
    if (!(v >= -tol) || !std::isfinite(v)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

}  // namespace pmlda
