#include "pmlda/fcm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pmlda/errors.hpp"
#include "pmlda/rng.hpp"

namespace pmlda {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    d += t * t;
  }
  return d;
}

}  // namespace

Vec fcm_membership(std::span<const double> x, std::span<const Vec> centers, double m) {
  require(m > 1.0, "fcm: fuzzifier m must exceed 1");
  const std::size_t C = centers.size();
  Vec u(C, 0.0);
  Vec log_d(C);
  for (std::size_t k = 0; k < C; ++k) {
    const double d2 = squared_distance(x, centers[k]);
    if (d2 == 0.0) {
      u[k] = 1.0;
      return u;
    }
    log_d[k] = 0.5 * std::log(d2);
  }
  // u_k = 1 / sum_j (d_k / d_j)^(2/(m-1)), evaluated in log space
  const double p = 2.0 / (m - 1.0);
  for (std::size_t k = 0; k < C; ++k) {
    double denom = 0.0;
    for (std::size_t j = 0; j < C; ++j) denom += std::exp(p * (log_d[k] - log_d[j]));
    u[k] = 1.0 / denom;
  }
  return u;
}

double fcm_objective(std::span<const Vec> data, std::span<const Vec> memberships,
                     std::span<const Vec> centers, double m) {
  double j = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i)
    for (std::size_t k = 0; k < centers.size(); ++k)
      j += std::pow(memberships[i][k], m) * squared_distance(data[i], centers[k]);
  return j;
}

FcmResult fcm(std::span<const Vec> data, const FcmOptions& options) {
  const std::size_t C = options.clusters;
  require(options.m > 1.0, "fcm: fuzzifier m must exceed 1");
  require(C >= 2, "fcm: need at least two clusters");
  require(data.size() >= C, "fcm: more clusters than data points");
  require(options.max_iter >= 1, "fcm: max_iter must be positive");
  const std::size_t dim = data.front().size();
  for (const auto& x : data) require(x.size() == dim && dim >= 1, "fcm: inconsistent data dimension");

  FcmResult res;
  // C distinct data points by partial Fisher-Yates
  Rng rng = make_stream(options.seed, StreamTag::fcm);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t k = 0; k < C; ++k) {
    const std::size_t j = k + static_cast<std::size_t>(rng.uniform() * static_cast<double>(data.size() - k));
    std::swap(order[k], order[std::min(j, data.size() - 1)]);
    res.centers.push_back(data[order[k]]);
  }

  res.memberships.assign(data.size(), Vec(C, 0.0));
  for (std::size_t it = 0; it < options.max_iter; ++it) {
    for (std::size_t i = 0; i < data.size(); ++i) res.memberships[i] = fcm_membership(data[i], res.centers, options.m);

    std::vector<Vec> next(C, Vec(dim, 0.0));
    for (std::size_t k = 0; k < C; ++k) {
      double weight = 0.0;
      for (std::size_t i = 0; i < data.size(); ++i) {
        const double w = std::pow(res.memberships[i][k], options.m);
        weight += w;
        for (std::size_t d = 0; d < dim; ++d) next[k][d] += w * data[i][d];
      }
      if (weight > 0.0) {
        for (double& v : next[k]) v /= weight;
      } else {
        next[k] = res.centers[k];  // empty cluster keeps its centre
      }
    }
    double shift = 0.0;
    for (std::size_t k = 0; k < C; ++k) shift = std::max(shift, std::sqrt(squared_distance(next[k], res.centers[k])));
    res.centers = std::move(next);
    res.objective_series.push_back(fcm_objective(data, res.memberships, res.centers, options.m));
    res.iterations = it + 1;
    if (shift < options.tol) {
      res.converged = true;
      break;
    }
  }
  // memberships consistent with the returned centres
  for (std::size_t i = 0; i < data.size(); ++i) res.memberships[i] = fcm_membership(data[i], res.centers, options.m);
  return res;
}

std::vector<Vec> flatten_words(const Corpus& corpus) {
  std::vector<Vec> out;
  for (const auto& doc : corpus) out.insert(out.end(), doc.words.begin(), doc.words.end());
  return out;
}

}  // namespace pmlda
