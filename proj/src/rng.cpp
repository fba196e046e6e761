#include "pmlda/rng.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pmlda/errors.hpp"

namespace pmlda {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  for (auto& word : s_) word = splitmix64(seed);
}

Rng::result_type Rng::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(*this);
}

double Rng::exponential(double rate) {
  // inverse CDF keeps the draw count fixed at one variate
  return -std::log(uniform_open_zero()) / rate;
}

double Rng::log_gamma_variate(double shape) {
  if (shape >= 1.0) {
    std::gamma_distribution<double> dist(shape, 1.0);
    return std::log(dist(*this));
  }
  // G(a) = G(a + 1) * U^(1/a)
  std::gamma_distribution<double> dist(shape + 1.0, 1.0);
  const double g = dist(*this);
  return std::log(g) + std::log(uniform_open_zero()) / shape;
}

Rng make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = seed;
  std::uint64_t h = splitmix64(x);
  x = h ^ static_cast<std::uint64_t>(tag);
  h = splitmix64(x);
  x = h ^ a;
  h = splitmix64(x);
  x = h ^ b;
  h = splitmix64(x);
  return Rng(h);
}

Vec sample_dirichlet(std::span<const double> concentration, Rng& rng) {
  require(!concentration.empty(), "sample_dirichlet: empty concentration");
  Vec logs(concentration.size());
  for (std::size_t k = 0; k < concentration.size(); ++k) {
    require(concentration[k] > 0.0, "sample_dirichlet: concentration must be positive");
    logs[k] = rng.log_gamma_variate(concentration[k]);
  }
  const double top = *std::max_element(logs.begin(), logs.end());
  double sum = 0.0;
  for (double& v : logs) {
    v = std::exp(v - top);
    sum += v;
  }
  for (double& v : logs) v /= sum;
  return clamp_simplex(logs);
}

}  // namespace pmlda
