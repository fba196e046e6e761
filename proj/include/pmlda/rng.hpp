#pragma once

// Counter-addressed random streams.
//
// Every random draw in the library comes from a stream identified by
// (root seed, purpose, a, b), e.g. (seed, doc block, sweep, document). Streams
// are independent of each other and of scheduling, so serial and parallel
// runs consume identical variates.

#include <array>
#include <cstdint>
#include <limits>
#include <span>

#include "pmlda/types.hpp"

namespace pmlda {

/// xoshiro256** seeded through splitmix64.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1].
  double uniform_open_zero() { return 1.0 - uniform(); }
  double normal();
  double exponential(double rate);
  /// ln of a Gamma(shape, 1) variate; stays finite for very small shapes.
  double log_gamma_variate(double shape);

 private:
  std::array<std::uint64_t, 4> s_;
};

enum class StreamTag : std::uint64_t {
  init = 1,
  doc_block = 2,
  mu_block = 3,
  sigma_block = 4,
  generate = 5,
  fcm = 6,
  test = 7,
};

Rng make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t a = 0, std::uint64_t b = 0);

/// Dirichlet draw computed in log space, then clamped to [eps, 1 - eps].
Vec sample_dirichlet(std::span<const double> concentration, Rng& rng);

}  // namespace pmlda
