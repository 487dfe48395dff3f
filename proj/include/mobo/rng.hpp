#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "mobo/math.hpp"

namespace mobo {

/// Derives an independent stream seed from a base seed, a stream name and an
/// index. All randomness in a run flows through named streams so that
/// concurrency and evaluation order never change results.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::string_view name,
                                 std::uint64_t index = 0);

/// Deterministic random source. mt19937_64 output is fixed by the standard
/// and all real-valued draws below avoid platform-dependent distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t seed, std::string_view name, std::uint64_t index = 0) {
    return Rng(derive_stream_seed(seed, name, index));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0,1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0,1), never returns an endpoint.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). Modulo bias is negligible for the n used here.
  int uniform_int(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }

  /// Standard normal via the inverse CDF; one engine draw per variate.
  double normal() { return norm_quantile(uniform_open()); }

  double normal(double mean, double std) { return mean + std * normal(); }

  double gumbel(double location, double scale) {
    return location - scale * std::log(-std::log(uniform_open()));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mobo
