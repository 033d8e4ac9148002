#pragma once

#include <cstdint>

namespace covlab {

std::uint64_t splitmix64(std::uint64_t x);

// Derives an independent stream key from a parent seed and up to two
// indices. Counter-based: the result depends only on the arguments, so
// replication i can be generated without touching replications 0..i-1.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// Counter-based generator: the n-th output is splitmix64(key + n * gamma).
class StreamRng {
 public:
  explicit StreamRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  /// Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }
  double normal();
  /// Poisson(mean) by sequential inversion for mean <= 30 and Hormann's
  /// transformed rejection (PTRS) otherwise.
  std::uint64_t poisson(double mean);

  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace covlab
