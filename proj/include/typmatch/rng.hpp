#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace typmatch {

// Counter-style pseudo-random stream with SplitMix64 output mixing.
// Streams are cheap value types; two streams built from the same key
// produce the same sequence on every platform, which is what lets a
// generated instance be reproduced from (seed, purpose tag, index)
// alone regardless of evaluation order.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) : state_(key) {}

  std::uint64_t next_u64();

  // Uniform double in [0, 1) with 53 random bits.
  double next_u01();

  // Uniform integer in [0, bound). Rejection-free bias is below 2^-64
  // for the bounds used here, so the widening-multiply trick is fine,
  // but we keep a rejection loop to make the draw exactly uniform.
  std::uint64_t next_below(std::uint64_t bound);

  // In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

// Avalanche mix (the SplitMix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

// Key for a sub-stream of a master seed, bound to a purpose tag and an
// index. Hashes the tag bytes so distinct tags never collide by offset.
std::uint64_t stream_key(std::uint64_t master, std::string_view tag,
                         std::uint64_t index = 0);

// Per-trial seed used by experiment drivers: hash of the master seed,
// the experiment name, and the trial index.
std::uint64_t derive_seed(std::uint64_t master, std::string_view name,
                          std::uint64_t trial);

}  // namespace typmatch
