#include "typmatch/rng.hpp"

namespace typmatch {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

std::uint64_t RandomStream::next_u64() {
  state_ += 0x9e3779b97f4a7c15ull;
  return mix64(state_);
}

double RandomStream::next_u01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::next_below(std::uint64_t bound) {
  if (bound <= 1) return 0;
  // Reject the tail that would make the modulus non-uniform.
  std::uint64_t limit = ~0ull - (~0ull % bound + 1) % bound;
  for (;;) {
    std::uint64_t x = next_u64();
    if (x <= limit) return x % bound;
  }
}

namespace {
// FNV-1a over a byte string, seeded.
std::uint64_t fnv1a(std::uint64_t h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}
}  // namespace

std::uint64_t stream_key(std::uint64_t master, std::string_view tag,
                         std::uint64_t index) {
  std::uint64_t h = fnv1a(0xcbf29ce484222325ull ^ mix64(master), tag);
  return mix64(h ^ mix64(index + 0x9e3779b97f4a7c15ull));
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view name,
                          std::uint64_t trial) {
  return stream_key(master, name, trial);
}

}  // namespace typmatch
