#pragma once

#include <cstdint>
#include <initializer_list>

namespace netstate {

// Counter-based random stream. Draw number c of stream key k under seed s is
// splitmix64(s, k, c), so values depend only on (seed, key, counter) and
// never on the order in which parallel tasks run. Keys are built from the
// task coordinates with stream_key().
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t key) : seed_(seed), key_(key) {}

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Standard normal (Box-Muller, both outputs used).
  double normal();
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

// Hashes a tuple of coordinates into a stream key.
std::uint64_t stream_key(std::initializer_list<std::uint64_t> parts);

}  // namespace netstate
