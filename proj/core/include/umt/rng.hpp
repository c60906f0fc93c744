#pragma once

// Seeded random streams with platform-independent variate transforms, and
// stable seed derivation so that work items can be scheduled in any order.

#include <cstdint>
#include <random>
#include <string_view>

namespace umt {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Standard normal (Marsaglia polar method).
  double normal();

  // Standard normal conditioned on |x| <= bound.
  double truncated_normal(double bound);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

// Stable 64-bit hash of (master, fields...). Identical across runs/platforms.
class SeedBuilder {
 public:
  explicit SeedBuilder(std::uint64_t master) : state_(splitmix64(master)) {}
  SeedBuilder& add(std::string_view field);
  SeedBuilder& add(std::uint64_t field);
  std::uint64_t seed() const { return splitmix64(state_); }

 private:
  std::uint64_t state_;
};

template <class... Fields>
std::uint64_t derive_seed(std::uint64_t master, const Fields&... fields) {
  SeedBuilder b(master);
  (b.add(fields), ...);
  return b.seed();
}

}  // namespace umt
