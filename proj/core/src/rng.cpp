#include "umt/rng.hpp"

#include <cmath>

namespace umt {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

double Rng::truncated_normal(double bound) {
  for (;;) {
    const double x = normal();
    if (std::abs(x) <= bound) return x;
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

SeedBuilder& SeedBuilder::add(std::string_view field) {
  // FNV-1a over the bytes, then folded into the running state.
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : field) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  state_ = splitmix64(state_ ^ h);
  return *this;
}

SeedBuilder& SeedBuilder::add(std::uint64_t field) {
  state_ = splitmix64(state_ ^ splitmix64(field + 0x632BE59BD9B4E019ULL));
  return *this;
}

}  // namespace umt
