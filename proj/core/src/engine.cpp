#include "swarmnet/engine.hpp"

#include <cmath>

namespace swarmnet {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::string_view label, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ fnv1a(label) ^ splitmix64(index + 0x51ED));
}

RngStream::RngStream(std::uint64_t seed, std::string_view label, std::uint64_t index)
    : seed_(seed), engine_(mix_seed(seed, label, index)) {}

double RngStream::uniform() {
  // 53 random mantissa bits, independent of the standard library's
  // distribution implementation.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  if (lo == hi) return lo;
  return lo + (hi - lo) * uniform();
}

std::int64_t RngStream::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi <= lo) return lo;
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return lo + static_cast<std::int64_t>(r % span);
}

bool RngStream::bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform() < p;
}

double RngStream::gamma(double shape, double scale) {
  std::gamma_distribution<double> dist(shape, scale);
  return dist(engine_);
}

}  // namespace swarmnet
