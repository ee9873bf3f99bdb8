#pragma once

#include <cstdint>
#include <cmath>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace shapaudit {

// Deterministic RNG wrapper. mt19937_64 is fully specified by the standard
// and all derived draws below avoid std::*_distribution, so streams are
// bit-stable across platforms and toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // FNV-1a over the byte representations; used to derive independent
  // streams from (master seed, salt, name).
  static std::uint64_t mix(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint64_t p : parts) {
      for (int i = 0; i < 8; ++i) {
        h ^= (p >> (8 * i)) & 0xffULL;
        h *= 0x100000001b3ULL;
      }
    }
    return h;
  }

  static std::uint64_t hash_name(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1), 53-bit mantissa.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Standard normal via Box-Muller; no spare caching, two draws per sample.
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // Uniform integer in [0, n), bitmask rejection (unbiased, deterministic).
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n <= 1) return 0;
    std::uint64_t mask = ~0ULL;
    std::uint64_t limit = n - 1;
    int bits = 0;
    while (limit >> bits) ++bits;
    mask = (bits >= 64) ? ~0ULL : ((1ULL << bits) - 1);
    for (;;) {
      std::uint64_t v = engine_() & mask;
      if (v < n) return v;
    }
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace shapaudit
