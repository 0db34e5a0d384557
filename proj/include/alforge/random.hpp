#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace alforge {

// Mixes a master seed with a stream name (e.g. a grammar id) into an
// independent seed. Stable across platforms and releases.
std::uint64_t derive_seed(std::uint64_t master, std::string_view stream);

// mt19937_64 with platform-independent bounded draws (the standard
// distributions are implementation-defined, which would break
// byte-identical artifacts across standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);
  // Uniform in [0, 1) with 53 bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <typename It>
  void shuffle(It first, It last) {
    for (auto n = last - first; n > 1; --n) std::swap(first[n - 1], first[below(static_cast<std::uint64_t>(n))]);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace alforge
