#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace qcons {

/// Seeded generator with a portable value mapping.
///
/// std::mt19937_64 has a fully specified output sequence, but the standard
/// distributions do not, so the uniform mappings here are written out to keep
/// generated graphs and values identical across standard library vendors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform in [lo, hi], inclusive.
  std::int64_t between(std::int64_t lo, std::int64_t hi);

  bool bernoulli(double p) { return p >= 1.0 || uniform01() < p; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer over (base, stream); used to give every run and every
/// sub-generator of a run its own independent seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace qcons
