#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace dmc {

/// Counter-based SplitMix64 stream.
///
/// Output i of a stream is a pure function of (key, i), so streams can be
/// derived and replayed independently.  `derive` hashes a label or integer
/// into a child key; sibling streams with distinct labels are independent
/// for all practical purposes.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  constexpr explicit SplitMix64(std::uint64_t seed = 0) noexcept : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept { return mix(key_ + (++counter_) * kGolden); }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  [[nodiscard]] constexpr SplitMix64 derive(std::uint64_t id) const noexcept {
    SplitMix64 child;
    child.key_ = mix(key_ ^ mix(id + 0x9e3779b97f4a7c15ULL));
    return child;
  }

  [[nodiscard]] constexpr SplitMix64 derive(std::string_view label) const noexcept {
    // FNV-1a over the label, then mixed like an integer id.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
    return derive(h);
  }

  [[nodiscard]] constexpr std::uint64_t key() const noexcept { return key_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace dmc
