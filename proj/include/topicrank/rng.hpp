#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "topicrank/errors.hpp"

namespace topicrank {

/// Deterministic RNG used everywhere randomness is needed.
///
/// The engine is std::mt19937_64; its name is recorded in model files so a
/// reader knows which stream produced a run. All derived draws (doubles,
/// bounded integers, shuffles) are implemented here on top of raw 64-bit
/// outputs, so a given seed pins the entire draw sequence regardless of
/// standard-library vendor.
class rng {
 public:
  static constexpr const char* algorithm_name = "mt19937_64";

  rng() : engine_(0) {}
  explicit rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). Rejection sampling keeps it unbiased.
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) fail(error_kind::argument, "next_below: n must be positive");
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  /// State round-trips through text exactly (the engine's stream format is
  /// specified by the standard).
  std::string serialize() const {
    std::ostringstream os;
    os << engine_;
    return os.str();
  }

  void deserialize(const std::string& text) {
    std::istringstream is(text);
    is >> engine_;
    if (is.fail()) fail(error_kind::parse, "rng: malformed state string");
  }

  bool operator==(const rng& other) const { return engine_ == other.engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace topicrank
