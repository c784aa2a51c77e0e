#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ktrr {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives an independent stream seed from (master, index, tag). Streams for
/// different indices never depend on each other, so adding runs or restarts
/// leaves earlier ones untouched.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::string_view tag) noexcept;

/// mt19937_64 plus portable uniform/normal draws. The standard distributions
/// are implementation-defined; these are not, so seeded output is the same on
/// every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal (Marsaglia polar method).
  double normal();

  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ktrr
