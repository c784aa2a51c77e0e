#pragma once

#include "ktrr/types.hpp"

#include <cstdint>
#include <limits>
#include <string_view>

namespace ktrr {

enum class CorruptionKind { none, gaussian_snr, salt_pepper };
std::string_view to_string(CorruptionKind kind);
CorruptionKind parse_corruption_kind(std::string_view name);

struct CorruptionSpec {
  CorruptionKind kind = CorruptionKind::none;
  double snr_db = std::numeric_limits<double>::infinity();
  double ratio = 0.0;  ///< fraction of entries hit by salt_pepper
  double low = 0.0;    ///< pixel range; gaussian output is clipped to it
  double high = 1.0;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument on ratio outside [0,1] or low >= high.
  void validate() const;
};

struct CorruptionStats {
  Index changed_positions = 0;  ///< positions selected (salt_pepper)
  Index clipped = 0;  ///< entries clipped to [low, high] (gaussian_snr)
  double noise_variance = 0.0;
};

/// X + N(0, P/10^(snr/10)) with P the mean squared entry, clipped to [low, high].
DataMatrix add_gaussian_snr(const DataMatrix& X, const CorruptionSpec& spec,
                            CorruptionStats* stats = nullptr);

/// Sets floor(ratio * m * n) distinct entries, chosen uniformly, to low or high
/// with equal probability.
DataMatrix add_salt_pepper(const DataMatrix& X, const CorruptionSpec& spec,
                           CorruptionStats* stats = nullptr);

/// Dispatches on spec.kind; `none` returns X unchanged.
DataMatrix apply_corruption(const DataMatrix& X, const CorruptionSpec& spec,
                            CorruptionStats* stats = nullptr);

}  // namespace ktrr
