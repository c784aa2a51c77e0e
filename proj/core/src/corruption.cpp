#include "ktrr/corruption.hpp"

#include "ktrr/error.hpp"
#include "ktrr/rng.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace ktrr {

std::string_view to_string(CorruptionKind kind) {
  switch (kind) {
    case CorruptionKind::none: return "none";
    case CorruptionKind::gaussian_snr: return "gaussian_snr";
    case CorruptionKind::salt_pepper: return "salt_pepper";
  }
  return "unknown";
}

CorruptionKind parse_corruption_kind(std::string_view name) {
  if (name == "none") return CorruptionKind::none;
  if (name == "gaussian_snr") return CorruptionKind::gaussian_snr;
  if (name == "salt_pepper") return CorruptionKind::salt_pepper;
  throw InvalidArgument("unknown corruption kind '" + std::string(name) + "'");
}

void CorruptionSpec::validate() const {
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw InvalidArgument("corruption ratio must be in [0, 1]");
  if (!(low < high)) throw InvalidArgument("corruption value range needs low < high");
  if (std::isnan(snr_db)) throw InvalidArgument("snr_db is NaN");
}

DataMatrix add_gaussian_snr(const DataMatrix& X, const CorruptionSpec& spec, CorruptionStats* stats) {
  if (spec.kind == CorruptionKind::none) return X;
  if (spec.kind != CorruptionKind::gaussian_snr) {
    throw InvalidArgument("add_gaussian_snr called with kind " + std::string(to_string(spec.kind)));
  }
  spec.validate();
  CorruptionStats local;
  if (std::isinf(spec.snr_db) && spec.snr_db > 0.0) {
    if (stats) *stats = local;
    return X;
  }
  const double power = X.size() > 0 ? X.squaredNorm() / static_cast<double>(X.size()) : 0.0;
  if (!(power > 0.0)) throw InvalidArgument("add_gaussian_snr: signal power is zero");

  local.noise_variance = power / std::pow(10.0, spec.snr_db / 10.0);
  const double sd = std::sqrt(local.noise_variance);
  Rng rng(spec.seed);
  DataMatrix out = X;
  // Column-major traversal fixes the draw order.
  for (Index j = 0; j < out.cols(); ++j) {
    for (Index i = 0; i < out.rows(); ++i) {
      double v = out(i, j) + sd * rng.normal();
      if (v < spec.low) {
        v = spec.low;
        ++local.clipped;
      } else if (v > spec.high) {
        v = spec.high;
        ++local.clipped;
      }
      out(i, j) = v;
    }
  }
  if (stats) *stats = local;
  return out;
}

DataMatrix add_salt_pepper(const DataMatrix& X, const CorruptionSpec& spec, CorruptionStats* stats) {
  if (spec.kind == CorruptionKind::none) return X;
  if (spec.kind != CorruptionKind::salt_pepper) {
    throw InvalidArgument("add_salt_pepper called with kind " + std::string(to_string(spec.kind)));
  }
  spec.validate();
  const auto total = static_cast<std::uint64_t>(X.size());
  const auto count = static_cast<std::uint64_t>(std::floor(spec.ratio * static_cast<double>(total)));

  Rng rng(spec.seed);
  DataMatrix out = X;
  // Partial Fisher-Yates: the first `count` slots are a uniform sample.
  std::vector<std::uint64_t> pos(total);
  std::iota(pos.begin(), pos.end(), std::uint64_t{0});
  for (std::uint64_t s = 0; s < count; ++s) {
    const std::uint64_t pick = s + rng.below(total - s);
    std::swap(pos[s], pos[pick]);
    out.data()[pos[s]] = rng.coin() ? spec.high : spec.low;
  }
  if (stats) {
    *stats = CorruptionStats{};
    stats->changed_positions = static_cast<Index>(count);
  }
  return out;
}

DataMatrix apply_corruption(const DataMatrix& X, const CorruptionSpec& spec, CorruptionStats* stats) {
  switch (spec.kind) {
    case CorruptionKind::none:
      if (stats) *stats = CorruptionStats{};
      return X;
    case CorruptionKind::gaussian_snr: return add_gaussian_snr(X, spec, stats);
    case CorruptionKind::salt_pepper: return add_salt_pepper(X, spec, stats);
  }
  throw InvalidArgument("unknown corruption kind");
}

}  // namespace ktrr
