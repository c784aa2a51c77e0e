#pragma once

#include "ktrr/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ktrr {

/// Samples as columns of X with values in [0, 1]; labels dense in [0, c),
/// numbered by first appearance.
struct Dataset {
  DataMatrix X;
  Labels truth;
  std::vector<std::string> names;  ///< optional per-sample ids (may be empty)
  std::vector<long long> class_ids;  ///< original label value of each dense class
  std::string source;
  double original_min = 0.0;
  double original_max = 1.0;
  /// A per-class subsample could not be filled for some class.
  bool shortfall = false;

  Index size() const { return X.cols(); }
  Index dimension() const { return X.rows(); }
  Index num_classes() const { return static_cast<Index>(class_ids.size()); }
};

/// Relabels to dense ids by first appearance; fills `class_ids`.
void reindex_labels(Dataset& ds, const std::vector<long long>& raw_labels);

/// Rows are samples. `label_column` < 0 counts from the end (-1 = last).
/// A first row that does not parse as numbers is treated as a header.
Dataset load_csv(const std::filesystem::path& path, int label_column = -1);

/// Mirror of load_csv: one row per sample, original label value last.
void save_csv(const Dataset& ds, const std::filesystem::path& path);

/// Writes an arbitrary matrix as CSV, one row per matrix row.
void save_matrix_csv(const Matrix& M, const std::filesystem::path& path);

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

/// MNIST-format IDX pair. Pixels are scaled by 1/255.
Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels);

/// Writes an IDX pair with the given image shape; pixels are X * 255 rounded
/// and clamped to [0, 255].
void save_idx(const Dataset& ds, Index rows, Index cols, const std::filesystem::path& images,
              const std::filesystem::path& labels);

/// Up to `per_class` samples per class, uniform without replacement, kept in
/// original order. Classes with fewer samples are taken whole and flagged.
Dataset subsample_per_class(const Dataset& ds, Index per_class, std::uint64_t seed);

/// Keeps classes 0..k-1 (first-appearance order).
Dataset first_k_classes(const Dataset& ds, Index k);

}  // namespace ktrr
