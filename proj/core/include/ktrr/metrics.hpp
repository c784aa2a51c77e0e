#pragma once

#include "ktrr/types.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace ktrr {

/// Counts of points per (predicted, true) cluster pair. Label values are
/// arbitrary integers; rows/columns follow their sorted order.
struct ContingencyTable {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;  ///< k_pred x k_true
  std::int64_t n = 0;

  static ContingencyTable build(const Labels& pred, const Labels& truth);

  std::vector<std::int64_t> row_sums() const;
  std::vector<std::int64_t> col_sums() const;
  /// True when pred and truth are the same set partition.
  bool is_matching() const;
};

/// Best one-to-one relabeling of pred onto truth (Hungarian), as a fraction.
double accuracy(const Labels& pred, const Labels& truth);

enum class NmiNorm { sqrt, max, min };
std::string_view to_string(NmiNorm norm);
NmiNorm parse_nmi_norm(std::string_view name);

/// Mutual information over a normalizer of the two entropies (natural log).
/// 1 if both partitions are a single cluster, 0 if exactly one is.
double nmi(const Labels& pred, const Labels& truth, NmiNorm norm = NmiNorm::sqrt);

/// Adjusted Rand index.
double ari(const Labels& pred, const Labels& truth);

/// Pairwise F-measure over same-cluster point pairs.
double fscore(const Labels& pred, const Labels& truth);

/// Maximum-weight perfect matching on a square matrix (Hungarian / Kuhn-Munkres).
/// Returns assignment[row] = column.
std::vector<Index> max_weight_assignment(const Matrix& weights);

}  // namespace ktrr
