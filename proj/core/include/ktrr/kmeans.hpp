#pragma once

#include "ktrr/types.hpp"

#include <cstdint>
#include <vector>

namespace ktrr {

struct KMeansParams {
  Index k = 2;
  int restarts = 500;
  int max_iters = 100;
  std::uint64_t seed = 0;
  /// Stop once the relative inertia improvement drops below this.
  double tol = 1e-9;
};

struct Labeling {
  Labels labels;
  /// Sum of squared distances from each point to its centroid.
  double inertia = 0.0;
};

/// Diagnostics for one restart.
struct RestartTrace {
  double inertia = 0.0;
  int iterations = 0;
  /// Inertia after each assignment step, starting with the seeded centroids.
  std::vector<double> history;
  int empty_repairs = 0;
};

/// Restarted k-means (k-means++ seeding, Lloyd iterations) over the rows of
/// `points`. Returns the lowest-inertia restart; ties go to the lowest restart
/// index. Each restart draws from its own stream derived from `params.seed`,
/// so the result does not depend on scheduling. When `trace` is non-null it
/// receives one entry per restart.
Labeling kmeans(const Matrix& points, const KMeansParams& params,
                std::vector<RestartTrace>* trace = nullptr);

/// Sum of squared distances of rows to the mean of their label group.
double inertia_of(const Matrix& points, const Labels& labels, Index k);

}  // namespace ktrr
