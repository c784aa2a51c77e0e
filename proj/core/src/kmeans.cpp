#include "ktrr/kmeans.hpp"

#include "ktrr/error.hpp"
#include "ktrr/parallel.hpp"
#include "ktrr/rng.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace ktrr {
namespace {

double sq_dist(const Matrix& points, Index row, const Matrix& centers, Index c) {
  return (points.row(row) - centers.row(c)).squaredNorm();
}

Matrix seed_plus_plus(const Matrix& points, Index k, Rng& rng) {
  const Index n = points.rows();
  Matrix centers(k, points.cols());
  centers.row(0) = points.row(static_cast<Index>(rng.below(static_cast<std::uint64_t>(n))));
  Vector d2(n);
  for (Index i = 0; i < n; ++i) d2[i] = sq_dist(points, i, centers, 0);

  for (Index c = 1; c < k; ++c) {
    const double total = d2.sum();
    Index pick = n - 1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (Index i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    }
    centers.row(c) = points.row(pick);
    for (Index i = 0; i < n; ++i) d2[i] = std::min(d2[i], sq_dist(points, i, centers, c));
  }
  return centers;
}

// Assigns each point to its nearest center; returns the inertia.
double assign(const Matrix& points, const Matrix& centers, Labels& labels, Vector& dist) {
  const Index n = points.rows(), k = centers.rows();
  double inertia = 0.0;
  for (Index i = 0; i < n; ++i) {
    int best = 0;
    double best_d = sq_dist(points, i, centers, 0);
    for (Index c = 1; c < k; ++c) {
      const double d = sq_dist(points, i, centers, c);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    labels[static_cast<std::size_t>(i)] = best;
    dist[i] = best_d;
    inertia += best_d;
  }
  return inertia;
}

// Moves the farthest point of a multi-member cluster into each empty cluster.
// Moving a point onto its own new centroid can only lower the inertia.
int repair_empty(const Matrix& points, Matrix& centers, Labels& labels, Vector& dist, Index k) {
  const Index n = points.rows();
  int repairs = 0;
  std::vector<Index> sizes(static_cast<std::size_t>(k), 0);
  for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
  for (Index c = 0; c < k; ++c) {
    if (sizes[static_cast<std::size_t>(c)] > 0) continue;
    Index far = -1;
    double far_d = -1.0;
    for (Index i = 0; i < n; ++i) {
      if (sizes[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] > 1 &&
          dist[i] > far_d) {
        far_d = dist[i];
        far = i;
      }
    }
    if (far < 0) break;  // n < k cannot happen; kept for safety of the loop
    --sizes[static_cast<std::size_t>(labels[static_cast<std::size_t>(far)])];
    labels[static_cast<std::size_t>(far)] = static_cast<int>(c);
    ++sizes[static_cast<std::size_t>(c)];
    centers.row(c) = points.row(far);
    dist[far] = 0.0;
    ++repairs;
  }
  return repairs;
}

void update_centers(const Matrix& points, const Labels& labels, Matrix& centers) {
  const Index k = centers.rows();
  Matrix sums = Matrix::Zero(k, points.cols());
  std::vector<Index> counts(static_cast<std::size_t>(k), 0);
  for (Index i = 0; i < points.rows(); ++i) {
    const int l = labels[static_cast<std::size_t>(i)];
    sums.row(l) += points.row(i);
    ++counts[static_cast<std::size_t>(l)];
  }
  for (Index c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0) {
      centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
    }
  }
}

struct RunResult {
  Labels labels;
  RestartTrace trace;
};

RunResult run_once(const Matrix& points, const KMeansParams& params, std::uint64_t stream) {
  const Index n = points.rows(), k = params.k;
  Rng rng(stream);
  Matrix centers = seed_plus_plus(points, k, rng);
  RunResult r;
  r.labels.assign(static_cast<std::size_t>(n), 0);
  Vector dist(n);

  double inertia = assign(points, centers, r.labels, dist);
  r.trace.empty_repairs += repair_empty(points, centers, r.labels, dist, k);
  inertia = dist.sum();
  r.trace.history.push_back(inertia);

  for (int it = 0; it < params.max_iters; ++it) {
    update_centers(points, r.labels, centers);
    double next = assign(points, centers, r.labels, dist);
    const int repairs = repair_empty(points, centers, r.labels, dist, k);
    if (repairs > 0) {
      r.trace.empty_repairs += repairs;
      next = dist.sum();
    }
    r.trace.history.push_back(next);
    r.trace.iterations = it + 1;
    const double improvement = inertia - next;
    inertia = next;
    if (improvement <= params.tol * std::max(inertia + improvement, 0.0)) break;
  }
  // Report the exact inertia of the final partition (centroids = group means).
  r.trace.inertia = inertia_of(points, r.labels, k);
  return r;
}

}  // namespace

double inertia_of(const Matrix& points, const Labels& labels, Index k) {
  Matrix centers = Matrix::Zero(k, points.cols());
  update_centers(points, labels, centers);
  double s = 0.0;
  for (Index i = 0; i < points.rows(); ++i) {
    s += sq_dist(points, i, centers, labels[static_cast<std::size_t>(i)]);
  }
  return s;
}

Labeling kmeans(const Matrix& points, const KMeansParams& params, std::vector<RestartTrace>* trace) {
  const Index n = points.rows();
  if (n == 0 || points.cols() == 0) throw InvalidArgument("kmeans: empty input");
  if (params.k < 1) throw InvalidArgument("kmeans: k must be >= 1");
  if (params.k > n) {
    throw InvalidArgument("kmeans: k=" + std::to_string(params.k) + " exceeds the number of points " +
                          std::to_string(n));
  }
  if (params.restarts < 1) throw InvalidArgument("kmeans: restarts must be >= 1");
  if (params.max_iters < 0) throw InvalidArgument("kmeans: max_iters must be >= 0");
  if (!points.allFinite()) throw InvalidArgument("kmeans: non-finite input");

  const int R = params.restarts;
  std::vector<RunResult> runs(static_cast<std::size_t>(R));
#pragma omp parallel for schedule(dynamic, 1) num_threads(max_threads())
  for (int r = 0; r < R; ++r) {
    runs[static_cast<std::size_t>(r)] =
        run_once(points, params, derive_seed(params.seed, static_cast<std::uint64_t>(r), "kmeans"));
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].trace.inertia < runs[best].trace.inertia) best = r;
  }
  Labeling out{runs[best].labels, runs[best].trace.inertia};
  if (trace) {
    trace->clear();
    trace->reserve(runs.size());
    for (auto& run : runs) trace->push_back(std::move(run.trace));
  }
  return out;
}

}  // namespace ktrr
