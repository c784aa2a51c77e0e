#pragma once

#include "ktrr/graph.hpp"
#include "ktrr/kernels.hpp"
#include "ktrr/kmeans.hpp"
#include "ktrr/solver.hpp"

#include <optional>
#include <vector>

namespace ktrr {

struct PipelineOptions {
  KernelSpec kernel;
  RegressionParams regression;
  ThresholdMode threshold_mode = ThresholdMode::magnitude;
  Index num_clusters = 2;
  bool skip_zero_eigs = false;
  /// k is overwritten with num_clusters.
  KMeansParams kmeans;
};

struct PipelineDiagnostics {
  FactorizationPath factorization = FactorizationPath::cholesky;
  /// Resolved bandwidth; empty for kinds that ignore it.
  std::optional<double> sigma;
  Index near_zero_eigenvalues = 0;
  std::vector<Index> isolated_vertices;
  std::vector<Index> zero_embedding_rows;
  double kmeans_inertia = 0.0;
};

struct PipelineResult {
  Labels labels;
  PipelineDiagnostics diagnostics;
  /// Kernel, solver, thresholding and affinity (the similarity graph).
  double graph_seconds = 0.0;
  double total_seconds = 0.0;
  /// Filled only when requested.
  std::optional<AffinityMatrix> affinity;
  std::optional<SpectralEmbedding> embedding;
};

/// Kernel matrix -> closed-form codes -> thresholding -> affinity ->
/// normalized Laplacian -> spectral embedding -> k-means. Errors are rethrown
/// as ktrr::Error with the failing step in `step()`.
PipelineResult cluster_pipeline(const DataMatrix& X, const PipelineOptions& options,
                                bool keep_matrices = false);

}  // namespace ktrr
