#include "ktrr/pipeline.hpp"

#include "ktrr/error.hpp"

#include <chrono>
#include <utility>

namespace ktrr {
namespace {

template <typename F>
auto attributed(const char* step, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (!e.step().empty()) throw;
    throw Error(e.what(), step);
  } catch (const std::exception& e) {
    throw Error(e.what(), step);
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

PipelineResult cluster_pipeline(const DataMatrix& X, const PipelineOptions& options, bool keep_matrices) {
  const auto start = std::chrono::steady_clock::now();
  PipelineResult out;

  const KernelSpec kernel = attributed("kernel", [&] { return resolve_bandwidth(options.kernel, X); });
  if (uses_bandwidth(kernel.kind)) out.diagnostics.sigma = kernel.sigma;
  const KernelMatrix K = attributed("kernel", [&] { return compute_kernel_matrix(X, kernel); });
  const CoefficientMatrix C = attributed("solver", [&] { return fit_ktrr(K, options.regression); });
  out.diagnostics.factorization = C.factorization_path();
  const CoefficientMatrix T = attributed("threshold", [&] {
    return hard_threshold(C, options.regression.eta, options.threshold_mode);
  });
  AffinityMatrix W = attributed("affinity", [&] { return build_affinity(T); });
  out.graph_seconds = seconds_since(start);

  Laplacian L = attributed("laplacian", [&] { return normalized_laplacian(W); });
  out.diagnostics.isolated_vertices = L.isolated;
  SpectralEmbedding E = attributed("embedding", [&] {
    return spectral_embedding(L.values, options.num_clusters, options.skip_zero_eigs);
  });
  out.diagnostics.near_zero_eigenvalues = E.near_zero_eigenvalues;
  out.diagnostics.zero_embedding_rows = E.zero_rows;

  KMeansParams km = options.kmeans;
  km.k = options.num_clusters;
  Labeling labeling = attributed("kmeans", [&] { return kmeans(E.Y, km); });
  out.labels = std::move(labeling.labels);
  out.diagnostics.kmeans_inertia = labeling.inertia;
  out.total_seconds = seconds_since(start);

  if (keep_matrices) {
    out.affinity = std::move(W);
    out.embedding = std::move(E);
  }
  return out;
}

}  // namespace ktrr
