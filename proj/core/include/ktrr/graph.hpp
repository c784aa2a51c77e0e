#pragma once

#include "ktrr/solver.hpp"
#include "ktrr/types.hpp"

#include <vector>

namespace ktrr {

/// Symmetric nonnegative similarity with zero diagonal.
class AffinityMatrix {
 public:
  AffinityMatrix() = default;
  /// Checks shape, symmetry, nonnegativity and the zero diagonal.
  explicit AffinityMatrix(Matrix values);

  const Matrix& values() const { return values_; }
  Index size() const { return values_.rows(); }

 private:
  Matrix values_;
};

/// W = |C'| + |C|. Rejects unthresholded C.
AffinityMatrix build_affinity(const CoefficientMatrix& C);

struct Laplacian {
  Matrix values;  ///< I - D^-1/2 W D^-1/2
  Vector degrees;  ///< row sums of W before any guard
  std::vector<Index> isolated;  ///< vertices with zero degree
};

inline constexpr double kIsolatedDegree = 1e-12;

/// Normalized Laplacian. Isolated vertices use degree kIsolatedDegree and are
/// listed in `isolated`.
Laplacian normalized_laplacian(const AffinityMatrix& W);

struct SpectralEmbedding {
  Matrix Y;  ///< n x L, rows normalized to unit length
  Matrix basis;  ///< the same eigenvectors before row normalization (orthonormal columns)
  Vector eigenvalues;  ///< the L selected eigenvalues, ascending
  std::vector<Index> zero_rows;  ///< rows left at zero by normalization
  Index near_zero_eigenvalues = 0;  ///< count of spectrum entries <= kZeroEigenvalueTol
};

inline constexpr double kZeroEigenvalueTol = 1e-8;

/// Eigenvectors of the `num_clusters` smallest eigenvalues of L, sign-fixed so
/// the largest-magnitude entry is positive, then row-normalized. With
/// `skip_zero_eigs`, eigenvalues <= kZeroEigenvalueTol are passed over.
SpectralEmbedding spectral_embedding(const Matrix& L, Index num_clusters,
                                     bool skip_zero_eigs = false);

}  // namespace ktrr
