#include "ktrr/graph.hpp"

#include "ktrr/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>
#include <string>

namespace ktrr {

AffinityMatrix::AffinityMatrix(Matrix values) : values_(std::move(values)) {
  const Index n = values_.rows();
  if (values_.cols() != n) throw InvalidArgument("affinity must be square");
  for (Index j = 0; j < n; ++j) {
    if (values_(j, j) != 0.0) throw InvalidArgument("affinity diagonal must be zero");
    for (Index i = 0; i < n; ++i) {
      const double w = values_(i, j);
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw InvalidArgument("affinity entries must be finite and nonnegative");
      }
      if (w != values_(j, i)) throw InvalidArgument("affinity must be exactly symmetric");
    }
  }
}

AffinityMatrix build_affinity(const CoefficientMatrix& C) {
  if (!C.thresholded()) {
    throw InvalidArgument("build_affinity requires a thresholded coefficient matrix");
  }
  const Matrix& c = C.values();
  const Index n = c.rows();
  Matrix W(n, n);
  for (Index j = 0; j < n; ++j) {
    W(j, j) = 0.0;
    for (Index i = j + 1; i < n; ++i) {
      const double w = std::abs(c(i, j)) + std::abs(c(j, i));
      W(i, j) = w;
      W(j, i) = w;
    }
  }
  return AffinityMatrix(std::move(W));
}

Laplacian normalized_laplacian(const AffinityMatrix& W) {
  const Matrix& w = W.values();
  const Index n = w.rows();
  Laplacian out;
  out.degrees = w.rowwise().sum();
  Vector inv_sqrt(n);
  for (Index i = 0; i < n; ++i) {
    double d = out.degrees[i];
    if (d <= 0.0) {
      out.isolated.push_back(i);
      d = kIsolatedDegree;
    }
    inv_sqrt[i] = 1.0 / std::sqrt(d);
  }
  out.values.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    out.values(j, j) = 1.0 - w(j, j) * inv_sqrt[j] * inv_sqrt[j];
    for (Index i = j + 1; i < n; ++i) {
      const double v = -w(i, j) * inv_sqrt[i] * inv_sqrt[j];
      out.values(i, j) = v;
      out.values(j, i) = v;
    }
  }
  return out;
}

SpectralEmbedding spectral_embedding(const Matrix& L, Index num_clusters, bool skip_zero_eigs) {
  const Index n = L.rows();
  if (L.cols() != n) throw InvalidArgument("Laplacian must be square");
  if (num_clusters < 1 || num_clusters > n) {
    throw InvalidArgument("num_clusters must be in [1, n], got " + std::to_string(num_clusters));
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(L);
  if (eig.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "eigensolver did not converge (n=" << n << ", |L|_F=" << L.norm()
        << ", asymmetry=" << (L - L.transpose()).cwiseAbs().maxCoeff() << ")";
    throw NumericalError(msg.str());
  }
  const Vector& values = eig.eigenvalues();
  const Matrix& vectors = eig.eigenvectors();

  SpectralEmbedding out;
  for (Index k = 0; k < n; ++k) {
    if (values[k] <= kZeroEigenvalueTol) ++out.near_zero_eigenvalues;
  }
  const Index first = skip_zero_eigs ? out.near_zero_eigenvalues : 0;
  if (first + num_clusters > n) {
    throw NumericalError("not enough nonzero eigenvalues: " + std::to_string(n - first) +
                         " available, " + std::to_string(num_clusters) + " requested");
  }

  out.Y = vectors.middleCols(first, num_clusters);
  out.eigenvalues = values.segment(first, num_clusters);
  // Clamp round-off below zero; the normalized Laplacian is PSD.
  for (Index k = 0; k < num_clusters; ++k) {
    if (out.eigenvalues[k] < 0.0 && out.eigenvalues[k] >= -kZeroEigenvalueTol) {
      out.eigenvalues[k] = 0.0;
    }
  }

  for (Index k = 0; k < num_clusters; ++k) {
    Index arg = 0;
    double best = -1.0;
    for (Index i = 0; i < n; ++i) {
      const double a = std::abs(out.Y(i, k));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (out.Y(arg, k) < 0.0) out.Y.col(k) = -out.Y.col(k);
  }

  out.basis = out.Y;
  for (Index i = 0; i < n; ++i) {
    const double norm = out.Y.row(i).norm();
    if (norm > 0.0) {
      out.Y.row(i) /= norm;
    } else {
      out.zero_rows.push_back(i);
    }
  }
  return out;
}

}  // namespace ktrr
