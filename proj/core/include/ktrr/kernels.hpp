#pragma once

#include "ktrr/types.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace ktrr {

enum class KernelKind {
  gaussian,     ///< exp(-|x-y|^2 / s^2)
  heat,         ///< exp(-|x-y|^2 / (2 s^2))
  poly2,        ///< (x'y)^2
  poly3,        ///< (x'y)^3
  exponential,  ///< exp(-|x-y| / s)
  inv_dist,     ///< 1 / |x-y|
  inv_dist_sq,  ///< 1 / |x-y|^2
  linear,       ///< x'y
};

std::string_view to_string(KernelKind kind);
KernelKind parse_kernel_kind(std::string_view name);

/// True for kinds that read the bandwidth.
bool uses_bandwidth(KernelKind kind);

/// True for the kinds that are singular at zero distance.
bool is_singular(KernelKind kind);

struct KernelSpec {
  KernelKind kind = KernelKind::gaussian;
  /// Bandwidth s. Empty means "auto" (mean pairwise distance of the data).
  std::optional<double> sigma;
  /// Distances below this are clamped before inversion (inv_dist kinds).
  double diag_guard = 1e-8;

  bool resolved() const { return !uses_bandwidth(kind) || sigma.has_value(); }
};

/// Dense symmetric n x n matrix of kernel evaluations.
class KernelMatrix {
 public:
  KernelMatrix() = default;
  explicit KernelMatrix(Matrix values);

  const Matrix& values() const { return values_; }
  Index size() const { return values_.rows(); }
  double operator()(Index i, Index j) const { return values_(i, j); }

 private:
  Matrix values_;
};

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Vector>& x,
                   const Eigen::Ref<const Vector>& y);

/// Mean Euclidean distance over the n(n-1)/2 distinct column pairs.
double default_bandwidth(const DataMatrix& X);

/// Returns `spec` with an "auto" bandwidth replaced by default_bandwidth(X).
KernelSpec resolve_bandwidth(KernelSpec spec, const DataMatrix& X);

/// K_ij = kernel_eval(spec, x_i, x_j). Resolves "auto" against X. The upper
/// triangle is computed and mirrored, so K is exactly symmetric.
KernelMatrix compute_kernel_matrix(const DataMatrix& X, const KernelSpec& spec);

}  // namespace ktrr
