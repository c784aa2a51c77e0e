#include "ktrr/kernels.hpp"

#include "ktrr/error.hpp"
#include "ktrr/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

namespace ktrr {
namespace {

constexpr std::array<std::pair<KernelKind, std::string_view>, 8> kKindNames{{
    {KernelKind::gaussian, "gaussian"},
    {KernelKind::heat, "heat"},
    {KernelKind::poly2, "poly2"},
    {KernelKind::poly3, "poly3"},
    {KernelKind::exponential, "exponential"},
    {KernelKind::inv_dist, "inv_dist"},
    {KernelKind::inv_dist_sq, "inv_dist_sq"},
    {KernelKind::linear, "linear"},
}};

double squared_distance(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) {
  double s = 0.0;
  for (Index k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    s += d * d;
  }
  return s;
}

}  // namespace

std::string_view to_string(KernelKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

KernelKind parse_kernel_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw InvalidArgument("unknown kernel kind '" + std::string(name) + "'");
}

bool uses_bandwidth(KernelKind kind) {
  return kind == KernelKind::gaussian || kind == KernelKind::heat ||
         kind == KernelKind::exponential;
}

bool is_singular(KernelKind kind) {
  return kind == KernelKind::inv_dist || kind == KernelKind::inv_dist_sq;
}

KernelMatrix::KernelMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() != values_.cols()) {
    throw InvalidArgument("kernel matrix must be square");
  }
}

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Vector>& x,
                   const Eigen::Ref<const Vector>& y) {
  if (x.size() != y.size()) {
    throw InvalidArgument("kernel_eval: dimension mismatch (" + std::to_string(x.size()) +
                          " vs " + std::to_string(y.size()) + ")");
  }
  if (!spec.resolved()) {
    throw InvalidArgument("kernel_eval: bandwidth is \"auto\" and has not been resolved");
  }
  if (uses_bandwidth(spec.kind) && !(*spec.sigma > 0.0)) {
    throw InvalidArgument("kernel_eval: bandwidth must be positive");
  }

  switch (spec.kind) {
    case KernelKind::gaussian: {
      const double s = *spec.sigma;
      return std::exp(-squared_distance(x, y) / (s * s));
    }
    case KernelKind::heat: {
      const double s = *spec.sigma;
      return std::exp(-squared_distance(x, y) / (2.0 * s * s));
    }
    case KernelKind::exponential:
      return std::exp(-std::sqrt(squared_distance(x, y)) / *spec.sigma);
    case KernelKind::poly2: {
      const double d = x.dot(y);
      return d * d;
    }
    case KernelKind::poly3: {
      const double d = x.dot(y);
      return d * d * d;
    }
    case KernelKind::linear:
      return x.dot(y);
    case KernelKind::inv_dist: {
      const double d = std::max(std::sqrt(squared_distance(x, y)), spec.diag_guard);
      return 1.0 / d;
    }
    case KernelKind::inv_dist_sq: {
      const double d = std::max(std::sqrt(squared_distance(x, y)), spec.diag_guard);
      return 1.0 / (d * d);
    }
  }
  throw InvalidArgument("kernel_eval: unknown kernel kind");
}

double default_bandwidth(const DataMatrix& X) {
  const Index n = X.cols();
  if (n < 2) throw InvalidArgument("default_bandwidth needs at least 2 samples");
  // Per-row partial sums keep the reduction order fixed regardless of threads.
  Vector row_sums = Vector::Zero(n);
#pragma omp parallel for schedule(dynamic, 16) num_threads(max_threads())
  for (Index i = 0; i < n; ++i) {
    double s = 0.0;
    for (Index j = i + 1; j < n; ++j) s += std::sqrt(squared_distance(X.col(i), X.col(j)));
    row_sums[i] = s;
  }
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return row_sums.sum() / pairs;
}

KernelSpec resolve_bandwidth(KernelSpec spec, const DataMatrix& X) {
  if (uses_bandwidth(spec.kind) && !spec.sigma) {
    const double s = default_bandwidth(X);
    if (!(s > 0.0)) {
      throw InvalidArgument("auto bandwidth is zero (all samples identical)");
    }
    spec.sigma = s;
  }
  return spec;
}

KernelMatrix compute_kernel_matrix(const DataMatrix& X, const KernelSpec& spec) {
  const Index n = X.cols();
  if (n < 2) throw InvalidArgument("compute_kernel_matrix needs at least 2 samples");
  const KernelSpec resolved = resolve_bandwidth(spec, X);
  // Validate once up front so the parallel loop cannot throw.
  (void)kernel_eval(resolved, X.col(0), X.col(0));

  Matrix K(n, n);
#pragma omp parallel for schedule(dynamic, 8) num_threads(max_threads())
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i <= j; ++i) {
      K(i, j) = kernel_eval(resolved, X.col(i), X.col(j));
    }
  }
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) K(i, j) = K(j, i);
  }
  if (!K.allFinite()) {
    throw NumericalError("kernel matrix has non-finite entries");
  }
  return KernelMatrix(std::move(K));
}

}  // namespace ktrr
