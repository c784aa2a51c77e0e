#include "ktrr/solver.hpp"

#include "ktrr/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace ktrr {
namespace {

std::atomic<std::uint64_t> g_factorizations{0};

// Relative residual of a probe solve. Eigen's LDLT reports success on some
// indefinite inputs where the result is garbage; this catches that.
template <typename Decomp>
bool solves_accurately(const Decomp& d, const Matrix& A) {
  const Index n = A.rows();
  Vector probe(n);
  for (Index i = 0; i < n; ++i) probe[i] = 1.0 + 0.5 * std::sin(static_cast<double>(i + 1));
  const Vector x = d.solve(probe);
  if (!x.allFinite()) return false;
  const double scale = A.lpNorm<Eigen::Infinity>() * x.lpNorm<Eigen::Infinity>() +
                       probe.lpNorm<Eigen::Infinity>();
  return (A * x - probe).lpNorm<Eigen::Infinity>() <= 1e-8 * scale;
}

}  // namespace

void RegressionParams::validate(Index n) const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("lambda must be a positive finite number");
  }
  if (eta < 1 || eta > n - 1) {
    throw InvalidArgument("eta must be in [1, n-1] = [1, " + std::to_string(n - 1) + "], got " +
                          std::to_string(eta));
  }
}

std::string_view to_string(FactorizationPath path) {
  switch (path) {
    case FactorizationPath::cholesky: return "cholesky";
    case FactorizationPath::ldlt: return "ldlt";
    case FactorizationPath::lu: return "lu";
  }
  return "unknown";
}

std::string_view to_string(ThresholdMode mode) {
  return mode == ThresholdMode::magnitude ? "magnitude" : "signed";
}

ThresholdMode parse_threshold_mode(std::string_view name) {
  if (name == "magnitude") return ThresholdMode::magnitude;
  if (name == "signed") return ThresholdMode::signed_value;
  throw InvalidArgument("unknown threshold mode '" + std::string(name) + "'");
}

std::uint64_t factorization_count() { return g_factorizations.load(); }

Vector Factorization::solve(const Eigen::Ref<const Vector>& rhs) const {
  return std::visit([&](const auto& d) -> Vector { return d.solve(rhs); }, impl_);
}

Matrix Factorization::solve_many(const Eigen::Ref<const Matrix>& rhs) const {
  return std::visit([&](const auto& d) -> Matrix { return d.solve(rhs); }, impl_);
}

Factorization factor_regularized_kernel(const KernelMatrix& K, double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  const Index n = K.size();
  if (n == 0) throw InvalidArgument("empty kernel matrix");

  Matrix A = K.values();
  A.diagonal().array() += lambda;
  g_factorizations.fetch_add(1);

  Factorization f;
  f.size_ = n;
  f.lambda_ = lambda;

  Eigen::LLT<Matrix> llt(A);
  if (llt.info() == Eigen::Success) {
    f.impl_ = std::move(llt);
    f.path_ = FactorizationPath::cholesky;
    return f;
  }
  Eigen::LDLT<Matrix> ldlt(A);
  if (ldlt.info() == Eigen::Success && solves_accurately(ldlt, A)) {
    f.impl_ = std::move(ldlt);
    f.path_ = FactorizationPath::ldlt;
    return f;
  }
  Eigen::FullPivLU<Matrix> lu(A);
  if (lu.isInvertible() && solves_accurately(lu, A)) {
    f.impl_ = std::move(lu);
    f.path_ = FactorizationPath::lu;
    return f;
  }
  throw DegenerateKernel("K + lambda I is singular (rank " + std::to_string(lu.rank()) + " of " +
                         std::to_string(n) + ")");
}

Vector solve_column(const Factorization& fact, const KernelMatrix& K, Index i) {
  const Index n = K.size();
  if (i < 0 || i >= n) throw InvalidArgument("column index out of range");
  if (fact.size() != n) throw InvalidArgument("factorization size does not match kernel");

  const Vector v = fact.solve(K.values().col(i));
  const Vector u = fact.solve(Vector::Unit(n, i));
  const double uii = u[i];
  if (uii == 0.0 || !std::isfinite(uii)) {
    throw DegenerateKernel("e_i' U e_i is zero for column " + std::to_string(i));
  }
  Vector c = v - u * (v[i] / uii);
  c[i] = 0.0;
  return c;
}

CoefficientMatrix fit_ktrr(const KernelMatrix& K, const RegressionParams& params) {
  const Index n = K.size();
  params.validate(n);
  const Factorization fact = factor_regularized_kernel(K, params.lambda);

  // Batched form of solve_column: U = (K + lambda I)^-1, V = U K.
  const Matrix U = fact.solve_many(Matrix::Identity(n, n));
  const Matrix V = U * K.values();
  Matrix C(n, n);
  for (Index i = 0; i < n; ++i) {
    const double uii = U(i, i);
    if (uii == 0.0 || !std::isfinite(uii)) {
      throw DegenerateKernel("e_i' U e_i is zero for column " + std::to_string(i));
    }
    C.col(i) = V.col(i) - U.col(i) * (V(i, i) / uii);
    C(i, i) = 0.0;
  }
  if (!C.allFinite()) throw NumericalError("coefficient matrix has non-finite entries");
  return CoefficientMatrix(std::move(C), false, fact.path());
}

void threshold_column(Eigen::Ref<Vector> column, int eta, ThresholdMode mode, Index exclude) {
  const Index n = column.size();
  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    if (j != exclude) order.push_back(j);
  }
  const auto key = [&](Index j) {
    return mode == ThresholdMode::magnitude ? std::abs(column[j]) : column[j];
  };
  const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(std::max(eta, 0)),
                                                 order.size());
  // Strict-weak ordering by descending key, then ascending index.
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                    [&](Index a, Index b) {
                      const double ka = key(a), kb = key(b);
                      if (ka != kb) return ka > kb;
                      return a < b;
                    });
  std::vector<bool> kept(static_cast<std::size_t>(n), false);
  for (std::size_t r = 0; r < keep; ++r) kept[static_cast<std::size_t>(order[r])] = true;
  for (Index j = 0; j < n; ++j) {
    if (!kept[static_cast<std::size_t>(j)]) column[j] = 0.0;
  }
}

CoefficientMatrix hard_threshold(const CoefficientMatrix& C, int eta, ThresholdMode mode) {
  if (C.thresholded()) throw InvalidArgument("coefficient matrix is already thresholded");
  const Index n = C.size();
  if (eta < 1 || eta > n - 1) {
    throw InvalidArgument("eta must be in [1, n-1] = [1, " + std::to_string(n - 1) + "]");
  }
  Matrix out = C.values();
  for (Index i = 0; i < n; ++i) {
    threshold_column(out.col(i), eta, mode, i);
    out(i, i) = 0.0;
  }
  return CoefficientMatrix(std::move(out), true, C.factorization_path());
}

double column_objective(const KernelMatrix& K, double lambda, Index i,
                        const Eigen::Ref<const Vector>& c) {
  const auto& k = K.values();
  return 0.5 * (k(i, i) - 2.0 * c.dot(k.col(i)) + c.dot(k * c)) + 0.5 * lambda * c.squaredNorm();
}

}  // namespace ktrr
