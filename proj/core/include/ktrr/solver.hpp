#pragma once

#include "ktrr/kernels.hpp"
#include "ktrr/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <cstdint>
#include <string_view>
#include <variant>

namespace ktrr {

/// Ridge tradeoff and the number of coefficients kept per column.
struct RegressionParams {
  double lambda = 0.1;
  int eta = 5;

  /// Throws InvalidArgument unless lambda > 0 and 1 <= eta <= n-1.
  void validate(Index n) const;
};

enum class FactorizationPath { cholesky, ldlt, lu };
std::string_view to_string(FactorizationPath path);

/// Factorization of (K + lambda I), shared by all column solves.
class Factorization {
 public:
  Vector solve(const Eigen::Ref<const Vector>& rhs) const;
  Matrix solve_many(const Eigen::Ref<const Matrix>& rhs) const;

  FactorizationPath path() const { return path_; }
  Index size() const { return size_; }
  double lambda() const { return lambda_; }

 private:
  friend Factorization factor_regularized_kernel(const KernelMatrix& K, double lambda);

  std::variant<Eigen::LLT<Matrix>, Eigen::LDLT<Matrix>, Eigen::FullPivLU<Matrix>> impl_;
  FactorizationPath path_ = FactorizationPath::cholesky;
  Index size_ = 0;
  double lambda_ = 0.0;
};

/// Number of factorizations performed by this process so far. Instrumentation
/// for the one-factorization-per-fit guarantee.
std::uint64_t factorization_count();

/// Factorizes K + lambda I: Cholesky first, then pivoted LDL', then full-pivot
/// LU. Throws DegenerateKernel if none yields a usable factorization.
Factorization factor_regularized_kernel(const KernelMatrix& K, double lambda);

/// Self-expression codes, column i holds c_i. The diagonal is exactly zero.
class CoefficientMatrix {
 public:
  CoefficientMatrix() = default;
  CoefficientMatrix(Matrix values, bool thresholded, FactorizationPath path)
      : values_(std::move(values)), thresholded_(thresholded), path_(path) {}

  const Matrix& values() const { return values_; }
  Index size() const { return values_.cols(); }
  bool thresholded() const { return thresholded_; }
  FactorizationPath factorization_path() const { return path_; }

 private:
  Matrix values_;
  bool thresholded_ = false;
  FactorizationPath path_ = FactorizationPath::cholesky;
};

/// Closed-form code for point i:
///   v = U k_i,  c_i = v - U e_i (v_i / U_ii),  U = (K + lambda I)^-1
/// with c_i[i] set to exactly zero afterwards.
Vector solve_column(const Factorization& fact, const KernelMatrix& K, Index i);

/// All columns from one factorization. Unthresholded.
CoefficientMatrix fit_ktrr(const KernelMatrix& K, const RegressionParams& params);

enum class ThresholdMode {
  magnitude,  ///< keep the eta entries of largest |c|
  signed_value,  ///< keep the eta largest signed entries
};
std::string_view to_string(ThresholdMode mode);
ThresholdMode parse_threshold_mode(std::string_view name);

/// Keeps the `eta` winning entries of `column` (ties go to the lowest index)
/// and zeroes the rest. `exclude` (if >= 0) is never selected.
void threshold_column(Eigen::Ref<Vector> column, int eta, ThresholdMode mode, Index exclude = -1);

/// Applies threshold_column to each column, excluding its own index.
CoefficientMatrix hard_threshold(const CoefficientMatrix& C, int eta,
                                 ThresholdMode mode = ThresholdMode::magnitude);

/// 1/2 (K_ii - 2 c'k_i + c'Kc) + lambda/2 c'c, the kernel-space objective of column i.
double column_objective(const KernelMatrix& K, double lambda, Index i,
                        const Eigen::Ref<const Vector>& c);

}  // namespace ktrr
