#include "ktrr/error.hpp"
#include "ktrr/graph.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <set>

namespace ktrr {
namespace {

CoefficientMatrix thresholded(Matrix C) { return CoefficientMatrix(std::move(C), true, FactorizationPath::cholesky); }

TEST(BuildAffinity, ByHand) {
  Matrix C(2, 2);
  C << 0, 1, -2, 0;
  Matrix expect(2, 2);
  expect << 0, 3, 3, 0;
  EXPECT_EQ(build_affinity(thresholded(C)).values(), expect);
}

TEST(BuildAffinity, ZeroStaysZero) {
  EXPECT_EQ(build_affinity(thresholded(Matrix::Zero(4, 4))).values(), Matrix::Zero(4, 4));
}

TEST(BuildAffinity, ElementwiseOracle) {
  Rng rng(1);
  Matrix C = oracle::random_matrix(9, 9, rng);
  C.diagonal().setZero();
  const Matrix W = build_affinity(thresholded(C)).values();
  for (Index i = 0; i < 9; ++i) {
    for (Index j = 0; j < 9; ++j) {
      EXPECT_EQ(W(i, j), std::abs(C(i, j)) + std::abs(C(j, i)));
      EXPECT_EQ(W(i, j), W(j, i));
    }
  }
}

TEST(BuildAffinity, RejectsUnthresholded) {
  EXPECT_THROW(build_affinity(CoefficientMatrix(Matrix::Zero(2, 2), false, FactorizationPath::cholesky)),
               InvalidArgument);
}

TEST(AffinityMatrix, ValidatesInvariants) {
  Matrix asym(2, 2);
  asym << 0, 1, 2, 0;
  EXPECT_THROW(AffinityMatrix{asym}, InvalidArgument);
  Matrix neg(2, 2);
  neg << 0, -1, -1, 0;
  EXPECT_THROW(AffinityMatrix{neg}, InvalidArgument);
  EXPECT_THROW(AffinityMatrix{Matrix::Identity(2, 2)}, InvalidArgument);
  EXPECT_THROW(AffinityMatrix{Matrix::Zero(2, 3)}, InvalidArgument);
}

TEST(NormalizedLaplacian, TwoVertexGraph) {
  Matrix W(2, 2);
  W << 0, 1, 1, 0;
  Matrix expect(2, 2);
  expect << 1, -1, -1, 1;
  const auto L = normalized_laplacian(AffinityMatrix(W));
  EXPECT_LE((L.values - expect).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_TRUE(L.isolated.empty());
}

TEST(NormalizedLaplacian, SqrtDegreeVectorIsInNullSpace) {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const auto L = normalized_laplacian(AffinityMatrix(oracle::random_affinity(12, rng)));
    EXPECT_LE((L.values * L.degrees.cwiseSqrt()).norm(), 1e-10);
  }
}

TEST(NormalizedLaplacian, PsdOnRandomAffinities) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto L = normalized_laplacian(AffinityMatrix(oracle::random_affinity(15, rng)));
    Eigen::SelfAdjointEigenSolver<Matrix> es(L.values);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8);
  }
}

TEST(NormalizedLaplacian, TwoBlocksGiveTwoZeroEigenvalues) {
  Rng rng(4);
  const auto L = normalized_laplacian(AffinityMatrix(oracle::block_affinity({3, 3}, rng)));
  Eigen::SelfAdjointEigenSolver<Matrix> es(L.values);
  EXPECT_LE(es.eigenvalues()(1), 1e-10);
  EXPECT_GT(es.eigenvalues()(2), 1e-3);
}

TEST(NormalizedLaplacian, ZeroEigenvaluesCountComponents) {
  Rng rng(5);
  for (const std::vector<Index>& sizes : {std::vector<Index>{4, 5}, {3, 3, 3}, {2, 4, 3, 5, 2}}) {
    const Matrix W = oracle::block_affinity(sizes, rng);
    const auto L = normalized_laplacian(AffinityMatrix(W));
    Eigen::SelfAdjointEigenSolver<Matrix> es(L.values);
    Index zeros = 0;
    for (Index k = 0; k < es.eigenvalues().size(); ++k) zeros += es.eigenvalues()(k) <= 1e-8;
    EXPECT_EQ(zeros, oracle::connected_components(W));
  }
}

TEST(NormalizedLaplacian, FlagsIsolatedVertices) {
  Matrix W = Matrix::Zero(3, 3);
  W(0, 1) = W(1, 0) = 1.0;
  const auto L = normalized_laplacian(AffinityMatrix(W));
  ASSERT_EQ(L.isolated.size(), 1u);
  EXPECT_EQ(L.isolated[0], 2);
  EXPECT_EQ(L.degrees(2), 0.0);
  EXPECT_TRUE(L.values.allFinite());
  EXPECT_EQ(L.values(2, 2), 1.0);
}

TEST(SpectralEmbedding, TwoCliquesCollapseToTwoPoints) {
  Matrix W = Matrix::Zero(6, 6);
  for (Index b = 0; b < 2; ++b)
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 3; ++j)
        if (i != j) W(3 * b + i, 3 * b + j) = 1.0;
  const auto L = normalized_laplacian(AffinityMatrix(W));
  const auto E = spectral_embedding(L.values, 2);
  EXPECT_EQ(E.near_zero_eigenvalues, 2);
  for (Index b = 0; b < 2; ++b) {
    for (Index i = 1; i < 3; ++i) {
      EXPECT_LE((E.Y.row(3 * b + i) - E.Y.row(3 * b)).norm(), 1e-8);
    }
  }
  EXPECT_GT((E.Y.row(0) - E.Y.row(3)).norm(), 0.5);
  for (Index i = 0; i < 6; ++i) EXPECT_NEAR(E.Y.row(i).norm(), 1.0, 1e-12);
}

TEST(SpectralEmbedding, TwoByTwoSpectrum) {
  Matrix L(2, 2);
  L << 1, -1, -1, 1;
  const auto E = spectral_embedding(L, 2);
  EXPECT_NEAR(E.eigenvalues(0), 0.0, 1e-15);
  EXPECT_NEAR(E.eigenvalues(1), 2.0, 1e-14);
}

TEST(SpectralEmbedding, BasisIsOrthonormal) {
  Rng rng(6);
  const Matrix A = oracle::random_matrix(10, 10, rng);
  const Matrix L = A.transpose() * A;
  const auto E = spectral_embedding(L, 4);
  EXPECT_LE((E.basis.transpose() * E.basis - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE((L * E.basis - E.basis * E.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff(), 1e-8);
  for (Index k = 1; k < 4; ++k) EXPECT_LE(E.eigenvalues(k - 1), E.eigenvalues(k));
}

TEST(SpectralEmbedding, SignFixMakesLargestEntryPositive) {
  Rng rng(7);
  const Matrix A = oracle::random_matrix(8, 8, rng);
  const auto E = spectral_embedding(A.transpose() * A, 3);
  for (Index k = 0; k < 3; ++k) {
    Index arg;
    E.basis.col(k).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(E.basis(arg, k), 0.0);
  }
}

TEST(SpectralEmbedding, SkipZeroEigenvalues) {
  Rng rng(8);
  const auto L = normalized_laplacian(AffinityMatrix(oracle::block_affinity({4, 4}, rng)));
  const auto keep = spectral_embedding(L.values, 2, false);
  const auto skip = spectral_embedding(L.values, 2, true);
  EXPECT_LE(keep.eigenvalues.maxCoeff(), 1e-8);
  EXPECT_GT(skip.eigenvalues.minCoeff(), 1e-8);
}

TEST(SpectralEmbedding, Errors) {
  EXPECT_THROW(spectral_embedding(Matrix::Identity(3, 3), 4), InvalidArgument);
  EXPECT_THROW(spectral_embedding(Matrix::Identity(3, 3), 0), InvalidArgument);
  EXPECT_THROW(spectral_embedding(Matrix::Zero(2, 3), 1), InvalidArgument);
}

}  // namespace
}  // namespace ktrr
