#include "ktrr/corruption.hpp"
#include "ktrr/error.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

namespace ktrr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DataMatrix interior(Index m, Index n, Rng& rng) {
  DataMatrix X(m, n);
  for (Index k = 0; k < X.size(); ++k) X.data()[k] = 0.1 + 0.8 * rng.uniform();
  return X;
}

TEST(GaussianSnr, NoneAndInfiniteSnrAreNoOps) {
  Rng rng(1);
  const DataMatrix X = interior(5, 6, rng);
  EXPECT_EQ(apply_corruption(X, {}), X);
  CorruptionSpec s{CorruptionKind::gaussian_snr};
  EXPECT_EQ(add_gaussian_snr(X, s), X);
}

TEST(GaussianSnr, TenDecibelNoisePower) {
  Rng rng(2);
  const DataMatrix X = oracle::random_matrix(200, 600, rng);
  CorruptionSpec s{CorruptionKind::gaussian_snr, 10.0, 0.0, -kInf, kInf, 77};
  CorruptionStats st;
  const DataMatrix Y = add_gaussian_snr(X, s, &st);
  EXPECT_EQ(st.clipped, 0);
  const double ratio = (Y - X).squaredNorm() / X.squaredNorm();
  EXPECT_GE(ratio, 0.095);
  EXPECT_LE(ratio, 0.105);
}

TEST(GaussianSnr, ZeroDecibelOnConstantMatrix) {
  const double c = 0.4;
  const DataMatrix X = DataMatrix::Constant(300, 400, c);
  CorruptionSpec s{CorruptionKind::gaussian_snr, 0.0, 0.0, -kInf, kInf, 5};
  CorruptionStats st;
  const DataMatrix Y = add_gaussian_snr(X, s, &st);
  EXPECT_NEAR(st.noise_variance, c * c, 1e-12 * c * c);
  EXPECT_NEAR((Y - X).squaredNorm() / static_cast<double>(X.size()), c * c, 0.02 * c * c);
}

TEST(GaussianSnr, OutputClippedToRange) {
  Rng rng(3);
  const DataMatrix X = interior(40, 50, rng);
  CorruptionSpec s{CorruptionKind::gaussian_snr, 0.0, 0.0, 0.0, 1.0, 9};
  CorruptionStats st;
  const DataMatrix Y = add_gaussian_snr(X, s, &st);
  EXPECT_EQ(Y.rows(), X.rows());
  EXPECT_EQ(Y.cols(), X.cols());
  EXPECT_GE(Y.minCoeff(), 0.0);
  EXPECT_LE(Y.maxCoeff(), 1.0);
  EXPECT_GT(st.clipped, 0);
}

TEST(GaussianSnr, ZeroSignalPowerIsAnError) {
  CorruptionSpec s{CorruptionKind::gaussian_snr, 20.0};
  EXPECT_THROW(add_gaussian_snr(DataMatrix::Zero(3, 3), s), InvalidArgument);
}

TEST(GaussianSnr, Deterministic) {
  Rng rng(4);
  const DataMatrix X = interior(10, 10, rng);
  CorruptionSpec s{CorruptionKind::gaussian_snr, 15.0, 0.0, 0.0, 1.0, 31};
  EXPECT_EQ(add_gaussian_snr(X, s), add_gaussian_snr(X, s));
  CorruptionSpec t = s;
  t.seed = 32;
  EXPECT_NE(add_gaussian_snr(X, s), add_gaussian_snr(X, t));
}

TEST(SaltPepper, ZeroRatioIsNoOp) {
  Rng rng(5);
  const DataMatrix X = interior(7, 9, rng);
  EXPECT_EQ(add_salt_pepper(X, {CorruptionKind::salt_pepper, kInf, 0.0}), X);
}

TEST(SaltPepper, FullRatioHitsEveryEntry) {
  Rng rng(6);
  const DataMatrix X = interior(7, 9, rng);
  const DataMatrix Y = add_salt_pepper(X, {CorruptionKind::salt_pepper, kInf, 1.0, 0.0, 1.0, 3});
  for (Index k = 0; k < Y.size(); ++k) EXPECT_TRUE(Y.data()[k] == 0.0 || Y.data()[k] == 1.0);
}

TEST(SaltPepper, ExactCountOfChangedEntries) {
  Rng rng(7);
  const DataMatrix X = interior(13, 17, rng);
  CorruptionStats st;
  const DataMatrix Y = add_salt_pepper(X, {CorruptionKind::salt_pepper, kInf, 0.25, 0.0, 1.0, 8}, &st);
  const Index expect = static_cast<Index>(std::floor(0.25 * 13 * 17));
  EXPECT_EQ(st.changed_positions, expect);
  EXPECT_EQ((Y.array() != X.array()).count(), expect);
}

TEST(SaltPepper, PositionsAtBoundsStillCount) {
  // Every entry already at a bound: values may not change, positions still do.
  const DataMatrix X = DataMatrix::Ones(10, 10);
  CorruptionStats st;
  (void)add_salt_pepper(X, {CorruptionKind::salt_pepper, kInf, 0.3, 0.0, 1.0, 2}, &st);
  EXPECT_EQ(st.changed_positions, 30);
}

TEST(SaltPepper, Deterministic) {
  Rng rng(8);
  const DataMatrix X = interior(6, 6, rng);
  CorruptionSpec s{CorruptionKind::salt_pepper, kInf, 0.5, 0.0, 1.0, 4};
  EXPECT_EQ(add_salt_pepper(X, s), add_salt_pepper(X, s));
}

TEST(CorruptionSpec, Validation) {
  EXPECT_THROW((CorruptionSpec{CorruptionKind::salt_pepper, kInf, 1.5}.validate()), InvalidArgument);
  EXPECT_THROW((CorruptionSpec{CorruptionKind::salt_pepper, kInf, 0.1, 1.0, 1.0}.validate()), InvalidArgument);
  EXPECT_EQ(parse_corruption_kind(to_string(CorruptionKind::gaussian_snr)), CorruptionKind::gaussian_snr);
  EXPECT_THROW(parse_corruption_kind("speckle"), InvalidArgument);
}

}  // namespace
}  // namespace ktrr
