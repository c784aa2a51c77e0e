#include "ktrr/dataio.hpp"
#include "ktrr/error.hpp"
#include "ktrr/synthetic.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <map>

namespace ktrr {
namespace {

namespace fs = std::filesystem;

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("ktrr_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }

  fs::path dir_;
};

using Csv = TempDir;
using Idx = TempDir;

TEST_F(Csv, TwoRowFile) {
  const auto ds = load_csv(write("a.csv", "0,0,1\n1,1,2\n"));
  Matrix expect(2, 2);
  expect << 0, 1, 0, 1;
  EXPECT_EQ(ds.X, expect);
  EXPECT_EQ(ds.truth, (Labels{0, 1}));
  EXPECT_EQ(ds.class_ids, (std::vector<long long>{1, 2}));
}

TEST_F(Csv, EmptyFileHasNoSamples) {
  try {
    load_csv(write("e.csv", ""));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("no samples"), std::string::npos);
  }
}

TEST_F(Csv, HeaderIsSkipped) {
  const auto ds = load_csv(write("h.csv", "f1,f2,label\n0.5,0.25,3\n0,1,3\n"));
  EXPECT_EQ(ds.size(), 2);
  EXPECT_EQ(ds.num_classes(), 1);
}

TEST_F(Csv, LabelColumnFirst) {
  const auto ds = load_csv(write("l.csv", "7,0.5,0.25\n9,0,1\n"), 0);
  EXPECT_EQ(ds.X(0, 0), 0.5);
  EXPECT_EQ(ds.class_ids, (std::vector<long long>{7, 9}));
}

TEST_F(Csv, OutOfRangeValuesAreRescaled) {
  const auto ds = load_csv(write("r.csv", "-2,2,0\n0,6,1\n"));
  EXPECT_EQ(ds.original_min, -2.0);
  EXPECT_EQ(ds.original_max, 6.0);
  EXPECT_EQ(ds.X.minCoeff(), 0.0);
  EXPECT_EQ(ds.X.maxCoeff(), 1.0);
  EXPECT_EQ(ds.X(1, 0), 0.5);
}

TEST_F(Csv, ErrorsCarryLocation) {
  try {
    load_csv(write("b.csv", "0,0,1\n0,x,1\n"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(":2: column 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(load_csv(write("w.csv", "0,0,1\n0,1\n")), ParseError);
  EXPECT_THROW(load_csv(write("f.csv", "0,0,1.5\n")), ParseError);
  EXPECT_THROW(load_csv(dir_ / "missing.csv"), IoError);
}

TEST_F(Csv, RoundTrip) {
  Rng rng(1);
  Dataset ds;
  ds.X = DataMatrix(4, 9);
  for (Index k = 0; k < ds.X.size(); ++k) ds.X.data()[k] = rng.uniform();
  reindex_labels(ds, {5, 5, 2, 2, 9, 9, 5, 2, 9});
  save_csv(ds, dir_ / "rt.csv");
  const auto back = load_csv(dir_ / "rt.csv");
  EXPECT_LE((back.X - ds.X).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(back.truth, ds.truth);
  EXPECT_EQ(back.class_ids, ds.class_ids);
}

TEST_F(Csv, IdenticalFilesGiveIdenticalDatasets) {
  const auto a = load_csv(write("x.csv", "1,2,0\n3,4,1\n"));
  const auto b = load_csv(write("y.csv", "1,2,0\n3,4,1\n"));
  EXPECT_EQ(a.X, b.X);
  EXPECT_EQ(a.truth, b.truth);
}

std::string be32(std::uint32_t v) {
  return {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8), static_cast<char>(v)};
}

TEST_F(Idx, SingleImage) {
  const auto img = write("i", be32(kIdxImagesMagic) + be32(1) + be32(2) + be32(2) + std::string("\x00\xff\x00\xff", 4));
  const auto lab = write("l", be32(kIdxLabelsMagic) + be32(1) + std::string("\x03", 1));
  const auto ds = load_idx(img, lab);
  Vector expect(4);
  expect << 0, 1, 0, 1;
  EXPECT_EQ(ds.X.col(0), expect);
  EXPECT_EQ(ds.class_ids, (std::vector<long long>{3}));
}

TEST_F(Idx, CountMismatch) {
  const auto img = write("i", be32(kIdxImagesMagic) + be32(1) + be32(1) + be32(1) + std::string("\x10", 1));
  const auto lab = write("l", be32(kIdxLabelsMagic) + be32(2) + std::string("\x01\x02", 2));
  EXPECT_THROW(load_idx(img, lab), ParseError);
}

TEST_F(Idx, BadMagicAndTruncation) {
  const auto lab = write("l", be32(kIdxLabelsMagic) + be32(1) + std::string("\x01", 1));
  EXPECT_THROW(load_idx(write("i1", be32(0x1234) + be32(1) + be32(1) + be32(1) + "a"), lab), ParseError);
  EXPECT_THROW(load_idx(write("i2", be32(kIdxImagesMagic) + be32(1) + be32(2) + be32(2) + "ab"), lab), ParseError);
}

TEST_F(Idx, RoundTrip) {
  Rng rng(2);
  Dataset ds;
  ds.X = DataMatrix(6, 3);
  for (Index k = 0; k < ds.X.size(); ++k) ds.X.data()[k] = static_cast<double>(rng.below(256)) / 255.0;
  reindex_labels(ds, {4, 1, 4});
  save_idx(ds, 2, 3, dir_ / "img", dir_ / "lab");
  const auto back = load_idx(dir_ / "img", dir_ / "lab");
  EXPECT_EQ(back.X, ds.X);
  EXPECT_EQ(back.truth, ds.truth);
  EXPECT_EQ(back.class_ids, ds.class_ids);
}

Dataset layout(Index classes, Index per) {
  Dataset ds;
  ds.X = DataMatrix(2, classes * per);
  std::vector<long long> raw;
  for (Index j = 0; j < classes * per; ++j) {
    ds.X(0, j) = static_cast<double>(j) / static_cast<double>(classes * per);
    ds.X(1, j) = 0.5;
    raw.push_back(j % classes);
  }
  reindex_labels(ds, raw);
  return ds;
}

TEST(Subsample, FullTakeIsIdentity) {
  const auto ds = layout(3, 5);
  const auto out = subsample_per_class(ds, 5, 1);
  EXPECT_EQ(out.X, ds.X);
  EXPECT_EQ(out.truth, ds.truth);
  EXPECT_FALSE(out.shortfall);
}

TEST(Subsample, TwoHundredPerClass) {
  const auto out = subsample_per_class(layout(10, 1000), 200, 7);
  EXPECT_EQ(out.size(), 2000);
  std::map<int, int> counts;
  for (int l : out.truth) ++counts[l];
  for (auto& [c, k] : counts) EXPECT_EQ(k, 200);
  // original order is preserved
  for (Index j = 1; j < out.size(); ++j) EXPECT_LT(out.X(0, j - 1), out.X(0, j));
}

TEST(Subsample, DeterministicBySeed) {
  const auto ds = layout(4, 50);
  EXPECT_EQ(subsample_per_class(ds, 10, 3).X, subsample_per_class(ds, 10, 3).X);
  EXPECT_NE(subsample_per_class(ds, 10, 3).X, subsample_per_class(ds, 10, 4).X);
}

TEST(Subsample, ShortfallIsFlagged) {
  const auto out = subsample_per_class(layout(2, 3), 5, 1);
  EXPECT_TRUE(out.shortfall);
  EXPECT_EQ(out.size(), 6);
}

TEST(FirstKClasses, Counts) {
  const auto ds = layout(100, 72);
  EXPECT_EQ(first_k_classes(ds, 10).size(), 720);
  EXPECT_EQ(first_k_classes(ds, 100).X, ds.X);
  const auto one = first_k_classes(ds, 1);
  EXPECT_EQ(one.num_classes(), 1);
  EXPECT_THROW(first_k_classes(ds, 101), InvalidArgument);
  EXPECT_THROW(first_k_classes(ds, 0), InvalidArgument);
}

TEST(Synthetic, CirclesShapeAndLabels) {
  const auto ds = synthetic::concentric_circles(100, 1.0, 5.0, 0.05, 3);
  EXPECT_EQ(ds.dimension(), 2);
  EXPECT_EQ(ds.size(), 200);
  EXPECT_EQ(ds.num_classes(), 2);
  for (Index j = 0; j < ds.size(); ++j) {
    const double r = ds.X.col(j).norm();
    EXPECT_NEAR(r, ds.truth[static_cast<std::size_t>(j)] == 0 ? 1.0 : 5.0, 0.5);
  }
}

TEST(Synthetic, SubspacesAreUnitNormAndLowRank) {
  const auto ds = synthetic::linear_subspaces(3, 10, 20, 2, 4);
  EXPECT_EQ(ds.size(), 30);
  for (Index j = 0; j < ds.size(); ++j) EXPECT_NEAR(ds.X.col(j).norm(), 1.0, 1e-12);
  for (int c = 0; c < 3; ++c) {
    Matrix block(20, 10);
    Index k = 0;
    for (Index j = 0; j < ds.size(); ++j)
      if (ds.truth[static_cast<std::size_t>(j)] == c) block.col(k++) = ds.X.col(j);
    Eigen::JacobiSVD<Matrix> svd(block);
    EXPECT_LE(svd.singularValues()(2), 1e-10);
  }
}

}  // namespace
}  // namespace ktrr
