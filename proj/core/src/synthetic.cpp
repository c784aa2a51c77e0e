#include "ktrr/synthetic.hpp"

#include "ktrr/error.hpp"
#include "ktrr/rng.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numbers>

namespace ktrr::synthetic {
namespace {

void finish(Dataset& ds, const std::vector<long long>& raw, const char* source) {
  ds.source = source;
  ds.original_min = ds.X.size() ? ds.X.minCoeff() : 0.0;
  ds.original_max = ds.X.size() ? ds.X.maxCoeff() : 0.0;
  reindex_labels(ds, raw);
}

}  // namespace

Dataset concentric_circles(Index per_circle, double inner_radius, double outer_radius, double noise,
                           std::uint64_t seed) {
  if (per_circle < 1) throw InvalidArgument("per_circle must be >= 1");
  Rng rng(seed);
  Dataset ds;
  ds.X.resize(2, 2 * per_circle);
  std::vector<long long> raw;
  const double radii[2] = {inner_radius, outer_radius};
  for (int c = 0; c < 2; ++c) {
    for (Index p = 0; p < per_circle; ++p) {
      const double angle = 2.0 * std::numbers::pi * rng.uniform();
      const Index j = c * per_circle + p;
      ds.X(0, j) = radii[c] * std::cos(angle) + noise * rng.normal();
      ds.X(1, j) = radii[c] * std::sin(angle) + noise * rng.normal();
      raw.push_back(c);
    }
  }
  finish(ds, raw, "synthetic:circles");
  return ds;
}

Dataset linear_subspaces(Index num_subspaces, Index per_subspace, Index ambient_dim, Index sub_dim,
                         std::uint64_t seed) {
  if (sub_dim < 1 || sub_dim > ambient_dim) throw InvalidArgument("need 1 <= sub_dim <= ambient_dim");
  Rng rng(seed);
  Dataset ds;
  ds.X.resize(ambient_dim, num_subspaces * per_subspace);
  std::vector<long long> raw;
  for (Index s = 0; s < num_subspaces; ++s) {
    Matrix G(ambient_dim, sub_dim);
    for (Index i = 0; i < G.size(); ++i) G.data()[i] = rng.normal();
    const Matrix basis = Eigen::HouseholderQR<Matrix>(G).householderQ() * Matrix::Identity(ambient_dim, sub_dim);
    for (Index p = 0; p < per_subspace; ++p) {
      Vector coef(sub_dim);
      for (Index i = 0; i < sub_dim; ++i) coef[i] = rng.normal();
      Vector x = basis * coef;
      x.normalize();
      ds.X.col(s * per_subspace + p) = x;
      raw.push_back(s);
    }
  }
  finish(ds, raw, "synthetic:subspaces");
  return ds;
}

Dataset gaussian_blobs(const Matrix& centers, Index per_blob, double spread, std::uint64_t seed) {
  Rng rng(seed);
  const Index k = centers.rows(), d = centers.cols();
  Dataset ds;
  ds.X.resize(d, k * per_blob);
  std::vector<long long> raw;
  for (Index c = 0; c < k; ++c) {
    for (Index p = 0; p < per_blob; ++p) {
      for (Index i = 0; i < d; ++i) ds.X(i, c * per_blob + p) = centers(c, i) + spread * rng.normal();
      raw.push_back(c);
    }
  }
  finish(ds, raw, "synthetic:blobs");
  return ds;
}

}  // namespace ktrr::synthetic
