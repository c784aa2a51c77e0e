// Invariant checks on synthetic inputs, for `ktrr selfcheck`.

#include "ktrr/ktrr.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

namespace {

struct Check {
  const char* name;
  std::function<std::string(std::uint64_t)> run;  // empty string = pass
};

ktrr::Matrix random_gram(ktrr::Index n, ktrr::Index m, ktrr::Rng& rng) {
  ktrr::Matrix A(m, n);
  for (ktrr::Index i = 0; i < A.size(); ++i) A.data()[i] = rng.normal();
  return A.transpose() * A;
}

std::string closed_form_vs_kkt(std::uint64_t seed) {
  ktrr::Rng rng(seed);
  for (int trial = 0; trial < 20; ++trial) {
    const ktrr::Index n = 4 + static_cast<ktrr::Index>(rng.below(12));
    const ktrr::KernelMatrix K(random_gram(n, 3 + static_cast<ktrr::Index>(rng.below(5)), rng));
    const double lambda = 0.05 + rng.uniform();
    const auto fact = ktrr::factor_regularized_kernel(K, lambda);
    for (ktrr::Index i = 0; i < n; ++i) {
      const ktrr::Vector c = ktrr::solve_column(fact, K, i);
      ktrr::Matrix B = ktrr::Matrix::Zero(n + 1, n + 1);
      B.topLeftCorner(n, n) = K.values() + lambda * ktrr::Matrix::Identity(n, n);
      B(i, n) = B(n, i) = 1.0;
      ktrr::Vector rhs = ktrr::Vector::Zero(n + 1);
      rhs.head(n) = K.values().col(i);
      const ktrr::Vector z = B.fullPivLu().solve(rhs);
      const double err = (c - z.head(n)).lpNorm<Eigen::Infinity>();
      if (err > 1e-8 || c[i] != 0.0) return "column " + std::to_string(i) + " deviates by " + std::to_string(err);
    }
  }
  return {};
}

std::string laplacian_null_vector(std::uint64_t seed) {
  ktrr::Rng rng(seed);
  for (int trial = 0; trial < 10; ++trial) {
    const ktrr::Index n = 5 + static_cast<ktrr::Index>(rng.below(20));
    ktrr::Matrix W = ktrr::Matrix::Zero(n, n);
    for (ktrr::Index j = 0; j < n; ++j) {
      for (ktrr::Index i = j + 1; i < n; ++i) W(i, j) = W(j, i) = rng.uniform();
    }
    const auto L = ktrr::normalized_laplacian(ktrr::AffinityMatrix(W));
    const ktrr::Vector v = L.degrees.cwiseSqrt();
    const double r = (L.values * v).norm();
    if (r > 1e-9) return "|L D^1/2 1| = " + std::to_string(r);
    const double lo = Eigen::SelfAdjointEigenSolver<ktrr::Matrix>(L.values).eigenvalues().minCoeff();
    if (lo < -1e-8) return "negative eigenvalue " + std::to_string(lo);
  }
  return {};
}

std::string metric_axioms(std::uint64_t seed) {
  ktrr::Rng rng(seed);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(30);
    const int k = 1 + static_cast<int>(rng.below(5));
    ktrr::Labels a(n), b(n);
    for (auto& x : a) x = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    std::vector<int> perm{7, 3, 11, 5, 2};
    for (std::size_t i = 0; i < n; ++i) b[i] = perm[static_cast<std::size_t>(a[i])];
    if (ktrr::accuracy(a, b) != 1.0 || ktrr::nmi(a, b) != 1.0 || ktrr::ari(a, b) != 1.0 ||
        ktrr::fscore(a, b) != 1.0) {
      return "a relabeled partition did not score 1";
    }
  }
  if (ktrr::ari({0, 0, 1, 1}, {0, 1, 0, 1}) != -0.5) return "ARI reference value";
  return {};
}

std::string circles_pipeline(std::uint64_t seed) {
  const auto ds = ktrr::synthetic::concentric_circles(100, 1.0, 5.0, 0.05, seed);
  ktrr::PipelineOptions opt;
  opt.regression = {0.1, 5};
  opt.num_clusters = 2;
  opt.kmeans.restarts = 20;
  opt.kmeans.seed = seed;
  const auto res = ktrr::cluster_pipeline(ds.X, opt);
  const double ac = ktrr::accuracy(res.labels, ds.truth);
  if (ac < 0.95) return "accuracy " + std::to_string(ac);
  return {};
}

std::string determinism(std::uint64_t seed) {
  const auto ds = ktrr::synthetic::linear_subspaces(3, 15, 20, 3, seed);
  ktrr::PipelineOptions opt;
  opt.kernel.kind = ktrr::KernelKind::linear;
  opt.regression = {0.1, 3};
  opt.num_clusters = 3;
  opt.kmeans.restarts = 10;
  opt.kmeans.seed = seed;
  const auto a = ktrr::cluster_pipeline(ds.X, opt);
  const auto b = ktrr::cluster_pipeline(ds.X, opt);
  if (a.labels != b.labels) return "labels differ between identical runs";
  return {};
}

}  // namespace

int run_selfcheck(std::uint64_t seed, bool verbose) {
  const std::vector<Check> checks = {
      {"closed form matches bordered KKT system", closed_form_vs_kkt},
      {"Laplacian null vector and PSD spectrum", laplacian_null_vector},
      {"metric axioms", metric_axioms},
      {"circles separated by the gaussian kernel", circles_pipeline},
      {"pipeline determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : checks) {
    std::string why;
    try {
      why = c.run(seed);
    } catch (const std::exception& e) {
      why = std::string("threw: ") + e.what();
    }
    std::printf("[%s] %s", why.empty() ? "PASS" : "FAIL", c.name);
    if (!why.empty() || verbose) std::printf("%s%s", why.empty() ? "" : ": ", why.c_str());
    std::printf("\n");
    if (!why.empty()) ++failed;
  }
  std::printf("%d/%zu checks passed\n", static_cast<int>(checks.size()) - failed, checks.size());
  return failed == 0 ? 0 : 1;
}
