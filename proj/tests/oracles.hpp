#pragma once

// Brute-force reference implementations used only by the tests. Each one takes
// a different route from the library code it checks.

#include "ktrr/rng.hpp"
#include "ktrr/types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <vector>

namespace ktrr::oracle {

/// Solves the bordered system [[K + lambda I, e_i], [e_i', 0]] [c; theta] = [k_i; 0]
/// (stationarity of the Lagrangian plus the constraint) directly.
inline Vector kkt_column(const Matrix& K, double lambda, Index i) {
  const Index n = K.rows();
  Matrix B = Matrix::Zero(n + 1, n + 1);
  B.topLeftCorner(n, n) = K + lambda * Matrix::Identity(n, n);
  B(i, n) = 1.0;
  B(n, i) = 1.0;
  Vector rhs = Vector::Zero(n + 1);
  rhs.head(n) = K.col(i);
  return B.fullPivLu().solve(rhs).head(n);
}

/// Gram matrix of m random Gaussian features for n points (PSD, rank <= m).
inline Matrix random_gram(Index n, Index m, Rng& rng) {
  Matrix A(m, n);
  for (Index k = 0; k < A.size(); ++k) A.data()[k] = rng.normal();
  return A.transpose() * A;
}

inline Matrix random_matrix(Index rows, Index cols, Rng& rng) {
  Matrix A(rows, cols);
  for (Index k = 0; k < A.size(); ++k) A.data()[k] = rng.normal();
  return A;
}

inline double mean_pairwise_distance(const Matrix& X) {
  double total = 0.0;
  long long pairs = 0;
  for (Index i = 0; i < X.cols(); ++i) {
    for (Index j = 0; j < X.cols(); ++j) {
      if (i < j) {
        double s = 0.0;
        for (Index r = 0; r < X.rows(); ++r) s += (X(r, i) - X(r, j)) * (X(r, i) - X(r, j));
        total += std::sqrt(s);
        ++pairs;
      }
    }
  }
  return total / static_cast<double>(pairs);
}

/// Relabels by first appearance; two labelings are the same set partition iff
/// their canonical forms are equal.
inline Labels canonical(const Labels& l) {
  std::map<int, int> ids;
  Labels out;
  for (int x : l) out.push_back(ids.emplace(x, static_cast<int>(ids.size())).first->second);
  return out;
}

inline bool same_partition(const Labels& a, const Labels& b) { return canonical(a) == canonical(b); }

/// Best fraction matched over all injective maps of pred clusters into a padded
/// label set, by enumerating permutations.
inline double accuracy_brute(const Labels& pred, const Labels& truth) {
  const Labels p = canonical(pred), t = canonical(truth);
  const int kp = *std::max_element(p.begin(), p.end()) + 1;
  const int kt = *std::max_element(t.begin(), t.end()) + 1;
  const int k = std::max(kp, kt);
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t hit = 0;
    for (std::size_t i = 0; i < p.size(); ++i) hit += perm[static_cast<std::size_t>(p[i])] == t[i];
    best = std::max(best, hit);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(p.size());
}

struct PairCounts {
  double both = 0, pred_only = 0, truth_only = 0, neither = 0;
};

inline PairCounts pair_counts(const Labels& pred, const Labels& truth) {
  PairCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (std::size_t j = i + 1; j < pred.size(); ++j) {
      const bool sp = pred[i] == pred[j], st = truth[i] == truth[j];
      if (sp && st) c.both += 1;
      else if (sp) c.pred_only += 1;
      else if (st) c.truth_only += 1;
      else c.neither += 1;
    }
  }
  return c;
}

/// Hubert-Arabie pair-count form of the adjusted Rand index.
inline double ari_brute(const Labels& pred, const Labels& truth) {
  const auto c = pair_counts(pred, truth);
  const double num = 2.0 * (c.neither * c.both - c.truth_only * c.pred_only);
  const double den = (c.neither + c.truth_only) * (c.truth_only + c.both) +
                     (c.neither + c.pred_only) * (c.pred_only + c.both);
  if (den == 0.0) return same_partition(pred, truth) ? 1.0 : 0.0;
  return num / den;
}

inline double fscore_brute(const Labels& pred, const Labels& truth) {
  const auto c = pair_counts(pred, truth);
  const double pp = c.both + c.pred_only, tp = c.both + c.truth_only;
  if (pp == 0 && tp == 0) return 1.0;
  const double P = pp > 0 ? c.both / pp : 0.0;
  const double R = tp > 0 ? c.both / tp : 0.0;
  return P + R == 0 ? 0.0 : 2 * P * R / (P + R);
}

/// Plug-in NMI with sqrt normalization, from joint and marginal frequencies.
inline double nmi_brute(const Labels& pred, const Labels& truth) {
  const double n = static_cast<double>(pred.size());
  std::map<int, double> pa, pb;
  std::map<std::pair<int, int>, double> pab;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    pa[pred[i]] += 1 / n;
    pb[truth[i]] += 1 / n;
    pab[{pred[i], truth[i]}] += 1 / n;
  }
  double ha = 0, hb = 0, mi = 0;
  for (auto& [k, p] : pa) ha -= p * std::log(p);
  for (auto& [k, p] : pb) hb -= p * std::log(p);
  for (auto& [k, p] : pab) mi += p * std::log(p / (pa[k.first] * pb[k.second]));
  if (pa.size() == 1 && pb.size() == 1) return 1.0;
  if (pa.size() == 1 || pb.size() == 1) return 0.0;
  return mi / std::sqrt(ha * hb);
}

/// Minimum k=2 inertia over every 2-partition of the rows (n <= ~22).
inline double best_two_partition_inertia(const Matrix& pts, Labels* best_labels = nullptr) {
  const Index n = pts.rows();
  double best = std::numeric_limits<double>::infinity();
  // Fix point 0 in group 0 to skip mirror images.
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
    Eigen::RowVectorXd s0 = Eigen::RowVectorXd::Zero(pts.cols()), s1 = s0;
    double q = 0;
    Index c0 = 0, c1 = 0;
    for (Index i = 0; i < n; ++i) {
      const bool g1 = i > 0 && ((mask >> (i - 1)) & 1u);
      q += pts.row(i).squaredNorm();
      if (g1) {
        s1 += pts.row(i);
        ++c1;
      } else {
        s0 += pts.row(i);
        ++c0;
      }
    }
    if (c1 == 0) continue;
    const double inertia = q - s0.squaredNorm() / static_cast<double>(c0) - s1.squaredNorm() / static_cast<double>(c1);
    if (inertia < best) {
      best = inertia;
      if (best_labels) {
        best_labels->assign(static_cast<std::size_t>(n), 0);
        for (Index i = 1; i < n; ++i) (*best_labels)[static_cast<std::size_t>(i)] = (mask >> (i - 1)) & 1u;
      }
    }
  }
  return best;
}

/// Number of connected components of the graph with an edge wherever W_ij > 0.
inline Index connected_components(const Matrix& W) {
  const Index n = W.rows();
  std::vector<Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (W(i, j) > 0) parent[static_cast<std::size_t>(find(i))] = find(j);
    }
  }
  Index count = 0;
  for (Index i = 0; i < n; ++i) count += find(i) == i;
  return count;
}

/// Block-diagonal affinity: `sizes[b]` vertices per block, random positive
/// weights inside each block, zero across.
inline Matrix block_affinity(const std::vector<Index>& sizes, Rng& rng) {
  const Index n = std::accumulate(sizes.begin(), sizes.end(), Index{0});
  Matrix W = Matrix::Zero(n, n);
  Index off = 0;
  for (Index s : sizes) {
    for (Index i = 0; i < s; ++i) {
      for (Index j = i + 1; j < s; ++j) {
        const double w = 0.1 + rng.uniform();
        W(off + i, off + j) = w;
        W(off + j, off + i) = w;
      }
    }
    off += s;
  }
  return W;
}

inline Matrix random_affinity(Index n, Rng& rng) {
  Matrix W = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double w = rng.uniform() < 0.3 ? 0.0 : rng.uniform();
      W(i, j) = w;
      W(j, i) = w;
    }
  }
  // keep every vertex connected to its successor
  for (Index i = 0; i + 1 < n; ++i) {
    if (W(i, i + 1) == 0.0) W(i, i + 1) = W(i + 1, i) = 0.5;
  }
  return W;
}

inline Labels random_labels(std::size_t n, int k, Rng& rng) {
  Labels l(n);
  for (auto& x : l) x = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
  return l;
}

}  // namespace ktrr::oracle
