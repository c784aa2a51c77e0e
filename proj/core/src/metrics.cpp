#include "ktrr/metrics.hpp"

#include "ktrr/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace ktrr {
namespace {

void check_lengths(const Labels& pred, const Labels& truth, std::size_t min_n) {
  if (pred.size() != truth.size()) {
    throw InvalidArgument("label length mismatch: " + std::to_string(pred.size()) + " vs " +
                          std::to_string(truth.size()));
  }
  if (pred.size() < min_n) {
    throw InvalidArgument("need at least " + std::to_string(min_n) + " labels");
  }
}

double choose2(std::int64_t x) { return 0.5 * static_cast<double>(x) * static_cast<double>(x - 1); }

std::vector<int> dense_ids(const Labels& labels, Index& count) {
  std::map<int, int> ids;
  for (int l : labels) ids.emplace(l, 0);
  int next = 0;
  for (auto& [label, id] : ids) id = next++;
  count = next;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = ids[labels[i]];
  return out;
}

double entropy(const std::vector<std::int64_t>& sums, double n) {
  double h = 0.0;
  for (auto s : sums) {
    if (s > 0) {
      const double p = static_cast<double>(s) / n;
      h -= p * std::log(p);
    }
  }
  return h;
}

}  // namespace

ContingencyTable ContingencyTable::build(const Labels& pred, const Labels& truth) {
  check_lengths(pred, truth, 0);
  Index kp = 0, kt = 0;
  const auto p = dense_ids(pred, kp);
  const auto t = dense_ids(truth, kt);
  ContingencyTable table;
  table.counts.setZero(kp, kt);
  for (std::size_t i = 0; i < p.size(); ++i) ++table.counts(p[i], t[i]);
  table.n = static_cast<std::int64_t>(p.size());
  return table;
}

std::vector<std::int64_t> ContingencyTable::row_sums() const {
  std::vector<std::int64_t> out(static_cast<std::size_t>(counts.rows()), 0);
  for (Index i = 0; i < counts.rows(); ++i) out[static_cast<std::size_t>(i)] = counts.row(i).sum();
  return out;
}

std::vector<std::int64_t> ContingencyTable::col_sums() const {
  std::vector<std::int64_t> out(static_cast<std::size_t>(counts.cols()), 0);
  for (Index j = 0; j < counts.cols(); ++j) out[static_cast<std::size_t>(j)] = counts.col(j).sum();
  return out;
}

bool ContingencyTable::is_matching() const {
  if (counts.rows() != counts.cols()) return false;
  for (Index i = 0; i < counts.rows(); ++i) {
    if ((counts.row(i).array() > 0).count() != 1) return false;
  }
  for (Index j = 0; j < counts.cols(); ++j) {
    if ((counts.col(j).array() > 0).count() != 1) return false;
  }
  return true;
}

std::vector<Index> max_weight_assignment(const Matrix& weights) {
  const Index n = weights.rows();
  if (weights.cols() != n) throw InvalidArgument("assignment matrix must be square");
  if (n == 0) return {};
  // Shortest augmenting path formulation on costs = max - w (1-based arrays).
  const double wmax = weights.maxCoeff();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0), v(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<Index> p(static_cast<std::size_t>(n + 1), 0), way(static_cast<std::size_t>(n + 1), 0);
  const auto cost = [&](Index i, Index j) { return wmax - weights(i - 1, j - 1); };

  for (Index i = 1; i <= n; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n + 1), inf);
    std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const Index i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0, j) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const Index j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<Index> assignment(static_cast<std::size_t>(n), 0);
  for (Index j = 1; j <= n; ++j) {
    assignment[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  }
  return assignment;
}

double accuracy(const Labels& pred, const Labels& truth) {
  check_lengths(pred, truth, 1);
  const auto table = ContingencyTable::build(pred, truth);
  if (table.is_matching()) return 1.0;
  const Index k = std::max(table.counts.rows(), table.counts.cols());
  Matrix w = Matrix::Zero(k, k);
  w.topLeftCorner(table.counts.rows(), table.counts.cols()) = table.counts.cast<double>();
  const auto match = max_weight_assignment(w);
  double hit = 0.0;
  for (Index i = 0; i < k; ++i) hit += w(i, match[static_cast<std::size_t>(i)]);
  return hit / static_cast<double>(table.n);
}

std::string_view to_string(NmiNorm norm) {
  switch (norm) {
    case NmiNorm::sqrt: return "sqrt";
    case NmiNorm::max: return "max";
    case NmiNorm::min: return "min";
  }
  return "unknown";
}

NmiNorm parse_nmi_norm(std::string_view name) {
  if (name == "sqrt") return NmiNorm::sqrt;
  if (name == "max") return NmiNorm::max;
  if (name == "min") return NmiNorm::min;
  throw InvalidArgument("unknown NMI normalization '" + std::string(name) + "'");
}

double nmi(const Labels& pred, const Labels& truth, NmiNorm norm) {
  check_lengths(pred, truth, 1);
  const auto table = ContingencyTable::build(pred, truth);
  const double n = static_cast<double>(table.n);
  const auto a = table.row_sums();
  const auto b = table.col_sums();
  const double ha = entropy(a, n);
  const double hb = entropy(b, n);
  const bool single_a = a.size() == 1, single_b = b.size() == 1;
  if (single_a && single_b) return 1.0;
  if (single_a || single_b) return 0.0;
  if (table.is_matching()) return 1.0;

  double mi = 0.0;
  for (Index i = 0; i < table.counts.rows(); ++i) {
    for (Index j = 0; j < table.counts.cols(); ++j) {
      const auto c = table.counts(i, j);
      if (c == 0) continue;
      const double cd = static_cast<double>(c);
      mi += cd / n *
            std::log(cd * n / (static_cast<double>(a[static_cast<std::size_t>(i)]) *
                               static_cast<double>(b[static_cast<std::size_t>(j)])));
    }
  }
  double denom = 0.0;
  switch (norm) {
    case NmiNorm::sqrt: denom = std::sqrt(ha * hb); break;
    case NmiNorm::max: denom = std::max(ha, hb); break;
    case NmiNorm::min: denom = std::min(ha, hb); break;
  }
  return std::clamp(mi / denom, 0.0, 1.0);
}

double ari(const Labels& pred, const Labels& truth) {
  check_lengths(pred, truth, 2);
  const auto table = ContingencyTable::build(pred, truth);
  double index = 0.0;
  for (Index i = 0; i < table.counts.rows(); ++i) {
    for (Index j = 0; j < table.counts.cols(); ++j) index += choose2(table.counts(i, j));
  }
  double sa = 0.0, sb = 0.0;
  for (auto x : table.row_sums()) sa += choose2(x);
  for (auto x : table.col_sums()) sb += choose2(x);
  // (index - expected) / (max - expected), scaled by C(n,2) so that every term
  // is an integer for moderate n.
  const double pairs = choose2(table.n);
  const double numer = index * pairs - sa * sb;
  const double denom = 0.5 * (sa + sb) * pairs - sa * sb;
  if (denom == 0.0) return table.is_matching() ? 1.0 : 0.0;
  return numer / denom;
}

double fscore(const Labels& pred, const Labels& truth) {
  check_lengths(pred, truth, 2);
  const auto table = ContingencyTable::build(pred, truth);
  double tp = 0.0;
  for (Index i = 0; i < table.counts.rows(); ++i) {
    for (Index j = 0; j < table.counts.cols(); ++j) tp += choose2(table.counts(i, j));
  }
  double pred_pairs = 0.0, true_pairs = 0.0;
  for (auto x : table.row_sums()) pred_pairs += choose2(x);
  for (auto x : table.col_sums()) true_pairs += choose2(x);
  // Both all-singleton: the (empty) pair sets coincide.
  if (pred_pairs == 0.0 && true_pairs == 0.0) return 1.0;
  const double precision = pred_pairs > 0.0 ? tp / pred_pairs : 0.0;
  const double recall = true_pairs > 0.0 ? tp / true_pairs : 0.0;
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

}  // namespace ktrr
