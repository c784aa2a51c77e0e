#include "ktrr/experiment.hpp"

#include "ktrr/error.hpp"
#include "ktrr/metrics.hpp"
#include "ktrr/rng.hpp"
#include "ktrr/synthetic.hpp"
#include "ktrr/version.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <limits>
#include <sstream>

namespace ktrr {
namespace {

std::string format_number(double x) {
  std::ostringstream s;
  s << std::setprecision(12) << x;
  return s.str();
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

double resolve_bound(const RangeBound& b, const DataMatrix& X, bool low) {
  switch (b.mode) {
    case RangeBound::Mode::value: return b.value;
    case RangeBound::Mode::data: return low ? X.minCoeff() : X.maxCoeff();
    case RangeBound::Mode::unbounded:
      return low ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

std::map<std::string, std::string> report_metadata(const ExperimentConfig& cfg, const Dataset& data,
                                                   ExperimentMode mode) {
  std::map<std::string, std::string> meta;
  meta["dataset.source"] = data.source;
  meta["dataset.samples"] = std::to_string(data.size());
  meta["dataset.dimension"] = std::to_string(data.dimension());
  meta["dataset.classes"] = std::to_string(data.num_classes());
  meta["dataset.subsample_shortfall"] = data.shortfall ? "true" : "false";
  meta["threshold.mode"] = std::string(to_string(cfg.threshold_mode));
  meta["embedding.zero_eigenvalues"] =
      cfg.skip_zero_eigs ? "skipped (smallest nonzero eigenvalues)" : "included (smallest eigenvalues)";
  meta["embedding.row_normalization"] = "unit rows; zero rows left at zero";
  meta["kernel.bandwidth"] = cfg.kernel.sigma ? "fixed" : "auto (mean pairwise distance)";
  meta["metrics.nmi_norm"] = std::string(to_string(cfg.nmi_norm));
  meta["metrics.fscore"] = "pairwise F-measure";
  meta["summary.stddev"] = "sample (n-1)";
  meta["kmeans.init"] = "k-means++, " + std::to_string(cfg.kmeans.restarts) + " restarts";
  bool singular = is_singular(cfg.kernel.kind);
  for (auto k : cfg.sweep.kernel) singular = singular || is_singular(k);
  if (singular) {
    meta["kernel.diag_guard"] = "distances below " + format_number(cfg.kernel.diag_guard) +
                                " clamped before inversion";
  }
  const bool corrupts = cfg.corruption.kind != CorruptionKind::none || mode == ExperimentMode::corrupt_curve ||
                        !cfg.sweep.snr_db.empty() || !cfg.sweep.ratio.empty();
  if (corrupts) {
    meta["corruption.gaussian_clipping"] = "output clipped to the configured value range";
    meta["corruption.snr_signal_power"] = "mean squared entry";
  } else {
    meta["runs.variance_source"] = "k-means initialization only";
  }
  return meta;
}

std::string point_name(const GridPoint& p) {
  const std::string k = p.key();
  return k.empty() ? "base" : k;
}

}  // namespace

std::string_view to_string(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::run: return "run";
    case ExperimentMode::sweep: return "sweep";
    case ExperimentMode::corrupt_curve: return "corrupt-curve";
  }
  return "unknown";
}

Dataset load_dataset(const ExperimentConfig& cfg) {
  const auto& src = cfg.dataset;
  const std::uint64_t gen_seed = src.seed ? *src.seed : derive_seed(cfg.seed, 0, "dataset");
  Dataset ds;
  if (src.format == "csv") {
    ds = load_csv(src.path, src.label_column);
  } else if (src.format == "idx") {
    ds = load_idx(src.path, src.labels_path);
  } else if (src.format == "circles") {
    ds = synthetic::concentric_circles(src.per_cluster, src.inner_radius, src.outer_radius, src.noise, gen_seed);
  } else if (src.format == "subspaces") {
    ds = synthetic::linear_subspaces(src.num_subspaces, src.per_cluster, src.ambient_dim, src.subspace_dim,
                                     gen_seed);
  } else {
    throw InvalidArgument("unknown dataset.format '" + src.format + "'");
  }
  if (src.first_k_classes > 0) ds = first_k_classes(ds, src.first_k_classes);
  if (src.per_class > 0) ds = subsample_per_class(ds, src.per_class, derive_seed(cfg.seed, 0, "subsample"));
  return ds;
}

std::vector<GridPoint> grid_for(const ExperimentConfig& cfg, ExperimentMode mode) {
  std::vector<GridPoint> points;
  switch (mode) {
    case ExperimentMode::run:
      points.emplace_back();
      break;
    case ExperimentMode::sweep: {
      if (cfg.sweep.empty()) throw InvalidArgument("sweep mode needs at least one sweep.* grid");
      points.emplace_back();
      const auto expand = [&points](auto values, auto setter) {
        if (values.empty()) return;
        std::vector<GridPoint> next;
        for (const auto& p : points) {
          for (const auto& v : values) {
            GridPoint q = p;
            setter(q, v);
            next.push_back(q);
          }
        }
        points = std::move(next);
      };
      expand(cfg.sweep.kernel, [](GridPoint& p, KernelKind k) { p.kernel = std::string(to_string(k)); });
      expand(cfg.sweep.lambda, [](GridPoint& p, double l) { p.lambda = l; });
      expand(cfg.sweep.eta, [](GridPoint& p, int e) { p.eta = e; });
      expand(cfg.sweep.snr_db, [](GridPoint& p, double s) {
        p.corruption = "gaussian_snr";
        p.snr_db = s;
      });
      expand(cfg.sweep.ratio, [](GridPoint& p, double r) {
        p.corruption = "salt_pepper";
        p.ratio = r;
      });
      break;
    }
    case ExperimentMode::corrupt_curve: {
      GridPoint clean;
      clean.corruption = "none";
      points.push_back(clean);
      for (double s : cfg.curve_snr_db) {
        GridPoint p;
        p.corruption = "gaussian_snr";
        p.snr_db = s;
        points.push_back(p);
      }
      for (double r : cfg.curve_ratio) {
        GridPoint p;
        p.corruption = "salt_pepper";
        p.ratio = r;
        points.push_back(p);
      }
      break;
    }
  }
  return points;
}

ExperimentConfig apply_point(const ExperimentConfig& cfg, const GridPoint& point) {
  ExperimentConfig out = cfg;
  if (point.lambda) out.lambda = *point.lambda;
  if (point.eta) out.eta = *point.eta;
  if (point.kernel) out.kernel.kind = parse_kernel_kind(*point.kernel);
  if (point.corruption) out.corruption.kind = parse_corruption_kind(*point.corruption);
  if (point.snr_db) out.corruption.snr_db = *point.snr_db;
  if (point.ratio) out.corruption.ratio = *point.ratio;
  return out;
}

PipelineOptions pipeline_options(const ExperimentConfig& cfg, Index num_classes) {
  PipelineOptions opt;
  opt.kernel = cfg.kernel;
  opt.regression = RegressionParams{cfg.lambda, cfg.eta};
  opt.threshold_mode = cfg.threshold_mode;
  opt.num_clusters = cfg.num_clusters > 0 ? cfg.num_clusters : num_classes;
  opt.skip_zero_eigs = cfg.skip_zero_eigs;
  opt.kmeans = cfg.kmeans;
  opt.kmeans.k = opt.num_clusters;
  return opt;
}

RunReport run_experiment(const ExperimentConfig& cfg, ExperimentMode mode, const MatrixSink& sink) {
  const Dataset data = load_dataset(cfg);
  return run_experiment(cfg, mode, data, sink);
}

RunReport run_experiment(const ExperimentConfig& cfg, ExperimentMode mode, const Dataset& data,
                         const MatrixSink& sink) {
  cfg.validate();
  RunReport report;
  report.library_version = kVersion;
  report.mode = std::string(to_string(mode));
  report.config_json = config_to_json(cfg);
  report.metadata = report_metadata(cfg, data, mode);
  report.created_at = utc_now();

  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::uint64_t corruption_master = cfg.seed ^ mix64(cfg.corruption.seed);

  for (const GridPoint& point : grid_for(cfg, mode)) {
    const ExperimentConfig pc = apply_point(cfg, point);
    GridResult result;
    result.point = point;
    for (int r = 0; r < pc.runs; ++r) {
      TrialResult trial;
      trial.run = r;
      trial.kmeans_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(r), "kmeans");
      trial.corruption_seed = pc.corruption.kind == CorruptionKind::none
                                  ? 0
                                  : derive_seed(corruption_master, static_cast<std::uint64_t>(r), "corruption");
      try {
        CorruptionSpec spec = pc.corruption;
        spec.seed = trial.corruption_seed;
        spec.low = resolve_bound(pc.corruption_low, data.X, true);
        spec.high = resolve_bound(pc.corruption_high, data.X, false);
        CorruptionStats stats;
        DataMatrix X;
        try {
          X = apply_corruption(data.X, spec, &stats);
        } catch (const std::exception& e) {
          throw Error(e.what(), "corruption");
        }
        trial.clipped_entries = stats.clipped;

        PipelineOptions opt = pipeline_options(pc, data.num_classes());
        opt.kmeans.seed = trial.kmeans_seed;
        const bool keep = static_cast<bool>(sink) && r == 0;
        const PipelineResult res = cluster_pipeline(X, opt, keep);
        if (keep) sink(point, res);

        trial.metrics.ac = accuracy(res.labels, data.truth);
        trial.metrics.nmi = nmi(res.labels, data.truth, pc.nmi_norm);
        trial.metrics.ari = ari(res.labels, data.truth);
        trial.metrics.fscore = fscore(res.labels, data.truth);
        trial.factorization = std::string(to_string(res.diagnostics.factorization));
        trial.sigma = res.diagnostics.sigma;
        trial.near_zero_eigenvalues = res.diagnostics.near_zero_eigenvalues;
        trial.isolated_vertices = static_cast<Index>(res.diagnostics.isolated_vertices.size());
        trial.zero_embedding_rows = static_cast<Index>(res.diagnostics.zero_embedding_rows.size());
        trial.t1 = res.graph_seconds;
        trial.t2 = res.total_seconds;
      } catch (const std::exception& e) {
        trial.ok = false;
        trial.error = e.what();
        trial.metrics = {nan, nan, nan, nan};
      }
      result.trials.push_back(std::move(trial));
    }
    result.summary = summarize(result.trials);
    if (result.summary.count < pc.runs) {
      report.warnings.push_back(point_name(point) + ": " + std::to_string(pc.runs - result.summary.count) +
                                " of " + std::to_string(pc.runs) + " trials failed");
    }
    report.grid.push_back(std::move(result));
  }

  if (mode == ExperimentMode::corrupt_curve) {
    // Accuracy should not improve as corruption gets stronger; reported, not enforced.
    const auto check = [&](const std::string& kind, bool ascending_severity) {
      const GridResult* prev = nullptr;
      for (const auto& g : report.grid) {
        if (g.point.corruption != kind) continue;
        if (prev && prev->summary.count > 0 && g.summary.count > 0) {
          const bool worse_later = ascending_severity;
          const double before = prev->summary.mean.ac, after = g.summary.mean.ac;
          if (worse_later ? after > before + 1e-12 : after < before - 1e-12) {
            report.warnings.push_back("non-monotone accuracy between " + point_name(prev->point) + " and " +
                                      point_name(g.point));
          }
        }
        prev = &g;
      }
    };
    // snr levels are listed from low to high SNR (strong to weak noise) by default;
    // decide direction from the actual order.
    bool snr_ascending = true;
    for (std::size_t i = 1; i < cfg.curve_snr_db.size(); ++i) {
      if (cfg.curve_snr_db[i] < cfg.curve_snr_db[i - 1]) snr_ascending = false;
    }
    check("gaussian_snr", !snr_ascending);
    check("salt_pepper", true);
  }
  return report;
}

}  // namespace ktrr
