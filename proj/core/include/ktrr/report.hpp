#pragma once

#include "ktrr/types.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ktrr {

struct MetricValues {
  double ac = 0.0;
  double nmi = 0.0;
  double ari = 0.0;
  double fscore = 0.0;
};

/// Overrides applied on top of the base config for one grid point.
struct GridPoint {
  std::optional<double> lambda;
  std::optional<int> eta;
  std::optional<std::string> kernel;
  std::optional<std::string> corruption;
  std::optional<double> snr_db;
  std::optional<double> ratio;

  /// "lambda=0.1;eta=5" style key, empty for the base point.
  std::string key() const;
};

struct TrialResult {
  int run = 0;
  std::uint64_t kmeans_seed = 0;
  std::uint64_t corruption_seed = 0;
  bool ok = true;
  std::string error;  ///< step-attributed message when !ok
  MetricValues metrics;  ///< NaN when !ok
  std::string factorization;
  std::optional<double> sigma;
  Index near_zero_eigenvalues = 0;
  Index isolated_vertices = 0;
  Index zero_embedding_rows = 0;
  Index clipped_entries = 0;
  double t1 = 0.0;  ///< seconds: kernel + solver + threshold + affinity
  double t2 = 0.0;  ///< seconds: whole trial
};

struct MetricSummary {
  MetricValues mean;
  MetricValues stddev;  ///< sample standard deviation (n-1); 0 for a single run
  int count = 0;  ///< successful trials aggregated
};

struct GridResult {
  GridPoint point;
  std::vector<TrialResult> trials;
  MetricSummary summary;
};

struct RunReport {
  std::string library_version;
  std::string mode;  ///< run | sweep | corrupt-curve
  std::string config_json;  ///< canonical config echo
  std::map<std::string, std::string> metadata;
  std::vector<GridResult> grid;
  std::vector<std::string> warnings;
  std::string created_at;  ///< UTC timestamp, excluded from determinism checks

  bool any_failed() const;
};

/// Mean and sample standard deviation over the successful trials.
MetricSummary summarize(const std::vector<TrialResult>& trials);

/// Full report as JSON. Wall-clock values and the timestamp are confined to
/// the top-level "timing" object; everything else is a pure function of the
/// configuration.
std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);

/// Flat table: one row per (grid point, run) with that point's mean/std repeated.
std::string report_to_csv(const RunReport& report);

/// NaN-aware structural equality.
bool operator==(const RunReport& a, const RunReport& b);

/// Writes `contents` to `path` via a temporary file and rename.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

/// Writes <dir>/report.json and <dir>/report.csv.
void emit_report(const RunReport& report, const std::filesystem::path& dir);

}  // namespace ktrr
