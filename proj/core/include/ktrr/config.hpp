#pragma once

#include "ktrr/corruption.hpp"
#include "ktrr/kernels.hpp"
#include "ktrr/kmeans.hpp"
#include "ktrr/metrics.hpp"
#include "ktrr/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ktrr {

struct DatasetSource {
  /// csv | idx | circles | subspaces
  std::string format = "csv";
  std::string path;
  std::string labels_path;  ///< idx only
  int label_column = -1;
  Index per_class = 0;  ///< 0 keeps every sample
  Index first_k_classes = 0;  ///< 0 keeps every class
  // synthetic generators
  Index per_cluster = 100;
  double noise = 0.05;
  double inner_radius = 1.0;
  double outer_radius = 5.0;
  Index num_subspaces = 3;
  Index ambient_dim = 30;
  Index subspace_dim = 3;
  std::optional<std::uint64_t> seed;  ///< defaults to a stream of the master seed
};

/// Cartesian grid; empty axes are not swept.
struct SweepGrid {
  std::vector<double> lambda;
  std::vector<int> eta;
  std::vector<KernelKind> kernel;
  std::vector<double> snr_db;
  std::vector<double> ratio;

  bool empty() const {
    return lambda.empty() && eta.empty() && kernel.empty() && snr_db.empty() && ratio.empty();
  }
};

/// How a corruption bound is chosen: a fixed number, the clean data's own
/// min/max ("data"), or unbounded (null).
struct RangeBound {
  enum class Mode { value, data, unbounded } mode = Mode::value;
  double value = 0.0;
};

struct ExperimentConfig {
  DatasetSource dataset;
  KernelSpec kernel;
  double lambda = 0.1;
  int eta = 5;
  ThresholdMode threshold_mode = ThresholdMode::magnitude;
  Index num_clusters = 0;  ///< 0 uses the dataset's class count
  bool skip_zero_eigs = false;
  KMeansParams kmeans;
  CorruptionSpec corruption;
  RangeBound corruption_low{RangeBound::Mode::value, 0.0};
  RangeBound corruption_high{RangeBound::Mode::value, 1.0};
  NmiNorm nmi_norm = NmiNorm::sqrt;
  int runs = 10;
  SweepGrid sweep;
  /// Corruption levels for corrupt-curve.
  std::vector<double> curve_snr_db{10, 20, 30, 40, 50};
  std::vector<double> curve_ratio{0.05, 0.10, 0.15, 0.20, 0.25};
  std::string output = "ktrr_out";
  std::uint64_t seed = 0;
  bool dump_matrices = false;

  /// Throws InvalidArgument if a field is out of range.
  void validate() const;
};

struct ConfigKey {
  std::string path;
  std::string description;
};

/// Every recognised key path, for --help.
const std::vector<ConfigKey>& config_keys();

/// Parses a JSON document whose (possibly nested) object keys are the key paths,
/// e.g. {"kernel": {"kind": "gaussian"}} or {"kernel.kind": "gaussian"}.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies `key=value`; the value is read as JSON when it parses, else as a string.
void apply_override(ExperimentConfig& cfg, std::string_view assignment);

/// Canonical nested-JSON rendering of every key (stable order).
std::string config_to_json(const ExperimentConfig& cfg, int indent = 2);

}  // namespace ktrr
