#pragma once

#include "ktrr/config.hpp"
#include "ktrr/dataio.hpp"
#include "ktrr/pipeline.hpp"
#include "ktrr/report.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ktrr {

enum class ExperimentMode { run, sweep, corrupt_curve };
std::string_view to_string(ExperimentMode mode);

/// Loads (or generates) the configured dataset and applies class filtering and
/// per-class subsampling.
Dataset load_dataset(const ExperimentConfig& cfg);

/// The grid points a mode evaluates: the base point for `run`, the Cartesian
/// sweep grid for `sweep`, a clean point followed by each configured corruption
/// level for `corrupt-curve`.
std::vector<GridPoint> grid_for(const ExperimentConfig& cfg, ExperimentMode mode);

/// Base config with a grid point's overrides applied.
ExperimentConfig apply_point(const ExperimentConfig& cfg, const GridPoint& point);

/// Pipeline options a config maps to, for a dataset with `num_classes` classes.
PipelineOptions pipeline_options(const ExperimentConfig& cfg, Index num_classes);

/// Optional observer for the last trial's matrices (used by --dump-matrices).
using MatrixSink = std::function<void(const GridPoint&, const PipelineResult&)>;

/// Runs cfg.runs trials per grid point. Per-run seeds come from
/// derive_seed(master, run, tag), so they do not depend on how many runs or
/// points are scheduled. Failed trials are kept with an error marker.
RunReport run_experiment(const ExperimentConfig& cfg, ExperimentMode mode,
                         const MatrixSink& sink = {});

/// run_experiment on an already-loaded dataset.
RunReport run_experiment(const ExperimentConfig& cfg, ExperimentMode mode, const Dataset& data,
                         const MatrixSink& sink = {});

}  // namespace ktrr
