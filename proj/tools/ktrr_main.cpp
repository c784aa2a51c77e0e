// ktrr: experiment runner for kernel truncated regression subspace clustering.

#include "ktrr/ktrr.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

int run_selfcheck(std::uint64_t seed, bool verbose);

namespace {

std::string keys_help() {
  std::ostringstream s;
  s << "\nConfig keys (JSON, nested objects or dotted paths; override with --set key=value):\n";
  for (const auto& k : ktrr::config_keys()) {
    s << "  " << k.path;
    for (std::size_t pad = k.path.size(); pad < 26; ++pad) s << ' ';
    s << k.description << '\n';
  }
  s << "\nEnvironment: KTRR_NUM_THREADS caps the worker threads.\n";
  return s.str();
}

struct CommonOptions {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
  int runs = 0;
  long long seed = -1;
  int threads = 0;
  bool dump = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("config", o.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--set", o.overrides, "override a config key, key=value (repeatable)");
  cmd->add_option("--out", o.out, "output directory (overrides `output`)");
  cmd->add_option("--runs", o.runs, "trials per grid point (overrides `runs`)")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "master seed (overrides `seed`)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--threads", o.threads, "thread cap")->check(CLI::NonNegativeNumber);
  cmd->add_flag("--dump-matrices", o.dump, "write affinity.csv and embedding.csv");
  cmd->add_flag("-q,--quiet", o.quiet, "only print errors");
}

void print_summary(const ktrr::RunReport& report) {
  std::printf("%-48s %4s %16s %16s %16s %16s\n", "point", "ok", "AC", "NMI", "ARI", "Fscore");
  for (const auto& g : report.grid) {
    const std::string key = g.point.key().empty() ? "base" : g.point.key();
    const auto& m = g.summary.mean;
    const auto& s = g.summary.stddev;
    std::printf("%-48s %4d %7.2f +- %5.2f %7.2f +- %5.2f %7.2f +- %5.2f %7.2f +- %5.2f\n", key.c_str(),
                g.summary.count, 100 * m.ac, 100 * s.ac, 100 * m.nmi, 100 * s.nmi, 100 * m.ari, 100 * s.ari,
                100 * m.fscore, 100 * s.fscore);
  }
  for (const auto& w : report.warnings) std::printf("warning: %s\n", w.c_str());
}

int run_mode(ktrr::ExperimentMode mode, const CommonOptions& o) {
  ktrr::ExperimentConfig cfg = ktrr::load_config(o.config);
  for (const auto& kv : o.overrides) ktrr::apply_override(cfg, kv);
  if (!o.out.empty()) cfg.output = o.out;
  if (o.runs > 0) cfg.runs = o.runs;
  if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
  if (o.dump) cfg.dump_matrices = true;
  if (o.threads > 0) ktrr::set_max_threads(o.threads);
  cfg.validate();

  const std::filesystem::path out_dir = cfg.output;
  ktrr::MatrixSink sink;
  bool dumped = false;
  if (cfg.dump_matrices) {
    std::filesystem::create_directories(out_dir);
    sink = [&](const ktrr::GridPoint&, const ktrr::PipelineResult& res) {
      if (dumped) return;
      dumped = true;
      if (res.affinity) ktrr::save_matrix_csv(res.affinity->values(), out_dir / "affinity.csv");
      if (res.embedding) ktrr::save_matrix_csv(res.embedding->Y, out_dir / "embedding.csv");
    };
  }

  const ktrr::RunReport report = ktrr::run_experiment(cfg, mode, sink);
  ktrr::emit_report(report, out_dir);
  if (!o.quiet) {
    print_summary(report);
    std::printf("wrote %s and %s\n", (out_dir / "report.json").c_str(), (out_dir / "report.csv").c_str());
  }
  if (report.any_failed()) {
    for (const auto& g : report.grid) {
      for (const auto& t : g.trials) {
        if (!t.ok) std::fprintf(stderr, "error: run %d (%s): %s\n", t.run, g.point.key().c_str(), t.error.c_str());
      }
    }
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel truncated regression subspace clustering: experiment runner"};
  app.footer(keys_help());
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ktrr::kVersion));

  CommonOptions run_opts, sweep_opts, curve_opts;
  auto* run = app.add_subcommand("run", "cluster the configured dataset `runs` times and report metrics");
  add_common(run, run_opts);
  auto* sweep = app.add_subcommand("sweep", "evaluate the Cartesian grid of sweep.* values");
  add_common(sweep, sweep_opts);
  auto* curve = app.add_subcommand("corrupt-curve", "clean run plus every curve.snr_db / curve.ratio level");
  add_common(curve, curve_opts);

  std::uint64_t check_seed = 2024;
  bool check_verbose = false;
  auto* check = app.add_subcommand("selfcheck", "run the invariant suite on synthetic data");
  check->add_option("--seed", check_seed, "seed for the random instances");
  check->add_flag("-v,--verbose", check_verbose, "print details for each check");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_mode(ktrr::ExperimentMode::run, run_opts);
    if (*sweep) return run_mode(ktrr::ExperimentMode::sweep, sweep_opts);
    if (*curve) return run_mode(ktrr::ExperimentMode::corrupt_curve, curve_opts);
    if (*check) return run_selfcheck(check_seed, check_verbose);
  } catch (const ktrr::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
