#include "ktrr/config.hpp"

#include "ktrr/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace ktrr {
namespace {

using json = nlohmann::ordered_json;

struct KeyHandler {
  const char* path;
  const char* description;
  std::function<void(ExperimentConfig&, const json&)> set;
  std::function<json(const ExperimentConfig&)> get;
};

[[noreturn]] void bad_value(const std::string& key, const json& v, const char* expected) {
  throw InvalidArgument("config key '" + key + "': expected " + expected + ", got " + v.dump());
}

double as_number(const std::string& key, const json& v) {
  if (!v.is_number()) bad_value(key, v, "a number");
  return v.get<double>();
}

long long as_integer(const std::string& key, const json& v) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == std::floor(d)) return static_cast<long long>(d);
  }
  bad_value(key, v, "an integer");
}

std::uint64_t as_seed(const std::string& key, const json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  const long long x = as_integer(key, v);
  if (x < 0) bad_value(key, v, "a nonnegative integer");
  return static_cast<std::uint64_t>(x);
}

std::string as_string(const std::string& key, const json& v) {
  if (!v.is_string()) bad_value(key, v, "a string");
  return v.get<std::string>();
}

bool as_bool(const std::string& key, const json& v) {
  if (!v.is_boolean()) bad_value(key, v, "true or false");
  return v.get<bool>();
}

template <typename T, typename F>
std::vector<T> as_list(const std::string& key, const json& v, F&& convert) {
  std::vector<T> out;
  if (!v.is_array()) {
    out.push_back(convert(key, v));
    return out;
  }
  for (const auto& item : v) out.push_back(convert(key, item));
  return out;
}

// Infinite snr and open ranges have no JSON literal; null stands in for them.
json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json range_to_json(const RangeBound& b) {
  switch (b.mode) {
    case RangeBound::Mode::value: return b.value;
    case RangeBound::Mode::data: return "data";
    case RangeBound::Mode::unbounded: return nullptr;
  }
  return nullptr;
}

RangeBound range_from_json(const std::string& key, const json& v) {
  if (v.is_null()) return {RangeBound::Mode::unbounded, 0.0};
  if (v.is_string()) {
    if (v.get<std::string>() != "data") bad_value(key, v, "a number, \"data\" or null");
    return {RangeBound::Mode::data, 0.0};
  }
  return {RangeBound::Mode::value, as_number(key, v)};
}

const std::vector<KeyHandler>& handlers() {
  static const std::vector<KeyHandler> table = [] {
    std::vector<KeyHandler> t;
    const auto add = [&](const char* path, const char* description, auto set, auto get) {
      t.push_back(KeyHandler{path, description, set, get});
    };
    // dataset
    add("dataset.format", "csv | idx | circles | subspaces",
        [](ExperimentConfig& c, const json& v) { c.dataset.format = as_string("dataset.format", v); },
        [](const ExperimentConfig& c) { return json(c.dataset.format); });
    add("dataset.path", "CSV file, or IDX images file",
        [](ExperimentConfig& c, const json& v) { c.dataset.path = as_string("dataset.path", v); },
        [](const ExperimentConfig& c) { return json(c.dataset.path); });
    add("dataset.labels_path", "IDX labels file",
        [](ExperimentConfig& c, const json& v) { c.dataset.labels_path = as_string("dataset.labels_path", v); },
        [](const ExperimentConfig& c) { return json(c.dataset.labels_path); });
    add("dataset.label_column", "CSV label column (negative counts from the end)",
        [](ExperimentConfig& c, const json& v) {
          c.dataset.label_column = static_cast<int>(as_integer("dataset.label_column", v));
        },
        [](const ExperimentConfig& c) { return json(c.dataset.label_column); });
    add("dataset.per_class", "samples kept per class (0 = all)",
        [](ExperimentConfig& c, const json& v) { c.dataset.per_class = as_integer("dataset.per_class", v); },
        [](const ExperimentConfig& c) { return json(c.dataset.per_class); });
    add("dataset.first_k_classes", "keep only the first k classes (0 = all)",
        [](ExperimentConfig& c, const json& v) {
          c.dataset.first_k_classes = as_integer("dataset.first_k_classes", v);
        },
        [](const ExperimentConfig& c) { return json(c.dataset.first_k_classes); });
    add("dataset.per_cluster", "synthetic: points per cluster",
        [](ExperimentConfig& c, const json& v) { c.dataset.per_cluster = as_integer("dataset.per_cluster", v); },
        [](const ExperimentConfig& c) { return json(c.dataset.per_cluster); });
    add("dataset.noise", "circles: jitter standard deviation",
        [](ExperimentConfig& c, const json& v) { c.dataset.noise = as_number("dataset.noise", v); },
        [](const ExperimentConfig& c) { return json(c.dataset.noise); });
    add("dataset.inner_radius", "circles: inner radius",
        [](ExperimentConfig& c, const json& v) { c.dataset.inner_radius = as_number("dataset.inner_radius", v); },
        [](const ExperimentConfig& c) { return json(c.dataset.inner_radius); });
    add("dataset.outer_radius", "circles: outer radius",
        [](ExperimentConfig& c, const json& v) { c.dataset.outer_radius = as_number("dataset.outer_radius", v); },
        [](const ExperimentConfig& c) { return json(c.dataset.outer_radius); });
    add("dataset.num_subspaces", "subspaces: number of subspaces",
        [](ExperimentConfig& c, const json& v) { c.dataset.num_subspaces = as_integer("dataset.num_subspaces", v); },
        [](const ExperimentConfig& c) { return json(c.dataset.num_subspaces); });
    add("dataset.ambient_dim", "subspaces: ambient dimension",
        [](ExperimentConfig& c, const json& v) { c.dataset.ambient_dim = as_integer("dataset.ambient_dim", v); },
        [](const ExperimentConfig& c) { return json(c.dataset.ambient_dim); });
    add("dataset.subspace_dim", "subspaces: dimension of each subspace",
        [](ExperimentConfig& c, const json& v) { c.dataset.subspace_dim = as_integer("dataset.subspace_dim", v); },
        [](const ExperimentConfig& c) { return json(c.dataset.subspace_dim); });
    add("dataset.seed", "synthetic generation seed (default: derived from seed)",
        [](ExperimentConfig& c, const json& v) {
          if (v.is_null()) c.dataset.seed.reset(); else c.dataset.seed = as_seed("dataset.seed", v);
        },
        [](const ExperimentConfig& c) { return c.dataset.seed ? json(*c.dataset.seed) : json(nullptr); });
    // kernel
    add("kernel.kind", "gaussian | heat | poly2 | poly3 | exponential | inv_dist | inv_dist_sq | linear",
        [](ExperimentConfig& c, const json& v) { c.kernel.kind = parse_kernel_kind(as_string("kernel.kind", v)); },
        [](const ExperimentConfig& c) { return json(std::string(to_string(c.kernel.kind))); });
    add("kernel.sigma", "bandwidth, or \"auto\" for the mean pairwise distance",
        [](ExperimentConfig& c, const json& v) {
          if (v.is_string() && v.get<std::string>() == "auto") {
            c.kernel.sigma.reset();
          } else {
            c.kernel.sigma = as_number("kernel.sigma", v);
          }
        },
        [](const ExperimentConfig& c) { return c.kernel.sigma ? json(*c.kernel.sigma) : json("auto"); });
    add("kernel.diag_guard", "distance clamp for inv_dist kernels",
        [](ExperimentConfig& c, const json& v) { c.kernel.diag_guard = as_number("kernel.diag_guard", v); },
        [](const ExperimentConfig& c) { return json(c.kernel.diag_guard); });
    // solver
    add("lambda", "ridge tradeoff (> 0)",
        [](ExperimentConfig& c, const json& v) { c.lambda = as_number("lambda", v); },
        [](const ExperimentConfig& c) { return json(c.lambda); });
    add("eta", "coefficients kept per column",
        [](ExperimentConfig& c, const json& v) { c.eta = static_cast<int>(as_integer("eta", v)); },
        [](const ExperimentConfig& c) { return json(c.eta); });
    add("threshold.mode", "magnitude | signed",
        [](ExperimentConfig& c, const json& v) {
          c.threshold_mode = parse_threshold_mode(as_string("threshold.mode", v));
        },
        [](const ExperimentConfig& c) { return json(std::string(to_string(c.threshold_mode))); });
    add("num_clusters", "number of clusters L (0 = class count)",
        [](ExperimentConfig& c, const json& v) { c.num_clusters = as_integer("num_clusters", v); },
        [](const ExperimentConfig& c) { return json(c.num_clusters); });
    add("embedding.skip_zero_eigs", "skip near-zero Laplacian eigenvalues",
        [](ExperimentConfig& c, const json& v) { c.skip_zero_eigs = as_bool("embedding.skip_zero_eigs", v); },
        [](const ExperimentConfig& c) { return json(c.skip_zero_eigs); });
    // kmeans
    add("kmeans.restarts", "k-means restarts",
        [](ExperimentConfig& c, const json& v) { c.kmeans.restarts = static_cast<int>(as_integer("kmeans.restarts", v)); },
        [](const ExperimentConfig& c) { return json(c.kmeans.restarts); });
    add("kmeans.max_iters", "Lloyd iterations per restart",
        [](ExperimentConfig& c, const json& v) {
          c.kmeans.max_iters = static_cast<int>(as_integer("kmeans.max_iters", v));
        },
        [](const ExperimentConfig& c) { return json(c.kmeans.max_iters); });
    add("kmeans.tol", "relative inertia improvement to stop at",
        [](ExperimentConfig& c, const json& v) { c.kmeans.tol = as_number("kmeans.tol", v); },
        [](const ExperimentConfig& c) { return json(c.kmeans.tol); });
    // corruption
    add("corruption.kind", "none | gaussian_snr | salt_pepper",
        [](ExperimentConfig& c, const json& v) {
          c.corruption.kind = parse_corruption_kind(as_string("corruption.kind", v));
        },
        [](const ExperimentConfig& c) { return json(std::string(to_string(c.corruption.kind))); });
    add("corruption.snr_db", "target SNR in dB (null = infinite)",
        [](ExperimentConfig& c, const json& v) {
          c.corruption.snr_db = v.is_null() ? std::numeric_limits<double>::infinity()
                                            : as_number("corruption.snr_db", v);
        },
        [](const ExperimentConfig& c) { return number_or_null(c.corruption.snr_db); });
    add("corruption.ratio", "salt-and-pepper fraction of entries",
        [](ExperimentConfig& c, const json& v) { c.corruption.ratio = as_number("corruption.ratio", v); },
        [](const ExperimentConfig& c) { return json(c.corruption.ratio); });
    add("corruption.seed", "mixed into the per-run corruption streams",
        [](ExperimentConfig& c, const json& v) { c.corruption.seed = as_seed("corruption.seed", v); },
        [](const ExperimentConfig& c) { return json(c.corruption.seed); });
    add("corruption.low", "lower pixel bound: number, \"data\" or null",
        [](ExperimentConfig& c, const json& v) { c.corruption_low = range_from_json("corruption.low", v); },
        [](const ExperimentConfig& c) { return range_to_json(c.corruption_low); });
    add("corruption.high", "upper pixel bound: number, \"data\" or null",
        [](ExperimentConfig& c, const json& v) { c.corruption_high = range_from_json("corruption.high", v); },
        [](const ExperimentConfig& c) { return range_to_json(c.corruption_high); });
    // metrics / runs / output
    add("metrics.nmi_norm", "sqrt | max | min",
        [](ExperimentConfig& c, const json& v) { c.nmi_norm = parse_nmi_norm(as_string("metrics.nmi_norm", v)); },
        [](const ExperimentConfig& c) { return json(std::string(to_string(c.nmi_norm))); });
    add("runs", "trials per grid point",
        [](ExperimentConfig& c, const json& v) { c.runs = static_cast<int>(as_integer("runs", v)); },
        [](const ExperimentConfig& c) { return json(c.runs); });
    add("seed", "master seed",
        [](ExperimentConfig& c, const json& v) { c.seed = as_seed("seed", v); },
        [](const ExperimentConfig& c) { return json(c.seed); });
    add("output", "output directory",
        [](ExperimentConfig& c, const json& v) { c.output = as_string("output", v); },
        [](const ExperimentConfig& c) { return json(c.output); });
    add("dump_matrices", "also write affinity.csv and embedding.csv",
        [](ExperimentConfig& c, const json& v) { c.dump_matrices = as_bool("dump_matrices", v); },
        [](const ExperimentConfig& c) { return json(c.dump_matrices); });
    // sweeps
    add("sweep.lambda", "lambda grid",
        [](ExperimentConfig& c, const json& v) { c.sweep.lambda = as_list<double>("sweep.lambda", v, as_number); },
        [](const ExperimentConfig& c) { return json(c.sweep.lambda); });
    add("sweep.eta", "eta grid",
        [](ExperimentConfig& c, const json& v) {
          c.sweep.eta = as_list<int>("sweep.eta", v, [](const std::string& k, const json& x) {
            return static_cast<int>(as_integer(k, x));
          });
        },
        [](const ExperimentConfig& c) { return json(c.sweep.eta); });
    add("sweep.kernel", "kernel kind grid",
        [](ExperimentConfig& c, const json& v) {
          c.sweep.kernel = as_list<KernelKind>("sweep.kernel", v, [](const std::string& k, const json& x) {
            return parse_kernel_kind(as_string(k, x));
          });
        },
        [](const ExperimentConfig& c) {
          json arr = json::array();
          for (auto k : c.sweep.kernel) arr.push_back(std::string(to_string(k)));
          return arr;
        });
    add("sweep.snr_db", "Gaussian SNR grid (dB)",
        [](ExperimentConfig& c, const json& v) { c.sweep.snr_db = as_list<double>("sweep.snr_db", v, as_number); },
        [](const ExperimentConfig& c) { return json(c.sweep.snr_db); });
    add("sweep.ratio", "salt-and-pepper ratio grid",
        [](ExperimentConfig& c, const json& v) { c.sweep.ratio = as_list<double>("sweep.ratio", v, as_number); },
        [](const ExperimentConfig& c) { return json(c.sweep.ratio); });
    add("curve.snr_db", "corrupt-curve SNR levels (dB)",
        [](ExperimentConfig& c, const json& v) { c.curve_snr_db = as_list<double>("curve.snr_db", v, as_number); },
        [](const ExperimentConfig& c) { return json(c.curve_snr_db); });
    add("curve.ratio", "corrupt-curve salt-and-pepper ratios",
        [](ExperimentConfig& c, const json& v) { c.curve_ratio = as_list<double>("curve.ratio", v, as_number); },
        [](const ExperimentConfig& c) { return json(c.curve_ratio); });
    return t;
  }();
  return table;
}

const KeyHandler& find_handler(std::string_view path) {
  for (const auto& h : handlers()) {
    if (path == h.path) return h;
  }
  throw InvalidArgument("unknown config key '" + std::string(path) + "'");
}

// Objects are walked into; arrays and scalars are leaves.
void apply_tree(ExperimentConfig& cfg, const json& node, const std::string& prefix) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it.value().is_object()) {
      apply_tree(cfg, it.value(), path);
    } else {
      find_handler(path).set(cfg, it.value());
    }
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be > 0");
  if (eta < 1) throw InvalidArgument("eta must be >= 1");
  if (runs < 1) throw InvalidArgument("runs must be >= 1");
  if (num_clusters < 0) throw InvalidArgument("num_clusters must be >= 0");
  if (kmeans.restarts < 1) throw InvalidArgument("kmeans.restarts must be >= 1");
  if (kmeans.max_iters < 0) throw InvalidArgument("kmeans.max_iters must be >= 0");
  if (kernel.sigma && !(*kernel.sigma > 0.0)) throw InvalidArgument("kernel.sigma must be > 0");
  if (!(kernel.diag_guard > 0.0)) throw InvalidArgument("kernel.diag_guard must be > 0");
  if (!(corruption.ratio >= 0.0 && corruption.ratio <= 1.0)) {
    throw InvalidArgument("corruption.ratio must be in [0, 1]");
  }
  if (corruption_low.mode == RangeBound::Mode::value && corruption_high.mode == RangeBound::Mode::value &&
      !(corruption_low.value < corruption_high.value)) {
    throw InvalidArgument("corruption.low must be < corruption.high");
  }
  if (!sweep.snr_db.empty() && !sweep.ratio.empty()) {
    throw InvalidArgument("sweep.snr_db and sweep.ratio cannot be combined");
  }
  for (double l : sweep.lambda) {
    if (!(l > 0.0)) throw InvalidArgument("sweep.lambda entries must be > 0");
  }
  for (int e : sweep.eta) {
    if (e < 1) throw InvalidArgument("sweep.eta entries must be >= 1");
  }
  for (double r : sweep.ratio) {
    if (!(r >= 0.0 && r <= 1.0)) throw InvalidArgument("sweep.ratio entries must be in [0, 1]");
  }
  const auto& f = dataset.format;
  if (f != "csv" && f != "idx" && f != "circles" && f != "subspaces") {
    throw InvalidArgument("dataset.format must be csv, idx, circles or subspaces");
  }
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& h : handlers()) out.push_back({h.path, h.description});
    return out;
  }();
  return keys;
}

ExperimentConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("config: top level must be an object");
  ExperimentConfig cfg;
  apply_tree(cfg, doc, "");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void apply_override(ExperimentConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw InvalidArgument("override must look like key=value, got '" + std::string(assignment) + "'");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  find_handler(key).set(cfg, value);
  cfg.validate();
}

std::string config_to_json(const ExperimentConfig& cfg, int indent) {
  json doc = json::object();
  for (const auto& h : handlers()) {
    json* node = &doc;
    std::string_view path = h.path;
    std::size_t dot;
    while ((dot = path.find('.')) != std::string_view::npos) {
      node = &(*node)[std::string(path.substr(0, dot))];
      path.remove_prefix(dot + 1);
    }
    (*node)[std::string(path)] = h.get(cfg);
  }
  return doc.dump(indent);
}

}  // namespace ktrr
