#include "ktrr/report.hpp"

#include "ktrr/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <system_error>

namespace ktrr {
namespace {

using json = nlohmann::ordered_json;

const double kNan = std::numeric_limits<double>::quiet_NaN();

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }
double num_from(const json& v) { return v.is_null() ? kNan : v.get<double>(); }

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }
bool same(const std::optional<double>& a, const std::optional<double>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || same(*a, *b);
}
bool same(const MetricValues& a, const MetricValues& b) {
  return same(a.ac, b.ac) && same(a.nmi, b.nmi) && same(a.ari, b.ari) && same(a.fscore, b.fscore);
}

json metrics_json(const MetricValues& m) {
  return json{{"AC", num(m.ac)}, {"NMI", num(m.nmi)}, {"ARI", num(m.ari)}, {"Fscore", num(m.fscore)}};
}

MetricValues metrics_from(const json& j) {
  return {num_from(j.at("AC")), num_from(j.at("NMI")), num_from(j.at("ARI")), num_from(j.at("Fscore"))};
}

json point_json(const GridPoint& p) {
  json j = json::object();
  if (p.kernel) j["kernel"] = *p.kernel;
  if (p.lambda) j["lambda"] = *p.lambda;
  if (p.eta) j["eta"] = *p.eta;
  if (p.corruption) j["corruption"] = *p.corruption;
  if (p.snr_db) j["snr_db"] = num(*p.snr_db);
  if (p.ratio) j["ratio"] = *p.ratio;
  return j;
}

GridPoint point_from(const json& j) {
  GridPoint p;
  if (j.contains("kernel")) p.kernel = j["kernel"].get<std::string>();
  if (j.contains("lambda")) p.lambda = j["lambda"].get<double>();
  if (j.contains("eta")) p.eta = j["eta"].get<int>();
  if (j.contains("corruption")) p.corruption = j["corruption"].get<std::string>();
  if (j.contains("snr_db")) p.snr_db = j["snr_db"].is_null() ? std::numeric_limits<double>::infinity()
                                                             : j["snr_db"].get<double>();
  if (j.contains("ratio")) p.ratio = j["ratio"].get<double>();
  return p;
}

std::string csv_number(double x) {
  if (std::isnan(x)) return "";
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string GridPoint::key() const {
  std::ostringstream s;
  s << std::setprecision(12);
  const char* sep = "";
  const auto field = [&](const char* name, const auto& value) {
    s << sep << name << '=' << value;
    sep = ";";
  };
  if (kernel) field("kernel", *kernel);
  if (lambda) field("lambda", *lambda);
  if (eta) field("eta", *eta);
  if (corruption) field("corruption", *corruption);
  if (snr_db) field("snr_db", *snr_db);
  if (ratio) field("ratio", *ratio);
  return s.str();
}

bool RunReport::any_failed() const {
  for (const auto& g : grid) {
    for (const auto& t : g.trials) {
      if (!t.ok) return true;
    }
  }
  return false;
}

MetricSummary summarize(const std::vector<TrialResult>& trials) {
  MetricSummary s;
  MetricValues sum{};
  for (const auto& t : trials) {
    if (!t.ok) continue;
    ++s.count;
    sum.ac += t.metrics.ac;
    sum.nmi += t.metrics.nmi;
    sum.ari += t.metrics.ari;
    sum.fscore += t.metrics.fscore;
  }
  if (s.count == 0) {
    s.mean = s.stddev = {kNan, kNan, kNan, kNan};
    return s;
  }
  const double n = s.count;
  s.mean = {sum.ac / n, sum.nmi / n, sum.ari / n, sum.fscore / n};
  MetricValues ss{};
  for (const auto& t : trials) {
    if (!t.ok) continue;
    ss.ac += (t.metrics.ac - s.mean.ac) * (t.metrics.ac - s.mean.ac);
    ss.nmi += (t.metrics.nmi - s.mean.nmi) * (t.metrics.nmi - s.mean.nmi);
    ss.ari += (t.metrics.ari - s.mean.ari) * (t.metrics.ari - s.mean.ari);
    ss.fscore += (t.metrics.fscore - s.mean.fscore) * (t.metrics.fscore - s.mean.fscore);
  }
  const double d = s.count > 1 ? n - 1.0 : 1.0;
  s.stddev = {std::sqrt(ss.ac / d), std::sqrt(ss.nmi / d), std::sqrt(ss.ari / d), std::sqrt(ss.fscore / d)};
  return s;
}

std::string report_to_json(const RunReport& report) {
  json doc;
  doc["library_version"] = report.library_version;
  doc["mode"] = report.mode;
  doc["config"] = json::parse(report.config_json.empty() ? "{}" : report.config_json);
  doc["metadata"] = report.metadata;
  json grid = json::array();
  json timing_grid = json::array();
  for (const auto& g : report.grid) {
    json trials = json::array();
    json times = json::array();
    for (const auto& t : g.trials) {
      json tj;
      tj["run"] = t.run;
      tj["kmeans_seed"] = t.kmeans_seed;
      tj["corruption_seed"] = t.corruption_seed;
      tj["ok"] = t.ok;
      if (!t.ok) tj["error"] = t.error;
      tj["metrics"] = metrics_json(t.metrics);
      tj["diagnostics"] = json{{"factorization", t.factorization},
                               {"sigma", t.sigma ? num(*t.sigma) : json(nullptr)},
                               {"near_zero_eigenvalues", t.near_zero_eigenvalues},
                               {"isolated_vertices", t.isolated_vertices},
                               {"zero_embedding_rows", t.zero_embedding_rows},
                               {"clipped_entries", t.clipped_entries}};
      trials.push_back(std::move(tj));
      times.push_back(json{{"t1", t.t1}, {"t2", t.t2}});
    }
    grid.push_back(json{{"point", point_json(g.point)},
                        {"summary",
                         {{"count", g.summary.count},
                          {"mean", metrics_json(g.summary.mean)},
                          {"std", metrics_json(g.summary.stddev)}}},
                        {"trials", std::move(trials)}});
    timing_grid.push_back(std::move(times));
  }
  doc["grid"] = std::move(grid);
  doc["warnings"] = report.warnings;
  doc["timing"] = json{{"created_at", report.created_at}, {"grid", std::move(timing_grid)}};
  return doc.dump(2) + "\n";
}

RunReport report_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  RunReport r;
  try {
    r.library_version = doc.at("library_version").get<std::string>();
    r.mode = doc.at("mode").get<std::string>();
    r.config_json = doc.at("config").dump(2);
    r.metadata = doc.at("metadata").get<std::map<std::string, std::string>>();
    r.warnings = doc.at("warnings").get<std::vector<std::string>>();
    const json& timing = doc.at("timing");
    r.created_at = timing.at("created_at").get<std::string>();
    const json& grid = doc.at("grid");
    const json& tgrid = timing.at("grid");
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      const json& gj = grid[gi];
      GridResult g;
      g.point = point_from(gj.at("point"));
      const json& sj = gj.at("summary");
      g.summary.count = sj.at("count").get<int>();
      g.summary.mean = metrics_from(sj.at("mean"));
      g.summary.stddev = metrics_from(sj.at("std"));
      const json& trials = gj.at("trials");
      for (std::size_t ti = 0; ti < trials.size(); ++ti) {
        const json& tj = trials[ti];
        TrialResult t;
        t.run = tj.at("run").get<int>();
        t.kmeans_seed = tj.at("kmeans_seed").get<std::uint64_t>();
        t.corruption_seed = tj.at("corruption_seed").get<std::uint64_t>();
        t.ok = tj.at("ok").get<bool>();
        if (tj.contains("error")) t.error = tj["error"].get<std::string>();
        t.metrics = metrics_from(tj.at("metrics"));
        const json& d = tj.at("diagnostics");
        t.factorization = d.at("factorization").get<std::string>();
        if (!d.at("sigma").is_null()) t.sigma = d["sigma"].get<double>();
        t.near_zero_eigenvalues = d.at("near_zero_eigenvalues").get<Index>();
        t.isolated_vertices = d.at("isolated_vertices").get<Index>();
        t.zero_embedding_rows = d.at("zero_embedding_rows").get<Index>();
        t.clipped_entries = d.at("clipped_entries").get<Index>();
        const json& tt = tgrid.at(gi).at(ti);
        t.t1 = tt.at("t1").get<double>();
        t.t2 = tt.at("t2").get<double>();
        g.trials.push_back(std::move(t));
      }
      r.grid.push_back(std::move(g));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  return r;
}

std::string report_to_csv(const RunReport& report) {
  std::ostringstream out;
  out << "point,kernel,lambda,eta,corruption,snr_db,ratio,run,ok,AC,NMI,ARI,Fscore,t1,t2,"
         "AC_mean,AC_std,NMI_mean,NMI_std,ARI_mean,ARI_std,Fscore_mean,Fscore_std\n";
  for (std::size_t gi = 0; gi < report.grid.size(); ++gi) {
    const auto& g = report.grid[gi];
    const auto& p = g.point;
    const auto& m = g.summary.mean;
    const auto& s = g.summary.stddev;
    for (const auto& t : g.trials) {
      out << gi << ',' << csv_field(p.kernel.value_or("")) << ','
          << (p.lambda ? csv_number(*p.lambda) : "") << ',' << (p.eta ? std::to_string(*p.eta) : "") << ','
          << csv_field(p.corruption.value_or("")) << ',' << (p.snr_db ? csv_number(*p.snr_db) : "") << ','
          << (p.ratio ? csv_number(*p.ratio) : "") << ',' << t.run << ',' << (t.ok ? 1 : 0) << ','
          << csv_number(t.metrics.ac) << ',' << csv_number(t.metrics.nmi) << ',' << csv_number(t.metrics.ari)
          << ',' << csv_number(t.metrics.fscore) << ',' << csv_number(t.t1) << ',' << csv_number(t.t2) << ','
          << csv_number(m.ac) << ',' << csv_number(s.ac) << ',' << csv_number(m.nmi) << ','
          << csv_number(s.nmi) << ',' << csv_number(m.ari) << ',' << csv_number(s.ari) << ','
          << csv_number(m.fscore) << ',' << csv_number(s.fscore) << '\n';
    }
  }
  return out.str();
}

bool operator==(const RunReport& a, const RunReport& b) {
  if (a.library_version != b.library_version || a.mode != b.mode || a.metadata != b.metadata ||
      a.warnings != b.warnings || a.created_at != b.created_at || a.grid.size() != b.grid.size()) {
    return false;
  }
  if (json::parse(a.config_json.empty() ? "{}" : a.config_json) !=
      json::parse(b.config_json.empty() ? "{}" : b.config_json)) {
    return false;
  }
  for (std::size_t gi = 0; gi < a.grid.size(); ++gi) {
    const auto& ga = a.grid[gi];
    const auto& gb = b.grid[gi];
    if (ga.point.key() != gb.point.key() || ga.summary.count != gb.summary.count ||
        !same(ga.summary.mean, gb.summary.mean) || !same(ga.summary.stddev, gb.summary.stddev) ||
        ga.trials.size() != gb.trials.size()) {
      return false;
    }
    for (std::size_t ti = 0; ti < ga.trials.size(); ++ti) {
      const auto& x = ga.trials[ti];
      const auto& y = gb.trials[ti];
      if (x.run != y.run || x.kmeans_seed != y.kmeans_seed || x.corruption_seed != y.corruption_seed ||
          x.ok != y.ok || x.error != y.error || !same(x.metrics, y.metrics) || x.factorization != y.factorization ||
          !same(x.sigma, y.sigma) || x.near_zero_eigenvalues != y.near_zero_eigenvalues ||
          x.isolated_vertices != y.isolated_vertices || x.zero_embedding_rows != y.zero_embedding_rows ||
          x.clipped_entries != y.clipped_entries || !same(x.t1, y.t1) || !same(x.t2, y.t2)) {
        return false;
      }
    }
  }
  return true;
}

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  const auto tmp = path.parent_path() / (path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

void emit_report(const RunReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_atomically(dir / "report.json", report_to_json(report));
  write_atomically(dir / "report.csv", report_to_csv(report));
}

}  // namespace ktrr
