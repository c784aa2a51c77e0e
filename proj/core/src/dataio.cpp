#include "ktrr/dataio.hpp"

#include "ktrr/error.hpp"
#include "ktrr/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>
#include <string_view>

namespace ktrr {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::uint32_t read_be32(std::istream& in, const std::string& what) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw ParseError("truncated IDX header in " + what);
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) |
         std::uint32_t{b[3]};
}

void write_be32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

Dataset select_columns(const Dataset& ds, const std::vector<Index>& keep) {
  Dataset out;
  out.X.resize(ds.X.rows(), static_cast<Index>(keep.size()));
  std::vector<long long> raw;
  raw.reserve(keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c) {
    out.X.col(static_cast<Index>(c)) = ds.X.col(keep[c]);
    raw.push_back(ds.class_ids[static_cast<std::size_t>(ds.truth[static_cast<std::size_t>(keep[c])])]);
    if (!ds.names.empty()) out.names.push_back(ds.names[static_cast<std::size_t>(keep[c])]);
  }
  out.source = ds.source;
  out.original_min = ds.original_min;
  out.original_max = ds.original_max;
  out.shortfall = ds.shortfall;
  reindex_labels(out, raw);
  return out;
}

}  // namespace

void reindex_labels(Dataset& ds, const std::vector<long long>& raw_labels) {
  std::map<long long, int> ids;
  ds.class_ids.clear();
  ds.truth.resize(raw_labels.size());
  for (std::size_t i = 0; i < raw_labels.size(); ++i) {
    auto [it, inserted] = ids.emplace(raw_labels[i], static_cast<int>(ds.class_ids.size()));
    if (inserted) ds.class_ids.push_back(raw_labels[i]);
    ds.truth[i] = it->second;
  }
}

Dataset load_csv(const std::filesystem::path& path, int label_column) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());

  std::vector<std::vector<double>> rows;
  std::vector<long long> raw;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    std::vector<double> values(fields.size());
    std::size_t bad = fields.size();
    for (std::size_t f = 0; f < fields.size(); ++f) {
      if (!parse_double(fields[f], values[f])) {
        bad = f;
        break;
      }
    }
    if (bad != fields.size()) {
      if (first_content) {  // header
        first_content = false;
        continue;
      }
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": column " +
                       std::to_string(bad + 1) + ": not a number: '" + std::string(fields[bad]) + "'");
    }
    first_content = false;
    if (width == 0) {
      width = fields.size();
      if (width < 2) {
        throw ParseError(path.string() + ":" + std::to_string(line_no) +
                         ": need at least one feature and one label column");
      }
    } else if (fields.size() != width) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(width) + " columns, found " + std::to_string(fields.size()));
    }
    const int w = static_cast<int>(width);
    const int lc = label_column < 0 ? w + label_column : label_column;
    if (lc < 0 || lc >= w) throw InvalidArgument("label column out of range");
    const double label = values[static_cast<std::size_t>(lc)];
    if (!std::isfinite(label) || label != std::floor(label)) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": column " +
                       std::to_string(lc + 1) + ": label is not an integer");
    }
    raw.push_back(static_cast<long long>(label));
    values.erase(values.begin() + lc);
    for (std::size_t f = 0; f < values.size(); ++f) {
      if (!std::isfinite(values[f])) {
        throw ParseError(path.string() + ":" + std::to_string(line_no) + ": non-finite value");
      }
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError(path.string() + ": no samples");

  Dataset ds;
  ds.source = path.string();
  const Index m = static_cast<Index>(width - 1), n = static_cast<Index>(rows.size());
  ds.X.resize(m, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) ds.X(i, j) = rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  }
  ds.original_min = ds.X.minCoeff();
  ds.original_max = ds.X.maxCoeff();
  if (ds.original_min < 0.0 || ds.original_max > 1.0) {
    const double span = ds.original_max - ds.original_min;
    if (span > 0.0) {
      ds.X = (ds.X.array() - ds.original_min) / span;
    } else {
      ds.X.setZero();
    }
  }
  reindex_labels(ds, raw);
  return ds;
}

void save_matrix_csv(const Matrix& M, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << std::setprecision(17);
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      if (j) out << ',';
      out << M(i, j);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << std::setprecision(17);
  for (Index j = 0; j < ds.X.cols(); ++j) {
    for (Index i = 0; i < ds.X.rows(); ++i) out << ds.X(i, j) << ',';
    out << ds.class_ids[static_cast<std::size_t>(ds.truth[static_cast<std::size_t>(j)])] << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels) {
  std::ifstream img(images, std::ios::binary);
  if (!img) throw IoError("cannot open " + images.string());
  std::ifstream lab(labels, std::ios::binary);
  if (!lab) throw IoError("cannot open " + labels.string());

  const auto img_magic = read_be32(img, images.string());
  if (img_magic != kIdxImagesMagic) {
    std::ostringstream msg;
    msg << images.string() << ": bad IDX magic 0x" << std::hex << img_magic << " (expected 0x803)";
    throw ParseError(msg.str());
  }
  const auto count = read_be32(img, images.string());
  const auto rows = read_be32(img, images.string());
  const auto cols = read_be32(img, images.string());

  const auto lab_magic = read_be32(lab, labels.string());
  if (lab_magic != kIdxLabelsMagic) {
    std::ostringstream msg;
    msg << labels.string() << ": bad IDX magic 0x" << std::hex << lab_magic << " (expected 0x801)";
    throw ParseError(msg.str());
  }
  const auto label_count = read_be32(lab, labels.string());
  if (label_count != count) {
    throw ParseError("IDX count mismatch: " + std::to_string(count) + " images, " +
                     std::to_string(label_count) + " labels");
  }
  if (count == 0) throw ParseError(images.string() + ": no samples");

  const std::size_t pixels = std::size_t{rows} * cols;
  std::vector<unsigned char> buf(pixels * count);
  if (!img.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()))) {
    throw ParseError(images.string() + ": truncated image payload");
  }
  std::vector<unsigned char> lbuf(count);
  if (!lab.read(reinterpret_cast<char*>(lbuf.data()), static_cast<std::streamsize>(lbuf.size()))) {
    throw ParseError(labels.string() + ": truncated label payload");
  }

  Dataset ds;
  ds.source = images.string();
  ds.original_min = 0.0;
  ds.original_max = 255.0;
  ds.X.resize(static_cast<Index>(pixels), static_cast<Index>(count));
  for (std::size_t j = 0; j < count; ++j) {
    for (std::size_t p = 0; p < pixels; ++p) {
      ds.X(static_cast<Index>(p), static_cast<Index>(j)) = buf[j * pixels + p] / 255.0;
    }
  }
  std::vector<long long> raw(lbuf.begin(), lbuf.end());
  reindex_labels(ds, raw);
  return ds;
}

void save_idx(const Dataset& ds, Index rows, Index cols, const std::filesystem::path& images,
              const std::filesystem::path& labels) {
  if (rows * cols != ds.X.rows()) throw InvalidArgument("save_idx: image shape does not match data");
  std::ofstream img(images, std::ios::binary);
  std::ofstream lab(labels, std::ios::binary);
  if (!img || !lab) throw IoError("cannot write IDX files");
  write_be32(img, kIdxImagesMagic);
  write_be32(img, static_cast<std::uint32_t>(ds.X.cols()));
  write_be32(img, static_cast<std::uint32_t>(rows));
  write_be32(img, static_cast<std::uint32_t>(cols));
  for (Index j = 0; j < ds.X.cols(); ++j) {
    for (Index p = 0; p < ds.X.rows(); ++p) {
      const double v = std::clamp(std::round(ds.X(p, j) * 255.0), 0.0, 255.0);
      img.put(static_cast<char>(static_cast<unsigned char>(v)));
    }
  }
  write_be32(lab, kIdxLabelsMagic);
  write_be32(lab, static_cast<std::uint32_t>(ds.X.cols()));
  for (int t : ds.truth) {
    lab.put(static_cast<char>(static_cast<unsigned char>(ds.class_ids[static_cast<std::size_t>(t)])));
  }
  if (!img || !lab) throw IoError("IDX write failed");
}

Dataset subsample_per_class(const Dataset& ds, Index per_class, std::uint64_t seed) {
  if (per_class < 1) throw InvalidArgument("per_class must be >= 1");
  const Index c = ds.num_classes();
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(c));
  for (Index j = 0; j < ds.size(); ++j) members[static_cast<std::size_t>(ds.truth[static_cast<std::size_t>(j)])].push_back(j);

  std::vector<Index> keep;
  bool shortfall = false;
  for (Index cls = 0; cls < c; ++cls) {
    auto& idx = members[static_cast<std::size_t>(cls)];
    if (static_cast<Index>(idx.size()) <= per_class) {
      shortfall = shortfall || static_cast<Index>(idx.size()) < per_class;
      keep.insert(keep.end(), idx.begin(), idx.end());
      continue;
    }
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(cls), "subsample"));
    for (Index s = 0; s < per_class; ++s) {
      const auto pick = s + static_cast<Index>(rng.below(static_cast<std::uint64_t>(static_cast<Index>(idx.size()) - s)));
      std::swap(idx[static_cast<std::size_t>(s)], idx[static_cast<std::size_t>(pick)]);
    }
    std::sort(idx.begin(), idx.begin() + per_class);
    keep.insert(keep.end(), idx.begin(), idx.begin() + per_class);
  }
  std::sort(keep.begin(), keep.end());
  Dataset out = select_columns(ds, keep);
  out.shortfall = ds.shortfall || shortfall;
  return out;
}

Dataset first_k_classes(const Dataset& ds, Index k) {
  if (k < 1 || k > ds.num_classes()) {
    throw InvalidArgument("first_k_classes: k=" + std::to_string(k) + " outside [1, " +
                          std::to_string(ds.num_classes()) + "]");
  }
  std::vector<Index> keep;
  for (Index j = 0; j < ds.size(); ++j) {
    if (ds.truth[static_cast<std::size_t>(j)] < k) keep.push_back(j);
  }
  return select_columns(ds, keep);
}

}  // namespace ktrr
