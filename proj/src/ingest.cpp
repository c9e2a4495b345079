#include "subspace_lens/ingest.hpp"

#include "subspace_lens/error.hpp"

#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace subspace_lens {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Splits one CSV record. Double-quoted fields may contain commas; "" inside
// quotes is a literal quote.
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(trim(current));
  return fields;
}

bool parse_real(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

// Resolves a column reference: a header name, or a 0-based index.
int resolve_column(const std::string& ref, const std::vector<std::string>& header,
                   int width, const char* what) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == ref) return static_cast<int>(i);
  }
  int index = -1;
  auto [ptr, ec] = std::from_chars(ref.data(), ref.data() + ref.size(), index);
  if (ec == std::errc() && ptr == ref.data() + ref.size() && index >= 0 && index < width) {
    return index;
  }
  throw ValidationError(std::string("unknown ") + what + " column '" + ref + "'");
}

}  // namespace

std::string to_string(Normalization mode) {
  switch (mode) {
    case Normalization::kNone: return "none";
    case Normalization::kZScore: return "zscore";
    case Normalization::kMinMax: return "minmax";
  }
  return "none";
}

Normalization parse_normalization(const std::string& name) {
  if (name == "none") return Normalization::kNone;
  if (name == "zscore") return Normalization::kZScore;
  if (name == "minmax") return Normalization::kMinMax;
  throw ValidationError("unknown normalization '" + name + "'");
}

DataMatrix make_data(Eigen::MatrixXd values, std::vector<int> labels) {
  DataMatrix data;
  data.values = std::move(values);
  data.labels = std::move(labels);
  data.row_ids.resize(data.values.rows());
  for (int i = 0; i < data.rows(); ++i) data.row_ids[i] = i;
  for (int j = 0; j < data.dims(); ++j) data.column_names.push_back("x" + std::to_string(j));
  if (!data.labels.empty()) {
    int max_label = 0;
    for (int l : data.labels) max_label = std::max(max_label, l);
    for (int l = 0; l <= max_label; ++l) data.class_names.push_back(std::to_string(l));
  }
  return data;
}

DataMatrix parse_csv(const std::string& text, const CsvOptions& options) {
  std::vector<std::vector<std::string>> records;
  std::vector<int> line_numbers;
  {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      records.push_back(split_record(line));
      line_numbers.push_back(line_no);
    }
  }
  if (records.empty()) throw ValidationError("CSV input is empty");

  std::vector<std::string> header;
  std::size_t first_data = 0;
  const int width = static_cast<int>(records.front().size());
  if (options.has_header) {
    header = records.front();
    first_data = 1;
  }
  for (std::size_t r = 0; r < records.size(); ++r) {
    if (static_cast<int>(records[r].size()) != width) {
      throw ValidationError("ragged CSV: line " + std::to_string(line_numbers[r]) + " has " +
                            std::to_string(records[r].size()) + " fields, expected " +
                            std::to_string(width));
    }
  }
  if (first_data >= records.size()) throw ValidationError("CSV input has no data rows");

  const int label_col = options.label_column
                            ? resolve_column(*options.label_column, header, width, "label")
                            : -1;
  const int image_col = options.image_column
                            ? resolve_column(*options.image_column, header, width, "image")
                            : -1;

  std::vector<int> numeric_cols;
  for (int c = 0; c < width; ++c) {
    if (c != label_col && c != image_col) numeric_cols.push_back(c);
  }

  const auto n = static_cast<Eigen::Index>(records.size() - first_data);
  DataMatrix data;
  data.values.resize(n, static_cast<Eigen::Index>(numeric_cols.size()));
  for (int c : numeric_cols) {
    data.column_names.push_back(header.empty() ? "x" + std::to_string(c) : header[c]);
  }

  std::map<std::string, int> class_ids;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& rec = records[first_data + i];
    const int line_no = line_numbers[first_data + i];
    for (std::size_t k = 0; k < numeric_cols.size(); ++k) {
      const int c = numeric_cols[k];
      double v = 0.0;
      if (!parse_real(rec[c], v)) {
        throw ValidationError("cannot parse '" + rec[c] + "' as a real number at line " +
                              std::to_string(line_no) + ", column " + std::to_string(c) +
                              (header.empty() ? "" : " (" + header[c] + ")"));
      }
      data.values(i, static_cast<Eigen::Index>(k)) = v;
    }
    if (label_col >= 0) {
      const auto [it, inserted] =
          class_ids.emplace(rec[label_col], static_cast<int>(data.class_names.size()));
      if (inserted) data.class_names.push_back(rec[label_col]);
      data.labels.push_back(it->second);
    }
    if (image_col >= 0) data.image_paths.push_back(rec[image_col]);
    data.row_ids.push_back(static_cast<int>(i));
  }
  return data;
}

DataMatrix load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), options);
}

void validate(const DataMatrix& data) {
  if (!data.values.allFinite()) {
    for (int i = 0; i < data.rows(); ++i) {
      for (int j = 0; j < data.dims(); ++j) {
        if (!std::isfinite(data.values(i, j))) {
          throw ValidationError("non-finite value at row " + std::to_string(data.row_ids[i]) +
                                ", column " + std::to_string(j));
        }
      }
    }
  }
  if (data.rows() < 3) {
    throw ValidationError("need at least 3 distinct points, got " + std::to_string(data.rows()));
  }
  if (data.dims() < 2) {
    throw ValidationError("need at least 2 numeric dimensions, got " +
                          std::to_string(data.dims()));
  }
  if (static_cast<int>(data.row_ids.size()) != data.rows()) {
    throw ValidationError("row id count does not match row count");
  }
}

DataMatrix select_rows(const DataMatrix& data, const std::vector<int>& indices) {
  DataMatrix out;
  out.values.resize(static_cast<Eigen::Index>(indices.size()), data.values.cols());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const int i = indices[k];
    out.values.row(static_cast<Eigen::Index>(k)) = data.values.row(i);
    out.row_ids.push_back(data.row_ids[i]);
    if (data.has_labels()) out.labels.push_back(data.labels[i]);
    if (data.has_images()) out.image_paths.push_back(data.image_paths[i]);
  }
  out.class_names = data.class_names;
  out.column_names = data.column_names;
  out.normalization = data.normalization;
  out.dropped_columns = data.dropped_columns;
  out.warnings = data.warnings;
  return out;
}

DedupResult deduplicate(const DataMatrix& data, double eps) {
  const double eps2 = eps * eps;
  std::vector<int> kept;
  DedupResult result;
  for (int i = 0; i < data.rows(); ++i) {
    int representative = -1;
    for (int k : kept) {
      if ((data.values.row(i) - data.values.row(k)).squaredNorm() <= eps2) {
        representative = k;
        break;
      }
    }
    if (representative < 0) {
      kept.push_back(i);
    } else {
      result.removed.push_back({data.row_ids[i], data.row_ids[representative]});
    }
  }
  result.data = select_rows(data, kept);
  return result;
}

DataMatrix standardize(const DataMatrix& data, Normalization mode) {
  if (mode == Normalization::kNone) {
    DataMatrix out = data;
    out.normalization = mode;
    return out;
  }
  const double n = static_cast<double>(data.rows());
  std::vector<int> keep;
  DataMatrix out = data;
  out.normalization = mode;
  out.column_names.clear();
  for (int j = 0; j < data.dims(); ++j) {
    const auto col = data.values.col(j);
    const bool constant = (col.maxCoeff() - col.minCoeff()) == 0.0;
    if (constant) {
      out.dropped_columns.push_back(data.column_names[j]);
      out.warnings.push_back("dropped constant column '" + data.column_names[j] + "' under " +
                             to_string(mode));
    } else {
      keep.push_back(j);
      out.column_names.push_back(data.column_names[j]);
    }
  }
  out.values.resize(data.values.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const auto col = data.values.col(keep[k]);
    auto dst = out.values.col(static_cast<Eigen::Index>(k));
    if (mode == Normalization::kZScore) {
      const double mean = col.mean();
      const double sd = std::sqrt((col.array() - mean).square().sum() / n);
      dst = (col.array() - mean) / sd;
    } else {
      const double lo = col.minCoeff();
      const double hi = col.maxCoeff();
      dst = (col.array() - lo) / (hi - lo);
    }
  }
  return out;
}

std::string format_csv(const DataMatrix& data) {
  std::string out;
  for (int c = 0; c < data.dims(); ++c) {
    if (c) out += ',';
    out += c < static_cast<int>(data.column_names.size()) ? data.column_names[c]
                                                          : "x" + std::to_string(c);
  }
  if (data.has_labels()) out += ",label";
  out += '\n';
  char cell[32];
  for (int r = 0; r < data.rows(); ++r) {
    for (int c = 0; c < data.dims(); ++c) {
      if (c) out += ',';
      std::snprintf(cell, sizeof cell, "%.17g", data.values(r, c));
      out += cell;
    }
    if (data.has_labels()) {
      const int label = data.labels[r];
      out += ',';
      out += label < static_cast<int>(data.class_names.size()) ? data.class_names[label]
                                                               : std::to_string(label);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const DataMatrix& data, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ValidationError("cannot write '" + path + "'");
  file << format_csv(data);
}

}  // namespace subspace_lens
