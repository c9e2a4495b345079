#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace subspace_lens {

enum class Normalization { kNone, kZScore, kMinMax };

std::string to_string(Normalization mode);
Normalization parse_normalization(const std::string& name);

/// One removed near-duplicate and the earlier row it collapsed into.
struct DedupRemoval {
  int removed_row_id = 0;
  int kept_row_id = 0;
};

struct DataMatrix {
  Eigen::MatrixXd values;                // N x D, row-major semantics
  std::vector<int> labels;               // empty or N entries (category ids)
  std::vector<std::string> class_names;  // label id -> original string
  std::vector<std::string> image_paths;  // empty or N entries
  std::vector<int> row_ids;              // N entries, original 0-based rows
  std::vector<std::string> column_names; // D entries (may be synthesized)

  // Provenance.
  Normalization normalization = Normalization::kNone;
  std::vector<std::string> dropped_columns;
  std::vector<std::string> warnings;

  int rows() const { return static_cast<int>(values.rows()); }
  int dims() const { return static_cast<int>(values.cols()); }
  bool has_labels() const { return !labels.empty(); }
  bool has_images() const { return !image_paths.empty(); }
};

struct CsvOptions {
  std::optional<std::string> label_column;
  std::optional<std::string> image_column;
  bool has_header = true;
};

/// Builds a DataMatrix from an in-memory matrix; row ids are 0..N-1.
DataMatrix make_data(Eigen::MatrixXd values, std::vector<int> labels = {});

DataMatrix load_csv(const std::string& path, const CsvOptions& options);
DataMatrix parse_csv(const std::string& text, const CsvOptions& options);

/// Throws ValidationError unless values are finite, N >= 3 and D >= 2.
void validate(const DataMatrix& data);

struct DedupResult {
  DataMatrix data;
  std::vector<DedupRemoval> removed;
};

inline constexpr double kDefaultDedupEps = 1e-12;

/// Drops every row within `eps` (Euclidean) of an earlier kept row.
DedupResult deduplicate(const DataMatrix& data, double eps = kDefaultDedupEps);

/// Column-wise normalization. Constant columns are dropped (with a warning)
/// under zscore and minmax; zscore uses the population standard deviation.
DataMatrix standardize(const DataMatrix& data, Normalization mode);

/// Keeps only the listed row positions (0-based indices into `data`).
DataMatrix select_rows(const DataMatrix& data, const std::vector<int>& indices);

/// Header row plus one line per row; labels (if any) go in a trailing "label"
/// column as their class names. Values use 17 significant digits.
std::string format_csv(const DataMatrix& data);
void write_csv(const DataMatrix& data, const std::string& path);

}  // namespace subspace_lens
