#pragma once

#include <json.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace subspace_lens {

inline constexpr int kSceneSchemaMajor = 1;
inline constexpr int kSceneSchemaMinor = 0;

std::string scene_schema_version();

using XY = std::array<double, 2>;

struct ScenePoint {
  int id = 0;
  XY xy{};
  std::optional<int> label;
  std::optional<std::string> image_path;

  bool operator==(const ScenePoint&) const = default;
};

/// Hull and outline are relative to the point's position.
struct SceneGlyph {
  int id = 0;
  std::string shape;
  std::vector<XY> hull;
  std::vector<XY> outline;
  double area = 0.0;
  double aspect = 1.0;
  int draw_rank = 0;
  std::vector<std::string> flags;
  std::vector<std::string> reasons;

  bool operator==(const SceneGlyph&) const = default;
};

/// Weighted transformed basis vectors (unscaled), nearest-eigenvalue first.
struct SceneVectors {
  int id = 0;
  std::vector<int> basis_index;
  std::vector<XY> vectors;
  std::vector<double> weights;

  bool operator==(const SceneVectors&) const = default;
};

struct SceneMetrics {
  bool enabled = true;
  std::vector<double> per_point_stress;
  double trustworthiness = 1.0;
  std::vector<double> per_point_trust;
  std::vector<double> linearity;
  int k_used = 0;

  bool operator==(const SceneMetrics&) const = default;
};

struct SceneDocument {
  std::string schema_version = scene_schema_version();
  nlohmann::json provenance = nlohmann::json::object();
  nlohmann::json embedding = nlohmann::json::object();
  std::vector<std::string> class_names;
  std::vector<ScenePoint> points;
  std::vector<SceneGlyph> glyphs;
  std::vector<SceneVectors> vectors;
  SceneMetrics metrics;
  std::vector<std::string> warnings;

  bool operator==(const SceneDocument&) const = default;
};

/// Throws ValidationError unless all per-point arrays have equal length and
/// matching ids.
void check_scene(const SceneDocument& doc);

nlohmann::json to_json(const SceneDocument& doc);
std::string serialize_scene(const SceneDocument& doc);

struct SceneReadResult {
  SceneDocument document;
  std::vector<std::string> warnings;
};

/// Parses a document. Malformed text reports the byte offset; a different
/// major schema version is rejected; a newer minor version or unknown fields
/// produce warnings.
SceneReadResult parse_scene(const std::string& text);

void write_scene(const SceneDocument& doc, const std::string& path);
SceneReadResult read_scene(const std::string& path);

}  // namespace subspace_lens
