#include "subspace_lens/scene.hpp"

#include "subspace_lens/error.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace subspace_lens {

using nlohmann::json;

std::string scene_schema_version() {
  return std::to_string(kSceneSchemaMajor) + "." + std::to_string(kSceneSchemaMinor);
}

void check_scene(const SceneDocument& doc) {
  const std::size_t n = doc.points.size();
  if (doc.glyphs.size() != n || doc.vectors.size() != n || doc.metrics.linearity.size() != n) {
    throw ValidationError("scene arrays have mismatched lengths");
  }
  if (doc.metrics.enabled &&
      (doc.metrics.per_point_stress.size() != n || doc.metrics.per_point_trust.size() != n)) {
    throw ValidationError("scene metric arrays have mismatched lengths");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int id = doc.points[i].id;
    if (doc.glyphs[i].id != id || doc.vectors[i].id != id) {
      throw ValidationError("scene ids are misaligned at position " + std::to_string(i));
    }
  }
}

namespace {

json xy_list(const std::vector<XY>& pts) {
  json out = json::array();
  for (const XY& p : pts) out.push_back({p[0], p[1]});
  return out;
}

std::vector<XY> read_xy_list(const json& j) {
  std::vector<XY> out;
  for (const auto& p : j) out.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return out;
}

const std::set<std::string>& known_top_level() {
  static const std::set<std::string> keys = {"schema_version", "provenance", "embedding",
                                             "class_names",    "points",     "glyphs",
                                             "vectors",        "metrics",    "warnings"};
  return keys;
}

}  // namespace

json to_json(const SceneDocument& doc) {
  json j;
  j["schema_version"] = doc.schema_version;
  j["provenance"] = doc.provenance;
  j["embedding"] = doc.embedding;
  j["class_names"] = doc.class_names;
  j["warnings"] = doc.warnings;

  json points = json::array();
  for (const auto& p : doc.points) {
    json e = {{"id", p.id}, {"xy", {p.xy[0], p.xy[1]}}};
    e["label"] = p.label ? json(*p.label) : json(nullptr);
    if (p.image_path) e["image_path"] = *p.image_path;
    points.push_back(std::move(e));
  }
  j["points"] = std::move(points);

  json glyphs = json::array();
  for (const auto& g : doc.glyphs) {
    glyphs.push_back({{"id", g.id},
                      {"shape", g.shape},
                      {"hull", xy_list(g.hull)},
                      {"outline", xy_list(g.outline)},
                      {"area", g.area},
                      {"aspect", g.aspect},
                      {"draw_rank", g.draw_rank},
                      {"flags", g.flags},
                      {"reasons", g.reasons}});
  }
  j["glyphs"] = std::move(glyphs);

  json vectors = json::array();
  for (const auto& v : doc.vectors) {
    vectors.push_back({{"id", v.id},
                       {"basis_index", v.basis_index},
                       {"vectors", xy_list(v.vectors)},
                       {"weights", v.weights}});
  }
  j["vectors"] = std::move(vectors);

  json metrics = {{"enabled", doc.metrics.enabled},
                  {"linearity", doc.metrics.linearity},
                  {"k_used", doc.metrics.k_used}};
  if (doc.metrics.enabled) {
    metrics["per_point_stress"] = doc.metrics.per_point_stress;
    metrics["trustworthiness"] = doc.metrics.trustworthiness;
    metrics["per_point_trust"] = doc.metrics.per_point_trust;
  }
  j["metrics"] = std::move(metrics);
  return j;
}

std::string serialize_scene(const SceneDocument& doc) {
  check_scene(doc);
  return to_json(doc).dump() + "\n";
}

SceneReadResult parse_scene(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("scene parse error at byte offset " + std::to_string(e.byte) + ": " +
                          e.what());
  }
  if (!j.is_object()) throw ValidationError("scene document must be a JSON object");

  SceneReadResult result;
  SceneDocument& doc = result.document;
  try {
    doc.schema_version = j.at("schema_version").get<std::string>();
    int major = -1;
    int minor = 0;
    {
      const auto dot = doc.schema_version.find('.');
      try {
        major = std::stoi(doc.schema_version.substr(0, dot));
        if (dot != std::string::npos) minor = std::stoi(doc.schema_version.substr(dot + 1));
      } catch (const std::exception&) {
        major = -1;
      }
    }
    if (major != kSceneSchemaMajor) {
      throw ValidationError("unsupported scene schema version " + doc.schema_version +
                            " (this reader handles " + std::to_string(kSceneSchemaMajor) +
                            ".x)");
    }
    if (minor > kSceneSchemaMinor) {
      result.warnings.push_back("scene schema " + doc.schema_version +
                                " is newer than reader schema " + scene_schema_version() +
                                "; unknown fields are ignored");
    }
    for (const auto& [key, value] : j.items()) {
      if (!known_top_level().count(key)) {
        result.warnings.push_back("ignoring unknown field '" + key + "'");
      }
    }

    doc.provenance = j.value("provenance", json::object());
    doc.embedding = j.value("embedding", json::object());
    doc.class_names = j.value("class_names", std::vector<std::string>{});
    doc.warnings = j.value("warnings", std::vector<std::string>{});

    for (const auto& e : j.at("points")) {
      ScenePoint p;
      p.id = e.at("id").get<int>();
      p.xy = {e.at("xy").at(0).get<double>(), e.at("xy").at(1).get<double>()};
      if (e.contains("label") && !e.at("label").is_null()) p.label = e.at("label").get<int>();
      if (e.contains("image_path")) p.image_path = e.at("image_path").get<std::string>();
      doc.points.push_back(std::move(p));
    }
    for (const auto& e : j.at("glyphs")) {
      SceneGlyph g;
      g.id = e.at("id").get<int>();
      g.shape = e.at("shape").get<std::string>();
      g.hull = read_xy_list(e.at("hull"));
      g.outline = read_xy_list(e.at("outline"));
      g.area = e.at("area").get<double>();
      g.aspect = e.at("aspect").get<double>();
      g.draw_rank = e.at("draw_rank").get<int>();
      g.flags = e.value("flags", std::vector<std::string>{});
      g.reasons = e.value("reasons", std::vector<std::string>{});
      doc.glyphs.push_back(std::move(g));
    }
    for (const auto& e : j.at("vectors")) {
      SceneVectors v;
      v.id = e.at("id").get<int>();
      v.basis_index = e.at("basis_index").get<std::vector<int>>();
      v.vectors = read_xy_list(e.at("vectors"));
      v.weights = e.at("weights").get<std::vector<double>>();
      doc.vectors.push_back(std::move(v));
    }
    const json& m = j.at("metrics");
    doc.metrics.enabled = m.at("enabled").get<bool>();
    doc.metrics.linearity = m.at("linearity").get<std::vector<double>>();
    doc.metrics.k_used = m.at("k_used").get<int>();
    if (doc.metrics.enabled) {
      doc.metrics.per_point_stress = m.at("per_point_stress").get<std::vector<double>>();
      doc.metrics.trustworthiness = m.at("trustworthiness").get<double>();
      doc.metrics.per_point_trust = m.at("per_point_trust").get<std::vector<double>>();
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed scene document: ") + e.what());
  }
  check_scene(doc);
  return result;
}

void write_scene(const SceneDocument& doc, const std::string& path) {
  const std::string text = serialize_scene(doc);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write scene to '" + path + "'");
  out << text;
  if (!out) throw ValidationError("failed writing scene to '" + path + "'");
}

SceneReadResult read_scene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open scene file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scene(buffer.str());
}

}  // namespace subspace_lens
