#pragma once

#include "subspace_lens/glyph.hpp"
#include "subspace_lens/implicit_xform.hpp"
#include "subspace_lens/ingest.hpp"
#include "subspace_lens/local_subspace.hpp"
#include "subspace_lens/mds.hpp"
#include "subspace_lens/pca.hpp"
#include "subspace_lens/quality.hpp"
#include "subspace_lens/scene.hpp"

#include <optional>
#include <string>
#include <vector>

namespace subspace_lens {

enum class ProjectionMethod { kPca, kMds };

std::string to_string(ProjectionMethod method);
ProjectionMethod parse_projection_method(const std::string& name);

struct PipelineConfig {
  // Exactly one of these supplies the input.
  std::optional<std::string> input_path;
  std::optional<DataMatrix> data;

  CsvOptions csv;
  Normalization normalization = Normalization::kNone;
  double dedup_eps = kDefaultDedupEps;

  ProjectionMethod method = ProjectionMethod::kMds;
  SmacofConfig smacof;

  int k = 8;
  SubspaceSelection selection;

  XformMethod xform = XformMethod::kImplicit;
  XformMode xform_mode = XformMode::kPointwise;
  std::optional<double> fd_step;
  bool force = false;
  double cond_cap = kDefaultCondCap;

  double glyph_scale = 1.0;
  int spline_samples = 16;
  bool one_sided = false;

  bool metrics = true;
};

struct PipelineResult {
  DataMatrix data;  // after ingest (dedup and normalization applied)
  std::vector<DedupRemoval> removed;
  Embedding embedding;
  std::optional<LinearMap> linear_map;  // PCA only
  std::vector<LocalSubspace> subspaces;
  std::vector<JacobianBlock> jacobians;
  std::vector<TransformedSubspace> transformed;
  std::vector<Glyph> glyphs;  // scaled, relative to their centers
  std::optional<QualityReport> quality;
  double embedding_diameter = 0.0;
  double scale_factor = 1.0;
  SceneDocument scene;
};

/// ingest -> project -> local subspaces -> transform -> glyphs -> metrics.
/// Errors keep their type; the message is prefixed with the stage name and,
/// for per-point stages, the row id.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace subspace_lens
