#include "subspace_lens/pipeline.hpp"

#include "subspace_lens/error.hpp"

#include <algorithm>
#include <utility>

namespace subspace_lens {

using nlohmann::json;

std::string to_string(ProjectionMethod method) {
  return method == ProjectionMethod::kPca ? "pca" : "mds";
}

ProjectionMethod parse_projection_method(const std::string& name) {
  if (name == "pca") return ProjectionMethod::kPca;
  if (name == "mds") return ProjectionMethod::kMds;
  throw ValidationError("unknown projection method '" + name + "'");
}

namespace {

template <typename F>
auto in_stage(const std::string& context, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const ValidationError& e) {
    throw ValidationError(context + ": " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(context + ": " + e.what());
  }
}

std::string point_context(const std::string& stage, const DataMatrix& data, int i) {
  return stage + " (point row_id " + std::to_string(data.row_ids[i]) + ")";
}

double diameter(const Eigen::MatrixXd& coords) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < coords.rows(); ++j) {
      best = std::max(best, (coords.row(i) - coords.row(j)).norm());
    }
  }
  return best;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

json vector_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

std::vector<XY> to_xy(const Polygon2& poly) {
  std::vector<XY> out;
  out.reserve(poly.size());
  for (const Point2& p : poly) out.push_back({p.x(), p.y()});
  return out;
}

DataMatrix ingest(const PipelineConfig& config, std::vector<DedupRemoval>& removed) {
  if (config.input_path.has_value() == config.data.has_value()) {
    throw ValidationError("exactly one of an input path or in-memory data is required");
  }
  DataMatrix raw = config.input_path ? load_csv(*config.input_path, config.csv) : *config.data;
  validate(raw);
  DedupResult dedup = deduplicate(raw, config.dedup_eps);
  removed = std::move(dedup.removed);
  for (const auto& r : removed) {
    dedup.data.warnings.push_back("removed row " + std::to_string(r.removed_row_id) +
                                  " as a duplicate of row " + std::to_string(r.kept_row_id));
  }
  validate(dedup.data);
  DataMatrix out = standardize(dedup.data, config.normalization);
  validate(out);
  return out;
}

json provenance(const PipelineConfig& config, const PipelineResult& r, int k_trust) {
  json p;
  p["tool"] = "subspace-lens";
  p["input"] = {{"source", config.input_path ? *config.input_path : std::string("in-memory")},
                {"label_column", config.csv.label_column ? json(*config.csv.label_column)
                                                         : json(nullptr)},
                {"image_column", config.csv.image_column ? json(*config.csv.image_column)
                                                         : json(nullptr)},
                {"has_header", config.csv.has_header},
                {"rows_used", r.data.rows()},
                {"dims_used", r.data.dims()},
                {"column_names", r.data.column_names}};
  json removed = json::array();
  for (const auto& d : r.removed) removed.push_back({d.removed_row_id, d.kept_row_id});
  p["ingest"] = {{"normalization", to_string(config.normalization)},
                 {"zscore_std", "population"},
                 {"dedup_eps", config.dedup_eps},
                 {"removed_duplicates", removed},
                 {"dropped_columns", r.data.dropped_columns}};
  json proj = {{"method", to_string(config.method)}, {"output_dims", 2}};
  if (config.method == ProjectionMethod::kMds) {
    proj["seed"] = config.smacof.seed;
    proj["init"] = to_string(config.smacof.init);
    proj["max_iters"] = config.smacof.max_iters;
    proj["rel_tol"] = config.smacof.rel_tol;
    proj["grad_tol"] = r.embedding.grad_tol;
    proj["max_polish_iters"] = config.smacof.max_polish_iters;
    proj["relative_stress_floor"] = config.smacof.relative_stress_floor;
    proj["stress_convention"] = "ordered pairs, one half";
  } else {
    proj["centering"] = "dataset mean";
    proj["sign_convention"] = "largest-magnitude entry positive";
  }
  p["projection"] = std::move(proj);
  json sel = {{"k", config.k},
              {"centering", "neighborhood mean"},
              {"covariance_normalization", "1/(k+1)"},
              {"linearity_cap", kLinearityCap}};
  if (config.selection.variance_threshold) {
    sel["rule"] = "variance_threshold";
    sel["variance_threshold"] = *config.selection.variance_threshold;
  } else {
    sel["rule"] = "fixed";
    sel["fixed_dims"] = config.selection.fixed_dims;
  }
  p["local_subspace"] = std::move(sel);
  json xf = {{"method", to_string(config.xform)},
             {"mode", to_string(config.xform_mode)},
             {"force", config.force},
             {"cond_cap", config.cond_cap}};
  if (config.xform == XformMethod::kFiniteDifference) {
    xf["fd_step"] = config.fd_step ? json(*config.fd_step) : json("1e-4 * column std");
    xf["fd_scheme"] = "central, warm-started";
  }
  p["transform"] = std::move(xf);
  p["glyph"] = {{"user_scale", config.glyph_scale},
                {"scale_factor", r.scale_factor},
                {"scale_rule", "median glyph radius = 1% of embedding diameter at scale 1"},
                {"embedding_diameter", r.embedding_diameter},
                {"samples_per_segment", config.spline_samples},
                {"point_set", config.one_sided ? "one-sided" : "symmetric"},
                {"r_min", 0.005 * r.embedding_diameter},
                {"spline", "closed uniform cubic B-spline"},
                {"coordinates", "relative to point, scaled"}};
  p["metrics"] = {{"enabled", config.metrics},
                  {"trustworthiness_k", k_trust},
                  {"trustworthiness_form", "Venna-Kaski, ties by row id"},
                  {"per_point_trust", "1 - penalty / max penalty"}};
  return p;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
  PipelineResult r;
  std::vector<std::string> warnings;

  r.data = in_stage("ingest", [&] { return ingest(config, r.removed); });
  const DataMatrix& data = r.data;
  warnings.insert(warnings.end(), data.warnings.begin(), data.warnings.end());
  const int n = data.rows();

  if (config.xform == XformMethod::kLinear && config.method != ProjectionMethod::kPca) {
    throw ValidationError("transform: the linear transform is only valid with --method pca");
  }
  if (config.glyph_scale <= 0.0) throw ValidationError("glyph: scale must be > 0");
  if (config.spline_samples < 1) throw ValidationError("glyph: spline samples must be >= 1");

  // Projection.
  if (config.method == ProjectionMethod::kPca) {
    r.linear_map = in_stage("projection", [&] { return fit_pca(data, 2); });
    r.embedding.coords = project_points(*r.linear_map, data.values);
    r.embedding.stress_total = stress(data, r.embedding.coords);
    r.embedding.converged = true;
  } else {
    r.embedding = in_stage("projection", [&] { return run_smacof(data, config.smacof); });
    warnings.insert(warnings.end(), r.embedding.warnings.begin(), r.embedding.warnings.end());
  }
  const Eigen::MatrixXd& coords = r.embedding.coords;

  // Local subspaces.
  r.subspaces.reserve(n);
  for (int i = 0; i < n; ++i) {
    r.subspaces.push_back(in_stage(point_context("local_subspace", data, i), [&] {
      return local_pca(data, i, knn(data, i, config.k), config.selection);
    }));
  }

  // Jacobians.
  std::optional<MdsImplicitTransform> mds_xform;
  if (config.method == ProjectionMethod::kMds && config.xform == XformMethod::kImplicit) {
    mds_xform.emplace(in_stage("transform", [&] {
      return MdsImplicitTransform(data, r.embedding,
                                  ImplicitOptions{config.xform_mode, config.force,
                                                  config.cond_cap});
    }));
  }
  if (config.method == ProjectionMethod::kMds && config.xform == XformMethod::kFiniteDifference &&
      !r.embedding.converged && !config.force) {
    throw NumericalError("transform: embedding did not converge; rerun with --force to proceed");
  }
  FiniteDifferenceOptions fd;
  fd.step = config.fd_step;
  fd.mode = config.xform_mode;
  const QuadraticProjectionObjective* quadratic = nullptr;
  std::optional<QuadraticProjectionObjective> quadratic_storage;
  if (r.linear_map) {
    quadratic_storage.emplace(*r.linear_map);
    quadratic = &*quadratic_storage;
  }
  r.jacobians.reserve(n);
  r.transformed.reserve(n);
  for (int i = 0; i < n; ++i) {
    const std::string ctx = point_context("transform", data, i);
    JacobianBlock jac = in_stage(ctx, [&] {
      if (config.method == ProjectionMethod::kPca) {
        switch (config.xform) {
          case XformMethod::kImplicit: return quadratic->implicit_jacobian(i);
          case XformMethod::kFiniteDifference:
            return finite_difference_jacobian_linear(*r.linear_map, data, i, fd);
          case XformMethod::kLinear: {
            JacobianBlock b;
            b.anchor = i;
            b.matrix = r.linear_map->matrix;
            b.hessian_block = Eigen::MatrixXd::Identity(2, 2);
            b.hessian_cond = 1.0;
            return b;
          }
        }
      }
      if (config.xform == XformMethod::kImplicit) return mds_xform->jacobian(i);
      return finite_difference_jacobian(data, r.embedding, i, fd);
    });
    if (jac.degenerate) {
      warnings.push_back("row " + std::to_string(data.row_ids[i]) + ": " + jac.reason);
    }
    r.transformed.push_back(
        in_stage(ctx, [&] { return transform_subspace(jac, r.subspaces[i], config.xform); }));
    r.jacobians.push_back(std::move(jac));
  }

  // Glyphs.
  r.embedding_diameter = diameter(coords);
  std::vector<Eigen::MatrixXd> weighted;
  weighted.reserve(n);
  for (const auto& t : r.transformed) weighted.push_back(t.vectors);
  r.scale_factor = glyph_scale_factor(weighted, r.embedding_diameter, config.glyph_scale);
  GlyphOptions gopt;
  gopt.samples_per_segment = config.spline_samples;
  gopt.r_min = 0.005 * r.embedding_diameter;
  gopt.mag_eps = 1e-9 * r.embedding_diameter;
  gopt.one_sided = config.one_sided;
  r.glyphs.reserve(n);
  for (int i = 0; i < n; ++i) {
    Glyph g = in_stage(point_context("glyph", data, i), [&] {
      return build_glyph(i, data.row_ids[i], coords.row(i).transpose(),
                         r.scale_factor * r.transformed[i].vectors, gopt);
    });
    if (r.jacobians[i].degenerate) {
      g.flags.insert(g.flags.begin(), "degenerate");
      g.reasons.insert(g.reasons.begin(), r.jacobians[i].reason);
    }
    if (r.subspaces[i].linearity_capped) {
      g.flags.push_back("linearity_capped");
      g.reasons.push_back("second local eigenvalue is zero or negligible; linearity clamped to " +
                          std::to_string(static_cast<long long>(kLinearityCap)));
    }
    r.glyphs.push_back(std::move(g));
  }
  rank_glyphs(r.glyphs);

  // Metrics.
  int k_trust = std::min(config.k, (n - 1) / 2);
  if (config.metrics) {
    QualityReport q;
    q.per_point_stress = per_point_stress(data, coords);
    if (k_trust < config.k) {
      warnings.push_back("trustworthiness uses k=" + std::to_string(k_trust) +
                         " because k must be below N/2");
    }
    const Trustworthiness t =
        in_stage("metrics", [&] { return trustworthiness(data, coords, k_trust); });
    q.trustworthiness = t.global;
    q.per_point_trust = t.per_point;
    q.k_used = k_trust;
    r.quality = std::move(q);
  }

  // Scene.
  SceneDocument& doc = r.scene;
  doc.class_names = data.class_names;
  for (int i = 0; i < n; ++i) {
    ScenePoint p;
    p.id = data.row_ids[i];
    p.xy = {coords(i, 0), coords(i, 1)};
    if (data.has_labels()) p.label = data.labels[i];
    if (data.has_images()) p.image_path = data.image_paths[i];
    doc.points.push_back(std::move(p));

    const Glyph& g = r.glyphs[i];
    SceneGlyph sg;
    sg.id = g.row_id;
    sg.shape = to_string(g.shape);
    sg.hull = to_xy(g.hull);
    sg.outline = to_xy(g.outline);
    sg.area = g.area;
    sg.aspect = g.aspect;
    sg.draw_rank = g.draw_rank;
    sg.flags = g.flags;
    sg.reasons = g.reasons;
    doc.glyphs.push_back(std::move(sg));

    const TransformedSubspace& t = r.transformed[i];
    SceneVectors sv;
    sv.id = data.row_ids[i];
    for (Eigen::Index l = 0; l < t.vectors.rows(); ++l) {
      sv.basis_index.push_back(static_cast<int>(l));
      sv.vectors.push_back({t.vectors(l, 0), t.vectors(l, 1)});
      sv.weights.push_back(r.subspaces[i].weights(l));
    }
    doc.vectors.push_back(std::move(sv));

    doc.metrics.linearity.push_back(r.subspaces[i].linearity);
  }
  doc.metrics.enabled = config.metrics;
  doc.metrics.k_used = config.metrics ? k_trust : 0;
  if (r.quality) {
    r.quality->linearity = doc.metrics.linearity;
    doc.metrics.per_point_stress = r.quality->per_point_stress;
    doc.metrics.trustworthiness = r.quality->trustworthiness;
    doc.metrics.per_point_trust = r.quality->per_point_trust;
  }

  json emb = {{"method", to_string(config.method)}, {"stress_total", r.embedding.stress_total}};
  if (config.method == ProjectionMethod::kMds) {
    emb["converged"] = r.embedding.converged;
    emb["iterations"] = r.embedding.iterations;
    emb["majorization_iterations"] = r.embedding.majorization_iterations;
    emb["polish_iterations"] = r.embedding.polish_iterations;
    emb["gradient_norm"] = r.embedding.gradient_norm;
    emb["grad_tol"] = r.embedding.grad_tol;
    emb["seed"] = r.embedding.seed;
    if (!r.embedding.stress_history.empty()) {
      emb["initial_stress"] = r.embedding.stress_history.front();
    }
  } else {
    emb["matrix"] = matrix_json(r.linear_map->matrix);
    emb["mean"] = vector_json(r.linear_map->mean);
    emb["eigenvalues"] = vector_json(r.linear_map->eigenvalues);
  }
  doc.embedding = std::move(emb);
  doc.provenance = provenance(config, r, k_trust);
  doc.warnings = warnings;
  check_scene(doc);
  return r;
}

}  // namespace subspace_lens
