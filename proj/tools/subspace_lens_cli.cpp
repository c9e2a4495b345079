#include "subspace_lens/error.hpp"
#include "subspace_lens/pipeline.hpp"
#include "subspace_lens/scene.hpp"
#include "subspace_lens/synthetic.hpp"
#include "subspace_lens/verification.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace sl = subspace_lens;

namespace {

struct ProjectArgs {
  std::string input;
  std::string label_col;
  std::string image_col;
  bool no_header = false;
  std::string normalize = "none";
  double dedup_eps = sl::kDefaultDedupEps;
  std::string method = "mds";
  std::uint64_t seed = 0;
  int max_iters = 3000;
  double rel_tol = 1e-9;
  double grad_tol = 0.0;
  std::string init = "random";
  int k = 8;
  int subspace_dims = 5;
  double variance_threshold = 0.0;
  std::string xform = "implicit";
  std::string xform_mode = "pointwise";
  double fd_step = 0.0;
  bool force = false;
  double glyph_scale = 1.0;
  int spline_samples = 16;
  bool one_sided = false;
  bool no_metrics = false;
  std::string out = "-";
};

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw sl::ValidationError("cannot write '" + path + "'");
  file << text;
}

int run_project(const ProjectArgs& a, CLI::App& cmd) {
  sl::PipelineConfig c;
  c.input_path = a.input;
  if (!a.label_col.empty()) c.csv.label_column = a.label_col;
  if (!a.image_col.empty()) c.csv.image_column = a.image_col;
  c.csv.has_header = !a.no_header;
  c.normalization = sl::parse_normalization(a.normalize);
  c.dedup_eps = a.dedup_eps;
  c.method = sl::parse_projection_method(a.method);
  c.smacof.seed = a.seed;
  c.smacof.max_iters = a.max_iters;
  c.smacof.rel_tol = a.rel_tol;
  if (cmd.count("--grad-tol")) c.smacof.grad_tol = a.grad_tol;
  c.smacof.init = sl::parse_smacof_init(a.init);
  c.k = a.k;
  c.selection.fixed_dims = a.subspace_dims;
  if (cmd.count("--variance-threshold")) c.selection.variance_threshold = a.variance_threshold;
  c.xform = sl::parse_xform_method(a.xform);
  c.xform_mode = sl::parse_xform_mode(a.xform_mode);
  if (cmd.count("--fd-step")) c.fd_step = a.fd_step;
  c.force = a.force;
  c.glyph_scale = a.glyph_scale;
  c.spline_samples = a.spline_samples;
  c.one_sided = a.one_sided;
  c.metrics = !a.no_metrics;

  const sl::PipelineResult r = sl::run_pipeline(c);
  write_text(a.out, sl::serialize_scene(r.scene));
  for (const auto& w : r.scene.warnings) std::cerr << "warning: " << w << "\n";
  std::cerr << "projected " << r.data.rows() << " points (" << r.data.dims() << "D) with "
            << a.method << ", stress " << r.embedding.stress_total;
  if (r.quality) std::cerr << ", trustworthiness " << r.quality->trustworthiness;
  std::cerr << "\n";
  return 0;
}

int run_synth(const std::string& kind_name, int rows, int cols, double spacing,
              const std::string& out) {
  const sl::SyntheticKind kind = sl::parse_synthetic_kind(kind_name);
  sl::DataMatrix data;
  if (kind == sl::SyntheticKind::kPlanarGrid) {
    sl::PlanarGridParams p;
    if (rows > 0) p.rows = rows;
    if (cols > 0) p.cols = cols;
    if (spacing > 0) p.spacing = spacing;
    data = sl::planar_grid(p);
  } else {
    sl::TwoPlanesParams p;
    if (spacing > 0) p.spacing = spacing;
    data = sl::two_planes(p);
  }
  write_text(out, sl::format_csv(data));
  return 0;
}

int run_verify(const std::string& kind, int k, int rows, int cols, std::uint64_t seed,
               bool no_fd) {
  if (sl::parse_synthetic_kind(kind) != sl::SyntheticKind::kPlanarGrid) {
    throw sl::ValidationError("verify supports --kind planar-grid only");
  }
  sl::PlanarVerificationConfig c;
  c.grid.rows = rows;
  c.grid.cols = cols;
  c.k = k;
  c.smacof.seed = seed;
  c.include_finite_difference = !no_fd;
  const sl::PlanarVerification v = sl::run_planar_verification(c);
  std::cout << "planar grid " << rows << "x" << cols << ", k=" << k << ", L=2, "
            << v.interior.size() << " interior points\n";
  std::cout << "MDS stress " << v.embedding.stress_total << ", gradient norm "
            << v.embedding.gradient_norm << (v.embedding.converged ? " (converged)" : " (NOT converged)")
            << "\n\n";
  std::cout << sl::format_planar_table(v);
  std::cout << "\nelapsed " << v.seconds << " s\n";
  return 0;
}

int run_scene(const std::string& path) {
  const sl::SceneReadResult r = sl::read_scene(path);
  const sl::SceneDocument& d = r.document;
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  std::size_t flagged = 0;
  for (const auto& g : d.glyphs) flagged += g.flags.empty() ? 0 : 1;
  std::cout << "schema " << d.schema_version << "\n";
  std::cout << "points " << d.points.size() << "\n";
  if (d.embedding.contains("method")) {
    std::cout << "method " << d.embedding["method"].get<std::string>() << "\n";
  }
  std::cout << "flagged glyphs " << flagged << "\n";
  if (d.metrics.enabled) {
    std::cout << "trustworthiness " << d.metrics.trustworthiness << " (k=" << d.metrics.k_used
              << ")\n";
  }
  std::cout << "warnings " << d.warnings.size() << "\n";
  return 0;
}

int run_serve(const std::string& scene_path, const std::string& static_dir,
              const std::string& host, int port) {
  // Validate before serving so the viewer never sees a broken document.
  sl::read_scene(scene_path);
  httplib::Server server;
  server.Get("/scene.json", [scene_path](const httplib::Request&, httplib::Response& res) {
    std::ifstream in(scene_path, std::ios::binary);
    std::ostringstream body;
    body << in.rdbuf();
    res.set_content(body.str(), "application/json");
  });
  if (!static_dir.empty() && !server.set_mount_point("/", static_dir)) {
    throw sl::ValidationError("cannot serve directory '" + static_dir + "'");
  }
  std::cerr << "serving " << scene_path << " at http://" << host << ":" << port << "/scene.json\n";
  if (!server.listen(host, port)) {
    throw sl::ValidationError("cannot listen on " + host + ":" + std::to_string(port));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local subspace glyphs for dimensionality-reduction scatterplots"};
  app.require_subcommand(1);

  ProjectArgs pa;
  CLI::App* project = app.add_subcommand("project", "Run the full pipeline and write a scene");
  project->add_option("--input", pa.input, "CSV file")->required();
  project->add_option("--label-col", pa.label_col, "Label column name");
  project->add_option("--image-col", pa.image_col, "Image path column name");
  project->add_flag("--no-header", pa.no_header, "First row is data");
  project->add_option("--normalize", pa.normalize, "none|zscore|minmax")->capture_default_str();
  project->add_option("--dedup-eps", pa.dedup_eps, "Duplicate distance")->capture_default_str();
  project->add_option("--method", pa.method, "pca|mds")->capture_default_str();
  project->add_option("--seed", pa.seed, "SMACOF seed")->capture_default_str();
  project->add_option("--max-iters", pa.max_iters, "Majorization iterations")->capture_default_str();
  project->add_option("--rel-tol", pa.rel_tol, "Relative stress change")->capture_default_str();
  project->add_option("--grad-tol", pa.grad_tol, "Gradient bound (default 1e-8 N)");
  project->add_option("--init", pa.init, "random|pca")->capture_default_str();
  project->add_option("--k", pa.k, "Neighbors")->capture_default_str();
  auto* dims = project->add_option("--subspace-dims", pa.subspace_dims, "Basis vectors")
                   ->capture_default_str();
  project->add_option("--variance-threshold", pa.variance_threshold, "Cumulative variance share")
      ->excludes(dims);
  project->add_option("--xform", pa.xform, "implicit|fd|linear")->capture_default_str();
  project->add_option("--xform-mode", pa.xform_mode, "pointwise|coupled")->capture_default_str();
  project->add_option("--fd-step", pa.fd_step, "Finite-difference step");
  project->add_flag("--force", pa.force, "Transform an unconverged embedding");
  project->add_option("--glyph-scale", pa.glyph_scale, "Glyph scale")->capture_default_str();
  project->add_option("--spline-samples", pa.spline_samples, "Samples per segment")
      ->capture_default_str();
  project->add_flag("--one-sided", pa.one_sided, "Hull of vector tips and center only");
  project->add_flag("--no-metrics{true},--metrics{false}", pa.no_metrics,
                    "Toggle quality metrics (default on)");
  project->add_option("--out", pa.out, "Scene file, - for stdout")->capture_default_str();

  std::string synth_kind = "planar-grid";
  std::string synth_out = "-";
  int synth_rows = 0;
  int synth_cols = 0;
  double synth_spacing = 0.0;
  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic dataset as CSV");
  synth->add_option("--kind", synth_kind, "planar-grid|two-planes")->capture_default_str();
  synth->add_option("--rows", synth_rows, "Grid rows (planar-grid)");
  synth->add_option("--cols", synth_cols, "Grid columns (planar-grid)");
  synth->add_option("--spacing", synth_spacing, "Grid spacing");
  synth->add_option("--out", synth_out, "CSV file, - for stdout")->capture_default_str();

  std::string verify_kind = "planar-grid";
  int verify_k = 8;
  int verify_rows = 15;
  int verify_cols = 15;
  std::uint64_t verify_seed = 0;
  bool verify_no_fd = false;
  CLI::App* verify = app.add_subcommand("verify", "Planar-grid statistics of transformed bases");
  verify->add_option("--kind", verify_kind, "planar-grid")->capture_default_str();
  verify->add_option("--k", verify_k, "Neighbors")->capture_default_str();
  verify->add_option("--rows", verify_rows, "Grid rows")->capture_default_str();
  verify->add_option("--cols", verify_cols, "Grid columns")->capture_default_str();
  verify->add_option("--seed", verify_seed, "SMACOF seed")->capture_default_str();
  verify->add_flag("--no-fd", verify_no_fd, "Skip the finite-difference row");

  std::string scene_path;
  CLI::App* scene = app.add_subcommand("scene", "Validate a scene file and print a summary");
  scene->add_option("file", scene_path, "Scene file")->required();

  std::string serve_scene;
  std::string serve_static;
  std::string serve_host = "127.0.0.1";
  int serve_port = 8080;
  CLI::App* serve = app.add_subcommand("serve", "Serve a scene (and viewer files) over HTTP");
  serve->add_option("--scene", serve_scene, "Scene file")->required();
  serve->add_option("--static", serve_static, "Directory with viewer files");
  serve->add_option("--host", serve_host)->capture_default_str();
  serve->add_option("--port", serve_port)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*project) return run_project(pa, *project);
    if (*synth) return run_synth(synth_kind, synth_rows, synth_cols, synth_spacing, synth_out);
    if (*verify) {
      return run_verify(verify_kind, verify_k, verify_rows, verify_cols, verify_seed,
                        verify_no_fd);
    }
    if (*scene) return run_scene(scene_path);
    if (*serve) return run_serve(serve_scene, serve_static, serve_host, serve_port);
  } catch (const sl::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const sl::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
