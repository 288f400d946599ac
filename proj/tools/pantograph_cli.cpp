#include <CLI11.hpp>

#include "pantograph/certify.hpp"
#include "pantograph/io.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>

using namespace pantograph;
namespace fs = std::filesystem;

namespace {

constexpr int EXIT_OK = 0;
constexpr int EXIT_TOLERANCE = 2;
constexpr int EXIT_STRUCTURAL = 3;
constexpr int EXIT_CONFIG = 4;

io::RunConfig load_config(const std::string& path, unsigned seed_override, const std::string& out,
                          int threads) {
  io::RunConfig cfg = path.empty() ? io::RunConfig{} : io::RunConfig::parse_file(path);
  if (seed_override != 0) cfg.seed = seed_override;
  if (!out.empty()) cfg.out_dir = out;
  if (threads > 0) cfg.threads = threads;
  cfg.validate();
  fs::create_directories(cfg.out_dir);
  return cfg;
}

std::string path_in(const io::RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out_dir) / name).string();
}

int cmd_build_pants(const io::RunConfig& cfg, bool sweep) {
  TauContext ctx(cfg.n, Field::Complex, cfg.tol);
  GeometricData qp = perfect_geometric_data(ctx, cfg.R, +1);
  GeometricData qm = perfect_geometric_data(ctx, cfg.R, -1);
  // align the minus pants along the shared boundary so the pair is glueable
  GroupElement x = canonical_gluing_translation(qp, qm, ctx);
  qm = qm.left_translated(x);
  qm.A = qp.A;
  qm.C = (qm.B * qm.A).inverse();
  qp.eps = cfg.eps;
  qm.eps = cfg.eps;
  auto rp = is_almost_perfect(qp, ctx, cfg.seed);
  auto rm = is_almost_perfect(qm, ctx, cfg.seed + 1);
  io::write_file(path_in(cfg, "pants_plus.json"), io::geometric_data_to_json(qp));
  io::write_file(path_in(cfg, "pants_minus.json"), io::geometric_data_to_json(qm));
  char buf[512];
  snprintf(buf, sizeof(buf),
           "{\"plus_accepted\": %s, \"minus_accepted\": %s, \"relation_residual_plus\": %.3e, "
           "\"relation_residual_minus\": %.3e}",
           rp.accepted ? "true" : "false", rm.accepted ? "true" : "false", relation_residual(qp),
           relation_residual(qm));
  io::write_file(path_in(cfg, "build_report.json"),
                 io::report_json(cfg, {{"pants", buf}}));
  if (sweep) {
    std::string csv = "xi_norm,max_residual,accepted\n";
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0, 1);
    for (double mag : {1e-5, 1e-4, 1e-3, 1e-2, 5e-2}) {
      Mat xi = Mat::Zero(cfg.n, cfg.n);
      for (int i = 0; i < cfg.n; ++i)
        for (int j = 0; j < cfg.n; ++j) xi(i, j) = cplx(gauss(rng), gauss(rng));
      xi -= (xi.trace() / real_t(cfg.n)) * Mat::Identity(cfg.n, cfg.n);
      xi *= real_t(mag) / xi.norm();
      GeometricData q = qp;
      q.g = GroupElement(q.g.mat() * matrix_exp(xi), q.g.field());
      q.eps = std::max(cfg.eps, 4.0 * mag);
      auto r = is_almost_perfect(q, ctx, cfg.seed + 7);
      double worst = 0;
      for (const auto& c : r.conditions)
        for (double v : c.residuals) worst = std::max(worst, v);
      char line[128];
      snprintf(line, sizeof(line), "%.3e,%.6e,%d\n", mag, worst, r.accepted ? 1 : 0);
      csv += line;
    }
    io::write_file(path_in(cfg, "pants_sweep.csv"), csv);
  }
  return (rp.accepted && rm.accepted) ? EXIT_OK : EXIT_TOLERANCE;
}

int cmd_glue(const io::RunConfig& cfg, const std::string& qplus_path,
             const std::string& qminus_path) {
  TauContext ctx(cfg.n, Field::Complex, cfg.tol);
  GeometricData qp = io::geometric_data_from_json(io::read_file(qplus_path));
  GeometricData qm = io::geometric_data_from_json(io::read_file(qminus_path));
  GluingReport rep = well_glued(qp, qm, cfg.eps_prime, ctx);
  char buf[256];
  snprintf(buf, sizeof(buf), "{\"structural_ok\": %s, \"accepted\": %s, \"defect\": %.6e}",
           rep.structural_ok ? "true" : "false", rep.accepted ? "true" : "false", rep.defect);
  io::write_file(path_in(cfg, "glue_report.json"),
                 io::report_json(cfg, {{"gluing", buf}, {"error", "\"" + rep.error + "\""}}));
  if (!rep.structural_ok) {
    std::cerr << "structural error: " << rep.error << "\n";
    return EXIT_STRUCTURAL;
  }
  return rep.accepted ? EXIT_OK : EXIT_TOLERANCE;
}

int cmd_assemble(const io::RunConfig& cfg, const std::string& graph_path) {
  TauContext ctx(cfg.n, Field::Complex, cfg.tol);
  RibbonGraph graph =
      graph_path.empty() ? RibbonGraph::theta() : io::ribbon_graph_from_json(io::read_file(graph_path));
  if (!graph.trivalent() || !graph.bipartite() || !graph.connected()) {
    std::cerr << "structural error: graph is not trivalent bipartite connected\n";
    return EXIT_STRUCTURAL;
  }
  std::vector<GeometricData> labels;
  for (const auto& v : graph.vertices)
    labels.push_back(perfect_geometric_data(ctx, cfg.R, v.side));
  AssembledRep rep = assemble_representation(graph, labels, ctx, 0.0, cfg.depth, false);

  std::string gens = "[";
  for (size_t i = 0; i < rep.std_generators.size(); ++i) {
    gens += io::matrix_to_json(rep.std_generators[i].mat(), rep.std_generators[i].field());
    if (i + 1 < rep.std_generators.size()) gens += ",";
  }
  gens += "]";
  std::string lens = "[";
  for (size_t i = 0; i < rep.boundary_lengths.size(); ++i) {
    lens += std::to_string(rep.boundary_lengths[i]);
    if (i + 1 < rep.boundary_lengths.size()) lens += ",";
  }
  lens += "]";
  // Theta graphs: swap in the extended-precision generator storage (the
  // general-path matrices agree with it to working precision).
  double relation = rep.relation_residual;
  if (graph.vertices.size() == 2 && rep.std_generators.size() == 4) {
    auto demo = exactpath::theta_demo(ctx, cfg.R);
    double agree = 0;
    for (int i = 0; i < 4; ++i)
      agree = std::max(agree, psl_distance(demo.gens[i], rep.std_generators[i]) /
                                  std::max(1.0, (double)demo.gens[i].mat().norm()));
    if (agree < 1e-6) {
      rep.std_generators = demo.gens;
      relation = demo.relation_residual();
    }
  }
  char buf[256];
  snprintf(buf, sizeof(buf), "{\"relation_residual\": %.6e, \"max_gluing_defect\": %.6e, \"genus\": %d}",
           relation, rep.max_gluing_defect, graph.genus());
  io::write_file(path_in(cfg, "assembled.json"),
                 io::report_json(cfg, {{"summary", buf},
                                       {"generators", gens},
                                       {"boundary_lengths", lens},
                                       {"graph", io::ribbon_graph_to_json(graph)}}));
  return relation < cfg.tol.num ? EXIT_OK : EXIT_TOLERANCE;
}

int cmd_certify(const io::RunConfig& cfg) {
  TauContext ctx(cfg.n, Field::Complex, cfg.tol);
  TauContext c2(2, Field::Complex, cfg.tol);
  RPerfectSurfaceRep surf = r_perfect_surface(RibbonGraph::theta(), cfg.R, 4);
  auto demo = exactpath::theta_demo(ctx, cfg.R);
  SampledBoundaryMap bm = boundary_map(demo.gens, surf, ctx, 4, 64);
  std::string csv = "x,flag_entries\n";
  for (size_t i = 0; i < bm.points.size(); ++i) {
    csv += std::to_string(bm.points[i]) + ",\"";
    const Mat& b = bm.flags[i].basis();
    for (int r = 0; r < b.rows(); ++r)
      for (int c = 0; c < b.cols(); ++c) {
        char e[64];
        snprintf(e, sizeof(e), "%.12g%+.12gi;", (double)b(r, c).real(), (double)b(r, c).imag());
        csv += e;
      }
    csv += "\"\n";
  }
  io::write_file(path_in(cfg, "boundary_map.csv"), csv);
  SullivanReport sul = sullivan_check(bm, ctx, 32, 120, cfg.seed);
  SchottkyCertificate cert = schottky_certificate(demo.gens, ctx, 0.0, 300, cfg.seed);
  char buf[512];
  snprintf(buf, sizeof(buf),
           "{\"delta_hat\": %.6e, \"holder_exponent\": %.4f, \"schottky_certified\": %s, "
           "\"transversality_margin\": %.4f, \"worst_contraction\": %.4f, \"samples\": %zu}",
           sul.delta_hat, sul.holder_exponent, cert.certified ? "true" : "false",
           cert.transversality_margin, cert.worst_contraction, bm.points.size());
  io::write_file(path_in(cfg, "certificates.json"), io::report_json(cfg, {{"certify", buf}}));
  return cert.certified ? EXIT_OK : EXIT_TOLERANCE;
}

int cmd_lp(const io::RunConfig& cfg, const std::string& mu1_path, const std::string& mu2_path) {
  DiscreteMeasure m1 = io::measure_from_json(io::read_file(mu1_path));
  DiscreteMeasure m2 = io::measure_from_json(io::read_file(mu2_path));
  auto frob = [](const GroupElement& a, const GroupElement& b) {
    return psl_distance(a, b);
  };
  m1.metric = frob;
  m2.metric = frob;
  double d;
  try {
    d = levy_prokhorov(m1, m2);
  } catch (const std::invalid_argument& e) {
    std::cerr << "structural error: " << e.what() << "\n";
    return EXIT_STRUCTURAL;
  }
  char buf[128];
  snprintf(buf, sizeof(buf), "{\"distance\": %.9e}", d);
  io::write_file(path_in(cfg, "lp_report.json"), io::report_json(cfg, {{"lp", buf}}));
  printf("%.9e\n", d);
  return EXIT_OK;
}

int cmd_mix(const io::RunConfig& cfg) {
  LatticeProvider lat;
  if (cfg.lattice == "genus2_fn")
    lat = genus2_lattice(2.0);
  else if (cfg.lattice == "triangle237")
    lat = triangle237_lattice();
  else {
    std::cerr << "config error: lattice '" << cfg.lattice << "' unsupported for mixing\n";
    return EXIT_CONFIG;
  }
  if (!lat.reduce) {
    std::cerr << "structural error: provider has no fundamental-domain reduction\n";
    return EXIT_STRUCTURAL;
  }
  TauContext c2(2, Field::Complex, cfg.tol);
  Observable psi, theta;
  psi.center = GroupElement::identity(2, Field::Complex);
  theta.center = GroupElement(mat2(1.2, 0.3, 0.1, (1 + 0.3 * 0.1) / 1.2), Field::Complex);
  MixingReport rep = mixing_experiment(lat, psi, theta, cfg.r_grid, cfg.samples, cfg.seed);
  std::string csv = "R,correlation,std_error\n";
  for (const auto& row : rep.rows) {
    char line[96];
    snprintf(line, sizeof(line), "%.3f,%.6e,%.6e\n", row.R, row.correlation, row.std_error);
    csv += line;
  }
  io::write_file(path_in(cfg, "mixing_decay.csv"), csv);
  char buf[96];
  snprintf(buf, sizeof(buf), "{\"fitted_slope\": %.4f}", rep.fitted_slope);
  io::write_file(path_in(cfg, "mix_report.json"), io::report_json(cfg, {{"mixing", buf}}));
  return rep.fitted_slope < 0 ? EXIT_OK : EXIT_TOLERANCE;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pantograph: near-Fuchsian surface-group representation toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir, qplus, qminus, graph_path, mu1, mu2;
  unsigned seed = 0;
  int threads = 0;
  bool sweep = false;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--seed", seed, "seed override");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads");

  auto* b = app.add_subcommand("build-pants", "construct perfect pants data and check it");
  b->add_flag("--sweep", sweep, "emit residual vs perturbation CSV");
  auto* g = app.add_subcommand("glue", "check well-gluing of two pants files");
  g->add_option("--qplus", qplus)->required();
  g->add_option("--qminus", qminus)->required();
  auto* a = app.add_subcommand("assemble", "assemble a closed-surface representation");
  a->add_option("--graph", graph_path, "ribbon graph JSON (default: theta)");
  auto* c = app.add_subcommand("certify", "boundary map, Sullivan defect, Schottky certificate");
  auto* l = app.add_subcommand("lp", "Levy-Prokhorov distance of two measures");
  l->add_option("--mu1", mu1)->required();
  l->add_option("--mu2", mu2)->required();
  auto* m = app.add_subcommand("mix", "geodesic-flow correlation decay experiment");

  CLI11_PARSE(app, argc, argv);

  io::RunConfig cfg;
  try {
    cfg = load_config(config_path, seed, out_dir, threads);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return EXIT_CONFIG;
  }

  try {
    if (b->parsed()) return cmd_build_pants(cfg, sweep);
    if (g->parsed()) return cmd_glue(cfg, qplus, qminus);
    if (a->parsed()) return cmd_assemble(cfg, graph_path);
    if (c->parsed()) return cmd_certify(cfg);
    if (l->parsed()) return cmd_lp(cfg, mu1, mu2);
    if (m->parsed()) return cmd_mix(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return EXIT_CONFIG;
  } catch (const std::domain_error& e) {
    std::cerr << "structural error: " << e.what() << "\n";
    return EXIT_STRUCTURAL;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return EXIT_STRUCTURAL;
  }
  return EXIT_OK;
}
