// plandis: quasilinear Schrodinger operators H = Delta_p + V on weighted
// graphs. Subcommands build graphs, run the solvers and evaluate the
// Landis-type decay criteria; artifacts are deterministic JSON/CSV.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "plandis/graph_io.hpp"
#include "plandis/landis.hpp"
#include "plandis/serialize.hpp"
#include "expression.hpp"

namespace plandis::tools {
namespace {

using plandis::Json;

struct OutputPaths {
  std::string json_path;  // empty: stdout
  std::string csv_path;
};

void emit_json(const OutputPaths& out, const Json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (out.json_path.empty()) {
    std::cout << text;
  } else {
    write_text(out.json_path, text);
  }
}

std::string config_comment(const Json& config) {
  std::string flat = "# config:";
  for (const auto& [k, v] : config.items()) {
    flat += " " + k + "=" + (v.is_string() ? v.get<std::string>() : v.dump());
  }
  return flat + "\n";
}

SphericalFunction radial_from_expression(const std::string& expr, int R, double d, double beta) {
  std::string s = substitute_symbol(expr, "beta", beta);
  s = substitute_symbol(s, "d", d);
  SphericalFunction u;
  u.values = evaluate_radial_profile(s, R);
  return u;
}

// Hardy reference and numeric G_1 on the radial quotient of a regular tree.
struct TreeReference {
  GraphPtr quotient;
  HardyPackage hardy;
  VertexFunction g1;
  std::string provenance;
};

TreeReference build_tree_reference(int d, double p, int R) {
  const ModelGraphSpec spec = ModelGraphSpec::regular_tree(d, R);
  TreeReference ref;
  ref.quotient = std::make_shared<WeightedGraph>(quotient_graph(spec));
  const SphericalFunction g0 = green0_profile(spec, p);
  ref.hardy = hardy_weight(ref.quotient, p, lift(*ref.quotient, g0));

  // G_1 by exhaustion over a deeper quotient family; shooting loses relative
  // accuracy at deep radii.
  const int max_feasible = static_cast<int>(std::log(8e18) / std::log(static_cast<double>(d))) - 2;
  const int big = std::min(R + 9, max_feasible);
  if (big < R) {
    throw PreconditionError("radius " + std::to_string(R) + " leaves no room for the G_1 " +
                            "exhaustion at degree " + std::to_string(d) +
                            " (sphere masses overflow past radius " +
                            std::to_string(max_feasible) + ")");
  }
  const ModelGraphSpec deep = ModelGraphSpec::regular_tree(d, big);
  const ExhaustionResult ex =
      radial_green_exhaustion(deep, p, 1.0, {big - 9, big - 6, big - 3, big});
  VertexFunction g1(static_cast<std::size_t>(R) + 1);
  for (int r = 0; r <= R; ++r) g1[r] = ex.limit[r];
  ref.g1 = lift(*ref.quotient, SphericalFunction{g1.values});
  ref.provenance = "G_1 by radial exhaustion up to R = " + std::to_string(big) +
                   (ex.extrapolated ? " (geometric extrapolation)" : "");
  return ref;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConvergenceError*>(&e)) return 3;
  if (dynamic_cast<const PreconditionError*>(&e)) return 2;
  return 1;
}

// ---------------------------------------------------------------------------

int cmd_graph_validate(const std::string& in) {
  const WeightedGraph g = read_graph(in);
  Json doc;
  doc["vertices"] = g.n();
  doc["edges"] = g.edge_count();
  doc["root"] = g.root();
  doc["max_depth"] = g.max_depth();
  doc["valid"] = true;
  std::cout << doc.dump(2) << "\n";
  return 0;
}

int cmd_graph_build(const std::string& in, const std::string& out) {
  const WeightedGraph g = read_graph(in);
  if (out.empty()) {
    std::cout << graph_to_json_string(g);
  } else {
    write_graph(g, out);
  }
  return 0;
}

int cmd_model_build(const std::string& spec_path, const std::string& out, bool quotient) {
  const ModelGraphSpec spec = read_model_spec(spec_path);
  const WeightedGraph g = quotient ? quotient_graph(spec) : realize(spec);
  if (out.empty()) {
    std::cout << graph_to_json_string(g);
  } else {
    write_graph(g, out);
  }
  return 0;
}

struct SolveArgs {
  std::string graph_path;
  std::string spec_path;
  bool quotient = false;
  double p = 2.0;
  double v_const = 0.0;
  std::string boundary_file;
  double boundary_const = 0.0;
  bool have_boundary_const = false;
  int ball_radius = 0;
  SolveConfig config;
  OutputPaths out;
};

int cmd_solve(const SolveArgs& a) {
  WeightedGraph g = [&] {
    if (!a.spec_path.empty()) {
      const ModelGraphSpec spec = read_model_spec(a.spec_path);
      return a.quotient ? quotient_graph(spec) : realize(spec);
    }
    WeightedGraph raw = read_graph(a.graph_path);
    if (a.ball_radius > 0) return mark_boundary(raw, ball_decomposition(raw, a.ball_radius));
    return raw;
  }();
  if (!g.has_boundary()) {
    throw PreconditionError("solve needs a truncated graph; pass --ball or a model spec");
  }
  auto gp = std::make_shared<WeightedGraph>(std::move(g));
  const SchrodingerOperator op = SchrodingerOperator::with_constant_potential(gp, a.p, a.v_const);

  VertexFunction boundary(gp->n(), 0.0);
  if (!a.boundary_file.empty()) {
    boundary = read_vertex_function(a.boundary_file, gp->n());
  } else if (a.have_boundary_const) {
    boundary = VertexFunction(gp->n(), a.boundary_const);
  }
  SolveStats stats;
  const VertexFunction u = dirichlet_solve(op, boundary, a.config, &stats);

  Json config{{"task", "solve"},
              {"p", a.p},
              {"V", a.v_const},
              {"residual_tol", a.config.residual_tol},
              {"max_sweeps", a.config.max_sweeps},
              {"damping", a.config.damping}};
  Json doc;
  doc["config"] = config;
  doc["stats"] = to_json(stats);
  doc["values"] = u.values;
  emit_json(a.out, doc);
  return 0;
}

struct GreenArgs {
  bool tree = false;
  bool antitree = false;
  std::string spec_path;
  int d = 2;
  double gamma = 1.0;
  double p = 2.0;
  double alpha = 0.0;
  int R = 16;
  std::vector<int> schedule;
  OutputPaths out;
};

int cmd_green(const GreenArgs& a) {
  ModelGraphSpec spec = [&] {
    if (a.tree) return ModelGraphSpec::regular_tree(a.d, a.R);
    if (a.antitree) return ModelGraphSpec::anti_tree(a.gamma, a.R);
    if (!a.spec_path.empty()) {
      ModelGraphSpec s = read_model_spec(a.spec_path);
      if (s.R() < a.R) throw PreconditionError("spec shorter than requested radius");
      return s;
    }
    throw PreconditionError("green needs --tree, --antitree or --spec");
  }();

  std::vector<int> schedule = a.schedule;
  if (schedule.empty()) {
    for (int r = std::max(2, a.R - 9); r <= a.R; r += 3) schedule.push_back(r);
    if (schedule.back() != a.R) schedule.push_back(a.R);
  }
  const ExhaustionResult ex = radial_green_exhaustion(spec, a.p, a.alpha, schedule);

  Json config{{"task", "green"},      {"kind", spec.kind}, {"p", a.p},
              {"alpha", a.alpha},     {"R", a.R},          {"schedule", schedule}};
  if (a.tree) config["d"] = a.d;
  if (a.antitree) config["gamma"] = a.gamma;

  std::string csv = config_comment(config);
  csv += "radius,G\n";
  for (std::size_t r = 0; r < ex.limit.size(); ++r) {
    csv += std::to_string(r) + "," + format_double(ex.limit.values[r]) + "\n";
  }
  if (a.out.csv_path.empty() && a.out.json_path.empty()) {
    std::cout << csv;
  }
  if (!a.out.csv_path.empty()) write_text(a.out.csv_path, csv);
  if (!a.out.json_path.empty()) {
    Json doc;
    doc["config"] = config;
    doc["exhaustion"] = to_json(ex);
    emit_json({a.out.json_path, ""}, doc);
  }
  return 0;
}

int cmd_beta(double p, int d, const OutputPaths& out) {
  const double beta = tree_beta(p, d);
  const double residual = std::abs(tree_beta_residual(beta, p, d));
  std::cout << "beta = " << format_double(beta) << "\n";
  std::cout << "|f(beta)| = " << format_double(residual) << "\n";
  if (!out.json_path.empty()) {
    Json doc{{"config", Json{{"task", "beta"}, {"p", p}, {"d", d}}},
             {"beta", beta},
             {"residual", residual}};
    emit_json(out, doc);
  }
  return 0;
}

struct HardyArgs {
  bool tree = false;
  std::string spec_path;
  int d = 2;
  double p = 2.0;
  int R = 12;
  OutputPaths out;
};

int cmd_hardy(const HardyArgs& a) {
  const ModelGraphSpec spec =
      a.tree ? ModelGraphSpec::regular_tree(a.d, a.R) : read_model_spec(a.spec_path);
  auto gp = std::make_shared<WeightedGraph>(quotient_graph(spec));
  const SphericalFunction g0 = green0_profile(spec, a.p);
  const HardyPackage pkg = hardy_weight(gp, a.p, lift(*gp, g0));

  Json config{{"task", "hardy"}, {"kind", spec.kind}, {"p", a.p}, {"R", spec.R()}};
  if (a.tree) config["d"] = a.d;

  std::string csv = config_comment(config);
  csv += "radius,G0,Phi,Wop\n";
  for (int r = 0; r <= spec.R(); ++r) {
    csv += std::to_string(r) + "," + format_double(g0[r]) + "," + format_double(pkg.phi[r]) +
           "," + format_double(pkg.w_op[r]) + "\n";
  }
  if (!a.out.csv_path.empty()) {
    write_text(a.out.csv_path, csv);
  } else if (a.out.json_path.empty()) {
    std::cout << csv;
  }
  if (!a.out.json_path.empty()) {
    Json doc;
    doc["config"] = config;
    doc["max_residual"] = pkg.max_residual;
    doc["phi"] = pkg.phi.values;
    doc["w_op"] = pkg.w_op.values;
    emit_json({a.out.json_path, ""}, doc);
  }
  return 0;
}

struct ProbeArgs {
  std::string graph_path;
  std::string spec_path;
  bool realize_spec = false;
  double p = 2.0;
  double v_const = 0.0;
  bool hardy = false;  // probe Delta_p - W_op instead of a constant potential
  int samples = 500;
  std::uint64_t seed = 0;
  bool have_seed = false;
  int support_radius = -1;
  OutputPaths out;
};

int cmd_energy_probe(const ProbeArgs& a) {
  if (!a.have_seed) throw PreconditionError("sampled tasks need an explicit --seed");
  GraphPtr gp;
  ModelGraphSpec spec;
  bool have_spec = false;
  if (!a.spec_path.empty()) {
    spec = read_model_spec(a.spec_path);
    have_spec = true;
    gp = std::make_shared<WeightedGraph>(a.realize_spec ? realize(spec) : quotient_graph(spec));
  } else if (!a.graph_path.empty()) {
    gp = std::make_shared<WeightedGraph>(read_graph(a.graph_path));
  } else {
    throw PreconditionError("energy-probe needs --graph or --spec");
  }

  SchrodingerOperator op = [&] {
    if (a.hardy) {
      if (!have_spec) throw PreconditionError("--hardy needs a model spec");
      const SphericalFunction g0 = green0_profile(spec, a.p);
      return hardy_weight(gp, a.p, lift(*gp, g0)).hardy_operator();
    }
    return SchrodingerOperator::with_constant_potential(gp, a.p, a.v_const);
  }();

  std::vector<VertexId> support;
  if (a.support_radius >= 0) {
    for (VertexId x = 0; static_cast<std::size_t>(x) < gp->n(); ++x) {
      if (gp->depth(x) <= a.support_radius) support.push_back(x);
    }
  }
  const ProbeResult probe = nonnegativity_probe(op, a.samples, a.seed, support);

  Json config{{"task", "energy-probe"}, {"p", a.p},       {"samples", a.samples},
              {"seed", a.seed},         {"hardy", a.hardy}};
  if (!a.hardy) config["V"] = a.v_const;
  if (a.support_radius >= 0) config["support_radius"] = a.support_radius;
  Json doc;
  doc["config"] = config;
  doc["probe"] = to_json(probe);
  emit_json(a.out, doc);
  return 0;
}

struct LandisArgs {
  std::string regime;
  double p = 2.0;
  int d = 2;
  double gamma = 1.0;
  int R = 30;
  std::string u_expr;
  std::string u_file;
  std::string spec_path;
  std::string graph_path;
  double v_const = 0.0;
  bool have_v = false;
  double v_compact = 0.0;
  bool strict = false;
  bool check_negated = false;
  int compact_radius = 0;
  bool declared_recurrent = false;
  OutputPaths out;
};

void write_landis_artifacts(const LandisArgs& a, const Json& config, const LandisReport& rep) {
  Json doc;
  doc["config"] = config;
  doc["report"] = to_json(rep);
  emit_json(a.out, doc);
  if (!a.out.csv_path.empty()) {
    // one block per trace condition; liminf-style traces are per-annulus
    // minima, O(.)-style traces are per-annulus suprema
    std::string csv = config_comment(config);
    for (const auto& cond : rep.conditions) {
      if (cond.radii.empty()) continue;
      csv += "# condition: " + cond.name + "\n";
      const bool is_min = cond.name.find("liminf") != std::string::npos;
      csv += trace_csv(cond.radii, is_min ? std::vector<double>{} : cond.values,
                       is_min ? cond.values : std::vector<double>{}, cond.values);
    }
    write_text(a.out.csv_path, csv);
  }
}

int cmd_landis(const LandisArgs& a) {
  LandisOptions opts;
  opts.strict = a.strict;
  opts.check_negated = a.check_negated;

  if (a.regime == "tree") {
    const double beta = tree_beta(a.p, a.d);
    const SphericalFunction u =
        radial_from_expression(a.u_expr, a.R, static_cast<double>(a.d), beta);
    const LandisReport rep =
        landis_check_tree(a.p, a.d, u, a.have_v ? a.v_const : 1.0, opts);
    Json config{{"task", "landis-tree"}, {"p", a.p}, {"d", a.d}, {"R", a.R}, {"u", a.u_expr}};
    write_landis_artifacts(a, config, rep);
    std::cout << "verdict: " << to_string(rep.verdict) << "\n";
    return 0;
  }

  if (a.regime == "model") {
    const ModelGraphSpec spec = a.spec_path.empty()
                                    ? ModelGraphSpec::anti_tree(a.gamma, a.R)
                                    : read_model_spec(a.spec_path);
    const SphericalFunction u = radial_from_expression(a.u_expr, spec.R(), 0.0, 0.0);
    const LandisReport rep = landis_check_model(spec, a.p, a.have_v ? a.v_const : 0.0, u, opts);
    Json config{{"task", "landis-model"}, {"p", a.p}, {"R", spec.R()}, {"u", a.u_expr},
                {"kind", spec.kind}};
    write_landis_artifacts(a, config, rep);
    std::cout << "verdict: " << to_string(rep.verdict) << "\n";
    return 0;
  }

  if (a.regime == "general") {
    // d-regular tree with the optimal-Hardy reference on the radial quotient.
    const TreeReference ref = build_tree_reference(a.d, a.p, a.R);
    const double beta = tree_beta(a.p, a.d);
    const SphericalFunction u =
        radial_from_expression(a.u_expr, a.R, static_cast<double>(a.d), beta);
    const VertexFunction uf = lift(*ref.quotient, u);
    const double v_const = a.have_v ? a.v_const : 1.0;
    const SchrodingerOperator op =
        SchrodingerOperator::with_constant_potential(ref.quotient, a.p, v_const);
    LandisReference reference{ref.hardy.hardy_operator(), ref.hardy.phi,
                              CriticalityEvidence::ConfirmedByConstruction};
    LandisReport rep = landis_check_general(op, uf, reference, ref.g1, opts);
    rep.provenance = ref.provenance;
    Json config{{"task", "landis-general"}, {"p", a.p}, {"d", a.d}, {"R", a.R},
                {"u", a.u_expr}, {"V", v_const}};
    write_landis_artifacts(a, config, rep);
    std::cout << "verdict: " << to_string(rep.verdict) << "\n";
    return 0;
  }

  if (a.regime == "negative") {
    const ModelGraphSpec spec = a.spec_path.empty()
                                    ? ModelGraphSpec::anti_tree(a.gamma, a.R)
                                    : read_model_spec(a.spec_path);
    if (!is_subcritical(spec, a.p)) {
      throw NotSubcritical("negative regime needs a subcritical model graph");
    }
    auto gp = std::make_shared<WeightedGraph>(quotient_graph(spec));
    const SphericalFunction g0 = green0_profile(spec, a.p);
    const VertexFunction g0f = lift(*gp, g0);
    const HardyPackage hardy = hardy_weight(gp, a.p, g0f);
    const SphericalFunction u = radial_from_expression(a.u_expr, spec.R(), 0.0, 0.0);
    const double v_const = a.have_v ? a.v_const : 0.0;
    const SchrodingerOperator op =
        SchrodingerOperator::with_constant_potential(gp, a.p, v_const);
    LandisReference reference{hardy.hardy_operator(), hardy.phi,
                              CriticalityEvidence::ConfirmedByConstruction};
    LandisReport rep =
        landis_check_negative_potential(op, lift(*gp, u), reference, g0f, opts);
    rep.provenance = "g = G_0 from the closed-form series";
    Json config{{"task", "landis-negative"}, {"p", a.p}, {"R", spec.R()}, {"u", a.u_expr},
                {"kind", spec.kind}, {"V", v_const}};
    write_landis_artifacts(a, config, rep);
    std::cout << "verdict: " << to_string(rep.verdict) << "\n";
    return 0;
  }

  if (a.regime == "recurrent") {
    WeightedGraph g = [&] {
      if (!a.spec_path.empty()) return quotient_graph(read_model_spec(a.spec_path));
      if (!a.graph_path.empty()) return read_graph(a.graph_path);
      return quotient_graph(ModelGraphSpec::path(a.R));
    }();
    RecurrenceEvidence evidence = RecurrenceEvidence::Unknown;
    if (!a.spec_path.empty() || a.graph_path.empty()) {
      const ModelGraphSpec spec =
          a.spec_path.empty() ? ModelGraphSpec::path(a.R) : read_model_spec(a.spec_path);
      evidence = !is_subcritical(spec, a.p) ? RecurrenceEvidence::FromSpec
                                            : RecurrenceEvidence::Unknown;
    } else if (a.declared_recurrent) {
      evidence = RecurrenceEvidence::Declared;
    }
    auto gp = std::make_shared<WeightedGraph>(std::move(g));
    VertexFunction u(gp->n());
    if (!a.u_file.empty()) {
      u = read_vertex_function(a.u_file, gp->n());
    } else {
      for (VertexId x = 0; static_cast<std::size_t>(x) < gp->n(); ++x) {
        u[x] = evaluate_radial_expression(a.u_expr, gp->depth(x));
      }
    }
    // --V is the potential outside the compact ball ("c outside B_k");
    // --v-compact sets it inside
    std::vector<VertexId> compact;
    VertexFunction V(gp->n(), a.have_v ? a.v_const : 0.0);
    for (VertexId x = 0; static_cast<std::size_t>(x) < gp->n(); ++x) {
      if (gp->depth(x) <= a.compact_radius) {
        compact.push_back(x);
        V[x] = a.v_compact;
      }
    }
    const SchrodingerOperator op(gp, a.p, V);
    const LandisReport rep = landis_check_recurrent(op, u, compact, evidence, opts);
    Json config{{"task", "landis-recurrent"}, {"p", a.p}, {"R", a.R}, {"u", a.u_expr},
                {"compact_radius", a.compact_radius}};
    write_landis_artifacts(a, config, rep);
    std::cout << "verdict: " << to_string(rep.verdict) << "\n";
    return 0;
  }

  throw PreconditionError("unknown landis regime \"" + a.regime + "\"");
}

int run_cli(const std::vector<std::string>& args);

int cmd_batch(const std::string& scenarios_path, int jobs) {
  std::ifstream in(scenarios_path);
  if (!in) throw ParseError("cannot open " + scenarios_path);
  Json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scenario file: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("scenario file must be a JSON array");

  // One scenario = one CLI invocation; keys map to flags, "task" picks the
  // subcommand (dashes split sub-subcommands, e.g. "landis-tree").
  std::vector<std::vector<std::string>> invocations;
  for (const auto& scenario : doc) {
    if (!scenario.contains("task")) throw ParseError("scenario needs \"task\"");
    std::vector<std::string> args;
    std::string task = scenario["task"].get<std::string>();
    std::size_t dash;
    while ((dash = task.find('-')) != std::string::npos && task.substr(0, dash) == "landis") {
      args.push_back(task.substr(0, dash));
      task = task.substr(dash + 1);
    }
    args.push_back(task);
    for (const auto& [key, value] : scenario.items()) {
      if (key == "task") continue;
      if (value.is_boolean()) {
        if (value.get<bool>()) args.push_back("--" + key);
        continue;
      }
      args.push_back("--" + key);
      args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
    invocations.push_back(std::move(args));
  }

  std::vector<int> codes(invocations.size(), 0);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < invocations.size(); ++i) codes[i] = run_cli(invocations[i]);
  } else {
    // fan out in windows of `jobs`; artifacts are per-scenario files, so the
    // execution order does not affect them
    for (std::size_t base = 0; base < invocations.size(); base += static_cast<std::size_t>(jobs)) {
      std::vector<std::future<int>> window;
      const std::size_t end =
          std::min(invocations.size(), base + static_cast<std::size_t>(jobs));
      for (std::size_t i = base; i < end; ++i) {
        window.push_back(std::async(std::launch::async,
                                    [&invocations, i] { return run_cli(invocations[i]); }));
      }
      for (std::size_t i = base; i < end; ++i) codes[i] = window[i - base].get();
    }
  }
  int failures = 0;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    std::cout << "scenario " << i << ": exit " << codes[i] << "\n";
    if (codes[i] != 0) ++failures;
  }
  return failures == 0 ? 0 : 1;
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"quasilinear Schrodinger operators on weighted graphs"};
  app.require_subcommand(1);

  // graph validate|build
  auto* graph_cmd = app.add_subcommand("graph", "validate or canonicalize graph files");
  graph_cmd->require_subcommand(1);
  std::string g_in, g_out;
  auto* gv = graph_cmd->add_subcommand("validate", "parse and validate a graph document");
  gv->add_option("--in", g_in, "graph JSON")->required();
  auto* gb = graph_cmd->add_subcommand("build", "rewrite a graph document in canonical form");
  gb->add_option("--in", g_in, "graph JSON")->required();
  gb->add_option("--out", g_out, "output path (default stdout)");

  // model build
  auto* model_cmd = app.add_subcommand("model", "realize model-graph specs");
  model_cmd->require_subcommand(1);
  std::string m_spec, m_out;
  bool m_quotient = false;
  auto* mb = model_cmd->add_subcommand("build", "realize a spec as a concrete graph");
  mb->add_option("--spec", m_spec, "model spec JSON")->required();
  mb->add_option("--out", m_out, "output path (default stdout)");
  mb->add_flag("--quotient", m_quotient, "emit the radial quotient instead");

  // solve
  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Dirichlet solve on a truncated graph");
  solve_cmd->add_option("--graph", solve_args.graph_path, "graph JSON");
  solve_cmd->add_option("--spec", solve_args.spec_path, "model spec JSON");
  solve_cmd->add_flag("--quotient", solve_args.quotient, "use the radial quotient");
  solve_cmd->add_option("--ball", solve_args.ball_radius, "mark the outermost sphere of --graph");
  solve_cmd->add_option("--p", solve_args.p, "exponent p > 1")->required();
  solve_cmd->add_option("--V", solve_args.v_const, "constant potential");
  solve_cmd->add_option("--boundary-file", solve_args.boundary_file, "boundary data JSON");
  auto* bconst = solve_cmd->add_option("--boundary-const", solve_args.boundary_const,
                                       "constant boundary data");
  solve_cmd->add_option("--residual-tol", solve_args.config.residual_tol,
                        "relaxation residual target");
  solve_cmd->add_option("--max-sweeps", solve_args.config.max_sweeps, "sweep budget");
  solve_cmd->add_option("--damping", solve_args.config.damping, "relaxation damping in (0, 1]");
  solve_cmd->add_option("--out", solve_args.out.json_path, "solution JSON path");

  // green
  GreenArgs green_args;
  auto* green_cmd = app.add_subcommand("green", "Green function by radial exhaustion");
  green_cmd->add_flag("--tree", green_args.tree, "d-regular tree");
  green_cmd->add_flag("--antitree", green_args.antitree, "anti-tree");
  green_cmd->add_option("--spec", green_args.spec_path, "model spec JSON");
  green_cmd->add_option("--d", green_args.d, "tree degree");
  green_cmd->add_option("--gamma", green_args.gamma, "anti-tree exponent");
  green_cmd->add_option("--p", green_args.p, "exponent p > 1")->required();
  green_cmd->add_option("--alpha", green_args.alpha, "shift alpha >= 0");
  green_cmd->add_option("--R", green_args.R, "truncation radius");
  green_cmd->add_option("--schedule", green_args.schedule, "exhaustion radii");
  green_cmd->add_option("--out", green_args.out.csv_path, "CSV output path");
  green_cmd->add_option("--json", green_args.out.json_path, "JSON metadata path");

  // beta
  double beta_p = 2.0;
  int beta_d = 2;
  OutputPaths beta_out;
  auto* beta_cmd = app.add_subcommand("beta", "decay base of the tree equation");
  beta_cmd->add_option("--p", beta_p, "exponent p > 1")->required();
  beta_cmd->add_option("--d", beta_d, "tree degree")->required();
  beta_cmd->add_option("--out", beta_out.json_path, "JSON output path");

  // hardy
  HardyArgs hardy_args;
  auto* hardy_cmd = app.add_subcommand("hardy", "optimal Hardy weight package");
  hardy_cmd->add_flag("--tree", hardy_args.tree, "d-regular tree");
  hardy_cmd->add_option("--spec", hardy_args.spec_path, "model spec JSON");
  hardy_cmd->add_option("--d", hardy_args.d, "tree degree");
  hardy_cmd->add_option("--p", hardy_args.p, "exponent p > 1")->required();
  hardy_cmd->add_option("--R", hardy_args.R, "truncation radius");
  hardy_cmd->add_option("--out", hardy_args.out.csv_path, "CSV output path");
  hardy_cmd->add_option("--json", hardy_args.out.json_path, "JSON output path");

  // energy-probe
  ProbeArgs probe_args;
  auto* probe_cmd = app.add_subcommand("energy-probe", "sampled nonnegativity probe of Q");
  probe_cmd->add_option("--graph", probe_args.graph_path, "graph JSON");
  probe_cmd->add_option("--spec", probe_args.spec_path, "model spec JSON");
  probe_cmd->add_flag("--realize", probe_args.realize_spec, "realize the spec");
  probe_cmd->add_option("--p", probe_args.p, "exponent p > 1")->required();
  probe_cmd->add_option("--V", probe_args.v_const, "constant potential");
  probe_cmd->add_flag("--hardy", probe_args.hardy, "probe Delta_p - W_op");
  probe_cmd->add_option("--samples", probe_args.samples, "sample count");
  auto* seed_opt = probe_cmd->add_option("--seed", probe_args.seed, "RNG seed (required)");
  probe_cmd->add_option("--support-radius", probe_args.support_radius,
                        "restrict phi to the ball of this radius");
  probe_cmd->add_option("--out", probe_args.out.json_path, "JSON output path");

  // landis <regime>
  LandisArgs landis_args;
  auto* landis_cmd = app.add_subcommand("landis", "Landis criterion checkers");
  landis_cmd->require_subcommand(1);
  for (const std::string regime : {"general", "negative", "model", "tree", "recurrent"}) {
    auto* sub = landis_cmd->add_subcommand(regime, regime + " regime");
    sub->add_option("--p", landis_args.p, "exponent p > 1")->required();
    sub->add_option("--d", landis_args.d, "tree degree");
    sub->add_option("--gamma", landis_args.gamma, "anti-tree exponent");
    sub->add_option("--R", landis_args.R, "truncation radius");
    sub->add_option("--u", landis_args.u_expr, "radial u expression");
    sub->add_option("--u-file", landis_args.u_file, "per-vertex u JSON");
    sub->add_option("--spec", landis_args.spec_path, "model spec JSON");
    sub->add_option("--graph", landis_args.graph_path, "graph JSON (recurrent regime)");
    auto* vopt = sub->add_option("--V", landis_args.v_const,
                                 "constant potential (recurrent regime: outside the compact)");
    sub->add_option("--v-compact", landis_args.v_compact,
                    "potential inside the compact ball (recurrent regime)");
    sub->add_flag("--strict", landis_args.strict,
                  "fail instead of recording when u is not (sub)harmonic");
    sub->add_flag("--check-negated", landis_args.check_negated, "also evaluate -u");
    sub->add_option("--compact-radius", landis_args.compact_radius,
                    "compact set radius (recurrent regime)");
    sub->add_flag("--declared-recurrent", landis_args.declared_recurrent,
                  "caller-declared recurrence evidence");
    sub->add_option("--out", landis_args.out.json_path, "report JSON path");
    sub->add_option("--csv", landis_args.out.csv_path, "trace CSV path");
    sub->parse_complete_callback([&landis_args, vopt, regime] {
      landis_args.regime = regime;
      landis_args.have_v = vopt->count() > 0;
    });
  }

  // batch
  std::string batch_path;
  int batch_jobs = 1;
  auto* batch_cmd = app.add_subcommand("batch", "run a list of scenarios");
  batch_cmd->add_option("--scenarios", batch_path, "scenario JSON array")->required();
  batch_cmd->add_option("--jobs", batch_jobs, "parallel scenarios");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (gv->parsed()) return cmd_graph_validate(g_in);
    if (gb->parsed()) return cmd_graph_build(g_in, g_out);
    if (mb->parsed()) return cmd_model_build(m_spec, m_out, m_quotient);
    if (solve_cmd->parsed()) {
      solve_args.have_boundary_const = bconst->count() > 0;
      return cmd_solve(solve_args);
    }
    if (green_cmd->parsed()) return cmd_green(green_args);
    if (beta_cmd->parsed()) return cmd_beta(beta_p, beta_d, beta_out);
    if (hardy_cmd->parsed()) return cmd_hardy(hardy_args);
    if (probe_cmd->parsed()) {
      probe_args.have_seed = seed_opt->count() > 0;
      return cmd_energy_probe(probe_args);
    }
    if (landis_cmd->parsed()) return cmd_landis(landis_args);
    if (batch_cmd->parsed()) return cmd_batch(batch_path, batch_jobs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return 0;
}

}  // namespace
}  // namespace plandis::tools

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return plandis::tools::run_cli(args);
}
