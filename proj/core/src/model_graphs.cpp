#include "plandis/model_graphs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include <json.hpp>

#include "plandis/operators.hpp"
#include "plandis/trend.hpp"

namespace plandis {

using nlohmann::ordered_json;

namespace {

constexpr std::int64_t kMaxRealizedVertices = 2'000'000;
constexpr std::int64_t kMaxRealizedEdges = 20'000'000;

// Smallest integer >= s, with a guard against pow() landing a hair above an
// exact integer.
std::int64_t ceil_int(double s) {
  const double guarded = s - 1e-9 * std::max(1.0, std::abs(s));
  return static_cast<std::int64_t>(std::ceil(guarded));
}

}  // namespace

void ModelGraphSpec::validate() const {
  if (sphere_sizes.empty()) throw InvalidSpec("spec needs at least the root sphere");
  if (sphere_sizes[0] != 1) {
    throw InvalidSpec("#S_0 must be 1, got " + std::to_string(sphere_sizes[0]));
  }
  const std::size_t R = sphere_sizes.size() - 1;
  if (edge_weights.size() != R) {
    throw InvalidSpec("need one edge weight per consecutive sphere pair");
  }
  if (sphere_measures.size() != R + 1) {
    throw InvalidSpec("need one measure per sphere");
  }
  for (std::size_t r = 0; r <= R; ++r) {
    if (sphere_sizes[r] < 1) throw InvalidSpec("sphere sizes must be >= 1");
    if (!(sphere_measures[r] > 0.0)) throw InvalidSpec("sphere measures must be > 0");
  }
  for (std::size_t r = 0; r < R; ++r) {
    if (!(edge_weights[r] > 0.0)) throw InvalidSpec("edge weights must be > 0");
    if (wiring == Wiring::Tree && sphere_sizes[r + 1] % sphere_sizes[r] != 0) {
      throw InvalidSpec("tree wiring needs #S_{r+1} divisible by #S_r at r = " +
                        std::to_string(r));
    }
  }
}

ModelGraphSpec ModelGraphSpec::regular_tree(int d, int R) {
  if (d < 2) throw InvalidDegree("tree degree must be >= 2, got " + std::to_string(d));
  if (R < 1) throw InvalidSpec("tree radius must be >= 1");
  ModelGraphSpec spec;
  spec.kind = "tree";
  spec.wiring = Wiring::Tree;
  spec.law = {GrowthLaw::Geometric, static_cast<double>(d)};
  std::int64_t size = 1;
  for (int r = 0; r <= R; ++r) {
    spec.sphere_sizes.push_back(size);
    spec.sphere_measures.push_back(1.0);
    if (r < R) spec.edge_weights.push_back(1.0);
    if (size > std::numeric_limits<std::int64_t>::max() / d) {
      throw InvalidSpec("tree sphere sizes overflow at radius " + std::to_string(r));
    }
    size *= d;
  }
  spec.validate();
  return spec;
}

ModelGraphSpec ModelGraphSpec::anti_tree(double gamma, int R) {
  if (!(gamma > 0.0)) throw InvalidSpec("anti-tree gamma must be > 0");
  if (R < 1) throw InvalidSpec("anti-tree radius must be >= 1");
  ModelGraphSpec spec;
  spec.kind = "antitree";
  spec.wiring = Wiring::CompleteBipartite;
  spec.law = {GrowthLaw::PowerLaw, 2.0 * gamma};
  for (int r = 0; r <= R; ++r) {
    // #S_{r+1} = ceil(r^gamma) for r >= 1; the r = 0 instance of the rule
    // would be empty, so the first two spheres are singletons.
    const std::int64_t size = (r <= 1) ? 1 : ceil_int(std::pow(static_cast<double>(r - 1), gamma));
    spec.sphere_sizes.push_back(std::max<std::int64_t>(size, 1));
    spec.sphere_measures.push_back(1.0);
    if (r < R) spec.edge_weights.push_back(1.0);
  }
  spec.validate();
  return spec;
}

ModelGraphSpec ModelGraphSpec::path(int R) {
  if (R < 1) throw InvalidSpec("path radius must be >= 1");
  ModelGraphSpec spec;
  spec.kind = "path";
  spec.wiring = Wiring::Tree;
  spec.law = {GrowthLaw::PowerLaw, 0.0};
  for (int r = 0; r <= R; ++r) {
    spec.sphere_sizes.push_back(1);
    spec.sphere_measures.push_back(1.0);
    if (r < R) spec.edge_weights.push_back(1.0);
  }
  return spec;
}

ModelGraphSpec ModelGraphSpec::custom(std::vector<std::int64_t> sizes, std::vector<double> weights,
                                      std::vector<double> measures, Wiring wiring,
                                      AsymptoticLaw law) {
  ModelGraphSpec spec;
  spec.kind = "custom";
  spec.sphere_sizes = std::move(sizes);
  spec.edge_weights = std::move(weights);
  spec.sphere_measures = std::move(measures);
  spec.wiring = wiring;
  spec.law = law;
  spec.validate();
  return spec;
}

double ModelGraphSpec::tree_degree() const {
  if (kind != "tree" || sphere_sizes.size() < 2) {
    throw PreconditionError("tree degree only defined for tree specs");
  }
  return static_cast<double>(sphere_sizes[1]);
}

VertexFunction lift(const WeightedGraph& g, const SphericalFunction& f) {
  VertexFunction out(g.n());
  for (VertexId x = 0; static_cast<std::size_t>(x) < g.n(); ++x) {
    const int r = g.depth(x);
    if (static_cast<std::size_t>(r) >= f.size()) {
      throw PreconditionError("spherical function shorter than graph depth");
    }
    out[x] = f[r];
  }
  return out;
}

SphericalFunction restrict_spherical(const WeightedGraph& g, const VertexFunction& f) {
  if (f.size() != g.n()) throw PreconditionError("function not aligned with graph");
  SphericalFunction out;
  out.values.assign(static_cast<std::size_t>(g.max_depth()) + 1,
                    std::numeric_limits<double>::quiet_NaN());
  for (VertexId x = 0; static_cast<std::size_t>(x) < g.n(); ++x) {
    double& slot = out.values[static_cast<std::size_t>(g.depth(x))];
    if (std::isnan(slot)) {
      slot = f[x];
    } else if (slot != f[x]) {
      throw PreconditionError("function is not spherically symmetric");
    }
  }
  return out;
}

WeightedGraph realize(const ModelGraphSpec& spec) {
  spec.validate();
  const int R = spec.R();
  std::int64_t total = 0;
  std::int64_t total_edges = 0;
  for (int r = 0; r <= R; ++r) {
    total += spec.sphere_sizes[static_cast<std::size_t>(r)];
    if (r < R) {
      const std::int64_t a = spec.sphere_sizes[static_cast<std::size_t>(r)];
      const std::int64_t b = spec.sphere_sizes[static_cast<std::size_t>(r) + 1];
      total_edges += (spec.wiring == Wiring::Tree) ? b : a * b;
    }
  }
  if (total > kMaxRealizedVertices || total_edges > kMaxRealizedEdges) {
    throw InvalidSpec("spec too large to realize (" + std::to_string(total) + " vertices, " +
                      std::to_string(total_edges) + " edges); use the radial quotient");
  }

  std::vector<std::int64_t> offset(static_cast<std::size_t>(R) + 2, 0);
  for (int r = 0; r <= R; ++r) {
    offset[static_cast<std::size_t>(r) + 1] =
        offset[static_cast<std::size_t>(r)] + spec.sphere_sizes[static_cast<std::size_t>(r)];
  }

  std::vector<double> measures(static_cast<std::size_t>(total));
  for (int r = 0; r <= R; ++r) {
    for (std::int64_t i = offset[static_cast<std::size_t>(r)];
         i < offset[static_cast<std::size_t>(r) + 1]; ++i) {
      measures[static_cast<std::size_t>(i)] = spec.sphere_measures[static_cast<std::size_t>(r)];
    }
  }

  std::vector<EdgeTriple> edges;
  edges.reserve(static_cast<std::size_t>(total_edges));
  for (int r = 0; r < R; ++r) {
    const std::int64_t na = spec.sphere_sizes[static_cast<std::size_t>(r)];
    const std::int64_t nb = spec.sphere_sizes[static_cast<std::size_t>(r) + 1];
    const double w = spec.edge_weights[static_cast<std::size_t>(r)];
    const std::int64_t base_a = offset[static_cast<std::size_t>(r)];
    const std::int64_t base_b = offset[static_cast<std::size_t>(r) + 1];
    if (spec.wiring == Wiring::Tree) {
      const std::int64_t children = nb / na;
      for (std::int64_t j = 0; j < nb; ++j) {
        edges.push_back({static_cast<VertexId>(base_a + j / children),
                         static_cast<VertexId>(base_b + j), w});
      }
    } else {
      for (std::int64_t i = 0; i < na; ++i) {
        for (std::int64_t j = 0; j < nb; ++j) {
          edges.push_back({static_cast<VertexId>(base_a + i),
                           static_cast<VertexId>(base_b + j), w});
        }
      }
    }
  }

  WeightedGraph g = WeightedGraph::build(edges, measures, 0);
  return mark_boundary(g, ball_decomposition(g, R));
}

WeightedGraph quotient_graph(const ModelGraphSpec& spec) {
  spec.validate();
  const int R = spec.R();
  std::vector<EdgeTriple> edges;
  std::vector<double> measures;
  for (int r = 0; r <= R; ++r) {
    measures.push_back(spec.sphere_total_measure(r));
    if (r < R) edges.push_back({r, r + 1, boundary_weight(spec, r)});
  }
  WeightedGraph g = WeightedGraph::build(edges, measures, 0);
  return mark_boundary(g, ball_decomposition(g, R));
}

std::vector<WeightedGraph> quotient_family(const ModelGraphSpec& spec,
                                           const std::vector<int>& radii) {
  spec.validate();
  std::vector<WeightedGraph> out;
  for (const int R : radii) {
    if (R < 1 || R > spec.R()) {
      throw RadiusOutOfRange("family radius " + std::to_string(R) + " outside spec range");
    }
    ModelGraphSpec sub = spec;
    sub.sphere_sizes.resize(static_cast<std::size_t>(R) + 1);
    sub.sphere_measures.resize(static_cast<std::size_t>(R) + 1);
    sub.edge_weights.resize(static_cast<std::size_t>(R));
    out.push_back(quotient_graph(sub));
  }
  return out;
}

double boundary_weight(const ModelGraphSpec& spec, int k) {
  if (k < 0 || k >= spec.R()) {
    throw RadiusOutOfRange("boundary weight index " + std::to_string(k) + " outside [0, R)");
  }
  const double na = static_cast<double>(spec.sphere_sizes[static_cast<std::size_t>(k)]);
  const double nb = static_cast<double>(spec.sphere_sizes[static_cast<std::size_t>(k) + 1]);
  const double w = spec.edge_weights[static_cast<std::size_t>(k)];
  return (spec.wiring == Wiring::Tree) ? w * nb : w * na * nb;
}

SymmetryCheck model_symmetry_check(const WeightedGraph& g) {
  const int R = g.max_depth();
  SymmetryCheck out;
  out.k_minus.assign(static_cast<std::size_t>(R) + 1, std::numeric_limits<double>::quiet_NaN());
  out.k_plus.assign(static_cast<std::size_t>(R) + 1, std::numeric_limits<double>::quiet_NaN());
  for (VertexId x = 0; static_cast<std::size_t>(x) < g.n(); ++x) {
    const int r = g.depth(x);
    double km = 0.0, kp = 0.0;
    for (const auto& e : g.neighbors(x)) {
      const int rd = g.depth(e.to);
      if (rd == r - 1) km += e.b;
      if (rd == r + 1) kp += e.b;
    }
    km /= g.measure(x);
    kp /= g.measure(x);
    auto& slot_m = out.k_minus[static_cast<std::size_t>(r)];
    auto& slot_p = out.k_plus[static_cast<std::size_t>(r)];
    if (std::isnan(slot_m)) {
      slot_m = km;
      slot_p = kp;
    } else {
      out.max_deviation = std::max({out.max_deviation, std::abs(slot_m - km),
                                    std::abs(slot_p - kp)});
    }
  }
  return out;
}

namespace {

// Detects the growth law of dB_k from the truncated data. Used both by the
// subcriticality heuristic and by unknown-law tail estimation.
AsymptoticLaw detect_law(const ModelGraphSpec& spec, double* confidence) {
  const int R = spec.R();
  if (R < 6) throw UnknownAsymptotics("truncation too short for the growth heuristic");
  std::vector<double> db;
  for (int k = 0; k < R; ++k) db.push_back(boundary_weight(spec, k));

  const int lo = R / 2;
  std::vector<double> ratios;
  for (int k = lo; k + 1 < R; ++k) ratios.push_back(db[static_cast<std::size_t>(k) + 1] /
                                                    db[static_cast<std::size_t>(k)]);
  double log_sum = 0.0;
  double rmin = ratios[0], rmax = ratios[0];
  for (const double r : ratios) {
    log_sum += std::log(r);
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  const double gmean = std::exp(log_sum / static_cast<double>(ratios.size()));

  // geometric growth needs stable ratios; power-law data still has ratios
  // above 1 at small radii but they drift toward 1
  if (rmin > 1.0 && gmean >= 1.05 && (rmax - rmin) <= 0.1 * (gmean - 1.0)) {
    if (confidence) *confidence = std::min(1.0, 1.0 - (rmax - rmin) / gmean);
    return {GrowthLaw::Geometric, gmean};
  }

  // Ratios near 1: try a power law over the outer half.
  std::vector<double> logk, logdb;
  for (int k = std::max(lo, 1); k < R; ++k) {
    logk.push_back(std::log(static_cast<double>(k)));
    logdb.push_back(std::log(db[static_cast<std::size_t>(k)]));
  }
  const LinearFit fit = linear_fit(logk, logdb);
  if (confidence) *confidence = fit.r2;
  if (fit.r2 >= 0.9 || std::abs(fit.slope) <= 0.05) {
    return {GrowthLaw::PowerLaw, fit.slope};
  }
  throw UnknownAsymptotics("boundary-weight growth is neither cleanly geometric nor power-law");
}

}  // namespace

SubcriticalityReport subcriticality(const ModelGraphSpec& spec, double p) {
  if (!(p > 1.0)) throw InvalidOrder("p must be > 1");
  spec.validate();
  SubcriticalityReport rep;
  if (spec.law.kind != GrowthLaw::Unknown) {
    rep.basis = SubcriticalityBasis::DeclaredLaw;
    rep.effective_law = spec.law;
    rep.confidence = 1.0;
  } else {
    rep.basis = SubcriticalityBasis::Heuristic;
    rep.effective_law = detect_law(spec, &rep.confidence);
  }
  switch (rep.effective_law.kind) {
    case GrowthLaw::Geometric:
      // terms (m(o)/dB_k)^{1/(p-1)} shrink geometrically iff dB grows
      rep.subcritical = rep.effective_law.rate > 1.0;
      break;
    case GrowthLaw::PowerLaw: {
      const double sigma = rep.effective_law.rate / (p - 1.0);
      if (rep.basis == SubcriticalityBasis::Heuristic && sigma > 0.9 && sigma < 1.1) {
        throw UnknownAsymptotics("fitted power-law exponent too close to the convergence "
                                 "threshold (sigma = " + std::to_string(sigma) + ")");
      }
      rep.subcritical = sigma > 1.0;
      break;
    }
    default:
      throw UnknownAsymptotics("no usable asymptotic law");
  }
  return rep;
}

bool is_subcritical(const ModelGraphSpec& spec, double p) {
  return subcriticality(spec, p).subcritical;
}

Green0Value green0_closed_form(const ModelGraphSpec& spec, double p, int x_radius,
                               std::optional<double> m_o) {
  if (!(p > 1.0)) throw InvalidOrder("p must be > 1");
  spec.validate();
  if (x_radius < 0 || x_radius > spec.R()) {
    throw RadiusOutOfRange("radius " + std::to_string(x_radius) + " outside [0, R]");
  }
  const SubcriticalityReport sub = subcriticality(spec, p);
  if (!sub.subcritical) {
    throw SeriesDivergent("G_0 series diverges under the declared growth law");
  }
  const double mo = m_o.value_or(spec.root_measure());
  const int R = spec.R();
  const double inv_pm1 = 1.0 / (p - 1.0);

  const auto term = [&](int k) {
    return std::pow(mo / boundary_weight(spec, k), inv_pm1);
  };

  Green0Value out;
  double tail_lo = 0.0, tail_hi = 0.0;
  const double t_last = term(R - 1);
  if (sub.effective_law.kind == GrowthLaw::Geometric) {
    // t_{k+1}/t_k = rate^{-1/(p-1)} beyond the truncation; summed exactly.
    const double tau = std::pow(sub.effective_law.rate, -inv_pm1);
    tail_lo = tail_hi = t_last * tau / (1.0 - tau);
    out.exact_tail = true;
  } else {
    // t_k ~ c k^{-sigma}; integral bracket for the tail from k = R on.
    const double sigma = sub.effective_law.rate * inv_pm1;
    const double c = t_last * std::pow(static_cast<double>(R - 1), sigma);
    tail_lo = c * std::pow(static_cast<double>(R), 1.0 - sigma) / (sigma - 1.0);
    tail_hi = c * std::pow(static_cast<double>(R - 1), 1.0 - sigma) / (sigma - 1.0);
    out.exact_tail = false;
  }

  // Sum small-to-large: tail first, then terms from the outermost radius in.
  double acc_lo = tail_lo, acc_hi = tail_hi;
  for (int k = R - 1; k >= x_radius; --k) {
    const double t = term(k);
    acc_lo += t;
    acc_hi += t;
  }
  out.lower = acc_lo;
  out.upper = acc_hi;
  out.value = 0.5 * (acc_lo + acc_hi);
  return out;
}

SphericalFunction green0_profile(const ModelGraphSpec& spec, double p) {
  SphericalFunction out;
  out.values.resize(static_cast<std::size_t>(spec.R()) + 1);
  // Single pass; shares the tail estimate across radii.
  const Green0Value at_R = green0_closed_form(spec, p, spec.R());
  const double mo = spec.root_measure();
  const double inv_pm1 = 1.0 / (p - 1.0);
  double acc = at_R.value;
  out.values[static_cast<std::size_t>(spec.R())] = acc;
  for (int k = spec.R() - 1; k >= 0; --k) {
    acc += std::pow(mo / boundary_weight(spec, k), inv_pm1);
    out.values[static_cast<std::size_t>(k)] = acc;
  }
  return out;
}

FluxSolveResult spherical_flux_solve(const ModelGraphSpec& spec, double p, double alpha,
                                     double g_at_0) {
  if (!(p > 1.0)) throw InvalidOrder("p must be > 1");
  if (alpha < 0.0) throw PreconditionError("alpha must be >= 0");
  if (!(g_at_0 > 0.0)) throw NonpositiveInitial("G(0) must be > 0");
  spec.validate();
  const int R = spec.R();
  const double mo = spec.root_measure();
  const double inv_pm1 = 1.0 / (p - 1.0);

  FluxSolveResult out;
  out.g.values.assign(static_cast<std::size_t>(R) + 1, 0.0);
  out.g[0] = g_at_0;
  double cum = 0.0;  // alpha-weighted mass sum_{j<=k} m(S_j) G(j)^{<p-1>}
  for (int k = 0; k < R; ++k) {
    cum += spec.sphere_total_measure(k) * signed_power(out.g[k], p - 1.0);
    const double rhs = mo - alpha * cum;
    const double increment = signed_power(rhs / boundary_weight(spec, k), inv_pm1);
    out.g[k + 1] = out.g[k] - increment;
    if (out.g[k + 1] < 0.0 && !out.first_negative) out.first_negative = k + 1;
  }
  return out;
}

ModelGraphSpec model_spec_from_json_string(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model spec: ") + e.what());
  }
  const std::string kind = doc.value("kind", "custom");
  if (!doc.contains("R")) throw ParseError("model spec needs \"R\"");
  const int R = doc["R"].get<int>();
  // explicit arrays win over the named families (covers serialized specs)
  if (doc.contains("sphere_sizes") && doc.contains("weights") && doc.contains("measures")) {
    std::vector<std::int64_t> sizes = doc["sphere_sizes"].get<std::vector<std::int64_t>>();
    std::vector<double> weights = doc["weights"].get<std::vector<double>>();
    std::vector<double> measures = doc["measures"].get<std::vector<double>>();
    Wiring wiring = Wiring::CompleteBipartite;
    if (doc.contains("wiring")) {
      const std::string w = doc["wiring"].get<std::string>();
      if (w == "tree") wiring = Wiring::Tree;
      else if (w == "complete_bipartite") wiring = Wiring::CompleteBipartite;
      else throw ParseError("unknown wiring \"" + w + "\"");
    }
    AsymptoticLaw law;
    if (doc.contains("law")) {
      const auto& l = doc["law"];
      const std::string lk = l.value("kind", "unknown");
      if (lk == "geometric") law = {GrowthLaw::Geometric, l.at("rate").get<double>()};
      else if (lk == "power") law = {GrowthLaw::PowerLaw, l.at("rate").get<double>()};
      else if (lk != "unknown") throw ParseError("unknown law kind \"" + lk + "\"");
    }
    if (static_cast<int>(sizes.size()) != R + 1) {
      throw ParseError("sphere_sizes length must be R + 1");
    }
    ModelGraphSpec spec = ModelGraphSpec::custom(std::move(sizes), std::move(weights),
                                                 std::move(measures), wiring, law);
    spec.kind = kind;
    return spec;
  }
  if (kind == "tree") {
    if (!doc.contains("d")) throw ParseError("tree spec needs \"d\"");
    return ModelGraphSpec::regular_tree(doc["d"].get<int>(), R);
  }
  if (kind == "antitree") {
    if (!doc.contains("gamma")) throw ParseError("anti-tree spec needs \"gamma\"");
    return ModelGraphSpec::anti_tree(doc["gamma"].get<double>(), R);
  }
  if (kind == "path") {
    return ModelGraphSpec::path(R);
  }
  if (kind == "custom") {
    throw ParseError("custom spec needs sphere_sizes, weights and measures");
  }
  throw ParseError("unknown model kind \"" + kind + "\"");
}

ModelGraphSpec read_model_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return model_spec_from_json_string(text);
}

std::string model_spec_to_json_string(const ModelGraphSpec& spec) {
  ordered_json doc;
  doc["kind"] = spec.kind;
  doc["R"] = spec.R();
  if (spec.kind == "tree") {
    doc["d"] = static_cast<int>(spec.sphere_sizes[1]);
    return doc.dump(2) + "\n";
  }
  doc["sphere_sizes"] = spec.sphere_sizes;
  doc["weights"] = spec.edge_weights;
  doc["measures"] = spec.sphere_measures;
  doc["wiring"] = (spec.wiring == Wiring::Tree) ? "tree" : "complete_bipartite";
  switch (spec.law.kind) {
    case GrowthLaw::Geometric:
      doc["law"] = {{"kind", "geometric"}, {"rate", spec.law.rate}};
      break;
    case GrowthLaw::PowerLaw:
      doc["law"] = {{"kind", "power"}, {"rate", spec.law.rate}};
      break;
    default:
      doc["law"] = {{"kind", "unknown"}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace plandis
