#include "plandis/criticality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace plandis {

SchrodingerOperator HardyPackage::hardy_operator() const {
  VertexFunction neg(w_op.size());
  for (std::size_t i = 0; i < w_op.size(); ++i) neg.values[i] = -w_op.values[i];
  return SchrodingerOperator(graph, p, neg);
}

HardyPackage hardy_weight(GraphPtr g, double p, const VertexFunction& g0) {
  if (!g) throw PreconditionError("hardy_weight needs a graph");
  if (!(p > 1.0)) throw InvalidOrder("p must be > 1");
  if (g0.size() != g->n()) throw PreconditionError("G_0 not aligned with graph");
  for (VertexId x = 0; static_cast<std::size_t>(x) < g->n(); ++x) {
    if (g->is_interior(x) && !(g0[x] > 0.0)) {
      throw NonpositiveGreen("G_0 must be > 0 on the interior, G_0(" + std::to_string(x) +
                             ") = " + std::to_string(g0[x]));
    }
    if (g0[x] < 0.0) {
      throw NonpositiveGreen("G_0 must be >= 0 everywhere");
    }
  }

  HardyPackage pkg;
  pkg.graph = g;
  pkg.p = p;
  pkg.phi = VertexFunction(g->n());
  pkg.w_op = VertexFunction(g->n(), 0.0);
  const double exponent = (p - 1.0) / p;
  for (VertexId x = 0; static_cast<std::size_t>(x) < g->n(); ++x) {
    pkg.phi[x] = std::pow(g0[x], exponent);
  }
  for (VertexId x = 0; static_cast<std::size_t>(x) < g->n(); ++x) {
    if (!g->is_interior(x)) continue;
    const double lap = apply_p_laplacian(*g, p, pkg.phi, x);
    const double denom = signed_power(pkg.phi[x], p - 1.0);
    pkg.w_op[x] = lap / denom;
    pkg.max_residual = std::max(pkg.max_residual, std::abs(lap - pkg.w_op[x] * denom));
  }
  return pkg;
}

std::string to_string(CriticalityEvidence e) {
  switch (e) {
    case CriticalityEvidence::ConfirmedByConstruction: return "confirmed-by-construction";
    case CriticalityEvidence::Probed: return "probed";
    default: return "unknown";
  }
}

ProbeResult nonnegativity_probe(const SchrodingerOperator& op, int n_samples, std::uint64_t seed,
                                const std::vector<VertexId>& support) {
  const WeightedGraph& g = op.g();
  std::vector<VertexId> supp = support;
  if (supp.empty()) supp = g.decomposition().interior;
  for (const VertexId x : supp) {
    if (!g.is_interior(x)) {
      throw SupportTouchesBoundary("probe support contains boundary vertex " + std::to_string(x));
    }
  }

  ProbeResult out;
  out.samples = n_samples;
  out.seed = seed;
  out.min_q = std::numeric_limits<double>::infinity();

  for (const VertexId x : supp) {
    const double q = energy(op, VertexFunction::indicator(g.n(), x));
    if (q < out.min_q) {
      out.min_q = q;
      out.min_kind = "indicator";
      out.min_index = x;
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  VertexFunction phi(g.n(), 0.0);
  for (int s = 0; s < n_samples; ++s) {
    for (const VertexId x : supp) phi[x] = unit(rng);
    const double q = energy(op, phi);
    if (q < out.min_q) {
      out.min_q = q;
      out.min_kind = "sample";
      out.min_index = s;
    }
  }
  return out;
}

NullSequenceResult null_sequence_experiment(const SchrodingerOperator& op,
                                            const VertexFunction& ground,
                                            const std::vector<int>& ns) {
  const WeightedGraph& g = op.g();
  if (ground.size() != g.n()) throw PreconditionError("ground function not aligned with graph");
  for (VertexId x = 0; static_cast<std::size_t>(x) < g.n(); ++x) {
    if (g.is_interior(x) && !(ground[x] > 0.0)) {
      throw NonpositiveGroundFunction("ground function must be > 0 on the interior");
    }
  }
  const int R = g.max_depth();

  NullSequenceResult out;
  out.phi_at_root = ground[g.root()];
  for (const int n : ns) {
    if (n < 1) throw PreconditionError("cutoff index must be >= 1");
    if (g.has_boundary() && 2 * n > R) {
      throw SupportTouchesBoundary("cutoff 2n = " + std::to_string(2 * n) +
                                   " reaches the boundary sphere " + std::to_string(R));
    }
    VertexFunction phi(g.n(), 0.0);
    for (VertexId x = 0; static_cast<std::size_t>(x) < g.n(); ++x) {
      const double psi =
          std::min(1.0, std::max(0.0, (2.0 * n - g.depth(x)) / static_cast<double>(n)));
      phi[x] = ground[x] * psi;
    }
    out.ns.push_back(n);
    out.q_values.push_back(energy(op, phi));
  }

  TrendOptions topts;
  topts.min_points = std::min<std::size_t>(3, out.ns.size());
  topts.min_goodness = 0.8;
  std::vector<double> traces;
  for (const double q : out.q_values) traces.push_back(std::max(q, 0.0));
  out.trend = classify_trend(out.ns, traces, topts);
  return out;
}

namespace {

// Merged unique neighbors of x over both graphs, ascending and above x.
std::vector<VertexId> merged_upper_neighbors(const WeightedGraph& a, const WeightedGraph& b,
                                             VertexId x) {
  std::vector<VertexId> out;
  const auto na = a.neighbors(x);
  const auto nb = b.neighbors(x);
  std::size_t i = 0, j = 0;
  while (i < na.size() || j < nb.size()) {
    VertexId next;
    if (j >= nb.size() || (i < na.size() && na[i].to <= nb[j].to)) {
      next = na[i].to;
      if (j < nb.size() && nb[j].to == next) ++j;
      ++i;
    } else {
      next = nb[j].to;
      ++j;
    }
    if (next > x) out.push_back(next);
  }
  return out;
}

}  // namespace

ComparisonReport liouville_conditions(const SchrodingerOperator& h,
                                      const SchrodingerOperator& h_ref, const VertexFunction& u,
                                      const VertexFunction& v, CriticalityEvidence evidence,
                                      const ComparisonOptions& opts) {
  const WeightedGraph& gb = h.g();
  const WeightedGraph& gt = h_ref.g();
  if (gb.n() != gt.n()) {
    throw MeasureMismatch("operators must live over the same vertex set");
  }
  for (VertexId x = 0; static_cast<std::size_t>(x) < gb.n(); ++x) {
    if (gb.measure(x) != gt.measure(x)) {
      throw MeasureMismatch("measures differ at vertex " + std::to_string(x));
    }
  }
  if (u.size() != gb.n() || v.size() != gb.n()) {
    throw PreconditionError("functions not aligned with graph");
  }
  for (VertexId x = 0; static_cast<std::size_t>(x) < gb.n(); ++x) {
    if (!(v[x] > 0.0)) {
      throw NonpositiveReference("reference v must be strictly positive, v(" + std::to_string(x) +
                                 ") = " + std::to_string(v[x]));
    }
  }

  ComparisonReport rep;
  rep.p = h.p;
  rep.reference_evidence = evidence;
  const double p = h.p;

  const VertexFunction up = positive_part(u);
  for (std::size_t i = 0; i < up.size(); ++i) {
    if (up.values[i] > 0.0) {
      rep.positive_part_nontrivial = true;
      break;
    }
  }

  // condition (b): H[u+] <= 0 on the region (default: interior off the root)
  if (opts.check_subharmonic && rep.positive_part_nontrivial) {
    std::vector<VertexId> region = opts.classify_region;
    if (region.empty()) {
      for (const VertexId x : gb.decomposition().interior) {
        if (x != gb.root()) region.push_back(x);
      }
    }
    const Classification cls = classify(h, up, region, opts.tol);
    rep.subharmonic_ok = cls.all_subharmonic();
    rep.subharmonic_max = cls.max_value;
  }

  // condition (c): edgewise ratio families over {u>0} x {u>0}
  const int R = gb.max_depth();
  std::vector<double> sup1(static_cast<std::size_t>(R) + 1, 0.0);
  std::vector<double> sup2(static_cast<std::size_t>(R) + 1, 0.0);
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(R) + 1, 0);
  for (VertexId x = 0; static_cast<std::size_t>(x) < gb.n(); ++x) {
    if (!(u[x] > 0.0)) continue;
    for (const VertexId y : merged_upper_neighbors(gb, gt, x)) {
      if (!(u[y] > 0.0)) continue;
      const double b = gb.edge_weight(x, y);
      const double bt = gt.edge_weight(x, y);
      const std::size_t r = static_cast<std::size_t>(std::max(gb.depth(x), gb.depth(y)));
      seen[r] = 1;

      // ratio1 = b^{2/p} (u+ x u+) / (bt^{2/p} (v x v))
      const double num1 = std::pow(b, 2.0 / p) * up[x] * up[y];
      const double den1 = std::pow(bt, 2.0 / p) * v[x] * v[y];
      if (den1 == 0.0) {
        if (num1 > 0.0) ++rep.infinite_ratio1_edges;
      } else {
        sup1[r] = std::max(sup1[r], num1 / den1);
      }

      if (p == 2.0) {
        sup2[r] = std::max(sup2[r], 1.0);
        continue;
      }
      const double du = std::abs(up[x] - up[y]);
      const double dv = std::abs(v[x] - v[y]);
      if (p > 2.0) {
        const double num2 = std::pow(b, 1.0 - 2.0 / p) * std::pow(du, p - 2.0);
        const double den2 = (bt == 0.0) ? 0.0 : std::pow(bt, 1.0 - 2.0 / p) * std::pow(dv, p - 2.0);
        if (den2 == 0.0) {
          if (num2 > 0.0) ++rep.infinite_ratio2_edges;
        } else {
          sup2[r] = std::max(sup2[r], num2 / den2);
        }
      } else {
        // p < 2: grad v = 0 makes the right side infinite (satisfied);
        // grad u+ = 0 alone is an infinite left side (violation).
        if (dv == 0.0 && bt > 0.0) {
          continue;
        }
        if (du == 0.0 || bt == 0.0) {
          ++rep.infinite_ratio2_edges;
          continue;
        }
        const double num2 = std::pow(b, 1.0 - 2.0 / p) * std::pow(du, p - 2.0);
        const double den2 = std::pow(bt, 1.0 - 2.0 / p) * std::pow(dv, p - 2.0);
        sup2[r] = std::max(sup2[r], num2 / den2);
      }
    }
  }

  for (int r = 0; r <= R; ++r) {
    if (!seen[static_cast<std::size_t>(r)]) continue;
    rep.radii.push_back(r);
    rep.sup_ratio1.push_back(sup1[static_cast<std::size_t>(r)]);
    rep.sup_ratio2.push_back(sup2[static_cast<std::size_t>(r)]);
    rep.sup1 = std::max(rep.sup1, sup1[static_cast<std::size_t>(r)]);
    rep.sup2 = std::max(rep.sup2, sup2[static_cast<std::size_t>(r)]);
  }

  if (rep.radii.size() >= 2) {
    rep.trend1 = classify_trend(rep.radii, rep.sup_ratio1, opts.trend);
    rep.trend2 = classify_trend(rep.radii, rep.sup_ratio2, opts.trend);
  } else {
    rep.trend1.cls = rep.radii.empty() ? TrendClass::Inconclusive : TrendClass::Flat;
    rep.trend2 = rep.trend1;
  }

  // Boundedness by trend: growing suprema or infinite edges defeat (c).
  const auto bounded = [&](const TrendReport& t) {
    if (t.exact_zeros) return true;
    if (t.cls == TrendClass::Growing) return false;
    return t.geometric.slope <= opts.trend.slope_tol || t.cls == TrendClass::Flat ||
           t.cls == TrendClass::DecayingToZero;
  };
  rep.ratios_bounded = bounded(rep.trend1) && bounded(rep.trend2) &&
                       rep.infinite_ratio1_edges == 0 && rep.infinite_ratio2_edges == 0;

  rep.satisfied = evidence != CriticalityEvidence::Unknown && rep.positive_part_nontrivial &&
                  (!opts.check_subharmonic || rep.subharmonic_ok) && rep.ratios_bounded;
  if (rep.infinite_ratio1_edges + rep.infinite_ratio2_edges > 0) {
    rep.note = std::to_string(rep.infinite_ratio1_edges + rep.infinite_ratio2_edges) +
               " edge(s) with an infinite ratio";
  }
  return rep;
}

}  // namespace plandis
