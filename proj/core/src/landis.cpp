#include "plandis/landis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace plandis {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::General: return "general";
    case Regime::NegativePotential: return "negative_potential";
    case Regime::Model: return "model";
    case Regime::Tree: return "tree";
    default: return "recurrent";
  }
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ForcesZero: return "FORCES_ZERO";
    case Verdict::NotTriggered: return "NOT_TRIGGERED";
    default: return "INCONCLUSIVE";
  }
}

const ConditionReport* LandisReport::condition(const std::string& name) const {
  for (const auto& c : conditions) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

// Decides a trace condition from its fitted trend.
ConditionReport make_condition(std::string name, ConditionKind kind, std::vector<int> radii,
                               std::vector<double> values, const TrendOptions& topts) {
  ConditionReport cond;
  cond.name = std::move(name);
  cond.radii = std::move(radii);
  cond.values = std::move(values);
  if (cond.radii.size() < 2) {
    cond.note = "trace too short";
    return cond;
  }
  cond.trend = classify_trend(cond.radii, cond.values, topts);
  const TrendClass cls = cond.trend.cls;
  switch (kind) {
    case ConditionKind::BoundedAbove:
      cond.satisfied = cond.trend.exact_zeros || cls == TrendClass::Flat ||
                       cls == TrendClass::DecayingToZero ||
                       (cls == TrendClass::Inconclusive &&
                        cond.trend.geometric.slope <= topts.slope_tol);
      cond.demonstrably_fails = cls == TrendClass::Growing;
      break;
    case ConditionKind::DecaysToZero: {
      cond.satisfied = cls == TrendClass::DecayingToZero;
      const double floor =
          cond.values.empty() ? 0.0 : *std::min_element(cond.values.begin(), cond.values.end());
      cond.demonstrably_fails =
          (cls == TrendClass::Flat && floor > 0.0) || cls == TrendClass::Growing;
      break;
    }
    case ConditionKind::BoundedBelow:
      cond.satisfied = !cond.trend.exact_zeros &&
                       (cls == TrendClass::Flat || cls == TrendClass::Growing ||
                        (cls == TrendClass::Inconclusive &&
                         cond.trend.geometric.slope >= -topts.slope_tol));
      cond.demonstrably_fails = cond.trend.exact_zeros || cls == TrendClass::DecayingToZero;
      break;
  }
  return cond;
}

Verdict verdict_from(const std::vector<ConditionReport>& conditions,
                     std::vector<std::string>* reasons) {
  bool all_ok = true;
  bool any_fail = false;
  for (const auto& c : conditions) {
    if (c.demonstrably_fails) {
      any_fail = true;
      if (reasons) reasons->push_back(c.name + " demonstrably fails");
    }
    if (!c.satisfied) all_ok = false;
  }
  if (any_fail) return Verdict::NotTriggered;
  if (all_ok && !conditions.empty()) return Verdict::ForcesZero;
  if (reasons) reasons->push_back("mixed truncation evidence");
  return Verdict::Inconclusive;
}

std::vector<VertexId> default_region(const WeightedGraph& g, const std::vector<VertexId>& compact) {
  std::vector<std::uint8_t> excluded(g.n(), 0);
  if (compact.empty()) {
    excluded[static_cast<std::size_t>(g.root())] = 1;
  } else {
    for (const VertexId x : compact) excluded[static_cast<std::size_t>(x)] = 1;
  }
  std::vector<VertexId> region;
  for (const VertexId x : g.decomposition().interior) {
    if (!excluded[static_cast<std::size_t>(x)]) region.push_back(x);
  }
  return region;
}

bool nontrivial_positive_part(const VertexFunction& u) {
  for (const double v : u.values) {
    if (v > 0.0) return true;
  }
  return false;
}

}  // namespace

LiminfEstimate liminf_estimate(const WeightedGraph& g, const VertexFunction& u,
                               const VertexFunction& ref, const std::vector<int>& annuli,
                               int surrogate_annuli, const TrendOptions& topts) {
  if (u.size() != g.n() || ref.size() != g.n()) {
    throw PreconditionError("functions not aligned with graph");
  }
  LiminfEstimate out;
  for (const int r : annuli) {
    double lo = std::numeric_limits<double>::infinity();
    std::size_t count = 0;
    for (VertexId x = 0; static_cast<std::size_t>(x) < g.n(); ++x) {
      if (g.depth(x) != r) continue;
      if (!(ref[x] > 0.0)) {
        throw NonpositiveReference("reference must be > 0 at vertex " + std::to_string(x));
      }
      lo = std::min(lo, std::max(u[x], 0.0) / ref[x]);
      ++count;
    }
    if (count == 0) throw EmptyAnnulus("no vertices at radius " + std::to_string(r));
    out.radii.push_back(r);
    out.minima.push_back(lo);
  }
  out.trend = classify_trend(out.radii, out.minima, topts);
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(surrogate_annuli),
                                              out.minima.size());
  out.surrogate = *std::min_element(out.minima.end() - static_cast<std::ptrdiff_t>(k),
                                    out.minima.end());
  out.zero_evidence = out.trend.cls == TrendClass::DecayingToZero;
  const double floor = *std::min_element(out.minima.begin(), out.minima.end());
  out.demonstrably_positive =
      (out.trend.cls == TrendClass::Flat || out.trend.cls == TrendClass::Growing) && floor > 0.0;
  return out;
}

namespace {

// Shared body of the general and negative-potential regimes; they differ in
// the potential bound, the classification target and the liminf reference.
LandisReport comparison_regime(Regime regime, const SchrodingerOperator& op,
                               const VertexFunction& u, const LandisReference& reference,
                               const VertexFunction& liminf_ref, const std::string& ref_name,
                               const LandisOptions& opts) {
  const WeightedGraph& g = op.g();
  LandisReport rep;
  rep.regime = regime;
  rep.parameters.emplace_back("p", op.p);

  const double v_bound = (regime == Regime::General) ? 1.0 : 0.0;
  for (VertexId x = 0; static_cast<std::size_t>(x) < g.n(); ++x) {
    if (op.potential[x] > v_bound + 1e-12) {
      throw PotentialBoundViolated("V(" + std::to_string(x) + ") = " +
                                   std::to_string(op.potential[x]) + " exceeds " +
                                   std::to_string(v_bound));
    }
  }
  rep.potential_bound_ok = true;

  const std::vector<VertexId> region = default_region(g, opts.compact);
  const Classification cls = classify(op, u, region, opts.tol);
  const bool wants_harmonic = (regime == Regime::General);
  const bool class_ok = wants_harmonic ? (cls.aggregate == HarmonicTag::Harmonic)
                                       : cls.all_subharmonic();
  if (class_ok) {
    rep.harmonicity = wants_harmonic ? "verified-harmonic" : "verified-subharmonic";
  } else {
    if (opts.strict) {
      if (wants_harmonic) {
        throw NotHarmonic("max |H[u]| = " + std::to_string(cls.max_abs) + " on the region");
      }
      throw NotSubharmonic("max H[u] = " + std::to_string(cls.max_value) + " on the region");
    }
    rep.harmonicity = std::string(wants_harmonic ? "not-harmonic" : "not-subharmonic") +
                      " (max |H[u]| = " + std::to_string(cls.max_abs) + ", recorded)";
  }

  if (!nontrivial_positive_part(u)) {
    rep.verdict = Verdict::NotTriggered;
    rep.reasons.push_back("u+ = 0: the positive part is trivial");
    return rep;
  }

  rep.positivity_evidence = nonnegativity_probe(op, opts.probe_samples, opts.probe_seed);

  ComparisonOptions copts;
  copts.tol = opts.tol;
  copts.trend = opts.trend;
  copts.classify_region = region;
  rep.comparison = liouville_conditions(op, reference.op, u, reference.ground,
                                        reference.evidence, copts);

  const int R = g.max_depth();
  const int hi = g.has_boundary() ? R - 1 : R;
  const std::vector<int> annuli = radius_range(1, std::max(1, hi));
  const LiminfEstimate decay = liminf_estimate(g, positive_part(u), liminf_ref, annuli,
                                               opts.surrogate_annuli, opts.trend);

  ConditionReport probe_cond;
  probe_cond.name = "positivity-evidence";
  probe_cond.satisfied = rep.positivity_evidence->min_q >= -1e-8;
  probe_cond.demonstrably_fails = !probe_cond.satisfied;
  probe_cond.note = "min sampled Q = " + std::to_string(rep.positivity_evidence->min_q);
  rep.conditions.push_back(probe_cond);

  ConditionReport cmp_cond;
  cmp_cond.name = "comparison-(b)-subharmonic-positive-part";
  cmp_cond.satisfied = rep.comparison->subharmonic_ok && rep.comparison->positive_part_nontrivial;
  cmp_cond.demonstrably_fails = !cmp_cond.satisfied;
  cmp_cond.note = "max H[u+] = " + std::to_string(rep.comparison->subharmonic_max);
  rep.conditions.push_back(cmp_cond);

  ConditionReport ratio_cond;
  ratio_cond.name = "comparison-(c)-ratio-bounds";
  ratio_cond.radii = rep.comparison->radii;
  ratio_cond.values = rep.comparison->sup_ratio1;
  ratio_cond.trend = rep.comparison->trend1;
  ratio_cond.satisfied = rep.comparison->ratios_bounded;
  ratio_cond.demonstrably_fails = rep.comparison->trend1.cls == TrendClass::Growing ||
                                  rep.comparison->trend2.cls == TrendClass::Growing ||
                                  rep.comparison->infinite_ratio1_edges > 0 ||
                                  rep.comparison->infinite_ratio2_edges > 0;
  ratio_cond.note = rep.comparison->note;
  rep.conditions.push_back(ratio_cond);

  ConditionReport decay_cond;
  decay_cond.name = "liminf-u+/" + ref_name;
  decay_cond.radii = decay.radii;
  decay_cond.values = decay.minima;
  decay_cond.trend = decay.trend;
  decay_cond.satisfied = decay.zero_evidence;
  decay_cond.demonstrably_fails = decay.demonstrably_positive;
  decay_cond.note = "surrogate liminf = " + std::to_string(decay.surrogate);
  rep.conditions.push_back(decay_cond);

  rep.verdict = verdict_from(rep.conditions, &rep.reasons);
  return rep;
}

}  // namespace

LandisReport landis_check_general(const SchrodingerOperator& op, const VertexFunction& u,
                                  const LandisReference& reference, const VertexFunction& g1,
                                  const LandisOptions& opts) {
  LandisReport rep = comparison_regime(Regime::General, op, u, reference, g1, "G_1", opts);
  if (opts.check_negated) {
    VertexFunction neg(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) neg.values[i] = -u.values[i];
    LandisOptions sub = opts;
    sub.check_negated = false;
    sub.strict = false;
    rep.negated_verdict = landis_check_general(op, neg, reference, g1, sub).verdict;
  }
  return rep;
}

LandisReport landis_check_negative_potential(const SchrodingerOperator& op,
                                             const VertexFunction& u,
                                             const LandisReference& reference,
                                             const VertexFunction& minimal_growth,
                                             const LandisOptions& opts) {
  return comparison_regime(Regime::NegativePotential, op, u, reference, minimal_growth, "g",
                           opts);
}

LandisReport landis_check_model(const ModelGraphSpec& spec, double p, double v_max,
                                const SphericalFunction& u, const LandisOptions& opts) {
  if (!(p > 1.0)) throw InvalidOrder("p must be > 1");
  if (v_max > 1e-12) {
    throw PotentialBoundViolated("model regime needs V <= 0, got max V = " +
                                 std::to_string(v_max));
  }
  if (!is_subcritical(spec, p)) {
    throw NotSubcritical("the model graph is not subcritical at p = " + std::to_string(p));
  }
  const int R = spec.R();
  if (static_cast<int>(u.size()) < R + 1) {
    throw PreconditionError("u must cover radii 0..R");
  }

  LandisReport rep;
  rep.regime = Regime::Model;
  rep.parameters.emplace_back("p", p);
  rep.parameters.emplace_back("R", static_cast<double>(R));
  rep.potential_bound_ok = true;
  rep.harmonicity = "asserted";
  rep.provenance = "G_0 from the closed-form series";

  const SphericalFunction g0 = green0_profile(spec, p);
  const double phi_exp = (p - 1.0) / p;
  const double inv_pm1 = 1.0 / (p - 1.0);

  // (i) u in O(Phi), Phi = G_0^{(p-1)/p}
  {
    std::vector<int> radii;
    std::vector<double> vals;
    for (int r = 1; r <= R; ++r) {
      radii.push_back(r);
      vals.push_back(std::abs(u[r]) / std::pow(g0[r], phi_exp));
    }
    rep.conditions.push_back(make_condition("u-bounded-by-Phi", ConditionKind::BoundedAbove,
                                            std::move(radii), std::move(vals), opts.trend));
  }

  // (ii) gradient bound on forward edges within {u > 0}
  {
    ConditionReport cond;
    if (p == 2.0) {
      cond.name = "gradient-bound";
      cond.satisfied = true;
      cond.note = "exponent p-2 = 0: both sides are 1";
      rep.conditions.push_back(cond);
    } else {
      std::vector<int> radii;
      std::vector<double> vals;
      int zero_gradient_edges = 0;
      for (int r = 1; r <= R; ++r) {
        if (!(u[r - 1] > 0.0) || !(u[r] > 0.0)) continue;  // outside {u>0} x {u>0}
        const double du = std::abs(std::max(u[r - 1], 0.0) - std::max(u[r], 0.0));
        const double g0_z = (p < 2.0) ? g0[r] : g0[r - 1];  // z = x (deeper) for p < 2, else y
        const double db = boundary_weight(spec, r - 1);
        const double reference = std::pow(g0_z, -1.0 / p) * std::pow(db, -inv_pm1);
        if (du == 0.0) {
          if (p < 2.0) ++zero_gradient_edges;
          continue;
        }
        radii.push_back(r);
        vals.push_back(std::pow(du, p - 2.0) / std::pow(reference, p - 2.0));
      }
      ConditionReport grad = make_condition("gradient-bound", ConditionKind::BoundedAbove,
                                            std::move(radii), std::move(vals), opts.trend);
      if (zero_gradient_edges > 0) {
        grad.demonstrably_fails = true;
        grad.satisfied = false;
        grad.note = std::to_string(zero_gradient_edges) +
                    " zero-gradient edge radii inside {u>0} (infinite left side for p < 2)";
      }
      rep.conditions.push_back(grad);
    }
  }

  // (iii) p >= 2: same-sphere edges need zero gradient; the realization has
  // no intra-sphere edges, so this is vacuous.
  if (p >= 2.0) {
    ConditionReport cond;
    cond.name = "same-sphere-gradient";
    cond.satisfied = true;
    cond.note = "model realization has no intra-sphere edges";
    rep.conditions.push_back(cond);
  }

  // (iv) liminf |u|/G_0 = 0
  {
    std::vector<int> radii;
    std::vector<double> vals;
    for (int r = 1; r <= R; ++r) {
      radii.push_back(r);
      vals.push_back(std::abs(u[r]) / g0[r]);
    }
    rep.conditions.push_back(make_condition("liminf-|u|/G_0", ConditionKind::DecaysToZero,
                                            std::move(radii), std::move(vals), opts.trend));
  }

  rep.verdict = verdict_from(rep.conditions, &rep.reasons);
  return rep;
}

LandisReport landis_check_tree(double p, int d, const SphericalFunction& u, double v_max,
                               const LandisOptions& opts) {
  if (d < 2) throw InvalidDegree("tree degree must be >= 2, got " + std::to_string(d));
  if (!(p > 1.0)) throw InvalidOrder("p must be > 1");
  if (v_max > 1.0 + 1e-12) {
    throw PotentialBoundViolated("tree regime needs V <= 1, got max V = " + std::to_string(v_max));
  }
  if (u.size() < 3) throw PreconditionError("u must cover at least radii 0..2");
  const int R = static_cast<int>(u.size()) - 1;
  const double beta = tree_beta(p, d);
  const double dd = static_cast<double>(d);

  LandisReport rep;
  rep.regime = Regime::Tree;
  rep.parameters.emplace_back("p", p);
  rep.parameters.emplace_back("d", dd);
  rep.parameters.emplace_back("R", static_cast<double>(R));
  rep.parameters.emplace_back("beta", beta);
  rep.potential_bound_ok = true;
  rep.harmonicity = "asserted";
  rep.provenance = "beta from the tree root equation";

  // (i) |u| in O(d^{-r/p})
  {
    std::vector<int> radii;
    std::vector<double> vals;
    for (int r = 1; r <= R; ++r) {
      radii.push_back(r);
      vals.push_back(std::abs(u[r]) * std::pow(dd, static_cast<double>(r) / p));
    }
    rep.conditions.push_back(make_condition("u-bounded-by-d^{-r/p}", ConditionKind::BoundedAbove,
                                            std::move(radii), std::move(vals), opts.trend));
  }

  // (ii) gradient vs d^{-r/p}: upper bound for p >= 2, lower bound for p < 2
  {
    std::vector<int> radii;
    std::vector<double> vals;
    int zero_gradient_edges = 0;
    for (int r = 1; r <= R; ++r) {
      if (!(u[r - 1] > 0.0) && !(u[r] > 0.0)) continue;  // u+ vanishes near this edge
      const double du = std::abs(std::max(u[r - 1], 0.0) - std::max(u[r], 0.0));
      if (du == 0.0 && p < 2.0) {
        ++zero_gradient_edges;
        continue;
      }
      radii.push_back(r);
      vals.push_back(du * std::pow(dd, static_cast<double>(r) / p));
    }
    const ConditionKind kind = (p >= 2.0) ? ConditionKind::BoundedAbove
                                          : ConditionKind::BoundedBelow;
    ConditionReport grad = make_condition("gradient-vs-d^{-r/p}", kind, std::move(radii),
                                          std::move(vals), opts.trend);
    if (p < 2.0 && zero_gradient_edges > 0) {
      grad.satisfied = false;
      grad.demonstrably_fails = true;
      grad.note = std::to_string(zero_gradient_edges) +
                  " zero-gradient edge radii with u+ nonvanishing (lower bound fails)";
    }
    rep.conditions.push_back(grad);
  }

  // (iii) liminf |u|/beta^r = 0
  {
    std::vector<int> radii;
    std::vector<double> vals;
    for (int r = 1; r <= R; ++r) {
      radii.push_back(r);
      vals.push_back(std::abs(u[r]) / std::pow(beta, static_cast<double>(r)));
    }
    rep.conditions.push_back(make_condition("liminf-|u|/beta^r", ConditionKind::DecaysToZero,
                                            std::move(radii), std::move(vals), opts.trend));
  }

  rep.verdict = verdict_from(rep.conditions, &rep.reasons);
  return rep;
}

LandisReport landis_check_recurrent(const SchrodingerOperator& op, const VertexFunction& u,
                                    const std::vector<VertexId>& compact_set,
                                    RecurrenceEvidence evidence, const LandisOptions& opts) {
  const WeightedGraph& g = op.g();
  if (op.p > 2.0 + 1e-12) {
    throw ExponentOutOfRange("recurrent regime needs p <= 2, got p = " + std::to_string(op.p));
  }
  std::vector<std::uint8_t> in_compact(g.n(), 0);
  for (const VertexId x : compact_set) in_compact[static_cast<std::size_t>(x)] = 1;
  for (VertexId x = 0; static_cast<std::size_t>(x) < g.n(); ++x) {
    if (!in_compact[static_cast<std::size_t>(x)] && op.potential[x] > 1e-12) {
      throw PotentialBoundViolated("V(" + std::to_string(x) + ") = " +
                                   std::to_string(op.potential[x]) +
                                   " > 0 outside the compact set");
    }
  }

  LandisReport rep;
  rep.regime = Regime::Recurrent;
  rep.parameters.emplace_back("p", op.p);
  rep.potential_bound_ok = true;

  LandisOptions local = opts;
  if (local.compact.empty()) local.compact = compact_set;
  const std::vector<VertexId> region = default_region(g, local.compact);
  const Classification cls = classify(op, u, region, opts.tol);
  if (cls.aggregate == HarmonicTag::Harmonic) {
    rep.harmonicity = "verified-harmonic";
  } else if (opts.strict) {
    throw NotHarmonic("max |H[u]| = " + std::to_string(cls.max_abs) + " on the region");
  } else {
    rep.harmonicity = "not-harmonic (max |H[u]| = " + std::to_string(cls.max_abs) +
                      ", recorded)";
  }

  ConditionReport rec_cond;
  rec_cond.name = "recurrence-evidence";
  switch (evidence) {
    case RecurrenceEvidence::FromSpec:
      rec_cond.satisfied = true;
      rec_cond.note = "divergent G_0 series (model-graph dichotomy)";
      break;
    case RecurrenceEvidence::Declared:
      rec_cond.satisfied = true;
      rec_cond.note = "caller-declared";
      break;
    default:
      rec_cond.note = "no recurrence evidence";
  }
  rep.conditions.push_back(rec_cond);

  const int R = g.max_depth();
  const int hi = g.has_boundary() ? R - 1 : R;
  const std::vector<int> annuli = radius_range(1, std::max(1, hi));
  const AnnulusTrace trace_abs = annulus_trace(g, u, annuli, /*abs=*/true);

  rep.conditions.push_back(make_condition("u-bounded", ConditionKind::BoundedAbove,
                                          trace_abs.radii, trace_abs.sup, opts.trend));

  // liminf u = 0 from the annulus minima of u itself
  {
    const AnnulusTrace trace_signed = annulus_trace(g, u, annuli, /*abs=*/false);
    std::vector<double> abs_minima;
    for (const double m : trace_signed.min) abs_minima.push_back(std::abs(m));
    rep.conditions.push_back(make_condition("liminf-u", ConditionKind::DecaysToZero,
                                            trace_signed.radii, std::move(abs_minima),
                                            opts.trend));
  }

  rep.verdict = verdict_from(rep.conditions, &rep.reasons);
  return rep;
}

}  // namespace plandis
