#include "plandis/serialize.hpp"

#include <charconv>
#include <fstream>

namespace plandis {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Json to_json(const Classification& cls) {
  Json doc;
  doc["tol"] = cls.tol;
  doc["aggregate"] = to_string(cls.aggregate);
  doc["max_abs"] = cls.max_abs;
  doc["max_value"] = cls.max_value;
  doc["min_value"] = cls.min_value;
  Json entries = Json::array();
  for (std::size_t i = 0; i < cls.region.size(); ++i) {
    entries.push_back({{"vertex", cls.region[i]},
                       {"value", cls.values[i]},
                       {"tag", to_string(cls.tags[i])}});
  }
  doc["vertices"] = std::move(entries);
  return doc;
}

Json to_json(const ProbeResult& probe) {
  return Json{{"min_q", probe.min_q},
              {"min_kind", probe.min_kind},
              {"min_index", probe.min_index},
              {"samples", probe.samples},
              {"seed", probe.seed}};
}

Json to_json(const TrendReport& trend) {
  Json doc;
  doc["class"] = to_string(trend.cls);
  doc["geometric_slope"] = trend.geometric.slope;
  doc["geometric_r2"] = trend.geometric.r2;
  doc["power_slope"] = trend.power.slope;
  doc["power_r2"] = trend.power.r2;
  doc["best_goodness"] = trend.best_goodness;
  doc["exact_zeros"] = trend.exact_zeros;
  return doc;
}

Json to_json(const NullSequenceResult& ns) {
  Json doc;
  doc["ns"] = ns.ns;
  doc["q_values"] = ns.q_values;
  doc["phi_at_root"] = ns.phi_at_root;
  doc["trend"] = to_json(ns.trend);
  return doc;
}

Json to_json(const ComparisonReport& rep) {
  Json doc;
  doc["p"] = rep.p;
  doc["reference_evidence"] = to_string(rep.reference_evidence);
  doc["positive_part_nontrivial"] = rep.positive_part_nontrivial;
  doc["subharmonic_ok"] = rep.subharmonic_ok;
  doc["subharmonic_max"] = rep.subharmonic_max;
  doc["ratios_bounded"] = rep.ratios_bounded;
  doc["satisfied"] = rep.satisfied;
  doc["sup1"] = rep.sup1;
  doc["sup2"] = rep.sup2;
  doc["infinite_ratio1_edges"] = rep.infinite_ratio1_edges;
  doc["infinite_ratio2_edges"] = rep.infinite_ratio2_edges;
  doc["radii"] = rep.radii;
  doc["sup_ratio1"] = rep.sup_ratio1;
  doc["sup_ratio2"] = rep.sup_ratio2;
  doc["trend1"] = to_json(rep.trend1);
  doc["trend2"] = to_json(rep.trend2);
  if (!rep.note.empty()) doc["note"] = rep.note;
  return doc;
}

Json to_json(const ConditionReport& cond) {
  Json doc;
  doc["name"] = cond.name;
  doc["satisfied"] = cond.satisfied;
  doc["demonstrably_fails"] = cond.demonstrably_fails;
  if (!cond.radii.empty()) {
    doc["radii"] = cond.radii;
    doc["values"] = cond.values;
    doc["trend"] = to_json(cond.trend);
  }
  if (!cond.note.empty()) doc["note"] = cond.note;
  return doc;
}

Json to_json(const LandisReport& rep) {
  Json doc;
  doc["regime"] = to_string(rep.regime);
  doc["verdict"] = to_string(rep.verdict);
  doc["potential_bound_ok"] = rep.potential_bound_ok;
  doc["harmonicity"] = rep.harmonicity;
  Json params;
  for (const auto& [k, v] : rep.parameters) params[k] = v;
  doc["parameters"] = std::move(params);
  if (rep.positivity_evidence) doc["positivity_evidence"] = to_json(*rep.positivity_evidence);
  if (rep.comparison) doc["comparison"] = to_json(*rep.comparison);
  Json conds = Json::array();
  for (const auto& c : rep.conditions) conds.push_back(to_json(c));
  doc["conditions"] = std::move(conds);
  doc["reasons"] = rep.reasons;
  if (!rep.provenance.empty()) doc["provenance"] = rep.provenance;
  if (rep.negated_verdict) doc["negated_verdict"] = to_string(*rep.negated_verdict);
  return doc;
}

Json to_json(const ExhaustionResult& ex) {
  Json doc;
  doc["radii"] = ex.radii;
  doc["root_values"] = ex.root_values;
  doc["converged"] = ex.converged;
  doc["monotone"] = ex.monotone;
  if (ex.monotonicity_violation) doc["monotonicity_violation"] = *ex.monotonicity_violation;
  doc["extrapolated"] = ex.extrapolated;
  doc["limit"] = ex.limit.values;
  return doc;
}

Json to_json(const SolveStats& stats) {
  return Json{{"sweeps", stats.sweeps},
              {"final_residual", stats.final_residual},
              {"warm_started", stats.warm_started}};
}

Json to_json(const SubcriticalityReport& rep) {
  Json doc;
  doc["subcritical"] = rep.subcritical;
  doc["basis"] = rep.basis == SubcriticalityBasis::DeclaredLaw ? "declared-law" : "heuristic";
  switch (rep.effective_law.kind) {
    case GrowthLaw::Geometric: doc["law"] = "geometric"; break;
    case GrowthLaw::PowerLaw: doc["law"] = "power"; break;
    default: doc["law"] = "unknown";
  }
  doc["rate"] = rep.effective_law.rate;
  doc["confidence"] = rep.confidence;
  return doc;
}

std::string trace_csv(const std::vector<int>& radii, const std::vector<double>& sup,
                      const std::vector<double>& min, const std::vector<double>& ratio) {
  std::string out = "radius,sup,min,ratio\n";
  for (std::size_t i = 0; i < radii.size(); ++i) {
    out += std::to_string(radii[i]);
    out += ',';
    if (i < sup.size()) out += format_double(sup[i]);
    out += ',';
    if (i < min.size()) out += format_double(min[i]);
    out += ',';
    if (i < ratio.size()) out += format_double(ratio[i]);
    out += '\n';
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

}  // namespace plandis
