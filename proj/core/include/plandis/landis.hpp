#ifndef PLANDIS_LANDIS_HPP
#define PLANDIS_LANDIS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plandis/criticality.hpp"
#include "plandis/model_graphs.hpp"
#include "plandis/operators.hpp"
#include "plandis/solvers.hpp"
#include "plandis/trend.hpp"

namespace plandis {

enum class Regime { General, NegativePotential, Model, Tree, Recurrent };
enum class Verdict { ForcesZero, NotTriggered, Inconclusive };

std::string to_string(Regime r);
std::string to_string(Verdict v);

// How a per-radius trace enters a criterion.
enum class ConditionKind { BoundedAbove, DecaysToZero, BoundedBelow };

struct ConditionReport {
  std::string name;
  bool satisfied = false;
  bool demonstrably_fails = false;
  std::vector<int> radii;
  std::vector<double> values;
  TrendReport trend;
  std::string note;
};

struct LiminfEstimate {
  std::vector<int> radii;
  std::vector<double> minima;          // per-annulus min of u+/ref
  TrendReport trend;
  double surrogate = 0.0;              // min over the outermost annuli
  bool zero_evidence = false;          // decays to zero (or hits zero)
  bool demonstrably_positive = false;  // floor bounded away from zero
};

// Per-annulus minima of u+/ref with a fitted trend; the liminf surrogate is
// the minimum over the outermost `surrogate_annuli` annuli.
LiminfEstimate liminf_estimate(const WeightedGraph& g, const VertexFunction& u,
                               const VertexFunction& ref, const std::vector<int>& annuli,
                               int surrogate_annuli = 3, const TrendOptions& topts = {});

struct LandisOptions {
  bool strict = true;             // throw when the (sub)harmonicity precondition fails
  bool check_negated = false;     // additionally evaluate -u (verdicts not merged)
  std::vector<VertexId> compact;  // excluded from classification; default {root}
  TrendOptions trend;
  int surrogate_annuli = 3;
  int probe_samples = 200;
  std::uint64_t probe_seed = 20250214;
  double tol = 1e-9;
};

struct LandisReport {
  Regime regime = Regime::General;
  Verdict verdict = Verdict::Inconclusive;
  bool potential_bound_ok = true;
  std::string harmonicity;  // verified / violated (recorded) / asserted
  std::optional<ProbeResult> positivity_evidence;
  std::optional<ComparisonReport> comparison;
  std::vector<ConditionReport> conditions;
  std::vector<std::string> reasons;  // why not FORCES_ZERO
  std::vector<std::pair<std::string, double>> parameters;
  std::string provenance;  // which solver produced the reference functions
  std::optional<Verdict> negated_verdict;

  const ConditionReport* condition(const std::string& name) const;
};

struct LandisReference {
  SchrodingerOperator op;  // critical reference operator (same vertex set, same m)
  VertexFunction ground;   // its Agmon ground state candidate, > 0
  CriticalityEvidence evidence = CriticalityEvidence::Unknown;
};

// Decay criteria for H-harmonic u with potential V <= 1: Liouville comparison
// against the reference plus liminf u+/G_1 = 0.
LandisReport landis_check_general(const SchrodingerOperator& op, const VertexFunction& u,
                                  const LandisReference& reference, const VertexFunction& g1,
                                  const LandisOptions& opts = {});

// V <= 0 variant for H-subharmonic u; the liminf reference is a positive
// p-harmonic function of minimal growth (typically G_0 on subcritical graphs).
LandisReport landis_check_negative_potential(const SchrodingerOperator& op,
                                             const VertexFunction& u,
                                             const LandisReference& reference,
                                             const VertexFunction& minimal_growth,
                                             const LandisOptions& opts = {});

// Subcritical model graph with V <= 0, all data spherically symmetric:
// (i) u = O(G_0^{(p-1)/p}), (ii) the edge-gradient bound with
// G_0(z)^{-1/p} dB_{|x|}^{-1/(p-1)} (z deeper for p < 2, shallower for p >= 2),
// (iii) zero gradient on same-sphere edges for p >= 2 (vacuous here: model
// realizations carry none), (iv) liminf |u|/G_0 = 0.
LandisReport landis_check_model(const ModelGraphSpec& spec, double p, double v_max,
                                const SphericalFunction& u, const LandisOptions& opts = {});

// d-regular tree with V <= 1: (i) |u| = O(d^{-|x|/p}), (ii) |grad u+| bounded
// above by d^{-|x|/p} for p >= 2 and below for p < 2, (iii) liminf
// |u|/beta^{|x|} = 0 with beta = tree_beta(p, d).
LandisReport landis_check_tree(double p, int d, const SphericalFunction& u,
                               double v_max = 1.0, const LandisOptions& opts = {});

enum class RecurrenceEvidence { FromSpec, Declared, Unknown };

// Recurrent graph, p <= 2, V <= 0 outside the compact set: u bounded and
// liminf u = 0 (annulus minima of u itself).
LandisReport landis_check_recurrent(const SchrodingerOperator& op, const VertexFunction& u,
                                    const std::vector<VertexId>& compact_set,
                                    RecurrenceEvidence evidence,
                                    const LandisOptions& opts = {});

}  // namespace plandis

#endif  // PLANDIS_LANDIS_HPP
