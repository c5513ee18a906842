#ifndef PLANDIS_CRITICALITY_HPP
#define PLANDIS_CRITICALITY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plandis/operators.hpp"
#include "plandis/trend.hpp"

namespace plandis {

// Optimal Hardy-weight package: Phi = G_0^{(p-1)/p} and
// W_op = Delta_p Phi / Phi^{p-1}, so (Delta_p - W_op)[Phi] = 0 on the
// interior by construction.
struct HardyPackage {
  GraphPtr graph;
  double p = 2.0;
  VertexFunction phi;
  VertexFunction w_op;       // 0 at boundary vertices (not defined there)
  double max_residual = 0.0; // |(Delta_p - W_op)[Phi]| over the interior

  // Delta_p - W_op as an operator.
  SchrodingerOperator hardy_operator() const;
};

HardyPackage hardy_weight(GraphPtr g, double p, const VertexFunction& g0);

// Truncations cannot decide criticality; evidence is tracked explicitly.
enum class CriticalityEvidence { ConfirmedByConstruction, Probed, Unknown };

std::string to_string(CriticalityEvidence e);

struct ProbeResult {
  double min_q = 0.0;
  std::string min_kind;      // "indicator" or "sample"
  int min_index = -1;        // vertex id or sample number
  int samples = 0;
  std::uint64_t seed = 0;
};

// Evaluates Q on all single-vertex indicators over the support set plus
// n_samples random phi with iid uniform(-1,1) entries there. A negative
// minimum certifies that Q is not nonnegative; a nonnegative minimum is
// evidence only.
ProbeResult nonnegativity_probe(const SchrodingerOperator& op, int n_samples, std::uint64_t seed,
                                const std::vector<VertexId>& support = {});

struct NullSequenceResult {
  std::vector<int> ns;
  std::vector<double> q_values;
  TrendReport trend;
  double phi_at_root = 0.0;  // = ground(o) for every n by construction
};

// phi_n = ground * psi_n with the radial cutoff
// psi_n(x) = min(1, max(0, (2n - |x|)/n)): 1 on B_n, 0 outside B_{2n-1}.
// Requires 2n <= R so the support stays off the boundary.
NullSequenceResult null_sequence_experiment(const SchrodingerOperator& op,
                                            const VertexFunction& ground,
                                            const std::vector<int>& ns);

struct ComparisonOptions {
  double tol = 1e-9;
  TrendOptions trend;
  bool check_subharmonic = true;           // condition (b) via classify
  std::vector<VertexId> classify_region;   // default: interior minus the root
};

// Edgewise traces of the two comparison ratio families over {u>0} x {u>0}:
//   ratio1 = b^{2/p} u+(x)u+(y) / (bt^{2/p} v(x)v(y))
//   ratio2 = b^{1-2/p} |grad u+|^{p-2} / (bt^{1-2/p} |grad v|^{p-2})
// At p = 2 the second family is identically 1. For p < 2 an edge with
// grad v = 0 makes the right side infinite (satisfied); grad u+ = 0 with
// grad v != 0 is an infinite left side (violation). Edges present in b but
// missing in bt give ratio +inf and are surfaced.
struct ComparisonReport {
  double p = 2.0;
  std::vector<int> radii;
  std::vector<double> sup_ratio1;         // per-radius suprema over edges
  std::vector<double> sup_ratio2;
  double sup1 = 0.0;
  double sup2 = 0.0;
  TrendReport trend1;
  TrendReport trend2;
  int infinite_ratio1_edges = 0;
  int infinite_ratio2_edges = 0;
  CriticalityEvidence reference_evidence = CriticalityEvidence::Unknown;
  bool positive_part_nontrivial = false;  // u+ != 0
  bool subharmonic_ok = false;            // H[u+] <= tol on the region
  double subharmonic_max = 0.0;
  bool ratios_bounded = false;            // condition (c)
  bool satisfied = false;                 // (a) evidence + (b) + (c)
  std::string note;
};

ComparisonReport liouville_conditions(const SchrodingerOperator& h,
                                      const SchrodingerOperator& h_ref, const VertexFunction& u,
                                      const VertexFunction& v, CriticalityEvidence evidence,
                                      const ComparisonOptions& opts = {});

}  // namespace plandis

#endif  // PLANDIS_CRITICALITY_HPP
