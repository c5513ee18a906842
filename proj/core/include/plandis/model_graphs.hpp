#ifndef PLANDIS_MODEL_GRAPHS_HPP
#define PLANDIS_MODEL_GRAPHS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plandis/graph.hpp"

namespace plandis {

// Declared growth of the boundary weights dB_k beyond the truncation.
// Geometric: dB_{k+1}/dB_k -> rate. PowerLaw: dB_k ~ k^rate.
enum class GrowthLaw { Geometric, PowerLaw, Unknown };

struct AsymptoticLaw {
  GrowthLaw kind = GrowthLaw::Unknown;
  double rate = 0.0;
};

enum class Wiring { Tree, CompleteBipartite };

// Spherically symmetric graph description: sphere sizes #S_r, a uniform
// per-edge weight between consecutive spheres, and a per-vertex measure per
// sphere. No intra-sphere edges. The realized graph has spherically symmetric
// curvatures k_+/-.
struct ModelGraphSpec {
  std::vector<std::int64_t> sphere_sizes;  // r = 0..R, #S_0 = 1
  std::vector<double> edge_weights;        // r = 0..R-1, per adjacent pair
  std::vector<double> sphere_measures;     // r = 0..R, per vertex
  Wiring wiring = Wiring::CompleteBipartite;
  AsymptoticLaw law;
  std::string kind = "custom";

  int R() const { return static_cast<int>(sphere_sizes.size()) - 1; }
  double root_measure() const { return sphere_measures.at(0); }
  double sphere_total_measure(int r) const {
    return static_cast<double>(sphere_sizes.at(static_cast<std::size_t>(r))) *
           sphere_measures.at(static_cast<std::size_t>(r));
  }

  void validate() const;

  // k_+(x) = d, k_-(x) = 1, b = 1, m = 1; #S_r = d^r.
  static ModelGraphSpec regular_tree(int d, int R);
  // Standard weights b = 1 between consecutive spheres, m = 1,
  // #S_{r+1} = ceil(r^gamma) for r >= 1 and #S_1 = 1.
  static ModelGraphSpec anti_tree(double gamma, int R);
  // All spheres of size 1 with unit weights and measures.
  static ModelGraphSpec path(int R);
  static ModelGraphSpec custom(std::vector<std::int64_t> sizes, std::vector<double> weights,
                               std::vector<double> measures, Wiring wiring = Wiring::CompleteBipartite,
                               AsymptoticLaw law = {});

  double tree_degree() const;  // for kind == "tree"
};

// Function of the radius only; lifts to a VertexFunction constant on spheres.
struct SphericalFunction {
  std::vector<double> values;  // index = radius

  std::size_t size() const { return values.size(); }
  double operator[](int r) const { return values[static_cast<std::size_t>(r)]; }
  double& operator[](int r) { return values[static_cast<std::size_t>(r)]; }
};

VertexFunction lift(const WeightedGraph& g, const SphericalFunction& f);
// Inverse of lift; throws if f is not constant on spheres (tolerance 0).
SphericalFunction restrict_spherical(const WeightedGraph& g, const VertexFunction& f);

// Concrete ball B_R with the outermost sphere marked as boundary. Vertices
// are numbered sphere by sphere so nested realizations share vertex ids.
WeightedGraph realize(const ModelGraphSpec& spec);

// Radial quotient of the model graph: path on radii 0..R with edge weights
// dB_r and vertex measures m(S_r). Evaluating Delta_p on spherically
// symmetric functions agrees with the realized graph exactly.
WeightedGraph quotient_graph(const ModelGraphSpec& spec);
// Prefix truncations of the quotient at each radius in `radii`.
std::vector<WeightedGraph> quotient_family(const ModelGraphSpec& spec,
                                           const std::vector<int>& radii);

// dB_k = total edge weight between S_k and S_{k+1}; 0 <= k < R.
double boundary_weight(const ModelGraphSpec& spec, int k);

// Per-radius curvatures of a realized graph and their spherical-symmetry
// deviation (max over vertices of |k_pm(x) - k_pm(|x|)|).
struct SymmetryCheck {
  std::vector<double> k_minus;
  std::vector<double> k_plus;
  double max_deviation = 0.0;
};
SymmetryCheck model_symmetry_check(const WeightedGraph& g);

struct Green0Value {
  double value = 0.0;       // partial sum + tail estimate
  double lower = 0.0;       // bracket around the true series value
  double upper = 0.0;
  bool exact_tail = false;  // geometric law: tail summed exactly
};

// G_0(x) = sum_{k >= |x|} (m(o)/dB_k)^{1/(p-1)}; the tail beyond the stored
// radii follows the declared asymptotic law. Throws SeriesDivergent when the
// series diverges under that law.
Green0Value green0_closed_form(const ModelGraphSpec& spec, double p, int x_radius,
                               std::optional<double> m_o = std::nullopt);
SphericalFunction green0_profile(const ModelGraphSpec& spec, double p);

enum class SubcriticalityBasis { DeclaredLaw, Heuristic };

struct SubcriticalityReport {
  bool subcritical = false;
  SubcriticalityBasis basis = SubcriticalityBasis::DeclaredLaw;
  AsymptoticLaw effective_law;
  double confidence = 1.0;  // 1 for declared laws, fit quality for heuristics
};

// Convergence of the G_0 series under the declared law, or under a
// ratio/power heuristic on the truncated dB data when no law is declared.
// Throws UnknownAsymptotics when the heuristic is inconclusive.
SubcriticalityReport subcriticality(const ModelGraphSpec& spec, double p);
bool is_subcritical(const ModelGraphSpec& spec, double p);

struct FluxSolveResult {
  SphericalFunction g;               // radii 0..R
  std::optional<int> first_negative; // first radius with g < 0, if any
};

// Unique spherically symmetric solution of (Delta_p + alpha) G = 1_o on B_R
// with the given G(0), via the forward flux recurrence
//   dB_k (G(k)-G(k+1))^{<p-1>} = m(o) - alpha sum_{j<=k} m(S_j) G(j)^{<p-1>}.
FluxSolveResult spherical_flux_solve(const ModelGraphSpec& spec, double p, double alpha,
                                     double g_at_0);

// Spec JSON: {"kind": "tree"|"antitree"|"path"|"custom", "d"?, "gamma"?, "R",
//             "sphere_sizes"?, "weights"?, "measures"?, "wiring"?, "law"?}
ModelGraphSpec model_spec_from_json_string(const std::string& text);
ModelGraphSpec read_model_spec(const std::string& path);
std::string model_spec_to_json_string(const ModelGraphSpec& spec);

}  // namespace plandis

#endif  // PLANDIS_MODEL_GRAPHS_HPP
