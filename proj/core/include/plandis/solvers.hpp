#ifndef PLANDIS_SOLVERS_HPP
#define PLANDIS_SOLVERS_HPP

#include <functional>
#include <optional>
#include <vector>

#include "plandis/model_graphs.hpp"
#include "plandis/operators.hpp"

namespace plandis {

struct SolveConfig {
  int max_sweeps = 20000;
  double residual_tol = 1e-10;   // max interior |H[u] - source| on success
  double per_vertex_tol = 1e-30; // scalar root interval; below machine
                                 // resolution means bisect all the way down
  double damping = 1.0;          // in (0, 1]
  bool warm_start = true;        // p = 2 relaxation pass before the target p

  void validate() const;
};

struct SolveStats {
  int sweeps = 0;
  double final_residual = 0.0;
  bool warm_started = false;
};

// u with H[u] = 0 on the interior and u = boundary_data on the boundary,
// by cyclic per-vertex relaxation in ascending vertex order. At each interior
// x the scalar equation
//   sum_y b(x,y) (t - u(y))^{<p-1>} + m(x) V(x) t^{<p-1>} = m(x) source(x)
// is solved for t: the edge sum is strictly increasing in t, so for V >= 0
// the root is unique and found by safeguarded bisection. For V < 0 all roots
// in [min_y u(y) - D, max_y u(y) + D] are bracketed on a grid and the one
// nearest the previous iterate wins (ties to the smaller value).
VertexFunction dirichlet_solve(const SchrodingerOperator& op, const VertexFunction& boundary_data,
                               const SolveConfig& config = {}, SolveStats* stats = nullptr);

// Same relaxation with a source term; green functions use source = 1_o with
// zero boundary data.
VertexFunction solve_with_source(const SchrodingerOperator& op, const VertexFunction& boundary_data,
                                 const VertexFunction& source, const SolveConfig& config = {},
                                 SolveStats* stats = nullptr);

struct ExhaustionConfig {
  SolveConfig solve;
  double value_cap = 1e6;        // DivergentExhaustion beyond this at the root
  double convergence_tol = 1e-9; // successive approximants on the reference
                                 // ball (= the smallest scheduled ball)
};

struct ExhaustionResult {
  std::vector<int> radii;
  std::vector<VertexFunction> approximants;  // nested; vertex ids are shared prefixes
  std::vector<double> root_values;
  bool converged = false;
  bool monotone = true;                      // G^{(R)}(x) nondecreasing in R
  std::optional<VertexId> monotonicity_violation;
  VertexFunction limit;                      // on the largest ball
  bool extrapolated = false;                 // geometric tail acceleration applied
};

// Green function by exhaustion: for each ball solves (Delta_p + alpha) G = 1_o
// with zero boundary data. Balls must be nested with shared vertex ids
// (smaller balls are prefixes of larger ones). When the successive differences
// decay geometrically, the limit is Aitken-accelerated per vertex; otherwise
// the last approximant is returned. Throws DivergentExhaustion when root
// values grow past the cap or keep growing without decaying increments
// (alpha = 0 on a non-subcritical family).
ExhaustionResult green_function(const std::vector<WeightedGraph>& balls, double p, double alpha,
                                const ExhaustionConfig& config = {});

// Spherically symmetric Green function of (Delta_p + alpha) on the ball B_R
// of a model graph with zero boundary data. Solved by inward shooting on the
// boundary increment (the outward-growing mode decays inward), which keeps
// full relative accuracy at every radius; generic relaxation and outward
// shooting both lose the deep tail.
SphericalFunction radial_green(const ModelGraphSpec& spec, double p, double alpha, int R);

// Exhaustion over the radial quotient family of a model graph.
ExhaustionResult radial_green_exhaustion(const ModelGraphSpec& spec, double p, double alpha,
                                         const std::vector<int>& radii,
                                         const ExhaustionConfig& config = {});

// The decay base beta of the (Delta_p + 1)-harmonic function beta^{|x|} on the
// d-regular tree: the root in (0, 1) of
//   (1 - b)^{p-1} - [ (1/d) ((1/b) - 1)^{p-1} - 1/d ].
double tree_beta(double p, int d);
double tree_beta_residual(double beta, double p, int d);

struct ShootResult {
  SphericalFunction g;
  double g0 = 0.0;        // selected initial value
  int usable_radius = 0;  // trajectory trustworthy up to here
};

// Bisection on G(0) for a positive decaying trajectory of the alpha > 0 flux
// recurrence. Shooting loses relative accuracy at deep radii (the growing mode
// amplifies the G(0) rounding), so prefer radial_green for deep tails.
ShootResult spherical_shoot(const ModelGraphSpec& spec, double p, double alpha, int R,
                            double cap = 1e3);

struct ComparisonCheck {
  bool ok = false;
  std::optional<VertexId> first_violation;
};

// Weak comparison test utility: verifies v superharmonic and u subharmonic on
// the region (via classify) and u <= v on the region's neighbor frontier,
// then reports whether u <= v + tol throughout the region.
ComparisonCheck weak_comparison_check(const SchrodingerOperator& op, const VertexFunction& u,
                                      const VertexFunction& v, const std::vector<VertexId>& region,
                                      double tol = 1e-9);

}  // namespace plandis

#endif  // PLANDIS_SOLVERS_HPP
