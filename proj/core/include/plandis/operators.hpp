#ifndef PLANDIS_OPERATORS_HPP
#define PLANDIS_OPERATORS_HPP

#include <string>
#include <vector>

#include "plandis/graph.hpp"

namespace plandis {

// a|a|^{r-1} with 0 mapped to 0; odd in a, strictly increasing.
double signed_power(double a, double r);

// H = Delta_p + V on a fixed graph. p > 1 strictly.
struct SchrodingerOperator {
  GraphPtr graph;
  double p = 2.0;
  VertexFunction potential;

  SchrodingerOperator(GraphPtr g, double p_, VertexFunction V);
  static SchrodingerOperator p_laplacian(GraphPtr g, double p_);
  static SchrodingerOperator with_constant_potential(GraphPtr g, double p_, double c);

  const WeightedGraph& g() const { return *graph; }
};

// Delta_p f(x) = (1/m(x)) sum_y b(x,y) (f(x)-f(y))^{<p-1>}. x must be interior.
double apply_p_laplacian(const WeightedGraph& g, double p, const VertexFunction& f, VertexId x);

// H[f](x) = Delta_p f(x) + V(x) |f(x)|^{p-2} f(x).
double apply_operator(const SchrodingerOperator& op, const VertexFunction& f, VertexId x);

// Energy functional over the finite truncation,
//   Q(phi) = sum_{x~y} b(x,y)|phi(x)-phi(y)|^p + sum_x m(x)V(x)|phi(x)|^p,
// with the edge sum over unordered pairs (each edge counted once). phi must
// vanish on the boundary.
double energy(const SchrodingerOperator& op, const VertexFunction& phi);

// Simplified energy for a strictly positive u:
//   E(phi) = sum_{x~y} b (u x u) |grad phi|^2
//            [ |grad u| (|phi(x)|+|phi(y)|)/2 + (u x u)^{1/2} |grad phi| ]^{p-2},
// unordered edges, with the 0*inf = 0 convention for p < 2: any term with
// grad phi = 0 contributes 0, then any term with vanishing bracket
// contributes 0.
double simplified_energy(const WeightedGraph& g, double p, const VertexFunction& u,
                         const VertexFunction& phi);

enum class HarmonicTag { Harmonic, Subharmonic, Superharmonic, None };

std::string to_string(HarmonicTag tag);

// Pointwise H[f] values over a region with tags under an absolute tolerance:
// harmonic |H[f]| <= tol, subharmonic H[f] <= tol, superharmonic H[f] >= -tol.
struct Classification {
  std::vector<VertexId> region;
  std::vector<double> values;
  std::vector<HarmonicTag> tags;
  HarmonicTag aggregate = HarmonicTag::None;
  double tol = 1e-9;
  double max_abs = 0.0;
  double max_value = 0.0;  // largest H[f]
  double min_value = 0.0;  // smallest H[f]

  bool all_subharmonic() const {
    return aggregate == HarmonicTag::Subharmonic || aggregate == HarmonicTag::Harmonic;
  }
  bool all_superharmonic() const {
    return aggregate == HarmonicTag::Superharmonic || aggregate == HarmonicTag::Harmonic;
  }
};

constexpr double kClassifyTol = 1e-9;

Classification classify(const SchrodingerOperator& op, const VertexFunction& f,
                        const std::vector<VertexId>& region, double tol = kClassifyTol);

// f = f+ - f- and |f| = f+ + f- hold exactly.
VertexFunction positive_part(const VertexFunction& f);
VertexFunction negative_part(const VertexFunction& f);
VertexFunction abs_part(const VertexFunction& f);

// p-Dirichlet energy over all stored vertices and edges (boundary terms
// included); used to track descent of the relaxation sweeps.
double dirichlet_energy(const SchrodingerOperator& op, const VertexFunction& u);

}  // namespace plandis

#endif  // PLANDIS_OPERATORS_HPP
