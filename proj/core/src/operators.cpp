#include "plandis/operators.hpp"

#include <algorithm>
#include <cmath>

namespace plandis {

double signed_power(double a, double r) {
  if (!(r > 0.0)) throw NonpositiveExponent("signed_power needs r > 0");
  if (a == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(a), r), a);
}

SchrodingerOperator::SchrodingerOperator(GraphPtr g, double p_, VertexFunction V)
    : graph(std::move(g)), p(p_), potential(std::move(V)) {
  if (!graph) throw PreconditionError("operator needs a graph");
  if (!(p > 1.0)) throw InvalidOrder("p must be > 1, got " + std::to_string(p));
  if (potential.size() != graph->n()) {
    throw PreconditionError("potential not aligned with graph");
  }
  potential.check_finite("potential");
}

SchrodingerOperator SchrodingerOperator::p_laplacian(GraphPtr g, double p_) {
  const std::size_t n = g->n();
  return SchrodingerOperator(std::move(g), p_, VertexFunction(n, 0.0));
}

SchrodingerOperator SchrodingerOperator::with_constant_potential(GraphPtr g, double p_, double c) {
  const std::size_t n = g->n();
  return SchrodingerOperator(std::move(g), p_, VertexFunction(n, c));
}

double apply_p_laplacian(const WeightedGraph& g, double p, const VertexFunction& f, VertexId x) {
  if (!(p > 1.0)) throw InvalidOrder("p must be > 1");
  if (!g.is_interior(x)) {
    throw BoundaryVertex("Delta_p evaluated at boundary vertex " + std::to_string(x));
  }
  double sum = 0.0;
  const double fx = f[x];
  for (const auto& e : g.neighbors(x)) {
    sum += e.b * signed_power(fx - f[e.to], p - 1.0);
  }
  return sum / g.measure(x);
}

double apply_operator(const SchrodingerOperator& op, const VertexFunction& f, VertexId x) {
  return apply_p_laplacian(op.g(), op.p, f, x) + op.potential[x] * signed_power(f[x], op.p - 1.0);
}

double energy(const SchrodingerOperator& op, const VertexFunction& phi) {
  const WeightedGraph& g = op.g();
  if (phi.size() != g.n()) throw PreconditionError("phi not aligned with graph");
  for (VertexId x = 0; static_cast<std::size_t>(x) < g.n(); ++x) {
    if (!g.is_interior(x) && phi[x] != 0.0) {
      throw SupportTouchesBoundary("phi is nonzero at boundary vertex " + std::to_string(x));
    }
  }
  double edge_sum = 0.0;
  for (VertexId x = 0; static_cast<std::size_t>(x) < g.n(); ++x) {
    for (const auto& e : g.neighbors(x)) {
      if (e.to <= x) continue;  // each unordered edge once
      edge_sum += e.b * std::pow(std::abs(phi[x] - phi[e.to]), op.p);
    }
  }
  double vertex_sum = 0.0;
  for (VertexId x = 0; static_cast<std::size_t>(x) < g.n(); ++x) {
    if (phi[x] != 0.0) {
      vertex_sum += g.measure(x) * op.potential[x] * std::pow(std::abs(phi[x]), op.p);
    }
  }
  return edge_sum + vertex_sum;
}

double simplified_energy(const WeightedGraph& g, double p, const VertexFunction& u,
                         const VertexFunction& phi) {
  if (u.size() != g.n() || phi.size() != g.n()) {
    throw PreconditionError("function not aligned with graph");
  }
  for (VertexId x = 0; static_cast<std::size_t>(x) < g.n(); ++x) {
    if (!(u[x] > 0.0)) {
      throw NonpositiveGroundFunction("u must be strictly positive, u(" + std::to_string(x) +
                                      ") = " + std::to_string(u[x]));
    }
    if (!g.is_interior(x) && phi[x] != 0.0) {
      throw SupportTouchesBoundary("phi is nonzero at boundary vertex " + std::to_string(x));
    }
  }
  double sum = 0.0;
  for (VertexId x = 0; static_cast<std::size_t>(x) < g.n(); ++x) {
    for (const auto& e : g.neighbors(x)) {
      const VertexId y = e.to;
      if (y <= x) continue;
      const double dphi = std::abs(phi[x] - phi[y]);
      if (dphi == 0.0) continue;  // 0 * [...]^{p-2} = 0, also for p < 2
      const double uu = u[x] * u[y];
      const double du = std::abs(u[x] - u[y]);
      const double mean_phi = 0.5 * (std::abs(phi[x]) + std::abs(phi[y]));
      const double bracket = du * mean_phi + std::sqrt(uu) * dphi;
      if (bracket == 0.0) continue;  // only reachable when dphi = 0 anyway
      sum += e.b * uu * dphi * dphi * std::pow(bracket, p - 2.0);
    }
  }
  return sum;
}

std::string to_string(HarmonicTag tag) {
  switch (tag) {
    case HarmonicTag::Harmonic: return "harmonic";
    case HarmonicTag::Subharmonic: return "subharmonic";
    case HarmonicTag::Superharmonic: return "superharmonic";
    default: return "none";
  }
}

Classification classify(const SchrodingerOperator& op, const VertexFunction& f,
                        const std::vector<VertexId>& region, double tol) {
  Classification out;
  out.region = region;
  out.tol = tol;
  out.values.reserve(region.size());
  out.tags.reserve(region.size());
  bool all_sub = true, all_super = true;
  bool first = true;
  for (const VertexId x : region) {
    if (!op.g().is_interior(x)) {
      throw BoundaryVertex("classification region contains boundary vertex " + std::to_string(x));
    }
    const double v = apply_operator(op, f, x);
    out.values.push_back(v);
    HarmonicTag tag;
    if (std::abs(v) <= tol) {
      tag = HarmonicTag::Harmonic;
    } else if (v <= tol) {
      tag = HarmonicTag::Subharmonic;
    } else {
      tag = HarmonicTag::Superharmonic;
    }
    out.tags.push_back(tag);
    all_sub = all_sub && (v <= tol);
    all_super = all_super && (v >= -tol);
    out.max_abs = std::max(out.max_abs, std::abs(v));
    out.max_value = first ? v : std::max(out.max_value, v);
    out.min_value = first ? v : std::min(out.min_value, v);
    first = false;
  }
  if (all_sub && all_super) {
    out.aggregate = HarmonicTag::Harmonic;
  } else if (all_sub) {
    out.aggregate = HarmonicTag::Subharmonic;
  } else if (all_super) {
    out.aggregate = HarmonicTag::Superharmonic;
  } else {
    out.aggregate = HarmonicTag::None;
  }
  return out;
}

VertexFunction positive_part(const VertexFunction& f) {
  VertexFunction out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out.values[i] = std::max(f.values[i], 0.0);
  return out;
}

VertexFunction negative_part(const VertexFunction& f) {
  VertexFunction out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out.values[i] = std::max(-f.values[i], 0.0);
  return out;
}

VertexFunction abs_part(const VertexFunction& f) {
  VertexFunction out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out.values[i] = std::abs(f.values[i]);
  return out;
}

double dirichlet_energy(const SchrodingerOperator& op, const VertexFunction& u) {
  const WeightedGraph& g = op.g();
  double sum = 0.0;
  for (VertexId x = 0; static_cast<std::size_t>(x) < g.n(); ++x) {
    for (const auto& e : g.neighbors(x)) {
      if (e.to <= x) continue;
      sum += e.b * std::pow(std::abs(u[x] - u[e.to]), op.p);
    }
    sum += g.measure(x) * op.potential[x] * std::pow(std::abs(u[x]), op.p);
  }
  return sum;
}

}  // namespace plandis
