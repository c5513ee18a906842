#include "plandis/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace plandis {

void SolveConfig::validate() const {
  if (max_sweeps < 1) throw PreconditionError("max_sweeps must be >= 1");
  if (!(residual_tol > 0.0) || !(per_vertex_tol > 0.0)) {
    throw PreconditionError("tolerances must be > 0");
  }
  if (!(damping > 0.0) || damping > 1.0) throw PreconditionError("damping must be in (0, 1]");
}

namespace {

// m(x) H[u](x) - m(x) s(x) as a function of the trial value t at x.
struct VertexEquation {
  const WeightedGraph& g;
  double p;
  const VertexFunction& u;
  VertexId x;
  double mV;   // m(x) V(x)
  double rhs;  // m(x) s(x)

  double operator()(double t) const {
    double sum = 0.0;
    for (const auto& e : g.neighbors(x)) {
      sum += e.b * signed_power(t - u[e.to], p - 1.0);
    }
    return sum + mV * signed_power(t, p - 1.0) - rhs;
  }
};

template <typename Eq>
double bisect(const Eq& eq, double lo, double hi, double flo, double tol) {
  // Invariant: eq(lo) <= 0 <= eq(hi). Runs to machine resolution unless an
  // early-exit tolerance is set: for p < 2 the roots may need placement far
  // below any fixed tolerance (fractional powers of plateau gaps stay large).
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) return mid;
    if (tol > 0.0 && hi - lo <= tol * std::max(1.0, std::abs(mid))) return mid;
    const double fm = eq(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Strictly increasing residual: expand a bracket and bisect.
template <typename Eq>
double solve_monotone(const Eq& eq, double lo, double hi, double tol) {
  double flo = eq(lo);
  double fhi = eq(hi);
  double step = std::max(1.0, hi - lo);
  for (int k = 0; k < 200 && flo > 0.0; ++k) {
    hi = lo;
    fhi = flo;
    lo -= step;
    step *= 2.0;
    flo = eq(lo);
  }
  step = std::max(1.0, hi - lo);
  for (int k = 0; k < 200 && fhi < 0.0; ++k) {
    lo = hi;
    flo = fhi;
    hi += step;
    step *= 2.0;
    fhi = eq(hi);
  }
  if (flo > 0.0 || fhi < 0.0) {
    throw NoScalarRoot("bracket expansion failed");
  }
  return bisect(eq, lo, hi, flo, tol);
}

// Sign-changing V: bracket all roots on a grid over
// [min_y u(y) - D, max_y u(y) + D] and take the root nearest the previous
// iterate, ties to the smaller value.
double solve_nonmonotone(const VertexEquation& eq, double prev, double tol) {
  double nbr_min = std::numeric_limits<double>::infinity();
  double nbr_max = -std::numeric_limits<double>::infinity();
  for (const auto& e : eq.g.neighbors(eq.x)) {
    nbr_min = std::min(nbr_min, eq.u[e.to]);
    nbr_max = std::max(nbr_max, eq.u[e.to]);
  }
  double delta = 1.0 + (nbr_max - nbr_min);
  for (int attempt = 0; attempt < 6; ++attempt) {
    const double lo = std::min(nbr_min, prev) - delta;
    const double hi = std::max(nbr_max, prev) + delta;
    const int cells = attempt == 0 ? 64 : 512;
    std::vector<double> roots;
    double t0 = lo;
    double f0 = eq(t0);
    for (int i = 1; i <= cells; ++i) {
      const double t1 = lo + (hi - lo) * static_cast<double>(i) / cells;
      const double f1 = eq(t1);
      if (f0 == 0.0) {
        roots.push_back(t0);
      } else if ((f0 < 0.0) != (f1 < 0.0)) {
        if (f0 < 0.0) {
          roots.push_back(bisect(eq, t0, t1, f0, tol));
        } else {
          // decreasing crossing: flip the sign so the bisect invariant holds
          const auto flipped = [&](double t) { return -eq(t); };
          roots.push_back(bisect(flipped, t0, t1, -f0, tol));
        }
      }
      t0 = t1;
      f0 = f1;
    }
    if (!roots.empty()) {
      double best = roots[0];
      for (const double r : roots) {
        const double dr = std::abs(r - prev), db = std::abs(best - prev);
        if (dr < db || (dr == db && r < best)) best = r;
      }
      return best;
    }
    delta *= 4.0;
  }
  throw NoScalarRoot("no scalar root bracketed at vertex " + std::to_string(eq.x) +
                     " (prev = " + std::to_string(prev) + ", neighbors in [" +
                     std::to_string(nbr_min) + ", " + std::to_string(nbr_max) +
                     "], mV = " + std::to_string(eq.mV) + ", rhs = " + std::to_string(eq.rhs) +
                     ")");
}

double max_residual(const SchrodingerOperator& op, const VertexFunction& u,
                    const VertexFunction& source, const std::vector<VertexId>& interior) {
  double worst = 0.0;
  for (const VertexId x : interior) {
    worst = std::max(worst, std::abs(apply_operator(op, u, x) - source[x]));
  }
  return worst;
}

// For p < 2 the per-vertex sweep locks groups of adjacent vertices into
// near-equal plateaus that drift sublinearly (the scalar equation's slope
// blows up at zero gradient). Collapse each flat interior cluster to a single
// unknown and solve its aggregated -- still strictly increasing -- equation
// exactly.
void collapse_flat_clusters(const SchrodingerOperator& op, VertexFunction& u,
                            const VertexFunction& source,
                            const std::vector<std::uint8_t>& is_interior, double gap_tol,
                            double tol) {
  const WeightedGraph& g = op.g();
  const std::size_t n = g.n();
  std::vector<int> cluster(n, -1);
  std::vector<std::vector<VertexId>> members;
  for (VertexId x = 0; static_cast<std::size_t>(x) < n; ++x) {
    if (!is_interior[static_cast<std::size_t>(x)] || cluster[static_cast<std::size_t>(x)] >= 0) {
      continue;
    }
    // flood fill over flat edges
    std::vector<VertexId> stack{x}, found;
    cluster[static_cast<std::size_t>(x)] = static_cast<int>(members.size());
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      found.push_back(v);
      for (const auto& e : g.neighbors(v)) {
        if (!is_interior[static_cast<std::size_t>(e.to)] ||
            cluster[static_cast<std::size_t>(e.to)] >= 0) {
          continue;
        }
        if (std::abs(u[v] - u[e.to]) <= gap_tol * std::max(1.0, std::abs(u[v]))) {
          cluster[static_cast<std::size_t>(e.to)] = cluster[static_cast<std::size_t>(x)];
          stack.push_back(e.to);
        }
      }
    }
    members.push_back(std::move(found));
  }

  for (const auto& group : members) {
    if (group.size() < 2) continue;
    bool monotone = true;
    for (const VertexId x : group) {
      if (g.measure(x) * op.potential[x] < 0.0) monotone = false;
    }
    if (!monotone) continue;
    const int id = cluster[static_cast<std::size_t>(group.front())];
    const auto eq = [&](double c) {
      double sum = 0.0;
      for (const VertexId x : group) {
        for (const auto& e : g.neighbors(x)) {
          if (cluster[static_cast<std::size_t>(e.to)] != id) {
            sum += e.b * signed_power(c - u[e.to], op.p - 1.0);
          }
        }
        sum += g.measure(x) * op.potential[x] * signed_power(c, op.p - 1.0);
        sum -= g.measure(x) * source[x];
      }
      return sum;
    };
    double lo = u[group.front()], hi = lo;
    for (const VertexId x : group) {
      lo = std::min(lo, u[x]);
      hi = std::max(hi, u[x]);
      for (const auto& e : g.neighbors(x)) {
        lo = std::min(lo, u[e.to]);
        hi = std::max(hi, u[e.to]);
      }
    }
    const double c = solve_monotone(eq, lo - 1.0, hi + 1.0, tol);
    for (const VertexId x : group) u[x] = c;
  }
}

// Gauss-Seidel pass at p = 2, where the scalar root is linear. Used as the
// warm start for all p; harmless to skip when a denominator is nonpositive.
void linear_warm_start(const SchrodingerOperator& op, VertexFunction& u,
                       const VertexFunction& source, const std::vector<VertexId>& interior,
                       int sweeps) {
  const WeightedGraph& g = op.g();
  for (const VertexId x : interior) {
    if (g.weighted_degree(x) + g.measure(x) * op.potential[x] <= 0.0) return;
  }
  for (int s = 0; s < sweeps; ++s) {
    double change = 0.0;
    for (const VertexId x : interior) {
      double num = g.measure(x) * source[x];
      for (const auto& e : g.neighbors(x)) num += e.b * u[e.to];
      const double t = num / (g.weighted_degree(x) + g.measure(x) * op.potential[x]);
      change = std::max(change, std::abs(t - u[x]));
      u[x] = t;
    }
    if (change < 1e-12) break;
  }
}

// Dense LU with partial pivoting; a should be row-major n x n. Returns false
// on a vanishing pivot.
bool lu_solve(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
    }
    if (a[piv * n + k] == 0.0) return false;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i * n + k] / a[k * n + k];
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
      b[i] -= f * b[k];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * b[j];
    b[i] = s / a[i * n + i];
  }
  return true;
}

// Guarded Newton step on the full interior system, used as a finisher when
// the sweeps crawl (p < 2 plateau locks couple many vertices at once). The
// Jacobian entries |du|^{p-2} are floored at the kinks; steps are accepted
// only when the residual drops.
bool newton_polish(const SchrodingerOperator& op, VertexFunction& u,
                   const VertexFunction& source, const std::vector<VertexId>& interior,
                   int rounds) {
  const WeightedGraph& g = op.g();
  const std::size_t n = interior.size();
  if (n == 0 || n > 700) return false;
  const double p = op.p;
  std::vector<int> index(g.n(), -1);
  for (std::size_t i = 0; i < n; ++i) index[static_cast<std::size_t>(interior[i])] = static_cast<int>(i);

  // floor relative to the local value scale so near-zero plateaus still get
  // a finite (if huge) slope
  const auto kink_floor = [&](double s, double scale) {
    return std::max(std::abs(s), 1e-14 * std::max(scale, 1e-12));
  };

  bool improved_any = false;
  for (int round = 0; round < rounds; ++round) {
    const double res0 = max_residual(op, u, source, interior);
    std::vector<double> jac(n * n, 0.0), rhs(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const VertexId x = interior[i];
      double diag = (p - 1.0) * g.measure(x) * std::abs(op.potential[x]) *
                    std::pow(kink_floor(u[x], 1.0), p - 2.0);
      double f = g.measure(x) * op.potential[x] * signed_power(u[x], p - 1.0) -
                 g.measure(x) * source[x];
      for (const auto& e : g.neighbors(x)) {
        f += e.b * signed_power(u[x] - u[e.to], p - 1.0);
        const double scale = std::max(std::abs(u[x]), std::abs(u[e.to]));
        const double w = (p - 1.0) * e.b * std::pow(kink_floor(u[x] - u[e.to], scale), p - 2.0);
        diag += w;
        const int j = index[static_cast<std::size_t>(e.to)];
        if (j >= 0) jac[i * n + static_cast<std::size_t>(j)] -= w;
      }
      jac[i * n + i] = diag;
      rhs[i] = -f;
    }
    if (!lu_solve(jac, rhs, n)) return improved_any;

    bool accepted = false;
    double step = 1.0;
    for (int tries = 0; tries < 6; ++tries, step *= 0.5) {
      VertexFunction candidate = u;
      for (std::size_t i = 0; i < n; ++i) candidate[interior[i]] += step * rhs[i];
      if (max_residual(op, candidate, source, interior) < res0) {
        u = std::move(candidate);
        accepted = true;
        improved_any = true;
        break;
      }
    }
    if (!accepted) return improved_any;
  }
  return improved_any;
}

VertexFunction relaxation_solve(const SchrodingerOperator& op, const VertexFunction& boundary_data,
                                const VertexFunction& source, const SolveConfig& config,
                                SolveStats* stats) {
  config.validate();
  const WeightedGraph& g = op.g();
  if (boundary_data.size() != g.n() || source.size() != g.n()) {
    throw PreconditionError("boundary data and source must be aligned with the graph");
  }
  boundary_data.check_finite("boundary data");

  const BoundaryDecomposition dec = g.decomposition();
  std::vector<std::uint8_t> interior_mask(g.n(), 0);
  for (const VertexId x : dec.interior) interior_mask[static_cast<std::size_t>(x)] = 1;
  VertexFunction u(g.n(), 0.0);
  for (const VertexId x : dec.boundary) u[x] = boundary_data[x];

  double anchor_scale = 1.0;
  for (const VertexId x : dec.boundary) anchor_scale = std::max(anchor_scale, std::abs(u[x]));
  for (VertexId x = 0; static_cast<std::size_t>(x) < g.n(); ++x) {
    anchor_scale = std::max(anchor_scale, std::abs(source[x]));
  }

  SolveStats local;
  if (config.warm_start) {
    linear_warm_start(op, u, source, dec.interior, std::max(200, static_cast<int>(g.n())));
    local.warm_started = true;
  }

  // Snapshots for Aitken acceleration of the sweep iteration; the geometric
  // tail is very slow for p < 2 (degenerate diffusion across flat edges).
  constexpr int kSnapshotSpacing = 40;
  std::vector<VertexFunction> snapshots;

  int stagnant_sweeps = 0;
  for (int sweep = 1; sweep <= config.max_sweeps; ++sweep) {
    double max_change = 0.0;
    double value_scale = 0.0;
    for (const VertexId x : dec.interior) {
      const double mV = g.measure(x) * op.potential[x];
      const VertexEquation eq{g, op.p, u, x, mV, g.measure(x) * source[x]};
      double t;
      if (mV >= 0.0) {
        double lo = u[x], hi = u[x];
        for (const auto& e : g.neighbors(x)) {
          lo = std::min(lo, u[e.to]);
          hi = std::max(hi, u[e.to]);
        }
        t = solve_monotone(eq, lo - 1.0, hi + 1.0, config.per_vertex_tol);
      } else {
        t = solve_nonmonotone(eq, u[x], config.per_vertex_tol);
      }
      const double next = u[x] + config.damping * (t - u[x]);
      max_change = std::max(max_change, std::abs(next - u[x]));
      value_scale = std::max(value_scale, std::abs(next));
      u[x] = next;
    }
    if (value_scale > 1e9 * anchor_scale) {
      // sign-changing V without enough boundary anchoring: the nearest-root
      // sweep drifts away instead of settling on a (saddle) solution
      throw NoConvergence("iterates diverged to " + std::to_string(value_scale) +
                          " after " + std::to_string(sweep) + " sweeps");
    }
    if (sweep % 50 == 0) {
      newton_polish(op, u, source, dec.interior, 6);
    }
    if (op.p < 2.0 && sweep % 10 == 0) {
      // plateaus lock at several scales; adopt a collapse only when it
      // lowers the residual
      double current = max_residual(op, u, source, dec.interior);
      for (const double gap_tol : {1e-11, 1e-8, 1e-5, 1e-2}) {
        VertexFunction candidate = u;
        collapse_flat_clusters(op, candidate, source, interior_mask, gap_tol,
                               config.per_vertex_tol);
        const double collapsed = max_residual(op, candidate, source, dec.interior);
        if (collapsed < current) {
          u = std::move(candidate);
          current = collapsed;
        }
      }
    }
    local.sweeps = sweep;
    local.final_residual = max_residual(op, u, source, dec.interior);
    if (local.final_residual <= config.residual_tol) {
      if (stats) *stats = local;
      return u;
    }
    if (sweep % kSnapshotSpacing == 0) {
      snapshots.push_back(u);
      if (snapshots.size() == 3) {
        // per-vertex geometric extrapolation, adopted only when it lowers
        // the residual
        VertexFunction accelerated = snapshots[2];
        for (const VertexId x : dec.interior) {
          const double d1 = snapshots[1][x] - snapshots[0][x];
          const double d2 = snapshots[2][x] - snapshots[1][x];
          if (d1 != 0.0 && d2 != 0.0 && (d1 > 0.0) == (d2 > 0.0) &&
              std::abs(d2) < std::abs(d1)) {
            const double rho = std::min(d2 / d1, 0.9999);
            accelerated[x] = snapshots[2][x] + d2 * rho / (1.0 - rho);
          }
        }
        if (max_residual(op, accelerated, source, dec.interior) < local.final_residual) {
          u = std::move(accelerated);
        }
        snapshots.erase(snapshots.begin());
      }
    }
    // Iterates frozen at machine precision but residual above target: the
    // scalar equations for p < 2 have unbounded slope at kinks, so the
    // residual can bottom out above any absolute tolerance.
    if (max_change <= 4e-16 * std::max(value_scale, 1e-300)) {
      if (++stagnant_sweeps >= 8) {
        throw NoConvergence("relaxation stagnated at residual " +
                            std::to_string(local.final_residual) + " after " +
                            std::to_string(local.sweeps) + " sweeps (target " +
                            std::to_string(config.residual_tol) + ")");
      }
    } else {
      stagnant_sweeps = 0;
    }
  }
  throw NoConvergence("relaxation residual " + std::to_string(local.final_residual) +
                      " after " + std::to_string(local.sweeps) + " sweeps");
}

}  // namespace

VertexFunction dirichlet_solve(const SchrodingerOperator& op, const VertexFunction& boundary_data,
                               const SolveConfig& config, SolveStats* stats) {
  return relaxation_solve(op, boundary_data, VertexFunction(op.g().n(), 0.0), config, stats);
}

VertexFunction solve_with_source(const SchrodingerOperator& op, const VertexFunction& boundary_data,
                                 const VertexFunction& source, const SolveConfig& config,
                                 SolveStats* stats) {
  return relaxation_solve(op, boundary_data, source, config, stats);
}

namespace {

// Shared tail of the two exhaustion drivers: monotonicity bookkeeping,
// divergence detection and geometric (Aitken) acceleration of the limit.
ExhaustionResult assemble_exhaustion(std::vector<int> radii,
                                     std::vector<VertexFunction> approximants,
                                     const ExhaustionConfig& config) {
  ExhaustionResult out;
  out.radii = std::move(radii);
  out.approximants = std::move(approximants);
  const std::size_t n_balls = out.approximants.size();
  for (const auto& a : out.approximants) {
    out.root_values.push_back(a.values.empty() ? 0.0 : a.values[0]);
  }

  for (std::size_t i = 0; i + 1 < n_balls; ++i) {
    const auto& prev = out.approximants[i];
    const auto& next = out.approximants[i + 1];
    for (std::size_t v = 0; v < prev.size(); ++v) {
      if (next.values[v] < prev.values[v] - 1e-11 * std::max(1.0, std::abs(prev.values[v]))) {
        out.monotone = false;
        if (!out.monotonicity_violation) out.monotonicity_violation = static_cast<VertexId>(v);
      }
    }
  }

  if (n_balls >= 3) {
    // alpha = 0 on a non-subcritical family: root increments refuse to decay.
    std::vector<double> diffs;
    for (std::size_t i = 0; i + 1 < n_balls; ++i) {
      diffs.push_back(out.root_values[i + 1] - out.root_values[i]);
    }
    bool all_positive = true, non_decaying = true;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
      all_positive = all_positive && diffs[i] > 0.0;
      if (i + 1 < diffs.size()) non_decaying = non_decaying && diffs[i + 1] >= 0.9 * diffs[i];
    }
    if (all_positive && non_decaying && out.root_values.back() >= 2.0 * out.root_values.front()) {
      throw DivergentExhaustion("root values keep growing without decaying increments: " +
                                std::to_string(out.root_values.front()) + " -> " +
                                std::to_string(out.root_values.back()));
    }
  }

  // Convergence declared on the fixed reference ball: the smallest ball of
  // the schedule, shared by every approximant.
  if (n_balls >= 2) {
    const auto& a = out.approximants[n_balls - 2];
    const auto& b = out.approximants[n_balls - 1];
    const std::size_t reference = out.approximants.front().size();
    double worst = 0.0;
    for (std::size_t v = 0; v < std::min(reference, a.size()); ++v) {
      worst = std::max(worst, std::abs(b.values[v] - a.values[v]));
    }
    out.converged = worst < config.convergence_tol;
  }

  out.limit = out.approximants.back();
  if (n_balls >= 3) {
    const auto& a0 = out.approximants[n_balls - 3];
    const auto& a1 = out.approximants[n_balls - 2];
    const auto& a2 = out.approximants[n_balls - 1];
    for (std::size_t v = 0; v < a0.size(); ++v) {
      const double d1 = a1.values[v] - a0.values[v];
      const double d2 = a2.values[v] - a1.values[v];
      if (d1 != 0.0 && d2 != 0.0 && (d1 > 0.0) == (d2 > 0.0) && std::abs(d2) < 0.98 * std::abs(d1)) {
        const double rho = d2 / d1;
        out.limit.values[v] = a2.values[v] + d2 * rho / (1.0 - rho);
        out.extrapolated = true;
      }
    }
  }
  return out;
}

}  // namespace

ExhaustionResult green_function(const std::vector<WeightedGraph>& balls, double p, double alpha,
                                const ExhaustionConfig& config) {
  if (balls.empty()) throw PreconditionError("exhaustion needs at least one ball");
  if (alpha < 0.0) throw PreconditionError("alpha must be >= 0");

  std::vector<int> radii;
  std::vector<VertexFunction> approximants;
  for (std::size_t i = 0; i < balls.size(); ++i) {
    const WeightedGraph& ball = balls[i];
    if (!ball.has_boundary()) {
      throw PreconditionError("exhaustion balls need a marked boundary");
    }
    if (i > 0 && (ball.n() <= balls[i - 1].n() || ball.root() != balls[i - 1].root())) {
      throw PreconditionError("exhaustion balls must be nested with a shared root");
    }
    auto graph = std::make_shared<WeightedGraph>(ball);
    const SchrodingerOperator op =
        SchrodingerOperator::with_constant_potential(graph, p, alpha);
    VertexFunction source(ball.n(), 0.0);
    source[ball.root()] = 1.0;
    VertexFunction u =
        relaxation_solve(op, VertexFunction(ball.n(), 0.0), source, config.solve, nullptr);

    if (std::abs(u[ball.root()]) > config.value_cap) {
      throw DivergentExhaustion("root value " + std::to_string(u[ball.root()]) +
                                " exceeds the cap " + std::to_string(config.value_cap));
    }
    radii.push_back(ball.max_depth());
    approximants.push_back(std::move(u));
  }
  return assemble_exhaustion(std::move(radii), std::move(approximants), config);
}

SphericalFunction radial_green(const ModelGraphSpec& spec, double p, double alpha, int R) {
  if (!(p > 1.0)) throw InvalidOrder("p must be > 1");
  if (alpha < 0.0) throw PreconditionError("alpha must be >= 0");
  if (R < 1 || R > spec.R()) throw RadiusOutOfRange("radius outside the spec range");
  const double mo = spec.root_measure();
  const double inv_pm1 = 1.0 / (p - 1.0);

  std::vector<double> db(static_cast<std::size_t>(R));
  std::vector<double> sphere_mass(static_cast<std::size_t>(R) + 1);
  for (int k = 0; k < R; ++k) db[static_cast<std::size_t>(k)] = boundary_weight(spec, k);
  for (int k = 0; k <= R; ++k) sphere_mass[static_cast<std::size_t>(k)] = spec.sphere_total_measure(k);

  if (alpha == 0.0) {
    // fluxes telescope to m(o): increments are the closed-form terms
    SphericalFunction g;
    g.values.assign(static_cast<std::size_t>(R) + 1, 0.0);
    for (int r = R - 1; r >= 0; --r) {
      g.values[static_cast<std::size_t>(r)] =
          g.values[static_cast<std::size_t>(r) + 1] +
          std::pow(mo / db[static_cast<std::size_t>(r)], inv_pm1);
    }
    return g;
  }

  // Zero-boundary BVP by inward shooting on the boundary increment
  // t = G(R-1): recurse from the boundary toward the root and bisect t on the
  // sign of the root equation. The mode that grows outward decays inward, so
  // the trajectory keeps full relative precision at every radius (outward
  // shooting and plain relaxation both lose the deep tail).
  std::vector<double> g(static_cast<std::size_t>(R) + 1, 0.0);
  const auto root_residual = [&](double t) {
    g.assign(static_cast<std::size_t>(R) + 1, 0.0);
    g[static_cast<std::size_t>(R) - 1] = t;
    for (int r = R - 1; r >= 1; --r) {
      const double w = -sphere_mass[static_cast<std::size_t>(r)] * alpha *
                           signed_power(g[static_cast<std::size_t>(r)], p - 1.0) -
                       db[static_cast<std::size_t>(r)] *
                           signed_power(g[static_cast<std::size_t>(r)] -
                                            g[static_cast<std::size_t>(r) + 1],
                                        p - 1.0);
      g[static_cast<std::size_t>(r) - 1] =
          g[static_cast<std::size_t>(r)] -
          signed_power(w / db[static_cast<std::size_t>(r) - 1], inv_pm1);
    }
    return (db[0] * signed_power(g[0] - g[1], p - 1.0)) / mo + alpha * signed_power(g[0], p - 1.0) -
           1.0;
  };

  double hi = 1.0;
  int guard = 0;
  while (root_residual(hi) < 0.0) {
    hi *= 4.0;
    if (++guard > 500) throw NoConvergence("radial green bracket expansion failed");
  }
  double lo = 0.0;  // residual(0) = -1
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (root_residual(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  root_residual(hi);  // rebuild the trajectory at the accepted endpoint
  return SphericalFunction{std::move(g)};
}

ExhaustionResult radial_green_exhaustion(const ModelGraphSpec& spec, double p, double alpha,
                                         const std::vector<int>& radii,
                                         const ExhaustionConfig& config) {
  if (radii.empty()) throw PreconditionError("exhaustion needs a radius schedule");
  std::vector<int> rs;
  std::vector<VertexFunction> approximants;
  for (const int R : radii) {
    const SphericalFunction g = radial_green(spec, p, alpha, R);
    if (std::abs(g[0]) > config.value_cap) {
      throw DivergentExhaustion("root value " + std::to_string(g[0]) + " exceeds the cap " +
                                std::to_string(config.value_cap));
    }
    rs.push_back(R);
    approximants.push_back(VertexFunction(g.values));
  }
  return assemble_exhaustion(std::move(rs), std::move(approximants), config);
}

double tree_beta_residual(double beta, double p, int d) {
  if (!(p > 1.0)) throw InvalidOrder("p must be > 1");
  if (d < 2) throw InvalidDegree("tree degree must be >= 2");
  const double dd = static_cast<double>(d);
  return std::pow(1.0 - beta, p - 1.0) -
         (std::pow(1.0 / beta - 1.0, p - 1.0) - 1.0) / dd;
}

double tree_beta(double p, int d) {
  if (!(p > 1.0)) throw InvalidOrder("p must be > 1");
  if (d < 2) throw InvalidDegree("tree degree must be >= 2");
  // f(0+) < 0 and f(1-) > 0 with a single crossing in between.
  double lo = 1e-12, hi = 1.0 - 1e-12;
  double flo = tree_beta_residual(lo, p, d);
  const double fhi = tree_beta_residual(hi, p, d);
  if (!(flo < 0.0) || !(fhi > 0.0)) {
    throw NoRootBracket("beta equation endpoints have unexpected signs");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = tree_beta_residual(mid, p, d);
    if (fm == 0.0) return mid;
    if (fm < 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= 4e-17 * mid) break;
  }
  return 0.5 * (lo + hi);
}

ShootResult spherical_shoot(const ModelGraphSpec& spec, double p, double alpha, int R,
                            double cap) {
  if (!(alpha > 0.0)) throw PreconditionError("shooting needs alpha > 0");
  if (R < 2 || R > spec.R()) throw RadiusOutOfRange("shooting radius outside the spec range");

  // Trajectory goes negative <=> G(0) too small. Raise the cap until the
  // upper endpoint stays positive.
  const auto goes_negative = [&](double g0) {
    return spherical_flux_solve(spec, p, alpha, g0).first_negative.has_value();
  };
  double hi = cap;
  int guard = 0;
  while (goes_negative(hi)) {
    hi *= 2.0;
    if (++guard > 60) throw NoRootBracket("no positive trajectory below cap " + std::to_string(hi));
  }
  double lo = std::min(1e-12, hi * 1e-12);
  if (!goes_negative(lo)) {
    // already positive at tiny G(0): degenerate, accept the cap side
    lo = hi;
  }
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (goes_negative(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  ShootResult out;
  out.g0 = hi;  // positive side
  const FluxSolveResult traj = spherical_flux_solve(spec, p, alpha, hi);
  out.g = traj.g;
  int usable = R;
  for (int r = 0; r + 1 <= R; ++r) {
    if (traj.g[r + 1] >= traj.g[r] || traj.g[r + 1] <= 0.0) {
      usable = r;
      break;
    }
  }
  out.usable_radius = std::max(0, usable - 2);
  return out;
}

ComparisonCheck weak_comparison_check(const SchrodingerOperator& op, const VertexFunction& u,
                                      const VertexFunction& v, const std::vector<VertexId>& region,
                                      double tol) {
  const WeightedGraph& g = op.g();
  if (u.size() != g.n() || v.size() != g.n()) {
    throw PreconditionError("functions not aligned with graph");
  }
  std::vector<std::uint8_t> in_region(g.n(), 0);
  for (const VertexId x : region) in_region[static_cast<std::size_t>(x)] = 1;

  const Classification cv = classify(op, v, region, tol);
  if (!cv.all_superharmonic()) {
    throw PreconditionViolated("v is not superharmonic on the region (min H[v] = " +
                               std::to_string(cv.min_value) + ")");
  }
  const Classification cu = classify(op, u, region, tol);
  if (!cu.all_subharmonic()) {
    throw PreconditionViolated("u is not subharmonic on the region (max H[u] = " +
                               std::to_string(cu.max_value) + ")");
  }
  // frontier: stored neighbors of the region outside it
  for (const VertexId x : region) {
    for (const auto& e : g.neighbors(x)) {
      if (!in_region[static_cast<std::size_t>(e.to)] && u[e.to] > v[e.to] + tol) {
        throw PreconditionViolated("u > v at frontier vertex " + std::to_string(e.to));
      }
    }
  }

  ComparisonCheck out;
  out.ok = true;
  for (const VertexId x : region) {
    if (u[x] > v[x] + tol) {
      out.ok = false;
      out.first_violation = x;
      break;
    }
  }
  return out;
}

}  // namespace plandis
