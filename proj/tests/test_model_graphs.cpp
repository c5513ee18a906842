#include <doctest.h>

#include <cmath>
#include <random>

#include "plandis/model_graphs.hpp"
#include "plandis/operators.hpp"
#include "plandis/trend.hpp"

using namespace plandis;

namespace {

// geometric-series oracle for the d-regular tree green function
double tree_green0_oracle(double p, int d, int radius) {
  const double q = std::pow(static_cast<double>(d), -1.0 / (p - 1.0));
  // sum_{k >= r} d^{-(k+1)/(p-1)} = q^{r+1} / (1 - q)
  return std::pow(q, radius + 1) / (1.0 - q);
}

SphericalFunction random_radial(std::mt19937_64& rng, int R) {
  std::uniform_real_distribution<double> v(-1.0, 1.0);
  SphericalFunction f;
  for (int r = 0; r <= R; ++r) f.values.push_back(v(rng));
  return f;
}

}  // namespace

TEST_CASE("spec constructors and validation") {
  SUBCASE("regular tree") {
    const ModelGraphSpec spec = ModelGraphSpec::regular_tree(2, 3);
    CHECK(spec.sphere_sizes == std::vector<std::int64_t>{1, 2, 4, 8});
    CHECK(spec.R() == 3);
    CHECK_THROWS_AS(ModelGraphSpec::regular_tree(1, 3), InvalidDegree);
  }
  SUBCASE("anti-tree sphere sizes follow ceil(r^gamma)") {
    const ModelGraphSpec spec = ModelGraphSpec::anti_tree(1.0, 3);
    CHECK(spec.sphere_sizes == std::vector<std::int64_t>{1, 1, 1, 2});
    const ModelGraphSpec half = ModelGraphSpec::anti_tree(1.5, 5);
    // ceil(r^1.5) for r = 1..4: 1, 3, 6, 8
    CHECK(half.sphere_sizes == std::vector<std::int64_t>{1, 1, 1, 3, 6, 8});
  }
  SUBCASE("root sphere must be a singleton") {
    CHECK_THROWS_AS(ModelGraphSpec::custom({2, 2}, {1.0}, {1.0, 1.0}), InvalidSpec);
  }
  SUBCASE("tree wiring needs divisible sphere sizes") {
    CHECK_THROWS_AS(ModelGraphSpec::custom({1, 2, 3}, {1.0, 1.0}, {1.0, 1.0, 1.0}, Wiring::Tree),
                    InvalidSpec);
  }
}

TEST_CASE("realize") {
  SUBCASE("binary tree ball") {
    const WeightedGraph g = realize(ModelGraphSpec::regular_tree(2, 3));
    CHECK(g.n() == 15);
    const SymmetryCheck sym = model_symmetry_check(g);
    CHECK(sym.max_deviation == 0.0);
    for (int r = 1; r < 3; ++r) {
      CHECK(sym.k_plus[static_cast<std::size_t>(r)] == doctest::Approx(2.0));
      CHECK(sym.k_minus[static_cast<std::size_t>(r)] == doctest::Approx(1.0));
    }
    CHECK(sym.k_minus[0] == doctest::Approx(0.0));
  }
  SUBCASE("anti-tree is complete bipartite between spheres") {
    const WeightedGraph g = realize(ModelGraphSpec::anti_tree(1.0, 3));
    CHECK(g.n() == 5);
    // last sphere has 2 vertices, each wired to the single vertex of S_2
    CHECK(g.sphere(3).size() == 2);
    for (const VertexId x : g.sphere(3)) {
      CHECK(g.neighbors(x).size() == 1);
    }
    const SymmetryCheck sym = model_symmetry_check(g);
    CHECK(sym.max_deviation == 0.0);
  }
  SUBCASE("anti-tree gamma=2 realization symmetry with nonuniform measures") {
    ModelGraphSpec spec = ModelGraphSpec::anti_tree(2.0, 5);
    for (std::size_t r = 0; r < spec.sphere_measures.size(); ++r) {
      spec.sphere_measures[r] = 1.0 + 0.25 * static_cast<double>(r);
    }
    const WeightedGraph g = realize(spec);
    CHECK(model_symmetry_check(g).max_deviation <= 1e-12);
  }
}

TEST_CASE("boundary weights") {
  SUBCASE("tree: dB_k = d^{k+1}") {
    for (const int d : {2, 3}) {
      const ModelGraphSpec spec = ModelGraphSpec::regular_tree(d, 6);
      for (int k = 0; k < 6; ++k) {
        CHECK(boundary_weight(spec, k) ==
              doctest::Approx(std::pow(static_cast<double>(d), k + 1)));
      }
    }
  }
  SUBCASE("anti-tree: dB_k = #S_k #S_{k+1}") {
    const ModelGraphSpec spec = ModelGraphSpec::anti_tree(2.0, 6);
    for (int k = 0; k < 6; ++k) {
      const double expected = static_cast<double>(spec.sphere_sizes[static_cast<std::size_t>(k)] *
                                                  spec.sphere_sizes[static_cast<std::size_t>(k) + 1]);
      CHECK(boundary_weight(spec, k) == doctest::Approx(expected));
    }
  }
  SUBCASE("path: dB_k = 1") {
    const ModelGraphSpec spec = ModelGraphSpec::path(5);
    for (int k = 0; k < 5; ++k) CHECK(boundary_weight(spec, k) == doctest::Approx(1.0));
  }
  SUBCASE("out of range") {
    const ModelGraphSpec spec = ModelGraphSpec::path(5);
    CHECK_THROWS_AS(boundary_weight(spec, 5), RadiusOutOfRange);
    CHECK_THROWS_AS(boundary_weight(spec, -1), RadiusOutOfRange);
  }
  SUBCASE("realized graph matches the spec weights") {
    const ModelGraphSpec spec = ModelGraphSpec::anti_tree(1.5, 5);
    const WeightedGraph g = realize(spec);
    for (int k = 0; k < 5; ++k) {
      double total = 0.0;
      for (const VertexId x : g.sphere(k)) {
        for (const auto& e : g.neighbors(x)) {
          if (g.depth(e.to) == k + 1) total += e.b;
        }
      }
      CHECK(total == doctest::Approx(boundary_weight(spec, k)));
    }
  }
}

TEST_CASE("flux identity on balls") {
  // sum_{x in B_k} m(x) Delta_p f(x) = dB_k * sp(f(k) - f(k+1), p-1)
  // for spherically symmetric f: interior edge contributions cancel
  std::mt19937_64 rng(31337);
  const std::vector<ModelGraphSpec> specs = {
      ModelGraphSpec::regular_tree(2, 5), ModelGraphSpec::regular_tree(3, 4),
      ModelGraphSpec::anti_tree(1.0, 5), ModelGraphSpec::anti_tree(2.0, 5),
      ModelGraphSpec::custom({1, 2, 4, 4, 2}, {0.5, 1.0, 2.0, 0.25},
                             {1.0, 0.5, 2.0, 1.0, 3.0})};
  for (const auto& spec : specs) {
    const WeightedGraph g = realize(spec);
    for (const double p : {1.5, 2.0, 3.0}) {
      const SphericalFunction f = random_radial(rng, spec.R());
      const VertexFunction fv = lift(g, f);
      for (int k = 0; k + 1 <= spec.R(); ++k) {
        double lhs = 0.0;
        for (VertexId x = 0; static_cast<std::size_t>(x) < g.n(); ++x) {
          if (g.depth(x) <= k) lhs += g.measure(x) * apply_p_laplacian(g, p, fv, x);
        }
        const double rhs = boundary_weight(spec, k) * signed_power(f[k] - f[k + 1], p - 1.0);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("quotient graph agrees with the realized graph on radial functions") {
  std::mt19937_64 rng(555);
  for (const auto& spec :
       {ModelGraphSpec::regular_tree(3, 4), ModelGraphSpec::anti_tree(1.5, 5)}) {
    const WeightedGraph full = realize(spec);
    const WeightedGraph quot = quotient_graph(spec);
    CHECK(quot.n() == static_cast<std::size_t>(spec.R()) + 1);
    for (const double p : {1.4, 2.0, 2.6}) {
      const SphericalFunction f = random_radial(rng, spec.R());
      const VertexFunction f_full = lift(full, f);
      const VertexFunction f_quot(f.values);
      for (int r = 0; r < spec.R(); ++r) {
        const VertexId x_full = full.sphere(r).front();
        CHECK(apply_p_laplacian(full, p, f_full, x_full) ==
              doctest::Approx(apply_p_laplacian(quot, p, f_quot, r)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("green function closed form") {
  SUBCASE("d = 2, p = 2: G_0(r) = 2^{-r}") {
    const ModelGraphSpec spec = ModelGraphSpec::regular_tree(2, 12);
    for (int r = 0; r <= 10; ++r) {
      CHECK(green0_closed_form(spec, 2.0, r).value == doctest::Approx(std::pow(2.0, -r)));
    }
  }
  SUBCASE("general (p, d): C_{p,d} d^{-r/(p-1)} to relative 1e-12") {
    for (const double p : {1.5, 2.0, 3.0}) {
      for (const int d : {2, 3}) {
        const ModelGraphSpec spec = ModelGraphSpec::regular_tree(d, 14);
        const double q = std::pow(static_cast<double>(d), -1.0 / (p - 1.0));
        const double c_pd = q / (1.0 - q);
        for (int r = 0; r <= 10; ++r) {
          const double expected = c_pd * std::pow(static_cast<double>(d), -r / (p - 1.0));
          const double got = green0_closed_form(spec, p, r).value;
          CHECK(got == doctest::Approx(expected).epsilon(1e-12));
          CHECK(got == doctest::Approx(tree_green0_oracle(p, d, r)).epsilon(1e-12));
        }
      }
    }
  }
  SUBCASE("strictly decreasing and positive when subcritical") {
    const ModelGraphSpec spec = ModelGraphSpec::anti_tree(2.0, 30);
    const SphericalFunction g0 = green0_profile(spec, 2.5);
    for (int r = 0; r < 30; ++r) {
      CHECK(g0[r] > g0[r + 1]);
      CHECK(g0[r + 1] > 0.0);
    }
  }
  SUBCASE("profile matches per-radius evaluation") {
    const ModelGraphSpec spec = ModelGraphSpec::anti_tree(1.5, 20);
    const SphericalFunction g0 = green0_profile(spec, 2.0);
    for (int r = 0; r <= 20; r += 5) {
      CHECK(g0[r] == doctest::Approx(green0_closed_form(spec, 2.0, r).value).epsilon(1e-13));
    }
  }
  SUBCASE("divergent series raises") {
    const ModelGraphSpec spec = ModelGraphSpec::path(10);
    CHECK_THROWS_AS(green0_closed_form(spec, 2.0, 0), SeriesDivergent);
  }
  SUBCASE("anti-tree p = 2, gamma = 1 log-log slope near -1") {
    const ModelGraphSpec spec = ModelGraphSpec::anti_tree(1.0, 200);
    std::vector<double> logr, logg;
    for (int r = 10; r <= 40; ++r) {
      logr.push_back(std::log(static_cast<double>(r)));
      logg.push_back(std::log(green0_closed_form(spec, 2.0, r).value));
    }
    const LinearFit fit = linear_fit(logr, logg);
    // G_0(r) = 1/(r-1) exactly here, so the finite-window slope sits a bit
    // below -1
    CHECK(fit.slope == doctest::Approx(-1.0).epsilon(0.06));
    CHECK(fit.r2 > 0.999);
  }
}

TEST_CASE("subcriticality") {
  SUBCASE("trees are subcritical for every p") {
    for (const double p : {1.2, 2.0, 4.0}) {
      CHECK(is_subcritical(ModelGraphSpec::regular_tree(2, 6), p));
      CHECK(is_subcritical(ModelGraphSpec::regular_tree(5, 6), p));
    }
  }
  SUBCASE("anti-trees: subcritical iff gamma > (p-1)/2") {
    for (const double p : {1.5, 2.0, 3.0}) {
      for (const double gamma : {0.2, 0.4, 0.6, 1.0, 1.5, 2.0}) {
        if (std::abs(2.0 * gamma - (p - 1.0)) < 0.05) continue;  // threshold itself
        const bool expected = gamma > (p - 1.0) / 2.0;
        CHECK(is_subcritical(ModelGraphSpec::anti_tree(gamma, 8), p) == expected);
      }
    }
  }
  SUBCASE("paths are never subcritical") {
    for (const double p : {1.2, 2.0, 4.0}) {
      CHECK_FALSE(is_subcritical(ModelGraphSpec::path(8), p));
    }
  }
  SUBCASE("heuristic on undeclared data") {
    // geometric growth data
    std::vector<std::int64_t> sizes{1, 2, 4, 8, 16, 32, 64, 128, 256, 512};
    std::vector<double> weights(9, 1.0), measures(10, 1.0);
    const ModelGraphSpec geom =
        ModelGraphSpec::custom(sizes, weights, measures, Wiring::Tree, {});
    const SubcriticalityReport rep = subcriticality(geom, 2.0);
    CHECK(rep.subcritical);
    CHECK(rep.basis == SubcriticalityBasis::Heuristic);
    CHECK(rep.effective_law.kind == GrowthLaw::Geometric);

    // flat data: divergent for all p
    const ModelGraphSpec flat = ModelGraphSpec::custom(
        std::vector<std::int64_t>(12, 1), std::vector<double>(11, 1.0),
        std::vector<double>(12, 1.0), Wiring::Tree, {});
    CHECK_FALSE(subcriticality(flat, 2.0).subcritical);

    // power-law data right at the threshold: inconclusive
    std::vector<std::int64_t> crit_sizes;
    std::vector<double> crit_weights, crit_measures;
    for (int r = 0; r <= 12; ++r) {
      crit_sizes.push_back(std::max<std::int64_t>(1, r));  // dB ~ r^2, sigma = 1 at p = 3
      crit_measures.push_back(1.0);
      if (r < 12) crit_weights.push_back(1.0);
    }
    const ModelGraphSpec critical =
        ModelGraphSpec::custom(crit_sizes, crit_weights, crit_measures,
                               Wiring::CompleteBipartite, {});
    CHECK_THROWS_AS(subcriticality(critical, 3.0), UnknownAsymptotics);
  }
}

TEST_CASE("spherical flux solve") {
  SUBCASE("alpha = 0 telescopes to the closed form") {
    for (const double p : {1.5, 2.0, 3.0}) {
      const ModelGraphSpec spec = ModelGraphSpec::regular_tree(2, 10);
      const double g0 = green0_closed_form(spec, p, 0).value;
      const FluxSolveResult res = spherical_flux_solve(spec, p, 0.0, g0);
      for (int r = 0; r <= 9; ++r) {
        CHECK(res.g[r] ==
              doctest::Approx(green0_closed_form(spec, p, r).value).epsilon(1e-12));
      }
      CHECK_FALSE(res.first_negative.has_value());
    }
  }
  SUBCASE("too-small initial value goes negative at a finite radius") {
    const ModelGraphSpec spec = ModelGraphSpec::regular_tree(2, 10);
    const double g0 = green0_closed_form(spec, 2.0, 0).value;
    const FluxSolveResult res = spherical_flux_solve(spec, 2.0, 0.0, 0.5 * g0);
    CHECK(res.first_negative.has_value());
  }
  SUBCASE("nonpositive initial value is rejected") {
    const ModelGraphSpec spec = ModelGraphSpec::regular_tree(2, 5);
    CHECK_THROWS_AS(spherical_flux_solve(spec, 2.0, 0.0, 0.0), NonpositiveInitial);
    CHECK_THROWS_AS(spherical_flux_solve(spec, 2.0, 0.0, -1.0), NonpositiveInitial);
  }
}

TEST_CASE("spec JSON round trip") {
  const std::string tree_doc = R"({"kind": "tree", "d": 3, "R": 5})";
  const ModelGraphSpec tree = model_spec_from_json_string(tree_doc);
  CHECK(tree.kind == "tree");
  CHECK(tree.sphere_sizes[1] == 3);

  const std::string anti_doc = R"({"kind": "antitree", "gamma": 1.5, "R": 4})";
  const ModelGraphSpec anti = model_spec_from_json_string(anti_doc);
  CHECK(anti.kind == "antitree");

  const ModelGraphSpec again =
      model_spec_from_json_string(model_spec_to_json_string(anti));
  CHECK(again.sphere_sizes == anti.sphere_sizes);
  CHECK(again.edge_weights == anti.edge_weights);

  CHECK_THROWS_AS(model_spec_from_json_string("{\"kind\": \"tree\"}"), ParseError);
  CHECK_THROWS_AS(model_spec_from_json_string("{\"kind\": \"nope\", \"R\": 3}"), ParseError);
}

TEST_CASE("lift and restrict") {
  const ModelGraphSpec spec = ModelGraphSpec::regular_tree(2, 4);
  const WeightedGraph g = realize(spec);
  std::mt19937_64 rng(8);
  const SphericalFunction f = random_radial(rng, 4);
  const VertexFunction lifted = lift(g, f);
  const SphericalFunction back = restrict_spherical(g, lifted);
  CHECK(back.values == f.values);

  VertexFunction broken = lifted;
  broken[3] += 0.5;  // same sphere as vertex 4
  CHECK_THROWS_AS(restrict_spherical(g, broken), PreconditionError);
}
