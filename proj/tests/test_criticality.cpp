#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "plandis/criticality.hpp"
#include "plandis/model_graphs.hpp"
#include "plandis/operators.hpp"
#include "plandis/solvers.hpp"

using namespace plandis;

namespace {

struct TreePackage {
  GraphPtr quotient;
  SphericalFunction g0;
  HardyPackage hardy;
};

TreePackage tree_hardy(int d, double p, int R) {
  const ModelGraphSpec spec = ModelGraphSpec::regular_tree(d, R);
  TreePackage out;
  out.quotient = std::make_shared<WeightedGraph>(quotient_graph(spec));
  out.g0 = green0_profile(spec, p);
  out.hardy = hardy_weight(out.quotient, p, lift(*out.quotient, out.g0));
  return out;
}

}  // namespace

TEST_CASE("hardy weight package") {
  SUBCASE("tree: Phi = C^{(p-1)/p} d^{-r/p} and the residual is definitional") {
    for (const double p : {1.5, 2.0, 3.0}) {
      for (const int d : {2, 3}) {
        const TreePackage pkg = tree_hardy(d, p, 12);
        const double q = std::pow(static_cast<double>(d), -1.0 / (p - 1.0));
        const double c_pd = q / (1.0 - q);
        const double a = std::pow(c_pd, (p - 1.0) / p);
        for (int r = 0; r <= 12; ++r) {
          CHECK(pkg.hardy.phi[r] ==
                doctest::Approx(a * std::pow(static_cast<double>(d), -r / p)).epsilon(1e-11));
        }
        CHECK(pkg.hardy.max_residual <= 1e-12);
      }
    }
  }
  SUBCASE("p = 2, d = 2: Phi(r) = 2^{-r/2}") {
    const TreePackage pkg = tree_hardy(2, 2.0, 10);
    for (int r = 0; r <= 10; ++r) {
      CHECK(pkg.hardy.phi[r] == doctest::Approx(std::pow(2.0, -0.5 * r)).epsilon(1e-12));
    }
  }
  SUBCASE("classify(Delta_p - W_op, Phi) is harmonic on the interior") {
    for (const double p : {1.5, 2.0, 3.0}) {
      const TreePackage pkg = tree_hardy(2, p, 10);
      const SchrodingerOperator hardy_op = pkg.hardy.hardy_operator();
      const Classification cls =
          classify(hardy_op, pkg.hardy.phi, pkg.quotient->decomposition().interior, 1e-12);
      CHECK(cls.aggregate == HarmonicTag::Harmonic);
    }
  }
  SUBCASE("the optimal weight is positive") {
    const TreePackage pkg = tree_hardy(3, 2.5, 10);
    for (const VertexId x : pkg.quotient->decomposition().interior) {
      CHECK(pkg.hardy.w_op[x] > 0.0);
    }
  }
  SUBCASE("nonpositive green function is rejected") {
    const auto g = std::make_shared<WeightedGraph>(
        WeightedGraph::build({{0, 1, 1.0}}, {1.0, 1.0}, 0));
    VertexFunction g0(2, 1.0);
    g0[1] = 0.0;
    CHECK_THROWS_AS(hardy_weight(g, 2.0, g0), NonpositiveGreen);
  }
}

TEST_CASE("edge-gradient bracket of Phi on model graphs") {
  // mean value theorem for t -> t^{1-1/p} between G_0(x) and G_0(y), edge
  // x ~ y with |x| > |y|:
  //   (p-1)/p G_0(y)^{-1/p} dG <= |grad Phi| <= (p-1)/p G_0(x)^{-1/p} dG,
  // dG = m(o)^{1/(p-1)} dB_{|y|}^{-1/(p-1)}
  for (const double p : {1.5, 2.0, 3.0}) {
    const std::vector<ModelGraphSpec> specs = {ModelGraphSpec::regular_tree(2, 12),
                                               ModelGraphSpec::regular_tree(3, 10),
                                               ModelGraphSpec::anti_tree(2.0, 12)};
    for (const auto& spec : specs) {
      if (!is_subcritical(spec, p)) continue;
      const SphericalFunction g0 = green0_profile(spec, p);
      const double mo = spec.root_measure();
      const double phi_exp = (p - 1.0) / p;
      for (int r = 1; r <= spec.R(); ++r) {
        const double phi_hi = std::pow(g0[r - 1], phi_exp);
        const double phi_lo = std::pow(g0[r], phi_exp);
        const double grad = phi_hi - phi_lo;
        const double dg = std::pow(mo / boundary_weight(spec, r - 1), 1.0 / (p - 1.0));
        const double factor = (p - 1.0) / p;
        const double lower = factor * std::pow(g0[r - 1], -1.0 / p) * dg;
        const double upper = factor * std::pow(g0[r], -1.0 / p) * dg;
        CHECK(grad >= lower - 1e-10);
        CHECK(grad <= upper + 1e-10);
      }
    }
  }
}

TEST_CASE("tree gradient of Phi is a fixed multiple of d^{-r/p}") {
  for (const double p : {1.5, 2.0, 3.0}) {
    for (const int d : {2, 3}) {
      const TreePackage pkg = tree_hardy(d, p, 11);
      double ratio_min = 1e300, ratio_max = 0.0;
      for (int r = 1; r <= 10; ++r) {
        const double grad = std::abs(pkg.hardy.phi[r - 1] - pkg.hardy.phi[r]);
        const double ratio = grad * std::pow(static_cast<double>(d), r / p);
        ratio_min = std::min(ratio_min, ratio);
        ratio_max = std::max(ratio_max, ratio);
      }
      CHECK(ratio_max / ratio_min - 1.0 <= 1e-9);
    }
  }
}

TEST_CASE("nonnegativity probe") {
  SUBCASE("hardy operator stays nonnegative") {
    const TreePackage pkg = tree_hardy(2, 2.0, 9);
    // support inside B_{R-3}
    std::vector<VertexId> support;
    for (VertexId x = 0; static_cast<std::size_t>(x) < pkg.quotient->n(); ++x) {
      if (pkg.quotient->depth(x) <= 6) support.push_back(x);
    }
    const ProbeResult probe =
        nonnegativity_probe(pkg.hardy.hardy_operator(), 200, 20250214, support);
    CHECK(probe.min_q >= -1e-8);
  }
  SUBCASE("crafted negative potential is certified by an indicator") {
    // Q(1_x) = wdeg(x) + m(x) V(x) < 0 once m(x) is large
    const auto g = std::make_shared<WeightedGraph>(
        WeightedGraph::build({{0, 1, 1.0}, {1, 2, 1.0}}, {1.0, 5.0, 1.0}, 0));
    const SchrodingerOperator op = SchrodingerOperator::with_constant_potential(g, 2.0, -1.0);
    const ProbeResult probe = nonnegativity_probe(op, 50, 7);
    CHECK(probe.min_q < 0.0);
    // the indicator at the heavy vertex is negative on its own:
    // Q(1_1) = wdeg(1) + m(1) V(1) = 2 - 5
    CHECK(energy(op, VertexFunction::indicator(3, 1)) == doctest::Approx(-3.0));
  }
  SUBCASE("zero potential keeps the probe nonnegative") {
    const ModelGraphSpec spec = ModelGraphSpec::anti_tree(1.5, 6);
    const auto g = std::make_shared<WeightedGraph>(realize(spec));
    const SchrodingerOperator op = SchrodingerOperator::p_laplacian(g, 2.5);
    const ProbeResult probe = nonnegativity_probe(op, 100, 99);
    CHECK(probe.min_q >= 0.0);
  }
  SUBCASE("fixed seed reproduces the same minimum") {
    const TreePackage pkg = tree_hardy(2, 1.5, 8);
    const ProbeResult a = nonnegativity_probe(pkg.hardy.hardy_operator(), 64, 1234);
    const ProbeResult b = nonnegativity_probe(pkg.hardy.hardy_operator(), 64, 1234);
    CHECK(a.min_q == b.min_q);
    CHECK(a.min_index == b.min_index);
  }
}

TEST_CASE("null sequence experiment") {
  SUBCASE("critical hardy operator: energies decay along the cutoffs") {
    for (const double p : {1.5, 2.0, 3.0}) {
      const ModelGraphSpec spec = ModelGraphSpec::regular_tree(2, 40);
      auto quot = std::make_shared<WeightedGraph>(quotient_graph(spec));
      const SphericalFunction g0 = green0_profile(spec, p);
      const HardyPackage hardy = hardy_weight(quot, p, lift(*quot, g0));
      const NullSequenceResult res =
          null_sequence_experiment(hardy.hardy_operator(), hardy.phi, {4, 8, 12, 16, 20});
      CHECK(res.phi_at_root == hardy.phi[0]);
      for (std::size_t i = 0; i + 1 < res.q_values.size(); ++i) {
        CHECK(res.q_values[i + 1] <= res.q_values[i] + 1e-12);
      }
      CHECK(res.q_values.back() < res.q_values.front());
    }
  }
  SUBCASE("subcritical p-laplacian: energies level off at a positive floor") {
    const ModelGraphSpec spec = ModelGraphSpec::regular_tree(2, 40);
    auto quot = std::make_shared<WeightedGraph>(quotient_graph(spec));
    const SphericalFunction g0 = green0_profile(spec, 2.0);
    const HardyPackage hardy = hardy_weight(quot, 2.0, lift(*quot, g0));
    const SchrodingerOperator plain = SchrodingerOperator::p_laplacian(quot, 2.0);
    const NullSequenceResult res =
        null_sequence_experiment(plain, hardy.phi, {4, 8, 12, 16, 20});
    for (const double q : res.q_values) {
      CHECK(q >= 0.5 * res.q_values.front());
    }
    CHECK(res.trend.cls != TrendClass::DecayingToZero);
  }
  SUBCASE("cutoff touching the boundary raises") {
    const ModelGraphSpec spec = ModelGraphSpec::regular_tree(2, 10);
    auto quot = std::make_shared<WeightedGraph>(quotient_graph(spec));
    const SphericalFunction g0 = green0_profile(spec, 2.0);
    const HardyPackage hardy = hardy_weight(quot, 2.0, lift(*quot, g0));
    CHECK_THROWS_AS(null_sequence_experiment(hardy.hardy_operator(), hardy.phi, {6}),
                    SupportTouchesBoundary);
  }
}

TEST_CASE("liouville comparison conditions") {
  SUBCASE("u = v on the same graph: both families are 1, satisfied with C = 1") {
    const TreePackage pkg = tree_hardy(2, 2.5, 10);
    const SchrodingerOperator href = pkg.hardy.hardy_operator();
    const SchrodingerOperator h = SchrodingerOperator::with_constant_potential(
        pkg.quotient, 2.5, 0.0);
    ComparisonOptions opts;
    opts.check_subharmonic = false;  // u = Phi is harmonic for the reference, not for h
    const ComparisonReport rep = liouville_conditions(
        h, href, pkg.hardy.phi, pkg.hardy.phi, CriticalityEvidence::ConfirmedByConstruction,
        opts);
    CHECK(rep.sup1 == doctest::Approx(1.0));
    CHECK(rep.sup2 == doctest::Approx(1.0));
    CHECK(rep.ratios_bounded);
  }

  SUBCASE("recurrent reference: boundedness of u decides") {
    // v = 1 on a path quotient, p <= 2; ratio1 = u+ x u+, ratio2 trivial
    const ModelGraphSpec spec = ModelGraphSpec::path(24);
    auto quot = std::make_shared<WeightedGraph>(quotient_graph(spec));
    const SchrodingerOperator h = SchrodingerOperator::with_constant_potential(quot, 2.0, 0.0);
    const SchrodingerOperator href = SchrodingerOperator::p_laplacian(quot, 2.0);
    const VertexFunction ones(quot->n(), 1.0);

    VertexFunction bounded(quot->n());
    for (VertexId r = 0; static_cast<std::size_t>(r) < quot->n(); ++r) {
      bounded[r] = 1.0 / (1.0 + r);
    }
    ComparisonOptions opts;
    opts.check_subharmonic = false;
    const ComparisonReport ok =
        liouville_conditions(h, href, bounded, ones, CriticalityEvidence::Probed, opts);
    CHECK(ok.ratios_bounded);

    VertexFunction unbounded(quot->n());
    for (VertexId r = 0; static_cast<std::size_t>(r) < quot->n(); ++r) {
      unbounded[r] = std::exp(0.4 * r);
    }
    const ComparisonReport bad =
        liouville_conditions(h, href, unbounded, ones, CriticalityEvidence::Probed, opts);
    CHECK_FALSE(bad.ratios_bounded);
    CHECK(bad.trend1.cls == TrendClass::Growing);
  }

  SUBCASE("tree: u = d^{-2r} against the hardy ground state") {
    for (const double p : {2.0, 3.0}) {
      const int d = 3;
      const TreePackage pkg = tree_hardy(d, p, 16);
      const SchrodingerOperator h =
          SchrodingerOperator::with_constant_potential(pkg.quotient, p, 1.0);
      VertexFunction u(pkg.quotient->n());
      for (VertexId r = 0; static_cast<std::size_t>(r) < pkg.quotient->n(); ++r) {
        u[r] = std::pow(static_cast<double>(d), -2.0 * r);
      }
      const ComparisonReport rep =
          liouville_conditions(h, pkg.hardy.hardy_operator(), u, pkg.hardy.phi,
                               CriticalityEvidence::ConfirmedByConstruction);
      CHECK(rep.positive_part_nontrivial);
      CHECK(rep.subharmonic_ok);
      CHECK(rep.ratios_bounded);
      CHECK(rep.satisfied);
      CHECK(rep.trend1.cls == TrendClass::DecayingToZero);
    }
  }

  SUBCASE("scaling: u -> t u multiplies ratio1 by t^2 and ratio2 by t^{p-2}") {
    const double p = 3.0;
    const TreePackage pkg = tree_hardy(2, p, 12);
    const SchrodingerOperator h =
        SchrodingerOperator::with_constant_potential(pkg.quotient, p, 1.0);
    VertexFunction u(pkg.quotient->n());
    for (VertexId r = 0; static_cast<std::size_t>(r) < pkg.quotient->n(); ++r) {
      u[r] = std::pow(0.25, r);
    }
    ComparisonOptions opts;
    opts.check_subharmonic = false;
    const ComparisonReport base = liouville_conditions(
        h, pkg.hardy.hardy_operator(), u, pkg.hardy.phi, CriticalityEvidence::Probed, opts);
    const double t = 7.0;
    VertexFunction tu(u.values);
    for (auto& v : tu.values) v *= t;
    const ComparisonReport scaled = liouville_conditions(
        h, pkg.hardy.hardy_operator(), tu, pkg.hardy.phi, CriticalityEvidence::Probed, opts);
    CHECK(scaled.sup1 == doctest::Approx(t * t * base.sup1).epsilon(1e-10));
    CHECK(scaled.sup2 == doctest::Approx(std::pow(t, p - 2.0) * base.sup2).epsilon(1e-10));
    CHECK(base.ratios_bounded == scaled.ratios_bounded);
  }

  SUBCASE("p < 2 edge conventions") {
    // grad v = 0 on an edge makes the right side infinite: satisfied;
    // grad u+ = 0 with grad v != 0 is flagged as an infinite ratio
    const auto g = std::make_shared<WeightedGraph>(
        WeightedGraph::build({{0, 1, 1.0}, {1, 2, 1.0}}, {1.0, 1.0, 1.0}, 0));
    const SchrodingerOperator h = SchrodingerOperator::p_laplacian(g, 1.5);
    const SchrodingerOperator href = SchrodingerOperator::p_laplacian(g, 1.5);
    ComparisonOptions opts;
    opts.check_subharmonic = false;

    VertexFunction u(std::vector<double>{1.0, 1.0, 0.5});
    VertexFunction v(std::vector<double>{2.0, 1.0, 0.5});
    // edge (0,1): grad u+ = 0, grad v = 1 -> violation
    const ComparisonReport bad =
        liouville_conditions(h, href, u, v, CriticalityEvidence::Probed, opts);
    CHECK(bad.infinite_ratio2_edges == 1);
    CHECK_FALSE(bad.ratios_bounded);

    VertexFunction v2(std::vector<double>{1.0, 1.0, 0.5});
    // edge (0,1): grad v2 = 0 too -> satisfied
    const ComparisonReport good =
        liouville_conditions(h, href, u, v2, CriticalityEvidence::Probed, opts);
    CHECK(good.infinite_ratio2_edges == 0);
    CHECK(good.ratios_bounded);
  }

  SUBCASE("measure mismatch and nonpositive reference are rejected") {
    const auto a = std::make_shared<WeightedGraph>(
        WeightedGraph::build({{0, 1, 1.0}}, {1.0, 1.0}, 0));
    const auto b = std::make_shared<WeightedGraph>(
        WeightedGraph::build({{0, 1, 1.0}}, {1.0, 2.0}, 0));
    const SchrodingerOperator ha = SchrodingerOperator::p_laplacian(a, 2.0);
    const SchrodingerOperator hb = SchrodingerOperator::p_laplacian(b, 2.0);
    const VertexFunction ones(2, 1.0);
    CHECK_THROWS_AS(
        liouville_conditions(ha, hb, ones, ones, CriticalityEvidence::Probed),
        MeasureMismatch);
    VertexFunction vbad(2, 1.0);
    vbad[1] = 0.0;
    CHECK_THROWS_AS(
        liouville_conditions(ha, ha, ones, vbad, CriticalityEvidence::Probed),
        NonpositiveReference);
  }

  SUBCASE("edges missing from the reference graph are surfaced") {
    const auto a = std::make_shared<WeightedGraph>(
        WeightedGraph::build({{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}, {1, 1, 1}, 0));
    const auto b = std::make_shared<WeightedGraph>(
        WeightedGraph::build({{0, 1, 1.0}, {1, 2, 1.0}}, {1, 1, 1}, 0));
    const SchrodingerOperator ha = SchrodingerOperator::p_laplacian(a, 2.0);
    const SchrodingerOperator hb = SchrodingerOperator::p_laplacian(b, 2.0);
    VertexFunction u(std::vector<double>{1.0, 0.8, 0.6});
    const VertexFunction v(3, 1.0);
    ComparisonOptions opts;
    opts.check_subharmonic = false;
    const ComparisonReport rep =
        liouville_conditions(ha, hb, u, v, CriticalityEvidence::Probed, opts);
    CHECK(rep.infinite_ratio1_edges == 1);  // edge (0,2) has btilde = 0
    CHECK_FALSE(rep.ratios_bounded);
    CHECK(rep.note.find("infinite") != std::string::npos);
  }
}
