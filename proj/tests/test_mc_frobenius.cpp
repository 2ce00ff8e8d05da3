#include <gtest/gtest.h>

#include "support.hpp"

using namespace eqfrob;
using namespace testing_support;

namespace {

struct Solved {
  CartanModel model;
  DGBVAlgebra alg;
  std::vector<Element> classes;
  MCSolution sol;
};

Solved solve_builtin(const ModelFile& f, unsigned N) {
  CartanModel m = to_cartan_model(f);
  DGBVAlgebra alg = build_cartan(m);
  auto classes = equivariant_basis(m).classes;
  MCSolution sol = solve_mc_cartan(alg, m, classes, N);
  return {std::move(m), std::move(alg), std::move(classes), std::move(sol)};
}

const Solved& s2_order5() {
  static const Solved s = solve_builtin(builtin_s2(6), 5);
  return s;
}

SuperMonomial mono(std::initializer_list<unsigned> e) { return SuperMonomial(e); }

} // namespace

TEST(MC, SphereSolutionInClosedForm) {
  const auto& s = s2_order5();
  ASSERT_TRUE(s.sol.verified()) << s.sol.failure.value_or("") << s.sol.residual;
  const GroundPoly u = GroundPoly::variable(1, 0);
  const Element z = named(s.model, "z");
  EXPECT_EQ(s.sol.gamma.coefficient(mono({1, 0})), s.classes[0]);
  EXPECT_EQ(s.sol.gamma.coefficient(mono({0, 1})), named(s.model, "vol") - u * z);
  for (unsigned n = 2; n <= 5; ++n)
    EXPECT_EQ(s.sol.gamma.coefficient(mono({0, n})), -(u * z)) << "order " << n;
  EXPECT_EQ(s.sol.gamma.terms().size(), 6u);
}

TEST(MC, CertificatesCoverEveryOrder) {
  const auto& s = s2_order5();
  ASSERT_EQ(s.sol.certificates.size(), 4u);
  for (const auto& c : s.sol.certificates)
    EXPECT_TRUE(c.all(true)) << "order " << c.n;
}

TEST(MC, GenericSolverMatchesCartanSolver) {
  const auto& s = s2_order5();
  const MCSolution g = solve_mc_generic(s.alg, s.model.hodge, s.classes, 4);
  ASSERT_TRUE(g.verified()) << g.failure.value_or("") << g.residual;
  EXPECT_EQ(g.gamma, s.sol.gamma.truncated(4));
  EXPECT_FALSE(g.cartan);
}

TEST(MC, BSeriesReproducesTheHigherOrders) {
  const auto& s = s2_order5();
  ASSERT_TRUE(s.sol.b_series);
  EXPECT_EQ(apply_series(s.alg.bv, *s.sol.b_series), s.sol.gamma - s.sol.gamma.degree_part(1));
}

TEST(MC, TorusSolutionIsLinear) {
  const Solved s = solve_builtin(builtin_torus(), 5);
  ASSERT_TRUE(s.sol.verified());
  EXPECT_EQ(s.sol.gamma, s.sol.gamma.degree_part(1));
  EXPECT_EQ(s.sol.gamma.terms().size(), 4u);
}

TEST(MC, GradingCertificateRejectsMisplacedCoefficients) {
  const auto& s = s2_order5();
  ElementSeries bad = s.sol.gamma;
  bad.add_term(mono({0, 2}), named(s.model, "dz")); // odd coefficient on an even monomial
  EXPECT_FALSE(detail::coefficient_grading_ok(bad, s.classes));
  EXPECT_TRUE(detail::coefficient_grading_ok(s.sol.gamma, s.classes));
}

TEST(MC, RejectsNonHomogeneousClasses) {
  const auto& s = s2_order5();
  std::vector<Element> mixed{s.classes[0] + named(s.model, "dz")};
  EXPECT_THROW(mc_variables(mixed), InputError);
  EXPECT_THROW(solve_mc_cartan(s.alg, s.model, {}, 3), InputError);
}

// ---- potential

TEST(Potential, SphereClosedForm) {
  const auto& s = s2_order5();
  const Potential p = potential(s.sol, s.alg, s.classes);
  ASSERT_TRUE(p.formulas_agree);
  EXPECT_TRUE(*p.formulas_agree);
  PolySeries expected = p.phi.empty_like();
  expected.add_term(mono({2, 1}), GroundPoly(1, Rational(1)));
  const GroundPoly u2 = GroundPoly::variable(1, 0) * GroundPoly::variable(1, 0);
  for (unsigned n = 3; n <= 5; ++n)
    expected.add_term(mono({0, n}), Rational(1, 3) * u2);
  EXPECT_EQ(p.phi, expected);
  EXPECT_EQ(p.eta_det, GroundPoly(1, Rational(-4)));
}

TEST(Potential, TorusIsCubic) {
  const Solved s = solve_builtin(builtin_torus(), 6);
  const Potential p = potential(s.sol, s.alg, s.classes);
  PolySeries expected = p.phi.empty_like();
  expected.add_term(mono({2, 0, 0, 1}), GroundPoly(0, Rational(1, 2)));
  expected.add_term(mono({1, 1, 1, 0}), GroundPoly(0, Rational(-1)));
  EXPECT_EQ(p.phi, expected);
  for (const Report& r : {metric_check(p), wdvv_check(p, 6).report, symmetry_check(p, s.classes, s.alg)})
    EXPECT_TRUE(r.passed());
}

TEST(Potential, MetricAndWdvvOnTheSphere) {
  const auto& s = s2_order5();
  const Potential p = potential(s.sol, s.alg, s.classes);
  EXPECT_TRUE(metric_check(p).passed());
  const WdvvOutcome w = wdvv_check(p);
  EXPECT_TRUE(w.report.passed());
  EXPECT_EQ(w.checked_through, 2u);
  EXPECT_TRUE(symmetry_check(p, s.classes, s.alg).passed());
}

TEST(Potential, WdvvDetectsABrokenPotential) {
  const Solved s = solve_builtin(builtin_torus(), 5);
  Potential p = potential(s.sol, s.alg, s.classes);
  PolySeries phi = p.phi;
  phi.add_term(mono({0, 1, 1, 2}), GroundPoly(0, Rational(1)));
  phi.add_term(mono({0, 0, 0, 4}), GroundPoly(0, Rational(1)));
  const Potential broken = make_potential(phi, 5, p.eta);
  EXPECT_FALSE(wdvv_check(broken, 3).report.passed());
}

TEST(Potential, MetricCheckDetectsAWrongPairing) {
  const auto& s = s2_order5();
  const Potential p = potential(s.sol, s.alg, s.classes);
  PolyMatrix eta = p.eta;
  eta(0, 1) = GroundPoly(1, Rational(3));
  eta(1, 0) = GroundPoly(1, Rational(3));
  EXPECT_FALSE(metric_check(make_potential(p.phi, p.order, eta)).passed());
  EXPECT_THROW(make_potential(p.phi, p.order, zero_poly_matrix(2, 2, 1)), InputError);
}

TEST(Potential, SpecializationAtZeroAndAtAFamilyPoint) {
  const auto& s = s2_order5();
  const Potential eq = potential(s.sol, s.alg, s.classes);
  const CartanModel om = forget_group(s.model);
  const DGBVAlgebra oa = build_cartan(om);
  std::vector<Element> cl;
  for (const auto& h : om.hodge.harmonic_basis)
    cl.push_back(h);
  const Potential ord = potential(solve_mc_cartan(oa, om, cl, 5), oa, cl);
  const Report r = specialize_and_compare(eq, ord, std::vector<Rational>{Rational(3, 2)});
  EXPECT_EQ(r.status_of("frobenius.specialize_zero"), Status::pass);
  EXPECT_EQ(r.status_of("frobenius.family_wdvv"), Status::pass);
  const PolySeries at = specialize_series(eq.phi, {Rational(3)});
  EXPECT_EQ(at.coefficient(mono({0, 4})), GroundPoly(0, Rational(3)));
}

TEST(Potential, CapStability) {
  const Solved a = solve_builtin(builtin_s2(6), 5), b = solve_builtin(builtin_s2(8), 5);
  EXPECT_EQ(to_json(a.sol.gamma), to_json(b.sol.gamma));
  EXPECT_EQ(to_json(potential(a.sol, a.alg, a.classes).phi), to_json(potential(b.sol, b.alg, b.classes).phi));
}

TEST(Potential, LeftDerivativesOnOddVariables) {
  auto vars = std::make_shared<std::vector<SuperVariable>>(
      std::vector<SuperVariable>{{"t", true}, {"s", true}});
  PolySeries f(vars, 3, GroundPoly(0));
  f.add_term(mono({1, 1}), GroundPoly(0, Rational(1))); // t s
  EXPECT_EQ(f.partial(0).coefficient(mono({0, 1})), GroundPoly(0, Rational(1)));
  EXPECT_EQ(f.partial(1).coefficient(mono({1, 0})), GroundPoly(0, Rational(-1)));
}
