#include <gtest/gtest.h>

#include "support.hpp"

using namespace eqfrob;
using namespace testing_support;

// ---- scalars

TEST(Rational, ParsesFractionsAndRejectsJunk) {
  EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-7"), Rational(-7));
  EXPECT_EQ(to_string(frac(4, -2)), "-2");
  EXPECT_THROW(frac(1, 0), InputError);
  EXPECT_THROW(parse_rational("1/0"), InputError);
  EXPECT_THROW(parse_rational("x"), InputError);
}

TEST(Rational, HugeDenominatorsStayExact) {
  Rational acc = 0;
  for (int k = 1; k <= 60; ++k)
    acc += frac(1, k);
  Rational back = acc;
  for (int k = 60; k >= 1; --k)
    back -= frac(1, k);
  EXPECT_EQ(back, 0);
  EXPECT_GT(acc.get_den().get_str().size(), 20u);
}

TEST(GroundPoly, RingAxiomsOnRandomSamples) {
  std::mt19937 rng(7);
  for (int t = 0; t < 60; ++t) {
    const auto a = random_poly(rng, 2), b = random_poly(rng, 2), c = random_poly(rng, 2);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a * b, b * a);
    EXPECT_TRUE((a - a).is_zero());
  }
}

TEST(GroundPoly, EvaluationIsAHomomorphism) {
  std::mt19937 rng(11);
  for (int t = 0; t < 40; ++t) {
    const auto a = random_poly(rng, 2), b = random_poly(rng, 2);
    const std::vector<Rational> pt{random_rational(rng), random_rational(rng)};
    EXPECT_EQ((a * b).evaluate(pt), a.evaluate(pt) * b.evaluate(pt));
    EXPECT_EQ((a + b).evaluate(pt), a.evaluate(pt) + b.evaluate(pt));
    EXPECT_EQ(specialize_zero(a * b), specialize_zero(a) * specialize_zero(b));
  }
}

TEST(GroundPoly, ExactDivision) {
  std::mt19937 rng(3);
  for (int t = 0; t < 30; ++t) {
    const auto a = random_poly(rng, 2), b = random_poly(rng, 2);
    if (b.is_zero())
      continue;
    auto q = (a * b).divide_exact(b);
    ASSERT_TRUE(q);
    EXPECT_EQ(*q, a);
  }
  const auto u = GroundPoly::variable(1, 0);
  EXPECT_FALSE((u + GroundPoly(1, Rational(1))).divide_exact(u));
  EXPECT_THROW(u.divide_exact(GroundPoly(1)), MathError);
}

TEST(GroundPoly, MismatchedVariableCountsAreRejected) {
  EXPECT_THROW(GroundPoly::variable(1, 0) + GroundPoly::variable(2, 0), InputError);
  EXPECT_THROW(GroundPoly::variable(1, 1), InputError);
}

TEST(RationalFn, FieldOperationsNormalize) {
  const auto u = GroundPoly::variable(1, 0);
  const GroundPoly one(1, Rational(1));
  RationalFn f(u * u - one, u - one);
  EXPECT_TRUE(f.is_polynomial());
  EXPECT_EQ(f, RationalFn(u + one));
  RationalFn g(one, u);
  EXPECT_EQ(g * RationalFn(u), RationalFn(one));
  EXPECT_EQ((g + g) / g, RationalFn(GroundPoly(1, Rational(2))));
  EXPECT_THROW(RationalFn(one, GroundPoly(1)), MathError);
}

TEST(Matrix, RankNullspaceInverse) {
  std::mt19937 rng(5);
  for (int t = 0; t < 20; ++t) {
    QMatrix m(4, 5, Rational(0));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 5; ++j)
        m(i, j) = random_rational(rng);
    for (std::size_t j = 0; j < 5; ++j)
      m(3, j) = m(0, j) + 2 * m(1, j);
    const auto ns = nullspace_q(m);
    EXPECT_EQ(rank_q(m) + ns.size(), 5u);
    for (const auto& v : ns)
      for (std::size_t i = 0; i < 4; ++i) {
        Rational s = 0;
        for (std::size_t j = 0; j < 5; ++j)
          s += m(i, j) * v[j];
        EXPECT_EQ(s, 0);
      }
  }
  QMatrix a(2, 2);
  a(0, 0) = 2;
  a(0, 1) = 1;
  a(1, 0) = 1;
  a(1, 1) = 1;
  auto inv = inverse_q(a);
  ASSERT_TRUE(inv);
  EXPECT_EQ(a * *inv, identity_q(2));
  EXPECT_TRUE(is_positive_definite(a));
  a(1, 1) = Rational(1, 2);
  EXPECT_FALSE(is_positive_definite(a));
}

TEST(FractionFree, RankAgreesWithRandomSpecialization) {
  std::mt19937 rng(9);
  for (int t = 0; t < 15; ++t) {
    PolyMatrix m = zero_poly_matrix(4, 4, 1);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        m(i, j) = random_poly(rng, 1, 2, 2);
    for (std::size_t j = 0; j < 4; ++j)
      m(3, j) = m(0, j) * GroundPoly::variable(1, 0) - m(1, j);
    const std::size_t r = rank_over_fractions(m);
    EXPECT_LE(r, 3u);
    for (const auto& pt : sample_points(1, 3))
      EXPECT_LE(rank_q(specialize_matrix(m, pt)), r);
  }
}

TEST(FractionFree, AdjugateAndSolve) {
  const auto u = GroundPoly::variable(1, 0);
  const GroundPoly one(1, Rational(1));
  PolyMatrix m = zero_poly_matrix(2, 2, 1);
  m(0, 0) = u;
  m(0, 1) = one;
  m(1, 0) = one;
  m(1, 1) = u;
  EXPECT_EQ(determinant(m), u * u - one);
  const PolyMatrix adj = adjugate(m);
  const PolyMatrix prod = multiply(m, adj);
  EXPECT_EQ(prod(0, 0), determinant(m));
  EXPECT_TRUE(prod(0, 1).is_zero());
  auto sol = solve_over_fractions(m, PolyVector{one, GroundPoly(1)});
  ASSERT_TRUE(sol);
  // u x + y = 1, x + u y = 0
  EXPECT_EQ(u * sol->numerators[0] + sol->numerators[1], sol->denominator);
  EXPECT_EQ(sol->numerators[0] + u * sol->numerators[1], GroundPoly(1));
}

// ---- graded

namespace {

BasisPtr small_basis() {
  return std::make_shared<const GradedBasis>(
      std::vector<GradedBasis::Entry>{{"1", 0, {}}, {"a", 1, {}}, {"b", 1, {}}, {"ab", 2, {}}});
}

} // namespace

TEST(GradedBasis, RejectsBadEntries) {
  using E = GradedBasis::Entry;
  EXPECT_THROW(GradedBasis({E{"x", -1, {}}}), InputError);
  EXPECT_THROW(GradedBasis({E{"x", 0, {}}, E{"x", 1, {}}}), InputError);
  EXPECT_THROW(GradedBasis({E{"x", 2, std::make_pair(1, 0)}}), InputError);
  GradedBasis ok({E{"p", 1, std::make_pair(1, 0)}, E{"q", 1, std::make_pair(0, 1)}});
  EXPECT_TRUE(ok.bigraded());
  EXPECT_EQ(ok.index_of("q"), 1u);
  EXPECT_THROW(ok.index_of("r"), InputError);
}

TEST(MultTable, TruncatedProductsAreReported) {
  auto b = small_basis();
  MultTable t(b, 0);
  for (std::size_t i = 0; i < 4; ++i) {
    t.set_product(0, i, {{i, Rational(1)}});
    t.set_product(i, 0, {{i, Rational(1)}});
  }
  t.set_product(1, 2, {{3, Rational(1)}});
  t.set_product(2, 1, {{3, Rational(-1)}});
  t.mark_truncated(1, 3);
  const Element a = Element::basis_vector(b, 0, 1), ab = Element::basis_vector(b, 0, 3);
  EXPECT_FALSE(try_wedge(a, ab, t));
  EXPECT_THROW(wedge(a, ab, t), CapExceeded);
  EXPECT_EQ(wedge(a, Element::basis_vector(b, 0, 2), t), ab);
}

TEST(SuperSeries, OddVariablesSquareToZeroAndAnticommute) {
  auto vars = std::make_shared<std::vector<SuperVariable>>(
      std::vector<SuperVariable>{{"x", false}, {"t", true}, {"s", true}});
  PolySeries t(vars, 4, GroundPoly(0)), s(vars, 4, GroundPoly(0));
  t.add_term({0, 1, 0}, GroundPoly(0, Rational(1)));
  s.add_term({0, 0, 1}, GroundPoly(0, Rational(1)));
  EXPECT_TRUE(series_mul(t, t).is_zero());
  EXPECT_EQ(series_mul(t, s), Rational(-1) * series_mul(s, t));
  EXPECT_THROW(t.add_term({0, 2, 0}, GroundPoly(0, Rational(1))), InputError);
}

TEST(SuperSeries, ProductIsAssociativeAndDerivationsObeyLeibniz) {
  std::mt19937 rng(21);
  auto vars = std::make_shared<std::vector<SuperVariable>>(
      std::vector<SuperVariable>{{"x", false}, {"t", true}, {"y", false}, {"s", true}});
  auto random_series = [&] {
    PolySeries p(vars, 5, GroundPoly(0));
    std::uniform_int_distribution<unsigned> e(0, 2), o(0, 1);
    for (int k = 0; k < 5; ++k)
      p.add_term({e(rng), o(rng), e(rng), o(rng)}, GroundPoly(0, random_rational(rng)));
    return p;
  };
  auto homogeneous_odd = [&](const PolySeries& p, bool odd) {
    PolySeries out = p.empty_like();
    for (const auto& [m, c] : p.terms())
      if (p.odd_monomial(m) == odd)
        out.add_term(m, c);
    return out;
  };
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = random_series(), b = random_series(), c = random_series();
    EXPECT_EQ(series_mul(series_mul(a, b), c), series_mul(a, series_mul(b, c)));
    // d(ab) = (da) b + (-1)^{|a||x|} a (db) for homogeneous a.
    for (bool odd : {false, true}) {
      const auto ah = homogeneous_odd(a, odd);
      for (std::size_t v = 0; v < 4; ++v) {
        const auto lhs = series_mul(ah, b).partial(v).truncated(3);
        auto rhs = series_mul(ah.partial(v), b);
        const auto second = series_mul(ah, b.partial(v));
        if (odd && (*vars)[v].odd)
          rhs -= second;
        else
          rhs += second;
        EXPECT_EQ(lhs, rhs.truncated(3)) << "variable " << v << " odd " << odd;
      }
    }
  }
}

// ---- dgbv layer

TEST(LinearOperator, UndefinedColumnsPropagateThroughComposition) {
  auto b = small_basis();
  LinearOperator f(b, 0, "f", DegreeShift{1, 0});
  f.set_entry(1, 0, Rational(1));
  f.set_entry(3, 2, Rational(1));
  LinearOperator g(b, 0, "g", DegreeShift{1, 0});
  g.set_entry(3, 1, Rational(2));
  g.mark_undefined(2);
  const LinearOperator gf = g * f;
  EXPECT_TRUE(gf.defined(0));
  EXPECT_EQ(gf.entry(3, 0), GroundPoly(0, Rational(2)));
  EXPECT_THROW(g.apply(Element::basis_vector(b, 0, 2)), CapExceeded);
  std::size_t off = 99;
  EXPECT_FALSE(g.try_apply(Element::basis_vector(b, 0, 2), &off));
  EXPECT_EQ(off, 2u);
  EXPECT_FALSE(f.shift_violation());
  f.set_entry(0, 1, Rational(1)); // a -> 1 lowers the degree
  EXPECT_EQ(f.shift_violation(), std::make_optional(std::make_pair<std::size_t, std::size_t>(0, 1)));
}

TEST(LinearOperator, GradedCommutatorSigns) {
  auto b = small_basis();
  LinearOperator p(b, 0, "p", DegreeShift{1, 0}), q(b, 0, "q", DegreeShift{-1, 0});
  p.set_entry(1, 0, Rational(1));
  q.set_entry(0, 1, Rational(1));
  const auto c = graded_commutator(p, q); // both odd: pq + qp
  EXPECT_EQ(c.entry(0, 0), GroundPoly(0, Rational(1)));
  EXPECT_EQ(c.entry(1, 1), GroundPoly(0, Rational(1)));
  LinearOperator e(b, 0, "e", DegreeShift{0, 0});
  EXPECT_THROW(p += e, InputError);
}

namespace {

DGBVAlgebra torus_algebra() {
  const CartanModel m = to_cartan_model(builtin_torus());
  return build_cartan(m);
}

} // namespace

TEST(DGBV, TorusPassesEveryAxiom) {
  const auto alg = torus_algebra();
  for (const Report& r : {check_gbv(alg), check_dgbv(alg), check_integral(alg)}) {
    EXPECT_TRUE(r.passed());
    for (const auto& rec : r.records())
      EXPECT_NE(rec.status, Status::fail) << rec.check;
  }
}

TEST(DGBV, BracketIsOddPoissonOnRandomElements) {
  const auto alg = torus_algebra();
  std::mt19937 rng(17);
  for (int t = 0; t < 30; ++t) {
    const Element a = random_element(rng, alg.basis(), 0).parity_component(t % 2);
    const Element b = random_element(rng, alg.basis(), 0).parity_component((t / 2) % 2);
    const Element c = random_element(rng, alg.basis(), 0);
    if (a.is_zero() || b.is_zero())
      continue;
    const Element lhs = bracket(a, wedge(b, c, *alg.table), alg);
    Element rhs = wedge(bracket(a, b, alg), c, *alg.table);
    const Element second = wedge(b, bracket(a, c, alg), *alg.table);
    const bool minus = !*a.parity() && *b.parity();
    rhs += minus ? -second : second;
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(DGBV, BrokenLaplacianIsCaughtWithAWitness) {
  auto alg = torus_algebra();
  // Delta(dxdy) = dx, Delta(dx) = 1 gives Delta^2 != 0.
  LinearOperator bad = alg.bv;
  bad.set_entry(1, 3, Rational(1));
  bad.set_entry(0, 1, Rational(1));
  alg.bv = bad;
  const Report r = check_dgbv(alg);
  const Report g = check_gbv(alg);
  EXPECT_EQ(g.status_of("gbv.Delta_squared"), Status::fail);
  EXPECT_FALSE(r.passed() && g.passed());
  bool witness = false;
  for (const auto& rec : g.records())
    witness = witness || (rec.status == Status::fail && !rec.witness.empty());
  for (const auto& rec : r.records())
    witness = witness || (rec.status == Status::fail && !rec.witness.empty());
  EXPECT_TRUE(witness);
}

TEST(DGBV, IntegralAxiomsFailForANonInvariantTrace) {
  auto alg = torus_algebra();
  alg.integral_row = {Rational(1), 0, 0, Rational(1)}; // integrates the unit too
  EXPECT_EQ(check_integral(alg).status_of("integral.frobenius_invariance"), Status::pass);
  // Stokes still holds trivially on the torus (delta = 0), so corrupt delta.
  LinearOperator d(alg.basis(), 0, "d", DegreeShift{1, 0});
  d.set_entry(1, 0, Rational(1));
  alg.delta = d;
  EXPECT_EQ(check_integral(alg).status_of("integral.stokes"), Status::pass);
  alg.integral_row = {0, Rational(1), 0, 0};
  EXPECT_EQ(check_integral(alg).status_of("integral.stokes"), Status::fail);
}

TEST(Report, StatusAggregationAndJson) {
  Report r;
  r.pass("a");
  r.fail("a", "w", "1", "2");
  r.skip("b", "n/a");
  EXPECT_EQ(r.status_of("a"), Status::fail);
  EXPECT_EQ(r.status_of("b"), Status::skipped);
  EXPECT_EQ(r.status_of("c"), Status::skipped);
  EXPECT_FALSE(r.passed());
  const auto j = r.to_json();
  EXPECT_EQ(j[1]["witness"], "w");
  EXPECT_EQ(j[2]["status"], "skipped");
}
