#include <cstdio>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace eqfrob;
using namespace testing_support;

namespace {

const CartanModel& s2() {
  static const CartanModel m = to_cartan_model(builtin_s2(6));
  return m;
}

void expect_no_failures(const Report& r) {
  for (const auto& rec : r.records())
    EXPECT_NE(rec.status, Status::fail) << rec.check << " " << rec.witness << " " << rec.lhs << " | " << rec.rhs;
}

} // namespace

// ---- hodge

TEST(Hodge, KahlerSuiteOnBothBuiltins) {
  expect_no_failures(kahler_suite(s2().hodge));
  expect_no_failures(kahler_suite(to_cartan_model(builtin_torus()).hodge));
}

TEST(Hodge, GreenOperatorInvertsTheLaplacianOffHarmonics) {
  const auto& h = s2().hodge;
  const QMatrix id = identity_q(h.dim());
  EXPECT_EQ(h.green * h.laplacian, id - h.harmonic_proj);
  EXPECT_EQ(h.harmonic_proj * h.harmonic_proj, h.harmonic_proj);
  EXPECT_EQ(h.harmonic_basis.size(), 2u);
}

TEST(Hodge, HarmonicFormsOfTheSphere) {
  const auto& m = s2();
  std::vector<std::string> names;
  for (const auto& x : m.hodge.harmonic_basis)
    names.push_back(x.to_string());
  EXPECT_EQ(m.hodge.harmonic_basis[0], Element::basis_vector(m.basis(), 0, m.basis()->index_of("1")));
  EXPECT_EQ(m.hodge.harmonic_basis[1], Element::basis_vector(m.basis(), 0, m.basis()->index_of("vol")));
}

TEST(Hodge, RejectsBadMetricsAndMissingJ) {
  auto b = std::make_shared<const GradedBasis>(
      std::vector<GradedBasis::Entry>{{"1", 0, {}}, {"dx", 1, {}}, {"dy", 1, {}}, {"dxdy", 2, {}}});
  QMatrix d(4, 4, Rational(0));
  QMatrix g = identity_q(4);
  g(1, 1) = -1;
  EXPECT_THROW(build_hodge(b, d, identity_q(4), g), InputError);
  g = identity_q(4);
  g(0, 1) = g(1, 0) = Rational(1, 2);
  EXPECT_THROW(build_hodge(b, d, identity_q(4), g), InputError); // mixes degrees
  EXPECT_THROW(build_hodge(b, d, std::nullopt, identity_q(4)), InputError);
}

TEST(Hodge, DerivesJFromEvenBidegrees) {
  // Complex projective line shape: 1 in (0,0), area form in (1,1).
  auto b = std::make_shared<const GradedBasis>(
      std::vector<GradedBasis::Entry>{{"1", 0, std::make_pair(0, 0)}, {"w", 2, std::make_pair(1, 1)}});
  const HodgeData h = build_hodge(b, QMatrix(2, 2, Rational(0)), std::nullopt, identity_q(2));
  EXPECT_EQ(h.J(1, 1), Rational(1)); // (-1)^q i^{p+q} at (1,1)
  EXPECT_EQ(j_sign(1, 0), std::nullopt);
  EXPECT_EQ(j_sign(2, 0), Rational(-1));
}

// ---- cartan

TEST(Cartan, StructuralChecksAndIotaIdentityOnTheSphere) {
  expect_no_failures(cartan_validation(s2()));
  const Report r = iota_identity_check(s2());
  expect_no_failures(r);
  EXPECT_EQ(r.status_of("cartan.iota_mu_Delta"), Status::pass);
  EXPECT_EQ(r.status_of("cartan.C_on_ker_Delta"), Status::pass);
}

TEST(Cartan, IotaIsUndefinedOnlyAtTheCapEdge) {
  const auto& m = s2();
  std::vector<std::string> undefined;
  for (auto j : m.iota[0].undefined_columns())
    undefined.push_back(m.basis()->name(j));
  EXPECT_EQ(undefined, (std::vector<std::string>{"w.z^5.dth", "z^6.vol"}));
  EXPECT_THROW(m.iota[0].apply(named(m, "z^6.vol")), CapExceeded);
  EXPECT_EQ(m.iota[0].apply(named(m, "vol")), named(m, "dz", -1));
}

TEST(Cartan, ExtensionOfTheSymplecticForm) {
  const auto& m = s2();
  const Extension ext = extend_harmonic(m.hodge.harmonic_basis[1], m);
  Element expected = named(m, "vol") - GroundPoly::variable(1, 0) * named(m, "z");
  EXPECT_EQ(ext.element, expected);
  EXPECT_TRUE(ext.closed);
  EXPECT_TRUE(ext.corrections_in_image);
  EXPECT_EQ(ext.steps, 1u);
  EXPECT_TRUE(closed_by_components(ext.element, m));
  EXPECT_EQ(reassemble(decompose(ext.element), Element(m.basis(), 1)), ext.element);
}

TEST(Cartan, ExtensionRejectsNonHarmonicInput) {
  EXPECT_THROW(extend_harmonic(named(s2(), "z"), s2()), InputError);
}

TEST(Cartan, PairingIsPreserved) {
  const EquivariantBasis eb = equivariant_basis(s2());
  EXPECT_TRUE(eb.pairing_preserved);
  EXPECT_EQ(eb.equivariant_pairing.eta(0, 1), GroundPoly(1, Rational(2)));
  EXPECT_EQ(eb.equivariant_pairing.eta(1, 1), GroundPoly(1));
  EXPECT_TRUE(eb.equivariant_pairing.nice_over_ground);
}

TEST(Cartan, KirwanAndConditionC) {
  const auto eq = cohomology_rank(cartan_differential(s2()));
  EXPECT_EQ(eq.rank, 2u);
  expect_no_failures(kirwan_check(s2()));
  const Report c = condition_c_check(build_cartan(s2()), true);
  expect_no_failures(c);
  EXPECT_EQ(c.status_of("condition_c.ker_Delta_cap_im_delta"), Status::skipped);
  EXPECT_EQ(c.status_of("condition_c.ker_delta_cap_im_Delta"), Status::pass);
}

TEST(Cartan, ForgettingTheGroupGivesTheDeRhamComplex) {
  const CartanModel o = forget_group(s2());
  EXPECT_EQ(o.r, 0u);
  EXPECT_EQ(cohomology_rank(cartan_differential(o)).rank, 2u);
}

TEST(Cartan, DeltaKVariantPassesStructureButNotTheSevenTermIdentity) {
  CartanModel m = s2();
  m.bv_choice = BvChoice::metric_minus_dmu;
  const Report v = cartan_validation(m);
  expect_no_failures(v);
  const DGBVAlgebra alg = build_cartan(m);
  const Report g = check_gbv(alg);
  EXPECT_EQ(g.status_of("gbv.Delta_squared"), Status::pass);
  EXPECT_EQ(g.status_of("gbv.odd_poisson"), Status::fail);
  const CheckRecord* w = g.find("gbv.odd_poisson");
  ASSERT_NE(w, nullptr);
  EXPECT_FALSE(w->witness.empty());
}

// ---- models

TEST(Models, BuiltinsValidate) {
  expect_no_failures(validate_model(builtin_torus()));
  expect_no_failures(validate_model(builtin_s2(4)));
  EXPECT_THROW(builtin_s2(3), InputError);
  EXPECT_EQ(estimate_cap(5), 6u);
  EXPECT_EQ(estimate_cap(1), 4u);
}

TEST(Models, RoundTripThroughJson) {
  for (const ModelFile& m : {builtin_torus(), builtin_s2(5)}) {
    const ModelFile back = model_from_json(model_to_json(m));
    EXPECT_EQ(back, m);
  }
  const auto path = std::filesystem::temp_directory_path() / "eqfrob_roundtrip.json";
  save_model(builtin_s2(4), path.string());
  EXPECT_EQ(load_model(path.string()), builtin_s2(4));
  std::filesystem::remove(path);
}

TEST(Models, ParseErrorsNameTheField) {
  auto j = model_to_json(builtin_torus());
  auto expect_msg = [](const nlohmann::ordered_json& doc, const std::string& needle) {
    try {
      model_from_json(doc);
      ADD_FAILURE() << "no error for " << needle;
    } catch (const InputError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  auto a = j;
  a.erase("gram");
  expect_msg(a, "gram");
  auto b = j;
  b["d"]["entries"].push_back({"dx", "nope", "1"});
  expect_msg(b, "nope");
  auto c = j;
  c["gram"]["1"] = {{"1", "0"}};
  expect_msg(c, "gram.1");
  auto d = j;
  d["bv_operator"] = "weird";
  expect_msg(d, "bv_operator");
  auto e = j;
  e["products"][0][3] = "1/0";
  expect_msg(e, "");
  EXPECT_THROW(parse_model_text("{ not json"), InputError);
  EXPECT_THROW(read_model_file("/nonexistent/model.json"), InputError);
}

TEST(Models, ValidatorRejectsBrokenStructure) {
  ModelFile m = builtin_torus();
  m.gram[1](0, 0) = -1;
  EXPECT_EQ(validate_model(m).status_of("model.assembly"), Status::fail);

  ModelFile n = builtin_torus();
  for (auto& p : n.products)
    if (p.left == 2 && p.right == 1)
      p.coeff = 1; // dy dx = +dxdy breaks graded commutativity
  EXPECT_EQ(validate_model(n).status_of("model.table.graded_commutative"), Status::fail);
  EXPECT_THROW(require_valid_model(n), ValidationError);

  ModelFile s = builtin_s2(4);
  s.mu[0][1] = 2; // d mu no longer equals iota omega
  const Report r = validate_model(s);
  EXPECT_EQ(r.status_of("cartan.moment_map"), Status::fail);
}

TEST(Models, CapDoesNotChangeLowOperators) {
  const CartanModel a = to_cartan_model(builtin_s2(6)), b = to_cartan_model(builtin_s2(8));
  for (const std::string& name : {"z", "z^2", "dz", "w.dth", "vol", "z.vol"}) {
    const auto ia = a.basis()->index_of(name), ib = b.basis()->index_of(name);
    const Element da = a.d.column_element(ia), db = b.d.column_element(ib);
    EXPECT_EQ(da.to_string(), db.to_string()) << name;
  }
}
