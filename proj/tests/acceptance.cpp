// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// All comparisons are exact.

#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "eqfrob.hpp"

using namespace eqfrob;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
  // every named check present and passing, nothing in the report failing
  void require_clean(const Report& r, std::initializer_list<const char*> names, const std::string& where) {
    for (const auto& rec : r.records())
      require(rec.status != Status::fail, where + ": " + rec.check + " failed " + rec.witness);
    for (const char* n : names)
      require(r.status_of(n) == Status::pass, where + ": " + n + " did not pass");
  }
};

const ModelFile& torus_file() {
  static const ModelFile m = builtin_torus();
  return m;
}
const ModelFile& s2_file() {
  static const ModelFile m = builtin_s2(6);
  return m;
}
Pipeline& s2_pipeline() {
  static Pipeline p(s2_file(), 5);
  return p;
}
Pipeline& torus_pipeline() {
  static Pipeline p(torus_file(), 5);
  return p;
}

Element named(const CartanModel& m, const std::string& name) {
  return Element::basis_vector(m.basis(), m.r, m.basis()->index_of(name));
}

Verdict dgbv_axioms() {
  Verdict v;
  for (const ModelFile* f : {&torus_file(), &s2_file()}) {
    const DGBVAlgebra alg = build_cartan(to_cartan_model(*f));
    v.require_clean(check_gbv(alg), {"gbv.Delta_squared", "gbv.Delta_unit", "gbv.odd_poisson"}, f->name);
    v.require_clean(check_dgbv(alg), {"dgbv.delta_squared", "dgbv.delta_Delta_anticommute", "dgbv.leibniz"}, f->name);
  }
  return v;
}

Verdict integral_axioms() {
  Verdict v;
  for (const ModelFile* f : {&torus_file(), &s2_file()})
    v.require_clean(check_integral(build_cartan(to_cartan_model(*f))),
                    {"integral.stokes", "integral.frobenius_invariance", "integral.delta_adjoint",
                     "integral.Delta_adjoint"},
                    f->name);
  return v;
}

Verdict kahler_hodge() {
  Verdict v;
  const HodgeData& h = s2_pipeline().model().hodge;
  v.require_clean(kahler_suite(h),
                  {"kahler.d_dc_anticommute", "hodge.fivefold_orthogonal", "hodge.fivefold_span",
                   "hodge.green_laplacian", "hodge.Delta_kills_harmonic"},
                  "s2");
  v.require(h.green * h.laplacian == identity_q(h.dim()) - h.harmonic_proj, "G box != id - H");
  return v;
}

Verdict iota_identity() {
  Verdict v;
  v.require_clean(iota_identity_check(s2_pipeline().model()), {"cartan.iota_mu_Delta"}, "s2");
  return v;
}

Verdict extension() {
  Verdict v;
  const CartanModel& m = s2_pipeline().model();
  const EquivariantBasis& eb = s2_pipeline().classes();
  const Element expected = named(m, "vol") - GroundPoly::variable(1, 0) * named(m, "z");
  v.require(eb.extensions.size() == 2, "expected two harmonic generators");
  v.require(eb.extensions.size() > 1 && eb.extensions[1].element == expected,
            "extension of omega is not vol - u z");
  const std::size_t bound = static_cast<std::size_t>(m.basis()->top_degree()) / 2 + 1;
  for (const auto& e : eb.extensions) {
    v.require(e.closed && closed_by_components(e.element, m), "extension not D_K-closed");
    v.require(e.steps <= bound, "too many recursion steps");
  }
  v.require_clean(s2_pipeline().extend().report, {"extend.closed", "extend.step_bound"}, "s2");
  return v;
}

Verdict pairing() {
  Verdict v;
  const EquivariantBasis& eb = s2_pipeline().classes();
  const PolyMatrix& eq = eb.equivariant_pairing.eta;
  const PolyMatrix& ord = eb.ordinary_pairing.eta;
  v.require(eq.rows() == ord.rows() && eq.cols() == ord.cols(), "pairing shapes differ");
  for (std::size_t i = 0; i < eq.rows(); ++i)
    for (std::size_t j = 0; j < eq.cols(); ++j) {
      v.require(eq(i, j).is_constant(), "equivariant eta entry not constant");
      v.require(eq(i, j).constant_term() == ord(i, j).constant_term(), "eta entries differ");
    }
  v.require(eb.pairing_preserved, "pairing_preserved flag unset");
  return v;
}

Verdict kirwan_condition_c() {
  Verdict v;
  const CartanModel& m = s2_pipeline().model();
  const std::size_t eq = cohomology_rank(cartan_differential(m)).rank;
  const std::size_t ord = cohomology_rank(cartan_differential(forget_group(m))).rank;
  v.require(eq == 2 && ord == 2, "ranks " + std::to_string(eq) + " and " + std::to_string(ord));
  v.require_clean(s2_pipeline().cohomology().report, {"cartan.kirwan_rank"}, "s2");
  v.require_clean(s2_pipeline().condition_c().report,
                  {"condition_c.ker_Delta_inclusion", "condition_c.ker_delta_inclusion",
                   "condition_c.ker_delta_cap_im_Delta"},
                  "s2");
  return v;
}

Verdict maurer_cartan() {
  Verdict v;
  v.require_clean(s2_pipeline().solve().report,
                  {"mc.residual", "mc.grading", "mc.Delta_gamma_zero", "mc.image_of_Delta", "mc.x0_absent",
                   "mc.recursions_agree", "mc.generic_agrees"},
                  "s2");
  const MCSolution& sol = s2_pipeline().solution();
  v.require(sol.verified(), "solver failed: " + sol.failure.value_or("unverified"));
  v.require(sol.certificates.size() == 4, "expected certificates for orders 2..5");
  for (const auto& c : sol.certificates)
    v.require(c.all(true), "certificate failed at order " + std::to_string(c.n));
  return v;
}

Verdict potentials() {
  Verdict v;
  for (Pipeline* p : {&torus_pipeline(), &s2_pipeline()}) {
    v.require_clean(p->potential_checks().report, {"frobenius.formulas_agree", "frobenius.metric"},
                    p->file().name);
    const WdvvOutcome w = wdvv_check(p->potential_data());
    v.require_clean(w.report, {"frobenius.wdvv"}, p->file().name);
    v.require(w.checked_through == p->order() - 3, "wdvv checked through the wrong degree");
  }
  const Potential& t = torus_pipeline().potential_data();
  for (const auto& [mono, c] : t.phi.terms())
    v.require(total_degree(mono) == 3, "torus potential has a non-cubic term");
  v.require_clean(wdvv_check(t, t.order).report, {"frobenius.wdvv"}, "torus, all degrees");
  return v;
}

Verdict specialization() {
  Verdict v;
  const Report r = s2_pipeline().specialize().report;
  v.require_clean(r, {"frobenius.specialize_zero", "frobenius.family_wdvv"}, "s2");
  const Potential& eq = s2_pipeline().potential_data();
  const Potential& ord = s2_pipeline().ordinary_potential();
  v.require(specialize_series(eq.phi, {Rational(0)}) == ord.phi, "Phi_K at u=0 differs from Phi");
  return v;
}

Verdict delta_k_negative() {
  Verdict v;
  CartanModel m = s2_pipeline().model();
  m.bv_choice = BvChoice::metric_minus_dmu;
  const DGBVAlgebra alg = build_cartan(m);
  const Report g = check_gbv(alg), d = check_dgbv(alg);
  v.require(g.status_of("gbv.Delta_squared") == Status::pass, "Delta_K squared nonzero");
  v.require(d.status_of("dgbv.delta_Delta_anticommute") == Status::pass, "[D_K, Delta_K] nonzero");
  v.require(g.status_of("gbv.odd_poisson") == Status::fail, "seven-term identity unexpectedly holds");
  const CheckRecord* w = g.find("gbv.odd_poisson");
  v.require(w && !w->witness.empty(), "no witness triple");
  if (v.ok && w)
    v.detail = "witness " + w->witness;
  return v;
}

Verdict cap_stability() {
  Verdict v;
  Pipeline wide(builtin_s2(8), 5);
  const MCSolution& a = s2_pipeline().solution();
  const MCSolution& b = wide.solution();
  v.require(a.verified() && b.verified(), "solver did not verify");
  v.require(to_json(a.gamma) == to_json(b.gamma), "Gamma differs between caps 6 and 8");
  v.require(to_json(s2_pipeline().potential_data().phi) == to_json(wide.potential_data().phi),
            "Phi differs between caps 6 and 8");
  return v;
}

} // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"dgbv axioms on torus and s2", dgbv_axioms},
      {"integral axioms and adjointness", integral_axioms},
      {"kahler and hodge identities on s2", kahler_hodge},
      {"iota = mu Delta - Delta mu on s2", iota_identity},
      {"extension of harmonic forms", extension},
      {"pairing preservation", pairing},
      {"kirwan rank and condition (c)", kirwan_condition_c},
      {"maurer-cartan solution to order 5", maurer_cartan},
      {"potential, metric and wdvv", potentials},
      {"specialization at u=0 and u=u0", specialization},
      {"Delta_K fails the seven-term identity", delta_k_negative},
      {"cap stability D=6 vs D=8", cap_stability},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.ok = false;
      v.detail = std::string("exception: ") + e.what();
    }
    failed += !v.ok;
    std::cout << (v.ok ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first;
    if (!v.detail.empty())
      std::cout << "  (" << v.detail << ")";
    std::cout << "\n";
  }
  return failed ? 1 : 0;
}
