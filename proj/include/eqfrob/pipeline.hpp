#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "eqfrob/cartan.hpp"
#include "eqfrob/frobenius.hpp"
#include "eqfrob/mc.hpp"
#include "eqfrob/models.hpp"
#include "eqfrob/serialize.hpp"

namespace eqfrob {

struct Outcome {
  Report report;
  ojson artifacts = ojson::object();

  void merge(const Outcome& o) {
    report.merge(o.report);
    for (const auto& [k, v] : o.artifacts.items())
      artifacts[k] = v;
  }
};

// Lazily computed stages over one validated model.
class Pipeline {
public:
  Pipeline(ModelFile file, unsigned order) : file_(std::move(file)), order_(order) {
    require_valid_model(file_);
    model_ = to_cartan_model(file_);
    alg_ = build_cartan(*model_);
  }

  const ModelFile& file() const { return file_; }
  const CartanModel& model() const { return *model_; }
  const DGBVAlgebra& algebra() const { return *alg_; }
  unsigned order() const { return order_; }

  // The Cartan recursions need the metric Laplacian to be the BV operator.
  bool cartan_solver() const { return model_->kahler && model_->bv_choice == BvChoice::metric; }

  const EquivariantBasis& classes() {
    if (!basis_)
      basis_ = equivariant_basis(*model_);
    return *basis_;
  }

  const MCSolution& solution() {
    if (!solution_)
      solution_ = cartan_solver() ? solve_mc_cartan(*alg_, *model_, classes().classes, order_)
                                  : solve_mc_generic(*alg_, model_->hodge, classes().classes, order_);
    return *solution_;
  }

  const Potential& potential_data() {
    if (!potential_)
      potential_ = potential(solution(), *alg_, classes().classes);
    return *potential_;
  }

  Outcome axioms() const {
    Outcome o;
    o.report.merge(check_gbv(*alg_));
    o.report.merge(check_dgbv(*alg_));
    o.report.merge(check_integral(*alg_));
    return o;
  }

  Outcome hodge() const {
    Outcome o;
    if (!model_->kahler) {
      o.report.skip("kahler", "model not flagged Kaehler");
      return o;
    }
    o.report.merge(kahler_suite(model_->hodge));
    o.report.merge(iota_identity_check(*model_));
    o.artifacts["harmonic_rank"] = model_->hodge.harmonic_basis.size();
    return o;
  }

  Outcome extend() {
    Outcome o;
    const auto& eb = classes();
    const std::size_t limit = static_cast<std::size_t>(model_->basis()->top_degree()) / 2 + 1;
    detail::Sweep closed(o.report, "extend.closed"), comps(o.report, "extend.closed_by_components"),
        image(o.report, "extend.corrections_in_image"), steps(o.report, "extend.step_bound");
    ojson arr = ojson::array();
    for (std::size_t a = 0; a < eb.extensions.size(); ++a) {
      const auto& ext = eb.extensions[a];
      const std::string w = "class " + std::to_string(a);
      ext.closed ? closed.ok() : closed.fail(w, ext.element.to_string(), "");
      closed_by_components(ext.element, *model_) ? comps.ok() : comps.fail(w, ext.element.to_string(), "");
      ext.corrections_in_image ? image.ok() : image.fail(w, ext.element.to_string(), "");
      ext.steps <= limit ? steps.ok() : steps.fail(w, std::to_string(ext.steps), std::to_string(limit));
      arr.push_back({{"harmonic", to_json(eb.ordinary[a])}, {"extension", to_json(ext.element)}, {"steps", ext.steps}});
    }
    closed.finish();
    comps.finish();
    image.finish();
    steps.finish();
    o.report.expect(eb.pairing_preserved, "pairing.preserved", eb.pairing_preserved ? "" : "equivariant and ordinary eta differ",
                    render(eb.equivariant_pairing.eta));
    o.artifacts["classes"] = arr;
    o.artifacts["eta"] = to_json(eb.equivariant_pairing.eta);
    return o;
  }

  Outcome cohomology() const {
    Outcome o;
    const auto eq = cohomology_rank(cartan_differential(*model_));
    const auto ord = cohomology_rank(forget_group(*model_).d);
    o.report.merge(kirwan_check(*model_));
    o.artifacts["equivariant_rank"] = eq.rank;
    o.artifacts["ordinary_rank"] = ord.rank;
    o.artifacts["closed_subspace_dim"] = eq.subspace_dim;
    return o;
  }

  Outcome condition_c() const {
    Outcome o;
    o.report.merge(condition_c_check(*alg_, model_->kahler));
    return o;
  }

  Outcome solve() {
    Outcome o;
    const MCSolution& sol = solution();
    report_solution(o.report, sol);
    if (sol.cartan && !sol.failure) {
      // Cross-check with the general solver on the low orders.
      const unsigned n = std::min(order_, 4u);
      const MCSolution gen = solve_mc_generic(*alg_, model_->hodge, classes().classes, n);
      const bool same = gen.verified() && gen.gamma == sol.gamma.truncated(n);
      o.report.expect(same, "mc.generic_agrees", same ? "" : gen.failure.value_or("Gamma differs"),
                      "through order " + std::to_string(n));
    }
    o.artifacts["mc"] = to_json(sol);
    return o;
  }

  Outcome potential_checks() {
    Outcome o;
    const Potential& p = potential_data();
    if (p.formulas_agree)
      o.report.expect(*p.formulas_agree, "frobenius.formulas_agree", *p.formulas_agree ? "" : "the two closed forms differ");
    else
      o.report.skip("frobenius.formulas_agree", "no B-series from this solver");
    o.report.merge(metric_check(p));
    o.report.merge(symmetry_check(p, classes().classes, *alg_));
    o.artifacts["potential"] = to_json(p);
    o.artifacts["potential_text"] = render(p.phi);
    return o;
  }

  Outcome wdvv() {
    Outcome o;
    WdvvOutcome w = wdvv_check(potential_data());
    o.report.merge(w.report);
    o.artifacts["wdvv_checked_through"] = w.checked_through;
    return o;
  }

  // Non-equivariant potential from the same model with the group forgotten.
  const Potential& ordinary_potential() {
    if (!ordinary_) {
      CartanModel om = forget_group(*model_);
      DGBVAlgebra oa = build_cartan(om);
      std::vector<Element> cl;
      for (const auto& h : om.hodge.harmonic_basis)
        cl.push_back(h.with_nvars(0));
      MCSolution s = cartan_solver() ? solve_mc_cartan(oa, om, cl, order_) : solve_mc_generic(oa, om.hodge, cl, order_);
      if (!s.verified())
        throw MathError("ordinary MC solution failed: " + s.failure.value_or("certificate") + " " + s.residual);
      ordinary_ = potential(s, oa, cl);
    }
    return *ordinary_;
  }

  Outcome specialize() {
    Outcome o;
    const Potential& eq = potential_data();
    std::optional<std::vector<Rational>> pt;
    if (model_->r > 0)
      pt = std::vector<Rational>(model_->r, Rational(3, 2));
    o.report.merge(specialize_and_compare(eq, ordinary_potential(), pt));
    o.artifacts["ordinary_potential_text"] = render(ordinary_potential().phi);
    return o;
  }

  Outcome everything() {
    Outcome o;
    o.merge(axioms());
    o.merge(hodge());
    o.merge(extend());
    o.merge(cohomology());
    o.merge(condition_c());
    o.merge(solve());
    if (!solution().verified())
      return o;
    o.merge(potential_checks());
    o.merge(wdvv());
    o.merge(specialize());
    return o;
  }

  static void report_solution(Report& r, const MCSolution& sol) {
    if (sol.failure)
      r.fail("mc.solve", *sol.failure, sol.residual);
    auto sweep = [&](const std::string& check, auto field) {
      std::string bad;
      for (const auto& c : sol.certificates)
        if (!field(c) && bad.empty())
          bad = "order " + std::to_string(c.n);
      r.expect(bad.empty(), check, bad, std::to_string(sol.certificates.size()) + " orders");
    };
    sweep("mc.residual", [](const OrderCertificate& c) { return c.mc_residual_zero && c.bracket_residual_zero; });
    sweep("mc.Delta_gamma_zero", [](const OrderCertificate& c) { return c.delta_gamma_zero; });
    sweep("mc.image_of_Delta", [](const OrderCertificate& c) { return c.in_image_of_Delta; });
    sweep("mc.x0_absent", [](const OrderCertificate& c) { return c.x0_absent; });
    sweep("mc.grading", [](const OrderCertificate& c) { return c.grading; });
    if (sol.cartan)
      sweep("mc.recursions_agree", [](const OrderCertificate& c) { return c.recursions_agree; });
    else
      r.skip("mc.recursions_agree", "general solver");
  }

private:
  ModelFile file_;
  unsigned order_;
  std::optional<CartanModel> model_;
  std::optional<DGBVAlgebra> alg_;
  std::optional<EquivariantBasis> basis_;
  std::optional<MCSolution> solution_;
  std::optional<Potential> potential_;
  std::optional<Potential> ordinary_;
};

} // namespace eqfrob
