#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "eqfrob/frobenius.hpp"
#include "eqfrob/mc.hpp"

namespace eqfrob {

using ojson = nlohmann::ordered_json;

inline ojson to_json(const GroundPoly& p) {
  ojson out = ojson::array();
  for (const auto& [e, c] : p.terms())
    out.push_back({{"exponents", e}, {"coeff", c.get_str()}});
  return out;
}

inline ojson to_json(const Element& x) {
  ojson out = ojson::array();
  for (const auto& [i, c] : x.coeffs())
    out.push_back({{"basis", x.basis()->name(i)}, {"coeff", to_json(c)}});
  return out;
}

template <class C>
ojson to_json(const SuperSeries<C>& s) {
  ojson out = ojson::array();
  for (const auto& [m, c] : s.terms())
    out.push_back({{"monomial", s.monomial_names(m)}, {"coeff", to_json(c)}});
  return out;
}

inline ojson to_json(const PolyMatrix& m) {
  ojson out = ojson::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (std::size_t j = 0; j < m.cols(); ++j)
      row.push_back(m(i, j).to_string());
    out.push_back(row);
  }
  return out;
}

inline ojson to_json(const OrderCertificate& c) {
  return {{"n", c.n},
          {"mc_residual_zero", c.mc_residual_zero},
          {"bracket_residual_zero", c.bracket_residual_zero},
          {"Delta_gamma_zero", c.delta_gamma_zero},
          {"in_image_of_Delta", c.in_image_of_Delta},
          {"x0_absent", c.x0_absent},
          {"grading", c.grading},
          {"recursions_agree", c.recursions_agree}};
}

inline ojson to_json(const MCSolution& s) {
  ojson certs = ojson::array();
  for (const auto& c : s.certificates)
    certs.push_back(to_json(c));
  ojson out = {{"order", s.order},
               {"solver", s.cartan ? "cartan" : "generic"},
               {"verified", s.verified()},
               {"certificates", certs},
               {"gamma", to_json(s.gamma)}};
  if (s.failure) {
    out["failure"] = *s.failure;
    out["residual"] = s.residual;
  }
  return out;
}

inline ojson to_json(const Potential& p) {
  ojson out = {{"order", p.order}, {"eta", to_json(p.eta)}, {"phi", to_json(p.phi)}};
  if (p.formulas_agree)
    out["formulas_agree"] = *p.formulas_agree;
  return out;
}

// Human-readable rendering, monomials in graded-lex order.
template <class C>
std::string render(const SuperSeries<C>& s) {
  if (s.is_zero())
    return "0";
  std::string out;
  for (const auto& [m, c] : s.terms()) {
    if (!out.empty())
      out += " + ";
    const std::string mono = s.monomial_string(m);
    out += "(" + c.to_string() + ")" + (mono == "1" ? "" : " " + mono);
  }
  return out;
}

inline std::string render(const PolyMatrix& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out += i ? ", [" : "[";
    for (std::size_t j = 0; j < m.cols(); ++j)
      out += (j ? ", " : "") + m(i, j).to_string();
    out += "]";
  }
  return out + "]";
}

} // namespace eqfrob
