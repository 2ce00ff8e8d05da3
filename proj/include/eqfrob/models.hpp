#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "eqfrob/cartan.hpp"
#include "eqfrob/scalars/rational.hpp"

namespace eqfrob {

inline constexpr const char* kModelSchema = "eqfrob-model/1";

// Rational matrix with an undefined-column mask.
struct OperatorData {
  QMatrix matrix;
  std::vector<bool> undefined;

  friend bool operator==(const OperatorData&, const OperatorData&) = default;
};

struct ProductEntry {
  std::size_t left = 0, right = 0, target = 0;
  Rational coeff;

  friend bool operator==(const ProductEntry&, const ProductEntry&) = default;
};

// Finite presentation of an invariant-form model, as read from or written
// to a model file.
struct ModelFile {
  std::string name;
  std::size_t r = 0;
  bool kahler = true;
  nlohmann::ordered_json cap = nlohmann::ordered_json::object();
  std::vector<GradedBasis::Entry> basis;
  std::size_t identity = 0;
  std::vector<ProductEntry> products;
  std::vector<std::pair<std::size_t, std::size_t>> truncated;
  OperatorData d;
  std::vector<OperatorData> iota;
  std::optional<OperatorData> J;
  std::vector<std::vector<Rational>> mu;
  std::vector<Rational> omega;
  std::map<int, QMatrix> gram; // per form degree, basis order within the degree
  std::vector<Rational> integral;
  BvChoice bv = BvChoice::metric;
  std::optional<OperatorData> Delta;

  std::size_t dim() const { return basis.size(); }
  friend bool operator==(const ModelFile&, const ModelFile&) = default;
};

namespace detail {

inline OperatorData empty_operator(std::size_t n) { return {QMatrix(n, n, Rational(0)), std::vector<bool>(n, false)}; }

inline std::string power_name(unsigned k) {
  if (k == 0)
    return "";
  if (k == 1)
    return "z";
  return "z^" + std::to_string(k);
}

inline std::string join_name(const std::string& a, const std::string& b) {
  if (a.empty() || b.empty())
    return a + b;
  return a + "." + b;
}

// int_{-1}^{1} z^n dz
inline Rational moment(unsigned n) { return n % 2 ? Rational(0) : frac(2, n + 1); }

} // namespace detail

// Flat torus with the trivial group: basis 1, dx, dy, dx^dy.
inline ModelFile builtin_torus() {
  ModelFile m;
  m.name = "torus";
  m.r = 0;
  m.kahler = true;
  m.basis = {{"1", 0, {}}, {"dx", 1, {}}, {"dy", 1, {}}, {"dxdy", 2, {}}};
  m.identity = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    m.products.push_back({0, i, i, Rational(1)});
    if (i != 0)
      m.products.push_back({i, 0, i, Rational(1)});
  }
  m.products.push_back({1, 2, 3, Rational(1)});
  m.products.push_back({2, 1, 3, Rational(-1)});
  m.d = detail::empty_operator(4);
  OperatorData J = detail::empty_operator(4);
  J.matrix(0, 0) = 1;
  J.matrix(3, 3) = 1;
  J.matrix(2, 1) = -1; // J dx = -dy
  J.matrix(1, 2) = 1;  // J dy = dx
  m.J = J;
  m.omega = {0, 0, 0, Rational(1)};
  m.gram[0] = identity_q(1);
  m.gram[1] = identity_q(2);
  m.gram[2] = identity_q(1);
  m.integral = {0, 0, 0, Rational(1)};
  return m;
}

// Rotating unit sphere, invariant forms polynomial in z = height, theta-period
// 1.  Basis: z^k (k <= D), z^k dz (k <= D-1), (1-z^2) z^k dth (k <= D-1),
// z^k dz^dth (k <= D).
inline ModelFile builtin_s2(unsigned D) {
  if (D < 4)
    throw InputError("builtin:s2 needs a z-degree cap of at least 4");
  ModelFile m;
  m.name = "s2";
  m.r = 1;
  m.kahler = true;
  m.cap = {{"z_degree", D}};
  std::vector<std::size_t> F, A, Bt, V;
  auto add = [&](std::string name, int deg, std::vector<std::size_t>& into) {
    into.push_back(m.basis.size());
    m.basis.push_back({std::move(name), deg, {}});
  };
  for (unsigned k = 0; k <= D; ++k)
    add(k == 0 ? "1" : detail::power_name(k), 0, F);
  for (unsigned k = 0; k < D; ++k)
    add(detail::join_name(detail::power_name(k), "dz"), 1, A);
  for (unsigned k = 0; k < D; ++k)
    add(detail::join_name(detail::join_name("w", detail::power_name(k)), "dth"), 1, Bt);
  for (unsigned k = 0; k <= D; ++k)
    add(detail::join_name(detail::power_name(k), "vol"), 2, V);
  const std::size_t n = m.basis.size();
  m.identity = F[0];

  auto prod = [&](std::size_t i, std::size_t j, std::size_t k, const Rational& c) { m.products.push_back({i, j, k, c}); };
  auto trunc = [&](std::size_t i, std::size_t j) { m.truncated.emplace_back(i, j); };
  // functions times anything
  for (unsigned i = 0; i <= D; ++i) {
    auto times = [&](const std::vector<std::size_t>& fam, unsigned top) {
      for (unsigned j = 0; j < fam.size(); ++j) {
        if (i + j <= top) {
          prod(F[i], fam[j], fam[i + j], Rational(1));
          if (&fam != &F)
            prod(fam[j], F[i], fam[i + j], Rational(1));
        } else {
          trunc(F[i], fam[j]);
          if (&fam != &F)
            trunc(fam[j], F[i]);
        }
      }
    };
    times(F, D);
    times(A, D - 1);
    times(Bt, D - 1);
    times(V, D);
  }
  // z^i dz ^ (1-z^2) z^j dth = (z^{i+j} - z^{i+j+2}) vol
  for (unsigned i = 0; i < D; ++i)
    for (unsigned j = 0; j < D; ++j) {
      if (i + j + 2 > D) {
        trunc(A[i], Bt[j]);
        trunc(Bt[j], A[i]);
        continue;
      }
      prod(A[i], Bt[j], V[i + j], Rational(1));
      prod(A[i], Bt[j], V[i + j + 2], Rational(-1));
      prod(Bt[j], A[i], V[i + j], Rational(-1));
      prod(Bt[j], A[i], V[i + j + 2], Rational(1));
    }

  m.d = detail::empty_operator(n);
  for (unsigned k = 1; k <= D; ++k)
    m.d.matrix(A[k - 1], F[k]) = k;
  for (unsigned k = 0; k < D; ++k) {
    if (k >= 1)
      m.d.matrix(V[k - 1], Bt[k]) = k;
    m.d.matrix(V[k + 1], Bt[k]) = -Rational(k + 2);
  }

  // xi = d/dth: iota((1-z^2) z^k dth) = z^k - z^{k+2}, iota(z^k vol) = -z^k dz.
  OperatorData io = detail::empty_operator(n);
  for (unsigned k = 0; k < D; ++k) {
    if (k + 2 > D) {
      io.undefined[Bt[k]] = true;
      continue;
    }
    io.matrix(F[k], Bt[k]) = 1;
    io.matrix(F[k + 2], Bt[k]) = -1;
  }
  for (unsigned k = 0; k <= D; ++k) {
    if (k > D - 1) {
      io.undefined[V[k]] = true;
      continue;
    }
    io.matrix(A[k], V[k]) = -1;
  }
  m.iota.push_back(io);

  // J dz = -(1-z^2) dth, J (1-z^2) dth = dz; identity on functions and 2-forms.
  OperatorData J = detail::empty_operator(n);
  for (auto i : F)
    J.matrix(i, i) = 1;
  for (auto i : V)
    J.matrix(i, i) = 1;
  for (unsigned k = 0; k < D; ++k) {
    J.matrix(Bt[k], A[k]) = -1;
    J.matrix(A[k], Bt[k]) = 1;
  }
  m.J = J;

  m.mu.push_back(std::vector<Rational>(n, Rational(0)));
  m.mu[0][F[1]] = -1;
  m.omega.assign(n, Rational(0));
  m.omega[V[0]] = 1;

  QMatrix g0(D + 1, D + 1), g1(2 * D, 2 * D, Rational(0)), g2(D + 1, D + 1);
  for (unsigned i = 0; i <= D; ++i)
    for (unsigned j = 0; j <= D; ++j) {
      g0(i, j) = detail::moment(i + j);
      g2(i, j) = detail::moment(i + j);
    }
  for (unsigned i = 0; i < D; ++i)
    for (unsigned j = 0; j < D; ++j) {
      const Rational w = detail::moment(i + j) - detail::moment(i + j + 2);
      g1(i, j) = w;         // dz-forms: int z^{i+j} (1-z^2)
      g1(D + i, D + j) = w; // dth-forms: int (1-z^2) z^{i+j}
    }
  m.gram[0] = g0;
  m.gram[1] = g1;
  m.gram[2] = g2;
  m.integral.assign(n, Rational(0));
  for (unsigned k = 0; k <= D; ++k)
    m.integral[V[k]] = detail::moment(k);
  return m;
}

// Smallest safe z-degree cap for MC order N on builtin:s2.
inline unsigned estimate_cap(unsigned order) { return std::max(4u, order + 1); }

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

using json = nlohmann::ordered_json;

inline const json& field(const json& j, const std::string& key, const std::string& where = "model") {
  if (!j.is_object() || !j.contains(key))
    throw InputError(where + ": missing field '" + key + "'");
  return j.at(key);
}

inline Rational rational_field(const json& j, const std::string& where) {
  if (j.is_string())
    return parse_rational(j.get<std::string>());
  if (j.is_number_integer())
    return Rational(j.get<long>());
  throw InputError(where + ": expected a rational as \"p/q\"");
}

inline std::string rational_text(const Rational& q) { return to_string(q); }

inline std::size_t name_index(const std::map<std::string, std::size_t>& idx, const json& j, const std::string& where) {
  if (!j.is_string())
    throw InputError(where + ": expected a basis name");
  auto it = idx.find(j.get<std::string>());
  if (it == idx.end())
    throw InputError(where + ": unknown basis name '" + j.get<std::string>() + "'");
  return it->second;
}

inline OperatorData parse_operator(const json& j, const std::map<std::string, std::size_t>& idx, std::size_t n,
                                   const std::string& where) {
  OperatorData op = empty_operator(n);
  for (const auto& e : field(j, "entries", where)) {
    if (!e.is_array() || e.size() != 3)
      throw InputError(where + ": entries must be [row, col, coeff]");
    op.matrix(name_index(idx, e[0], where), name_index(idx, e[1], where)) += rational_field(e[2], where);
  }
  if (j.contains("undefined"))
    for (const auto& u : j.at("undefined"))
      op.undefined[name_index(idx, u, where)] = true;
  return op;
}

inline std::vector<Rational> parse_vector(const json& j, const std::map<std::string, std::size_t>& idx, std::size_t n,
                                          const std::string& where) {
  std::vector<Rational> v(n, Rational(0));
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2)
      throw InputError(where + ": entries must be [name, coeff]");
    v[name_index(idx, e[0], where)] += rational_field(e[1], where);
  }
  return v;
}

inline json operator_json(const OperatorData& op, const std::vector<GradedBasis::Entry>& b) {
  json entries = json::array(), undef = json::array();
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (op.undefined[j])
      undef.push_back(b[j].name);
    for (std::size_t i = 0; i < b.size(); ++i)
      if (op.matrix(i, j) != 0)
        entries.push_back({b[i].name, b[j].name, rational_text(op.matrix(i, j))});
  }
  json out = {{"entries", entries}};
  if (!undef.empty())
    out["undefined"] = undef;
  return out;
}

inline json vector_json(const std::vector<Rational>& v, const std::vector<GradedBasis::Entry>& b) {
  json out = json::array();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0)
      out.push_back({b[i].name, rational_text(v[i])});
  return out;
}

} // namespace detail

inline nlohmann::ordered_json model_to_json(const ModelFile& m) {
  using detail::json;
  json j;
  j["schema"] = kModelSchema;
  j["name"] = m.name;
  j["r"] = m.r;
  j["kahler"] = m.kahler;
  j["cap"] = m.cap;
  json basis = json::array();
  for (const auto& e : m.basis) {
    json b = {{"name", e.name}, {"degree", e.form_degree}};
    if (e.bidegree)
      b["bidegree"] = {e.bidegree->first, e.bidegree->second};
    basis.push_back(b);
  }
  j["basis"] = basis;
  j["identity"] = m.basis.at(m.identity).name;
  json prods = json::array();
  for (const auto& p : m.products)
    prods.push_back({m.basis[p.left].name, m.basis[p.right].name, m.basis[p.target].name, detail::rational_text(p.coeff)});
  j["products"] = prods;
  json tr = json::array();
  for (const auto& [a, b] : m.truncated)
    tr.push_back({m.basis[a].name, m.basis[b].name});
  j["truncated_products"] = tr;
  j["d"] = detail::operator_json(m.d, m.basis);
  json io = json::array();
  for (const auto& op : m.iota)
    io.push_back(detail::operator_json(op, m.basis));
  j["iota"] = io;
  if (m.J)
    j["J"] = detail::operator_json(*m.J, m.basis);
  json mu = json::array();
  for (const auto& v : m.mu)
    mu.push_back(detail::vector_json(v, m.basis));
  j["mu"] = mu;
  j["omega"] = detail::vector_json(m.omega, m.basis);
  json gram = json::object();
  for (const auto& [deg, g] : m.gram) {
    json rows = json::array();
    for (std::size_t r = 0; r < g.rows(); ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < g.cols(); ++c)
        row.push_back(detail::rational_text(g(r, c)));
      rows.push_back(row);
    }
    gram[std::to_string(deg)] = rows;
  }
  j["gram"] = gram;
  j["integral"] = detail::vector_json(m.integral, m.basis);
  j["bv_operator"] = to_string(m.bv);
  if (m.Delta)
    j["Delta"] = detail::operator_json(*m.Delta, m.basis);
  return j;
}

inline ModelFile model_from_json(const nlohmann::ordered_json& j) {
  using detail::field;
  ModelFile m;
  if (!j.is_object())
    throw InputError("model: top level must be an object");
  if (j.contains("schema") && j.at("schema") != kModelSchema)
    throw InputError("model: unsupported schema " + j.at("schema").dump());
  try {
    m.name = field(j, "name").get<std::string>();
    m.r = field(j, "r").get<std::size_t>();
    m.kahler = j.value("kahler", true);
    if (j.contains("cap"))
      m.cap = j.at("cap");
    std::map<std::string, std::size_t> idx;
    for (const auto& b : field(j, "basis")) {
      GradedBasis::Entry e{field(b, "name", "basis entry").get<std::string>(),
                           field(b, "degree", "basis entry").get<int>(), std::nullopt};
      if (b.contains("bidegree")) {
        const auto& bd = b.at("bidegree");
        if (!bd.is_array() || bd.size() != 2)
          throw InputError("basis entry '" + e.name + "': bidegree must be [p, q]");
        e.bidegree = std::make_pair(bd[0].get<int>(), bd[1].get<int>());
      }
      if (!idx.emplace(e.name, m.basis.size()).second)
        throw InputError("basis: duplicate name '" + e.name + "'");
      m.basis.push_back(std::move(e));
    }
    const std::size_t n = m.basis.size();
    if (n == 0)
      throw InputError("basis: empty");
    m.identity = detail::name_index(idx, field(j, "identity"), "identity");
    for (const auto& p : field(j, "products")) {
      if (!p.is_array() || p.size() != 4)
        throw InputError("products: entries must be [left, right, target, coeff]");
      m.products.push_back({detail::name_index(idx, p[0], "products"), detail::name_index(idx, p[1], "products"),
                            detail::name_index(idx, p[2], "products"), detail::rational_field(p[3], "products")});
    }
    if (j.contains("truncated_products"))
      for (const auto& t : j.at("truncated_products")) {
        if (!t.is_array() || t.size() != 2)
          throw InputError("truncated_products: entries must be [left, right]");
        m.truncated.emplace_back(detail::name_index(idx, t[0], "truncated_products"),
                                 detail::name_index(idx, t[1], "truncated_products"));
      }
    m.d = detail::parse_operator(field(j, "d"), idx, n, "d");
    if (j.contains("iota"))
      for (const auto& op : j.at("iota"))
        m.iota.push_back(detail::parse_operator(op, idx, n, "iota"));
    if (m.iota.size() != m.r)
      throw InputError("iota: expected " + std::to_string(m.r) + " operators");
    if (j.contains("J"))
      m.J = detail::parse_operator(j.at("J"), idx, n, "J");
    if (j.contains("mu"))
      for (const auto& v : j.at("mu"))
        m.mu.push_back(detail::parse_vector(v, idx, n, "mu"));
    if (m.mu.size() != m.r)
      throw InputError("mu: expected " + std::to_string(m.r) + " components");
    if (j.contains("structure_constants"))
      for (const auto& c : j.at("structure_constants"))
        if (detail::rational_field(c.is_array() && !c.empty() ? c.back() : c, "structure_constants") != 0)
          throw InputError("structure_constants: only abelian groups are supported");
    m.omega = j.contains("omega") ? detail::parse_vector(j.at("omega"), idx, n, "omega")
                                  : std::vector<Rational>(n, Rational(0));
    const auto& gram = field(j, "gram");
    std::map<int, std::size_t> per_degree;
    for (const auto& e : m.basis)
      ++per_degree[e.form_degree];
    for (const auto& [deg, count] : per_degree) {
      const std::string key = std::to_string(deg);
      const auto& rows = field(gram, key, "gram");
      QMatrix g(count, count, Rational(0));
      if (!rows.is_array() || rows.size() != count)
        throw InputError("gram." + key + ": expected " + std::to_string(count) + " rows");
      for (std::size_t r = 0; r < count; ++r) {
        if (!rows[r].is_array() || rows[r].size() != count)
          throw InputError("gram." + key + ": row " + std::to_string(r) + " has wrong length");
        for (std::size_t c = 0; c < count; ++c)
          g(r, c) = detail::rational_field(rows[r][c], "gram." + key);
      }
      m.gram[deg] = g;
    }
    m.integral = detail::parse_vector(field(j, "integral"), idx, n, "integral");
    const std::string bv = j.value("bv_operator", std::string("metric"));
    if (bv == "metric")
      m.bv = BvChoice::metric;
    else if (bv == "metric_minus_dmu")
      m.bv = BvChoice::metric_minus_dmu;
    else if (bv == "explicit") {
      m.bv = BvChoice::explicit_operator;
      m.Delta = detail::parse_operator(field(j, "Delta"), idx, n, "Delta");
    } else
      throw InputError("bv_operator: unknown value '" + bv + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("model: malformed field: ") + e.what());
  }
  return m;
}

inline ModelFile parse_model_text(const std::string& text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("model: parse error: ") + e.what());
  }
  return model_from_json(j);
}

inline ModelFile read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model_text(ss.str());
}

inline void save_model(const ModelFile& m, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw InputError("cannot write model file '" + path + "'");
  out << model_to_json(m).dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Assembly and validation

inline QMatrix assemble_gram(const ModelFile& m) {
  const std::size_t n = m.dim();
  QMatrix g(n, n, Rational(0));
  std::map<int, std::vector<std::size_t>> by_degree;
  for (std::size_t i = 0; i < n; ++i)
    by_degree[m.basis[i].form_degree].push_back(i);
  for (const auto& [deg, idx] : by_degree) {
    auto it = m.gram.find(deg);
    if (it == m.gram.end())
      throw InputError("gram." + std::to_string(deg) + ": missing block");
    if (it->second.rows() != idx.size() || it->second.cols() != idx.size())
      throw InputError("gram." + std::to_string(deg) + ": wrong size");
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b)
        g(idx[a], idx[b]) = it->second(a, b);
  }
  return g;
}

inline std::shared_ptr<const MultTable> build_table(const ModelFile& m, BasisPtr basis) {
  auto t = std::make_shared<MultTable>(basis, m.identity);
  std::map<std::pair<std::size_t, std::size_t>, std::map<std::size_t, Rational>> acc;
  for (const auto& p : m.products)
    acc[{p.left, p.right}][p.target] += p.coeff;
  for (const auto& [ij, terms] : acc) {
    MultTable::Terms ts(terms.begin(), terms.end());
    t->set_product(ij.first, ij.second, std::move(ts));
  }
  for (const auto& [a, b] : m.truncated)
    t->mark_truncated(a, b);
  return t;
}

inline LinearOperator to_operator(const OperatorData& op, BasisPtr basis, std::size_t nvars, std::string name,
                                  std::set<DegreeShift> shifts) {
  LinearOperator out = LinearOperator::from_qmatrix(basis, nvars, std::move(name), std::move(shifts), op.matrix);
  for (std::size_t j = 0; j < op.undefined.size(); ++j)
    if (op.undefined[j]) {
      for (std::size_t i = 0; i < op.matrix.rows(); ++i)
        if (op.matrix(i, j) != 0)
          throw InputError("operator '" + out.name() + "' has entries in undefined column " + basis->name(j));
      out.mark_undefined(j);
    }
  return out;
}

inline Element to_element(const std::vector<Rational>& v, BasisPtr basis, std::size_t nvars) {
  Element e(basis, nvars);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0)
      e.add(i, GroundPoly(nvars, v[i]));
  return e;
}

// Builds the Cartan model (including Hodge data).  Throws InputError on
// structurally unusable data; semantic checks live in validate_model.
inline CartanModel to_cartan_model(const ModelFile& m) {
  auto basis = std::make_shared<const GradedBasis>(m.basis);
  CartanModel cm{m.name, build_table(m, basis), m.r,
                 LinearOperator(basis, m.r, "d", DegreeShift{1, 0}), {}, {}, Element(basis, m.r), HodgeData{}};
  cm.d = to_operator(m.d, basis, m.r, "d", {DegreeShift{1, 0}});
  if (!cm.d.total())
    throw InputError("d: undefined columns are not allowed");
  for (std::size_t a = 0; a < m.iota.size(); ++a)
    cm.iota.push_back(to_operator(m.iota[a], basis, m.r, "iota" + std::to_string(a + 1), {DegreeShift{-1, 0}}));
  for (const auto& v : m.mu)
    cm.mu.push_back(to_element(v, basis, m.r));
  cm.omega = to_element(m.omega, basis, m.r);
  cm.kahler = m.kahler;
  cm.integral_row = m.integral;
  cm.bv_choice = m.bv;
  if (m.Delta)
    cm.explicit_bv = to_operator(*m.Delta, basis, 0, "Delta", {DegreeShift{-1, 0}});
  std::optional<QMatrix> J;
  if (m.J)
    J = m.J->matrix;
  cm.hodge = build_hodge(basis, m.d.matrix, J, assemble_gram(m));
  return cm;
}

namespace detail {

inline void grading_check(Report& r, const std::string& check, const LinearOperator& op) {
  auto bad = op.shift_violation();
  r.expect(!bad, check, bad ? op.basis()->name(bad->first) + " <- " + op.basis()->name(bad->second) : "");
}

inline void table_checks(Report& r, const ModelFile& m, const MultTable& t) {
  const auto& B = *t.basis();
  const std::size_t n = t.dim();
  {
    std::string bad;
    for (const auto& p : m.products)
      if (B.form_degree(p.target) != B.form_degree(p.left) + B.form_degree(p.right))
        bad = B.name(p.left) + " ^ " + B.name(p.right);
    r.expect(bad.empty(), "model.grading.products", bad);
  }
  {
    std::string bad;
    for (std::size_t i = 0; i < n && bad.empty(); ++i)
      for (std::size_t j = 0; j < n && bad.empty(); ++j) {
        if (t.truncated(i, j) != t.truncated(j, i)) {
          bad = B.name(i) + ", " + B.name(j);
          break;
        }
        if (t.truncated(i, j))
          continue;
        Element a = wedge(Element::basis_vector(t.basis(), 0, i), Element::basis_vector(t.basis(), 0, j), t);
        Element b = wedge(Element::basis_vector(t.basis(), 0, j), Element::basis_vector(t.basis(), 0, i), t);
        if (B.odd(i) && B.odd(j))
          b = -b;
        if (a != b)
          bad = B.name(i) + ", " + B.name(j);
      }
    r.expect(bad.empty(), "model.table.graded_commutative", bad);
  }
  {
    std::string bad;
    const Element one = Element::basis_vector(t.basis(), 0, t.identity());
    for (std::size_t i = 0; i < n && bad.empty(); ++i) {
      auto e = Element::basis_vector(t.basis(), 0, i);
      auto l = try_wedge(one, e, t), rr = try_wedge(e, one, t);
      if (!l || !rr || *l != e || *rr != e)
        bad = B.name(i);
    }
    r.expect(bad.empty(), "model.table.unit", bad);
  }
  {
    std::string bad;
    std::size_t checked = 0;
    for (std::size_t a = 0; a < n && bad.empty(); ++a)
      for (std::size_t b = 0; b < n && bad.empty(); ++b) {
        auto ab = try_wedge(Element::basis_vector(t.basis(), 0, a), Element::basis_vector(t.basis(), 0, b), t);
        for (std::size_t c = 0; c < n && bad.empty(); ++c) {
          auto ec = Element::basis_vector(t.basis(), 0, c);
          auto bc = try_wedge(Element::basis_vector(t.basis(), 0, b), ec, t);
          if (!ab || !bc)
            continue;
          auto l = try_wedge(*ab, ec, t);
          auto rr = try_wedge(Element::basis_vector(t.basis(), 0, a), *bc, t);
          if (!l || !rr)
            continue;
          ++checked;
          if (*l != *rr)
            bad = "(" + B.name(a) + ", " + B.name(b) + ", " + B.name(c) + ")";
        }
      }
    r.expect(bad.empty(), "model.table.associative", bad, std::to_string(checked) + " triples checked");
  }
}

} // namespace detail

// Full structural battery; the model is usable only if every check passes.
inline Report validate_model(const ModelFile& m) {
  Report r;
  std::optional<CartanModel> cm;
  try {
    cm = to_cartan_model(m);
    r.pass("model.assembly");
  } catch (const InputError& e) {
    r.fail("model.assembly", e.what());
    return r;
  }
  const auto& B = *cm->basis();
  detail::table_checks(r, m, *cm->table);
  detail::grading_check(r, "model.grading.d", cm->d);
  for (const auto& io : cm->iota)
    detail::grading_check(r, "model.grading." + io.name(), io);
  if (cm->explicit_bv)
    detail::grading_check(r, "model.grading.Delta", *cm->explicit_bv);
  {
    std::string bad;
    for (std::size_t i = 0; i < B.size(); ++i) {
      if (m.integral[i] != 0 && B.form_degree(i) != B.top_degree())
        bad = B.name(i);
      for (const auto& mu : m.mu)
        if (mu[i] != 0 && B.form_degree(i) != 0)
          bad = B.name(i);
      if (m.omega[i] != 0 && B.form_degree(i) != 2)
        bad = B.name(i);
    }
    r.expect(bad.empty(), "model.grading.forms", bad);
  }
  r.merge(cartan_validation(*cm));
  if (m.kahler) {
    r.merge(kahler_suite(cm->hodge));
    r.merge(iota_identity_check(*cm));
  }
  return r;
}

inline void require_valid_model(const ModelFile& m) {
  const Report r = validate_model(m);
  for (const auto& rec : r.records())
    if (rec.status == Status::fail)
      throw ValidationError(rec.check, rec.witness);
}

// "builtin:torus", "builtin:s2" (cap D) or a path to a model file.
inline ModelFile resolve_model(const std::string& spec, std::optional<unsigned> cap, unsigned order) {
  if (spec == "builtin:torus")
    return builtin_torus();
  if (spec == "builtin:s2")
    return builtin_s2(cap ? *cap : estimate_cap(order));
  if (spec.rfind("builtin:", 0) == 0)
    throw InputError("unknown built-in model '" + spec + "'");
  return read_model_file(spec);
}

// Parse and validate.
inline ModelFile load_model(const std::string& path) {
  ModelFile m = read_model_file(path);
  require_valid_model(m);
  return m;
}

} // namespace eqfrob
