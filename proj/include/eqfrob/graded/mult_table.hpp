#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eqfrob/graded/element.hpp"

namespace eqfrob {

// Structure constants e_i ^ e_j = sum_k c_ij^k e_k of a graded-commutative
// algebra.  Pairs whose true product leaves the truncated model are flagged
// and refuse to multiply.
class MultTable {
public:
  using Terms = std::vector<std::pair<std::size_t, Rational>>;

  MultTable(BasisPtr basis, std::size_t identity) : basis_(std::move(basis)), identity_(identity) {
    if (identity_ >= basis_->size())
      throw InputError("identity index out of range");
  }

  const BasisPtr& basis() const noexcept { return basis_; }
  std::size_t identity() const noexcept { return identity_; }
  std::size_t dim() const noexcept { return basis_->size(); }

  void set_product(std::size_t i, std::size_t j, Terms terms) {
    check_index(i);
    check_index(j);
    Terms clean;
    for (auto& [k, c] : terms) {
      check_index(k);
      if (c != 0)
        clean.emplace_back(k, c);
    }
    if (clean.empty())
      products_.erase({i, j});
    else
      products_[{i, j}] = std::move(clean);
  }

  void mark_truncated(std::size_t i, std::size_t j) {
    check_index(i);
    check_index(j);
    truncated_.insert({i, j});
  }

  bool truncated(std::size_t i, std::size_t j) const { return truncated_.count({i, j}) != 0; }
  const std::set<std::pair<std::size_t, std::size_t>>& truncation_flags() const noexcept { return truncated_; }
  const std::map<std::pair<std::size_t, std::size_t>, Terms>& products() const noexcept { return products_; }

  // Product of two basis elements; nullopt when the pair is truncated.
  std::optional<Terms> product(std::size_t i, std::size_t j) const {
    if (truncated(i, j))
      return std::nullopt;
    auto it = products_.find({i, j});
    if (it == products_.end())
      return Terms{};
    return it->second;
  }

  const Terms* product_ptr(std::size_t i, std::size_t j) const {
    static const Terms empty;
    auto it = products_.find({i, j});
    return it == products_.end() ? &empty : &it->second;
  }

private:
  void check_index(std::size_t i) const {
    if (i >= basis_->size())
      throw InputError("multiplication table index out of range");
  }

  BasisPtr basis_;
  std::size_t identity_;
  std::map<std::pair<std::size_t, std::size_t>, Terms> products_;
  std::set<std::pair<std::size_t, std::size_t>> truncated_;
};

// Bilinear extension of the table; nullopt if a truncated pair is hit with
// nonzero coefficients.  Ground coefficients are even, so no Koszul sign
// arises between them and forms.
inline std::optional<Element> try_wedge(const Element& a, const Element& b, const MultTable& table,
                                        std::pair<std::size_t, std::size_t>* offending = nullptr) {
  if (a.nvars() != b.nvars() || a.dim() != table.dim() || b.dim() != table.dim())
    throw InputError("wedge of incompatible elements");
  Element out(a.basis(), a.nvars());
  for (const auto& [i, ca] : a.coeffs())
    for (const auto& [j, cb] : b.coeffs()) {
      if (table.truncated(i, j)) {
        if (offending)
          *offending = {i, j};
        return std::nullopt;
      }
      const auto* terms = table.product_ptr(i, j);
      if (terms->empty())
        continue;
      const GroundPoly c = ca * cb;
      for (const auto& [k, s] : *terms)
        out.add(k, c * s);
    }
  return out;
}

inline Element wedge(const Element& a, const Element& b, const MultTable& table) {
  std::pair<std::size_t, std::size_t> bad;
  auto r = try_wedge(a, b, table, &bad);
  if (!r)
    throw CapExceeded("cap exceeded: product " + table.basis()->name(bad.first) + " ^ " +
                      table.basis()->name(bad.second) + " leaves the truncated model");
  return std::move(*r);
}

inline Element identity_element(const MultTable& table, std::size_t nvars) {
  return Element::basis_vector(table.basis(), nvars, table.identity());
}

} // namespace eqfrob
