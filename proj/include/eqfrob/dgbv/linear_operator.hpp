#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eqfrob/graded/element.hpp"
#include "eqfrob/scalars/fraction_free.hpp"
#include "eqfrob/scalars/matrix.hpp"

namespace eqfrob {

// (form degree, Theta degree) displacement of an operator.  Total degree
// shift is form + 2 * theta.
struct DegreeShift {
  int form = 0;
  int theta = 0;

  int total() const noexcept { return form + 2 * theta; }
  friend auto operator<=>(const DegreeShift&, const DegreeShift&) = default;
};

// Sparse Q[u]-linear operator on a graded basis, stored by columns.  A
// column may be undefined: its image leaves the truncated model, and applying
// the operator to an element with a nonzero coefficient there throws
// CapExceeded.
class LinearOperator {
public:
  using Column = std::map<std::size_t, GroundPoly>;

  LinearOperator(BasisPtr basis, std::size_t nvars, std::string name, std::set<DegreeShift> shifts)
      : basis_(std::move(basis)), nvars_(nvars), name_(std::move(name)), shifts_(std::move(shifts)),
        cols_(basis_->size()), defined_(basis_->size(), true) {
    if (shifts_.empty())
      throw InputError("operator '" + name_ + "' declares no degree shift");
    const bool p = parity_of(*shifts_.begin());
    for (const auto& s : shifts_)
      if (parity_of(s) != p)
        throw InputError("operator '" + name_ + "' mixes parities");
  }

  LinearOperator(BasisPtr basis, std::size_t nvars, std::string name, DegreeShift shift)
      : LinearOperator(std::move(basis), nvars, std::move(name), std::set<DegreeShift>{shift}) {}

  static LinearOperator identity(BasisPtr basis, std::size_t nvars, std::string name = "id") {
    LinearOperator op(basis, nvars, std::move(name), DegreeShift{});
    for (std::size_t i = 0; i < basis->size(); ++i)
      op.set_entry(i, i, GroundPoly(nvars, Rational(1)));
    return op;
  }

  static LinearOperator zero(BasisPtr basis, std::size_t nvars, std::string name, DegreeShift shift) {
    return LinearOperator(std::move(basis), nvars, std::move(name), shift);
  }

  const BasisPtr& basis() const noexcept { return basis_; }
  std::size_t nvars() const noexcept { return nvars_; }
  std::size_t dim() const noexcept { return basis_->size(); }
  const std::string& name() const noexcept { return name_; }
  LinearOperator& rename(std::string n) {
    name_ = std::move(n);
    return *this;
  }
  const std::set<DegreeShift>& shifts() const noexcept { return shifts_; }
  bool odd() const { return parity_of(*shifts_.begin()); }

  void set_entry(std::size_t row, std::size_t col, const GroundPoly& v) {
    check(row, col, v);
    if (v.is_zero())
      cols_[col].erase(row);
    else
      cols_[col][row] = v;
  }
  void set_entry(std::size_t row, std::size_t col, const Rational& v) { set_entry(row, col, GroundPoly(nvars_, v)); }

  void add_entry(std::size_t row, std::size_t col, const GroundPoly& v) {
    check(row, col, v);
    if (v.is_zero())
      return;
    auto [it, inserted] = cols_[col].try_emplace(row, v);
    if (!inserted) {
      it->second += v;
      if (it->second.is_zero())
        cols_[col].erase(it);
    }
  }

  GroundPoly entry(std::size_t row, std::size_t col) const {
    auto it = cols_.at(col).find(row);
    return it == cols_[col].end() ? GroundPoly(nvars_) : it->second;
  }

  const Column& column(std::size_t col) const { return cols_.at(col); }

  void mark_undefined(std::size_t col) {
    defined_.at(col) = false;
    cols_[col].clear();
  }
  bool defined(std::size_t col) const { return defined_.at(col); }
  bool total() const { return std::all_of(defined_.begin(), defined_.end(), [](bool b) { return b; }); }
  std::vector<std::size_t> undefined_columns() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < dim(); ++j)
      if (!defined_[j])
        out.push_back(j);
    return out;
  }

  Element column_element(std::size_t col) const {
    Element e(basis_, nvars_);
    for (const auto& [r, v] : cols_.at(col))
      e.add(r, v);
    return e;
  }

  // Image of x; nullopt (with the offending column) if x touches an
  // undefined column.
  std::optional<Element> try_apply(const Element& x, std::size_t* offending = nullptr) const {
    require_element(x);
    Element out(basis_, nvars_);
    for (const auto& [j, c] : x.coeffs()) {
      if (!defined_[j]) {
        if (offending)
          *offending = j;
        return std::nullopt;
      }
      for (const auto& [i, v] : cols_[j])
        out.add(i, v * c);
    }
    return out;
  }

  Element apply(const Element& x) const {
    std::size_t bad = 0;
    auto r = try_apply(x, &bad);
    if (!r)
      throw CapExceeded("cap exceeded: " + name_ + " applied to " + basis_->name(bad) +
                        " leaves the truncated model; raise the cap");
    return std::move(*r);
  }

  Element operator()(const Element& x) const { return apply(x); }

  // Composition this∘o; a column of o whose image hits an undefined column of
  // this becomes undefined.
  LinearOperator compose(const LinearOperator& o) const {
    require_compatible(o);
    std::set<DegreeShift> sh;
    for (const auto& a : shifts_)
      for (const auto& b : o.shifts_)
        sh.insert({a.form + b.form, a.theta + b.theta});
    LinearOperator out(basis_, nvars_, name_ + "*" + o.name_, std::move(sh));
    for (std::size_t j = 0; j < dim(); ++j) {
      if (!o.defined_[j]) {
        out.defined_[j] = false;
        continue;
      }
      auto img = try_apply(o.column_element(j));
      if (!img) {
        out.defined_[j] = false;
        continue;
      }
      for (const auto& [i, v] : img->coeffs())
        out.cols_[j].emplace(i, v);
    }
    return out;
  }

  friend LinearOperator operator*(const LinearOperator& a, const LinearOperator& b) { return a.compose(b); }

  LinearOperator& operator+=(const LinearOperator& o) { return accumulate(o, Rational(1)); }
  LinearOperator& operator-=(const LinearOperator& o) { return accumulate(o, Rational(-1)); }
  friend LinearOperator operator+(LinearOperator a, const LinearOperator& b) { return a += b; }
  friend LinearOperator operator-(LinearOperator a, const LinearOperator& b) { return a -= b; }

  LinearOperator& operator*=(const GroundPoly& s) {
    if (s.nvars() != nvars_)
      throw InputError("scalar has wrong variable count");
    for (auto& col : cols_) {
      Column next;
      for (auto& [i, v] : col) {
        GroundPoly w = v * s;
        if (!w.is_zero())
          next.emplace(i, std::move(w));
      }
      col = std::move(next);
    }
    std::set<DegreeShift> sh;
    const int th = s.is_zero() ? 0 : s.degree();
    if (!s.is_homogeneous())
      throw InputError("operator scaled by inhomogeneous polynomial");
    for (const auto& d : shifts_)
      sh.insert({d.form, d.theta + th});
    shifts_ = std::move(sh);
    return *this;
  }
  LinearOperator& operator*=(const Rational& s) {
    for (auto& col : cols_) {
      if (s == 0)
        col.clear();
      for (auto& [i, v] : col)
        v *= s;
    }
    return *this;
  }
  friend LinearOperator operator*(const Rational& s, LinearOperator a) { return a *= s; }
  friend LinearOperator operator*(const GroundPoly& s, LinearOperator a) { return a *= s; }
  friend LinearOperator operator-(LinearOperator a) { return a *= Rational(-1); }

  // Graded commutator [a, b] = ab - (-1)^{|a||b|} ba.
  friend LinearOperator graded_commutator(const LinearOperator& a, const LinearOperator& b) {
    LinearOperator ab = a * b;
    LinearOperator ba = b * a;
    return (a.odd() && b.odd()) ? ab + ba : ab - ba;
  }

  // Copy over a ground ring with `nvars` variables; entries must be constant
  // when shrinking.
  LinearOperator lifted(std::size_t nvars) const {
    LinearOperator out(basis_, nvars, name_, shifts_);
    out.defined_ = defined_;
    for (std::size_t j = 0; j < dim(); ++j)
      for (const auto& [i, v] : cols_[j]) {
        if (nvars < nvars_ && !v.is_constant())
          throw InputError("operator '" + name_ + "' has non-constant entries");
        out.cols_[j].emplace(i, v.is_constant() ? GroundPoly(nvars, v.constant_term()) : v.with_nvars(nvars));
      }
    return out;
  }

  // First column where both operators are defined and differ.
  std::optional<std::size_t> differs_on_domain(const LinearOperator& o) const {
    require_compatible(o);
    for (std::size_t j = 0; j < dim(); ++j)
      if (defined_[j] && o.defined_[j] && cols_[j] != o.cols_[j])
        return j;
    return std::nullopt;
  }
  bool equal_on_domain(const LinearOperator& o) const { return !differs_on_domain(o); }

  std::optional<std::size_t> nonzero_on_domain() const {
    for (std::size_t j = 0; j < dim(); ++j)
      if (defined_[j] && !cols_[j].empty())
        return j;
    return std::nullopt;
  }
  bool is_zero_on_domain() const { return !nonzero_on_domain(); }

  friend bool operator==(const LinearOperator& a, const LinearOperator& b) {
    return a.dim() == b.dim() && a.nvars_ == b.nvars_ && a.defined_ == b.defined_ && a.cols_ == b.cols_;
  }

  // Dense matrix (rows = targets); undefined columns are zero.
  PolyMatrix to_poly_matrix() const {
    PolyMatrix m = zero_poly_matrix(dim(), dim(), nvars_);
    for (std::size_t j = 0; j < dim(); ++j)
      for (const auto& [i, v] : cols_[j])
        m(i, j) = v;
    return m;
  }

  QMatrix to_qmatrix() const {
    QMatrix m(dim(), dim(), Rational(0));
    for (std::size_t j = 0; j < dim(); ++j)
      for (const auto& [i, v] : cols_[j]) {
        if (!v.is_constant())
          throw InputError("operator '" + name_ + "' has non-constant entries");
        m(i, j) = v.constant_term();
      }
    return m;
  }

  static LinearOperator from_qmatrix(BasisPtr basis, std::size_t nvars, std::string name,
                                     std::set<DegreeShift> shifts, const QMatrix& m) {
    LinearOperator op(std::move(basis), nvars, std::move(name), std::move(shifts));
    if (m.rows() != op.dim() || m.cols() != op.dim())
      throw InputError("matrix shape does not match basis");
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (m(i, j) != 0)
          op.cols_[j].emplace(i, GroundPoly(nvars, m(i, j)));
    return op;
  }

  // First entry violating the declared shifts, as (row, col).
  std::optional<std::pair<std::size_t, std::size_t>> shift_violation() const {
    for (std::size_t j = 0; j < dim(); ++j)
      for (const auto& [i, v] : cols_[j]) {
        const int df = basis_->form_degree(i) - basis_->form_degree(j);
        for (const auto& [e, c] : v.terms()) {
          const DegreeShift s{df, static_cast<int>(eqfrob::total_degree(e))};
          if (!shifts_.count(s))
            return std::make_pair(i, j);
        }
      }
    return std::nullopt;
  }

private:
  static bool parity_of(const DegreeShift& s) { return (s.form & 1) != 0; }

  void check(std::size_t row, std::size_t col, const GroundPoly& v) const {
    if (row >= dim() || col >= dim())
      throw InputError("operator '" + name_ + "' entry out of range");
    if (v.nvars() != nvars_)
      throw InputError("operator '" + name_ + "' entry has wrong variable count");
    if (!defined_[col])
      throw InputError("operator '" + name_ + "' entry in undefined column " + basis_->name(col));
  }

  void require_element(const Element& x) const {
    if (x.dim() != dim() || x.nvars() != nvars_)
      throw InputError("operator '" + name_ + "' applied to incompatible element");
  }

  void require_compatible(const LinearOperator& o) const {
    if (o.dim() != dim() || o.nvars_ != nvars_)
      throw InputError("incompatible operators '" + name_ + "' and '" + o.name_ + "'");
  }

  LinearOperator& accumulate(const LinearOperator& o, const Rational& sign) {
    require_compatible(o);
    if (o.odd() != odd())
      throw InputError("sum of operators of different parity");
    shifts_.insert(o.shifts_.begin(), o.shifts_.end());
    for (std::size_t j = 0; j < dim(); ++j) {
      if (!defined_[j] || !o.defined_[j]) {
        defined_[j] = false;
        cols_[j].clear();
        continue;
      }
      for (const auto& [i, v] : o.cols_[j]) {
        auto [it, inserted] = cols_[j].try_emplace(i, v * sign);
        if (!inserted) {
          it->second += v * sign;
          if (it->second.is_zero())
            cols_[j].erase(it);
        }
      }
    }
    return *this;
  }

  BasisPtr basis_;
  std::size_t nvars_;
  std::string name_;
  std::set<DegreeShift> shifts_;
  std::vector<Column> cols_;
  std::vector<bool> defined_;
};

} // namespace eqfrob
