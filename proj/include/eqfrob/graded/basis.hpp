#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqfrob/errors.hpp"

namespace eqfrob {

// Finite homogeneous basis of a graded module of invariant forms.
class GradedBasis {
public:
  struct Entry {
    std::string name;
    int form_degree = 0;
    std::optional<std::pair<int, int>> bidegree;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  explicit GradedBasis(std::vector<Entry> entries) : entries_(std::move(entries)) {
    std::map<int, int> with_bideg, without_bideg;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& e = entries_[i];
      if (e.form_degree < 0)
        throw InputError("basis entry '" + e.name + "' has negative form degree");
      if (!index_.emplace(e.name, i).second)
        throw InputError("duplicate basis name '" + e.name + "'");
      if (e.bidegree) {
        if (e.bidegree->first < 0 || e.bidegree->second < 0 ||
            e.bidegree->first + e.bidegree->second != e.form_degree)
          throw InputError("basis entry '" + e.name + "' has bidegree inconsistent with form degree");
        ++with_bideg[e.form_degree];
      } else {
        ++without_bideg[e.form_degree];
      }
      if (e.form_degree > top_degree_)
        top_degree_ = e.form_degree;
    }
    bigraded_ = !with_bideg.empty();
    for (const auto& [deg, count] : with_bideg)
      if (without_bideg.count(deg))
        bigraded_ = false;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  const Entry& entry(std::size_t i) const { return entries_.at(i); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  const std::string& name(std::size_t i) const { return entries_.at(i).name; }
  int form_degree(std::size_t i) const { return entries_[i].form_degree; }
  bool odd(std::size_t i) const { return (entries_[i].form_degree & 1) != 0; }
  int top_degree() const noexcept { return top_degree_; }

  // True when every entry carries a bidegree.
  bool bigraded() const noexcept { return bigraded_; }

  std::optional<std::size_t> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
      return std::nullopt;
    return it->second;
  }

  std::size_t index_of(const std::string& name) const {
    auto i = find(name);
    if (!i)
      throw InputError("unknown basis name '" + name + "'");
    return *i;
  }

  std::vector<std::size_t> indices_of_degree(int deg) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < entries_.size(); ++i)
      if (entries_[i].form_degree == deg)
        out.push_back(i);
    return out;
  }

  friend bool operator==(const GradedBasis& a, const GradedBasis& b) { return a.entries_ == b.entries_; }

private:
  std::vector<Entry> entries_;
  std::map<std::string, std::size_t> index_;
  int top_degree_ = 0;
  bool bigraded_ = false;
};

using BasisPtr = std::shared_ptr<const GradedBasis>;

} // namespace eqfrob
