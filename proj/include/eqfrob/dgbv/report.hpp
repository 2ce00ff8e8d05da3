#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace eqfrob {

enum class Status { pass, fail, skipped };

inline const char* to_string(Status s) {
  switch (s) {
  case Status::pass:
    return "pass";
  case Status::fail:
    return "fail";
  case Status::skipped:
    return "skipped";
  }
  return "?";
}

struct CheckRecord {
  std::string check;
  Status status = Status::pass;
  std::string witness;
  std::string lhs;
  std::string rhs;
  std::string note;
};

// Ordered list of check outcomes.  Failures are data, not exceptions.
class Report {
public:
  void add(CheckRecord r) { records_.push_back(std::move(r)); }

  void pass(std::string check, std::string note = {}) {
    add({std::move(check), Status::pass, {}, {}, {}, std::move(note)});
  }
  void fail(std::string check, std::string witness, std::string lhs = {}, std::string rhs = {},
            std::string note = {}) {
    add({std::move(check), Status::fail, std::move(witness), std::move(lhs), std::move(rhs), std::move(note)});
  }
  void skip(std::string check, std::string note) {
    add({std::move(check), Status::skipped, {}, {}, {}, std::move(note)});
  }
  void expect(bool ok, std::string check, std::string witness = {}, std::string note = {}) {
    if (ok)
      pass(std::move(check), std::move(note));
    else
      fail(std::move(check), std::move(witness), {}, {}, std::move(note));
  }

  void merge(const Report& o) { records_.insert(records_.end(), o.records_.begin(), o.records_.end()); }

  const std::vector<CheckRecord>& records() const noexcept { return records_; }
  bool empty() const noexcept { return records_.empty(); }

  bool passed() const {
    for (const auto& r : records_)
      if (r.status == Status::fail)
        return false;
    return true;
  }

  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& r : records_)
      n += r.status == Status::fail;
    return n;
  }

  // Status of the named check; fail dominates pass, absent is skipped.
  Status status_of(const std::string& check) const {
    bool seen = false;
    for (const auto& r : records_)
      if (r.check == check) {
        if (r.status == Status::fail)
          return Status::fail;
        seen = seen || r.status == Status::pass;
      }
    return seen ? Status::pass : Status::skipped;
  }

  const CheckRecord* find(const std::string& check) const {
    for (const auto& r : records_)
      if (r.check == check)
        return &r;
    return nullptr;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : records_) {
      nlohmann::ordered_json j;
      j["check"] = r.check;
      j["status"] = to_string(r.status);
      if (!r.witness.empty())
        j["witness"] = r.witness;
      if (!r.lhs.empty())
        j["lhs"] = r.lhs;
      if (!r.rhs.empty())
        j["rhs"] = r.rhs;
      if (!r.note.empty())
        j["note"] = r.note;
      arr.push_back(std::move(j));
    }
    return arr;
  }

private:
  std::vector<CheckRecord> records_;
};

} // namespace eqfrob
