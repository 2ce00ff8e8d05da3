// eqfrob: command-line driver for the invariant-form pipeline.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "eqfrob.hpp"

namespace {

using namespace eqfrob;

constexpr const char* kReportSchema = "eqfrob-report/1";

enum Exit { ok = 0, check_failed = 1, input_error = 2, cap_exceeded = 3 };

struct Options {
  std::string command;
  std::string model = "builtin:s2";
  unsigned order = 5;
  std::optional<unsigned> cap;
  std::string out;
  std::string format = "text";
};

void print_text(std::ostream& os, const Options& opt, const Outcome& o) {
  os << opt.command << " " << opt.model << " (order " << opt.order << ")\n";
  for (const auto& r : o.report.records()) {
    os << (r.status == Status::pass ? "PASS " : r.status == Status::fail ? "FAIL " : "SKIP ") << r.check;
    if (!r.witness.empty())
      os << "  witness: " << r.witness;
    if (!r.lhs.empty() || !r.rhs.empty())
      os << "  lhs: " << r.lhs << "  rhs: " << r.rhs;
    if (!r.note.empty())
      os << "  (" << r.note << ")";
    os << "\n";
  }
  for (const char* key : {"potential_text", "ordinary_potential_text"})
    if (o.artifacts.contains(key))
      os << key << ": " << o.artifacts[key].get<std::string>() << "\n";
  os << (o.report.passed() ? "all checks passed" : std::to_string(o.report.failures()) + " check(s) failed") << "\n";
}

ojson envelope(const Options& opt, const std::string& status) {
  ojson j;
  j["schema"] = kReportSchema;
  j["command"] = opt.command;
  j["model"] = opt.model;
  j["order"] = opt.order;
  j["status"] = status;
  return j;
}

void emit(const Options& opt, const ojson& j, const std::string& text) {
  const std::string body = opt.format == "json" ? j.dump(2) + "\n" : text;
  if (opt.out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream f(opt.out);
  if (!f)
    throw InputError("cannot write '" + opt.out + "'");
  f << body;
}

int run_error(const Options& opt, const std::string& status, const std::string& msg, int code) {
  ojson j = envelope(opt, status);
  j["error"] = msg;
  std::cerr << "eqfrob: " << msg << "\n";
  emit(opt, j, status + ": " + msg + "\n");
  return code;
}

int run(const Options& opt) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  Outcome o;
  if (opt.command == "validate") {
    ModelFile m = resolve_model(opt.model, opt.cap, opt.order);
    o.report = validate_model(m);
  } else {
    Pipeline p(resolve_model(opt.model, opt.cap, opt.order), opt.order);
    const std::map<std::string, std::function<Outcome()>> stages = {
        {"axioms", [&] { return p.axioms(); }},
        {"hodge", [&] { return p.hodge(); }},
        {"extend", [&] { return p.extend(); }},
        {"cohomology", [&] { return p.cohomology(); }},
        {"condition-c", [&] { return p.condition_c(); }},
        {"solve", [&] { return p.solve(); }},
        {"potential", [&] { return p.potential_checks(); }},
        {"wdvv", [&] { return p.wdvv(); }},
        {"specialize", [&] { return p.specialize(); }},
        {"report", [&] { return p.everything(); }},
    };
    o = stages.at(opt.command)();
  }
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  ojson j = envelope(opt, o.report.passed() ? "pass" : "fail");
  j["checks"] = o.report.to_json();
  j["artifacts"] = o.artifacts;
  j["timings"] = {{"total_ms", ms}};
  std::ostringstream text;
  print_text(text, opt, o);
  emit(opt, j, text.str());
  return o.report.passed() ? Exit::ok : Exit::check_failed;
}

} // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Equivariant DGBV / Frobenius manifold toolkit"};
  app.require_subcommand(1, 1);
  const std::pair<const char*, const char*> commands[] = {
      {"validate", "check the model file"},
      {"axioms", "DGBV and integral axioms"},
      {"hodge", "Kahler identities, Green operator, harmonic projector"},
      {"extend", "extend harmonic forms to equivariantly closed ones"},
      {"cohomology", "equivariant vs ordinary cohomology rank"},
      {"condition-c", "ker Delta / ker delta inclusions"},
      {"solve", "Maurer-Cartan solution to the given order"},
      {"potential", "potential, metric and symmetry checks"},
      {"wdvv", "WDVV residual"},
      {"specialize", "compare with the non-equivariant potential"},
      {"report", "everything above"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--model", opt.model, "model file, builtin:torus or builtin:s2");
    sub->add_option("--order", opt.order, "MC order N")->check(CLI::Range(1u, 64u));
    sub->add_option("--cap", opt.cap, "z-degree cap for builtin:s2");
    sub->add_option("--out", opt.out, "write the report here");
    sub->add_option("--format", opt.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->callback([&opt, name] { opt.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : Exit::input_error;
  }
  try {
    return run(opt);
  } catch (const CapExceeded& e) {
    return run_error(opt, "cap_exceeded", e.what(), Exit::cap_exceeded);
  } catch (const ValidationError& e) {
    return run_error(opt, "invalid_model", e.what(), Exit::input_error);
  } catch (const InputError& e) {
    return run_error(opt, "input_error", e.what(), Exit::input_error);
  } catch (const MathError& e) {
    return run_error(opt, "math_error", e.what(), Exit::check_failed);
  }
}
