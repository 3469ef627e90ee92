// martlat command-line interface.
//
// Exit status: 0 when every assertion passes, 1 when one fails, 2 on bad input.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "martlat/corpus.hpp"
#include "martlat/error.hpp"

namespace {

using namespace martlat;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInputError = 2;

struct Globals {
  std::string format = "text";
  long horizon = 0;  // 0: keep the scenario's horizon
};

bool json_out(const Globals& g) { return g.format == "json"; }

Scenario prepare(Scenario s, const Globals& g) { return g.horizon > 0 ? with_horizon(s, g.horizon) : s; }

const std::string& pick_martingale(const Scenario& s, const std::string& requested) {
  if (!requested.empty()) {
    auto it = s.martingales.find(requested);
    if (it == s.martingales.end()) throw ParseError("scenario has no martingale \"" + requested + "\"", "/martingales");
    return it->first;
  }
  auto it = s.martingales.find("X");
  if (it == s.martingales.end()) it = s.martingales.begin();
  if (it == s.martingales.end()) throw ParseError("scenario defines no martingales", "/martingales");
  return it->first;
}

int emit_report(const Report& r, const Globals& g) {
  if (json_out(g)) std::cout << r.to_json().dump(2) << "\n";
  else std::cout << r.to_text();
  return r.passed() ? kPass : kFail;
}

int cmd_validate(const std::string& file, const Globals& g) {
  return emit_report(run_scenario(prepare(load_scenario_file(file), g)), g);
}

int cmd_demo(const std::string& id, bool list, const Globals& g) {
  if (list || id.empty()) {
    for (const auto& name : builtin_scenario_ids()) std::cout << name << "\n";
    return kPass;
  }
  Scenario s;
  try {
    s = builtin_scenario(id);
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
  return emit_report(run_scenario(prepare(s, g)), g);
}

int cmd_export(const std::string& id) {
  Scenario s;
  try {
    s = builtin_scenario(id);
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
  std::cout << to_json(s).dump(2) << "\n";
  return kPass;
}

int cmd_modulus(const std::string& file, long probe_horizon, const std::string& name, const Globals& g) {
  const Scenario s = prepare(load_scenario_file(file), g);
  const std::string& x = pick_martingale(s, name);
  const long ph = probe_horizon > 0 ? probe_horizon : s.probe_horizon;
  const ModulusResult r = krickeberg_modulus(s.martingales.at(x), s.filtration, ph);
  if (json_out(g)) {
    Json j = {{"scenario", s.id}, {"martingale", x},          {"method", to_string(r.method)},
              {"stabilized", r.stabilized}, {"probe_horizon", ph}, {"tool_version", kToolVersion}};
    if (r.modulus) j["modulus"] = to_json(*r.modulus);
    if (r.formula_terms) j["formula_terms"] = to_json(*r.formula_terms);
    if (r.mismatch) j["mismatch"] = *r.mismatch;
    if (!r.diagnostics.empty()) j["diagnostics"] = r.diagnostics;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "modulus of " << x << " in " << s.id << " (probe horizon " << ph << ")\n";
    std::cout << "method: " << to_string(r.method) << ", " << (r.stabilized ? "stabilized" : "not stabilized") << "\n";
    if (r.modulus) {
      for (long n = r.modulus->start_index(); n <= r.modulus->horizon(); ++n)
        std::cout << "  |" << x << "|_" << n << " = " << r.modulus->term(n) << "\n";
    }
    if (r.mismatch) std::cout << "mismatch: " << *r.mismatch << "\n";
    if (!r.diagnostics.empty()) std::cout << "diagnostics: " << r.diagnostics << "\n";
    if (!r.modulus) std::cout << "no verified modulus\n";
  }
  return r.modulus ? kPass : kFail;
}

int cmd_regnorm(const std::string& file, const std::string& norm, const std::string& name, const Globals& g) {
  const Scenario s = prepare(load_scenario_file(file), g);
  const std::string& x = pick_martingale(s, name);
  const NormKind kind = norm.empty() ? s.norm : parse_norm_kind(norm);
  const RegularNormResult r = regular_norm(s.martingales.at(x), s.filtration, kind, s.probe_horizon);
  const MartingaleNorm plain = martingale_norm(s.martingales.at(x), kind);
  const char* status = r.status == RegularNormResult::Status::Ok           ? "ok"
                       : r.status == RegularNormResult::Status::NotRegular ? "not regular at horizon"
                                                                             : "undetermined";
  if (json_out(g)) {
    Json j = {{"scenario", s.id}, {"martingale", x}, {"norm", to_string(kind)}, {"status", status}, {"route", r.route},
              {"martingale_norm", plain.value.str()},
              {"martingale_norm_exactness", plain.exactness == Exactness::Exact ? "exact" : "lower_bound"},
              {"tool_version", kToolVersion}};
    if (r.status == RegularNormResult::Status::Ok) j["regular_norm"] = r.value.str();
    if (!r.detail.empty()) j["detail"] = r.detail;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "||" << x << "||_r (" << to_string(kind) << ") in " << s.id << ": ";
    if (r.status == RegularNormResult::Status::Ok) std::cout << r.value << "  [route " << r.route << "]\n";
    else std::cout << status << (r.detail.empty() ? "" : ": " + r.detail) << "\n";
    std::cout << "||" << x << "|| = " << plain.value.str()
              << (plain.exactness == Exactness::Exact ? "" : " (lower bound)") << "\n";
  }
  return r.status == RegularNormResult::Status::Ok ? kPass : kFail;
}

int cmd_suite(const std::string& name, std::size_t count, std::uint64_t seed, const Globals& g) {
  SuiteReport r;
  try {
    r = run_property_suite(name, count, seed);
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
  if (json_out(g)) std::cout << r.to_json().dump(2) << "\n";
  else std::cout << r.to_text();
  return r.ok() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"martlat: exact computations with filtrations and martingales on vector lattices"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  Globals g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--horizon", g.horizon, "Extend or truncate every martingale to this horizon")
      ->check(CLI::NonNegativeNumber);

  std::string file, id, norm, name, suite;
  long probe_horizon = 0;
  bool list = false;
  std::size_t count = 100;
  std::uint64_t seed = 1;

  auto* validate = app.add_subcommand("validate", "Run every assertion of a scenario file");
  validate->add_option("file", file, "Scenario JSON")->required();

  auto* modulus = app.add_subcommand("modulus", "Krickeberg modulus of a scenario martingale");
  modulus->add_option("file", file, "Scenario JSON")->required();
  modulus->add_option("--probe-horizon", probe_horizon, "Last index m probed in E_n|x_m|")->check(CLI::PositiveNumber);
  modulus->add_option("--martingale", name, "Martingale name (default X)");

  auto* regnorm = app.add_subcommand("regnorm", "Regular norm of a scenario martingale");
  regnorm->add_option("file", file, "Scenario JSON")->required();
  regnorm->add_option("--norm", norm, "sup, l1 or sup-limsup (default: the scenario norm)")
      ->check(CLI::IsMember({"sup", "l1", "sup-limsup"}));
  regnorm->add_option("--martingale", name, "Martingale name (default X)");

  auto* demo = app.add_subcommand("demo", "Run a built-in scenario");
  demo->add_option("scenario", id, "Scenario id");
  demo->add_flag("--list", list, "List built-in scenario ids");

  auto* exp = app.add_subcommand("export", "Print a built-in scenario as JSON");
  exp->add_option("scenario", id, "Scenario id")->required();

  auto* suite_cmd = app.add_subcommand("suite", "Run a property suite on random instances");
  suite_cmd->add_option("name", suite, "oracle_equivalence, regnorm_axioms, fatou, ideal or lattice_axioms")->required();
  suite_cmd->add_option("--count", count, "Number of instances")->check(CLI::PositiveNumber);
  suite_cmd->add_option("--seed", seed, "Base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*validate) return cmd_validate(file, g);
    if (*modulus) return cmd_modulus(file, probe_horizon, name, g);
    if (*regnorm) return cmd_regnorm(file, norm, name, g);
    if (*demo) return cmd_demo(id, list, g);
    if (*exp) return cmd_export(id);
    if (*suite_cmd) return cmd_suite(suite, count, seed, g);
  } catch (const ParseError& e) {
    std::cerr << "martlat: input error: " << e.what() << "\n";
    return kInputError;
  } catch (const PreconditionError& e) {
    std::cerr << "martlat: input error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "martlat: " << e.what() << "\n";
    return kFail;
  }
  return kInputError;
}
