#ifndef MARTLAT_CORPUS_HPP
#define MARTLAT_CORPUS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "martlat/serialize.hpp"

namespace martlat {

inline constexpr const char* kToolVersion = "martlat 0.1.0";
inline constexpr int kSchemaVersion = 1;

enum class AssertionKind {
  FiltrationValid,
  MartingaleValid,
  NormEquals,
  NormGreater,
  ModulusEquals,
  KrickebergMismatch,
  ShrinkChain,
  NotInSpace,
  Domination,
  RegularNormEquals,
  SequenceEquals,
};
std::string to_string(AssertionKind k);
std::optional<AssertionKind> parse_assertion_kind(const std::string& name);

/// One check of a scenario. Arguments stay in JSON form and are decoded when
/// the scenario is loaded (schema check) and again when it runs.
struct Assertion {
  AssertionKind kind = AssertionKind::FiltrationValid;
  Json args = Json::object();  // the assertion object without "kind"
};

struct Scenario {
  std::string id;
  std::string citation;
  std::string description;
  SpaceKind space;
  NormKind norm = NormKind::Sup;
  long horizon = 1;
  long probe_horizon = kDefaultProbeHorizon;
  std::optional<std::uint64_t> seed;
  Filtration filtration;
  std::map<std::string, Martingale> martingales;
  std::vector<Assertion> assertions;
};

Json to_json(const Scenario& s);
/// Full schema check; ParseError carries the JSON pointer of the offending value.
Scenario scenario_from_json(const Json& j);
Scenario load_scenario_file(const std::string& path);

/// Copy whose martingales are extended (term rule or closed terminal term)
/// or truncated to `horizon`, with the filtration materialized that far.
Scenario with_horizon(const Scenario& s, long horizon);

struct AssertionOutcome {
  std::size_t index = 0;
  std::string kind;
  std::string summary;  // what was checked
  bool passed = false;
  std::string witness;  // why it failed
  std::string note;     // extra facts worth showing either way
};

struct Report {
  std::string scenario_id;
  std::string citation;
  std::string tool_version = kToolVersion;
  std::vector<AssertionOutcome> outcomes;
  double elapsed_ms = 0;

  bool passed() const;
  /// Timing is omitted when `with_timing` is false, which makes reports
  /// byte-comparable across runs.
  Json to_json(bool with_timing = true) const;
  std::string to_text(bool with_timing = true) const;
};

/// Evaluates every assertion. Schema problems in assertion arguments throw ParseError.
Report run_scenario(const Scenario& s);

// ------------------------------------------------------------- built-ins

std::vector<std::string> builtin_scenario_ids();
/// Throws PreconditionError for an unknown id.
Scenario builtin_scenario(const std::string& id);

// ------------------------------------------------------- random instances

struct RandomInstanceOptions {
  bool uniform_weights = false;  // uniform weights make every level an l1 contraction
  bool positive = false;         // nonnegative terminal vector
};

/// Nested partitions of {1..d} (coarsest at level 1), positive integer
/// weights, levels as weighted conditional expectations (finest level
/// repeated up to the horizon) and X given by x_n = E_n x_horizon for a random
/// terminal vector. Deterministic in the seed.
Scenario generate_random_instance(std::uint64_t seed, std::size_t d, long levels, long horizon,
                                  RandomInstanceOptions opts = {});

// -------------------------------------------------------- property suites

std::vector<std::string> suite_names();

struct SuiteInstanceOutcome {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string status;  // "fail" or "skipped"
  std::string detail;
  std::optional<Json> scenario;  // reproducing scenario for failures
};

struct ControlOutcome {
  std::string name;
  std::string expected;  // "fail" or "skipped"
  std::string observed;
  std::string detail;
  bool behaved() const { return expected == observed; }
};

struct SuiteReport {
  std::string name;
  std::string citation;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
  std::vector<std::string> notes;
  std::vector<SuiteInstanceOutcome> exceptions;  // failures and skips, by index
  std::vector<ControlOutcome> controls;
  double elapsed_ms = 0;

  bool ok() const;
  Json to_json(bool with_timing = true) const;
  std::string to_text(bool with_timing = true) const;
};

/// Throws PreconditionError for an unknown name or count < 1.
SuiteReport run_property_suite(const std::string& name, std::size_t count, std::uint64_t seed);

}  // namespace martlat

#endif  // MARTLAT_CORPUS_HPP
