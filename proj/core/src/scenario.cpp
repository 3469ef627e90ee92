#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

#include "martlat/corpus.hpp"
#include "martlat/error.hpp"

namespace martlat {

using namespace json_detail;

namespace {

std::string at(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string at(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

const std::pair<AssertionKind, const char*> kKindNames[] = {
    {AssertionKind::FiltrationValid, "filtration_valid"},
    {AssertionKind::MartingaleValid, "martingale_valid"},
    {AssertionKind::NormEquals, "norm_equals"},
    {AssertionKind::NormGreater, "norm_greater"},
    {AssertionKind::ModulusEquals, "modulus_equals"},
    {AssertionKind::KrickebergMismatch, "krickeberg_mismatch"},
    {AssertionKind::ShrinkChain, "shrink_chain"},
    {AssertionKind::NotInSpace, "not_in_space"},
    {AssertionKind::Domination, "domination"},
    {AssertionKind::RegularNormEquals, "regular_norm_equals"},
    {AssertionKind::SequenceEquals, "sequence_equals"},
};

}  // namespace

std::string to_string(AssertionKind k) {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "?";
}

std::optional<AssertionKind> parse_assertion_kind(const std::string& name) {
  for (const auto& [kind, n] : kKindNames)
    if (name == n) return kind;
  return std::nullopt;
}

// ============================================================ typed arguments

namespace {

/// Failure while evaluating an assertion (not a schema problem).
struct EvalFailure : Error {
  using Error::Error;
};

struct SeqExpr {
  enum class Op { Term, Literal, Abs, ApplyLevel, JoinAbs, JoinAbsLimit, ModulusTerm, FormulaTerm };
  Op op = Op::Literal;
  std::string mart;
  long n = 0;
  long from = 0;
  long to = 0;
  ExtSeq literal;
  std::shared_ptr<SeqExpr> inner;
};

const Martingale& named(const Scenario& s, const Json& j, const std::string& path) {
  const std::string name = require_string(j, path);
  auto it = s.martingales.find(name);
  if (it == s.martingales.end()) throw ParseError("unknown martingale \"" + name + "\"", path);
  return it->second;
}

std::string name_of(const Json& j, const std::string& path) { return require_string(j, path); }

SeqExpr parse_seq(const Scenario& s, const Json& j, const std::string& path) {
  if (!j.is_object() || j.size() != 1) throw ParseError("sequence expression must be an object with one member", path);
  const std::string op = j.begin().key();
  const Json& a = j.begin().value();
  const std::string p = at(path, op);
  SeqExpr e;
  auto mart_ref = [&] {
    named(s, require(a, "martingale", p), at(p, "martingale"));
    e.mart = a["martingale"].get<std::string>();
  };
  if (op == "literal") {
    e.op = SeqExpr::Op::Literal;
    e.literal = ext_seq_from_json(a, p);
  } else if (op == "term" || op == "modulus_term" || op == "formula_term") {
    e.op = op == "term" ? SeqExpr::Op::Term : op == "modulus_term" ? SeqExpr::Op::ModulusTerm : SeqExpr::Op::FormulaTerm;
    mart_ref();
    e.n = require_integer(require(a, "n", p), at(p, "n"));
  } else if (op == "abs") {
    e.op = SeqExpr::Op::Abs;
    e.inner = std::make_shared<SeqExpr>(parse_seq(s, a, p));
  } else if (op == "apply_level") {
    e.op = SeqExpr::Op::ApplyLevel;
    e.n = require_integer(require(a, "level", p), at(p, "level"));
    e.inner = std::make_shared<SeqExpr>(parse_seq(s, require(a, "seq", p), at(p, "seq")));
  } else if (op == "join_abs" || op == "join_abs_limit") {
    e.op = op == "join_abs" ? SeqExpr::Op::JoinAbs : SeqExpr::Op::JoinAbsLimit;
    mart_ref();
    const Martingale& x = s.martingales.at(e.mart);
    e.from = a.contains("from") ? require_integer(a["from"], at(p, "from")) : x.start_index();
    e.to = a.contains("to") ? require_integer(a["to"], at(p, "to")) : x.horizon();
    if (e.to < e.from) throw ParseError("empty index range", p);
  } else {
    throw ParseError("unknown sequence expression \"" + op + "\"", path);
  }
  return e;
}

struct NormTarget {
  std::optional<std::string> mart;
  std::optional<long> term;
  std::optional<SeqExpr> seq;
  NormKind kind = NormKind::Sup;
};

NormTarget parse_norm_target(const Scenario& s, const Json& a, const std::string& p) {
  NormTarget t;
  t.kind = a.contains("norm") ? norm_from_json(a["norm"], at(p, "norm")) : s.norm;
  if (a.contains("seq")) {
    t.seq = parse_seq(s, a["seq"], at(p, "seq"));
  } else {
    named(s, require(a, "martingale", p), at(p, "martingale"));
    t.mart = a["martingale"].get<std::string>();
    if (a.contains("term")) t.term = require_integer(a["term"], at(p, "term"));
  }
  return t;
}

std::optional<bool> opt_bool(const Json& a, const std::string& key, const std::string& p) {
  if (!a.contains(key)) return std::nullopt;
  return require_bool(a[key], at(p, key));
}

long opt_long(const Json& a, const std::string& key, const std::string& p, long dflt) {
  return a.contains(key) ? require_integer(a[key], at(p, key)) : dflt;
}

NormValue norm_value_from_json(const Json& j, const std::string& path) {
  if (j.is_string() && j.get<std::string>() == "inf") return NormValue::infinity();
  return NormValue::finite(rational_from_json(j, path));
}

/// Decodes every argument of an assertion; used for the load-time schema check.
void check_assertion_args(const Scenario& s, const Assertion& as, const std::string& p) {
  const Json& a = as.args;
  switch (as.kind) {
    case AssertionKind::FiltrationValid:
      opt_bool(a, "expect", p);
      opt_long(a, "through", p, 0);
      if (a.contains("op_norm")) {
        norm_from_json(require(a["op_norm"], "norm", at(p, "op_norm")), at(at(p, "op_norm"), "norm"));
        rational_from_json(require(a["op_norm"], "value", at(p, "op_norm")), at(at(p, "op_norm"), "value"));
      }
      break;
    case AssertionKind::MartingaleValid:
      named(s, require(a, "martingale", p), at(p, "martingale"));
      opt_bool(a, "expect", p);
      opt_bool(a, "supermartingale", p);
      break;
    case AssertionKind::NormEquals:
      parse_norm_target(s, a, p);
      norm_value_from_json(require(a, "value", p), at(p, "value"));
      if (a.contains("exactness")) {
        const auto e = require_string(a["exactness"], at(p, "exactness"));
        if (e != "exact" && e != "lower_bound") throw ParseError("expected \"exact\" or \"lower_bound\"", at(p, "exactness"));
      }
      break;
    case AssertionKind::NormGreater:
      parse_norm_target(s, a, p);
      rational_from_json(require(a, "than", p), at(p, "than"));
      break;
    case AssertionKind::ModulusEquals:
      named(s, require(a, "martingale", p), at(p, "martingale"));
      named(s, require(a, "expected", p), at(p, "expected"));
      opt_long(a, "probe_horizon", p, 0);
      opt_bool(a, "stabilized", p);
      if (a.contains("oracle")) {
        const auto o = require_string(a["oracle"], at(p, "oracle"));
        if (o != "krickeberg" && o != "lp" && o != "sup") throw ParseError("expected krickeberg, lp or sup", at(p, "oracle"));
      }
      if (a.contains("method")) require_string(a["method"], at(p, "method"));
      if (a.contains("below")) {
        const Json& b = require_array(a["below"], at(p, "below"));
        for (std::size_t i = 0; i < b.size(); ++i) named(s, b[i], at(at(p, "below"), i));
      }
      break;
    case AssertionKind::KrickebergMismatch:
      named(s, require(a, "martingale", p), at(p, "martingale"));
      opt_long(a, "probe_horizon", p, 0);
      if (a.contains("formula_initial")) parse_seq(s, a["formula_initial"], at(p, "formula_initial"));
      if (a.contains("modulus_initial")) parse_seq(s, a["modulus_initial"], at(p, "modulus_initial"));
      break;
    case AssertionKind::ShrinkChain: {
      named(s, require(a, "dominating", p), at(p, "dominating"));
      named(s, require(a, "martingale", p), at(p, "martingale"));
      const long steps = require_integer(require(a, "steps", p), at(p, "steps"));
      if (steps < 0) throw ParseError("steps must be nonnegative", at(p, "steps"));
      if (a.contains("zeroed")) {
        const Json& z = require_array(a["zeroed"], at(p, "zeroed"));
        if (static_cast<long>(z.size()) != steps) throw ParseError("one zeroed coordinate per step", at(p, "zeroed"));
        for (std::size_t i = 0; i < z.size(); ++i) require_integer(z[i], at(at(p, "zeroed"), i));
      }
      if (a.contains("reject")) named(s, a["reject"], at(p, "reject"));
      if (a.contains("certificate_contains")) require_string(a["certificate_contains"], at(p, "certificate_contains"));
      break;
    }
    case AssertionKind::NotInSpace:
      parse_seq(s, require(a, "seq", p), at(p, "seq"));
      space_from_json(require(a, "space", p), at(p, "space"));
      break;
    case AssertionKind::Domination:
      named(s, require(a, "martingale", p), at(p, "martingale"));
      opt_bool(a, "expect", p);
      if (a.contains("via_unit")) {
        ext_seq_from_json(a["via_unit"], at(p, "via_unit"));
        if (a.contains("constant")) rational_from_json(a["constant"], at(p, "constant"));
        if (a.contains("norm")) norm_from_json(a["norm"], at(p, "norm"));
      } else {
        named(s, require(a, "dominating", p), at(p, "dominating"));
      }
      break;
    case AssertionKind::RegularNormEquals:
      named(s, require(a, "martingale", p), at(p, "martingale"));
      if (a.contains("norm")) norm_from_json(a["norm"], at(p, "norm"));
      rational_from_json(require(a, "value", p), at(p, "value"));
      opt_long(a, "probe_horizon", p, 0);
      break;
    case AssertionKind::SequenceEquals:
      parse_seq(s, require(a, "lhs", p), at(p, "lhs"));
      parse_seq(s, require(a, "rhs", p), at(p, "rhs"));
      break;
  }
}

}  // namespace

// ================================================================ schema

Json to_json(const Scenario& s) {
  Json j = {{"martlat_schema", kSchemaVersion}, {"id", s.id}};
  if (!s.citation.empty()) j["citation"] = s.citation;
  if (!s.description.empty()) j["description"] = s.description;
  j["space"] = to_json(s.space);
  j["norm"] = to_string(s.norm);
  j["horizon"] = s.horizon;
  j["probe_horizon"] = s.probe_horizon;
  if (s.seed) j["seed"] = *s.seed;
  j["filtration"] = to_json(s.filtration);
  Json ms = Json::object();
  for (const auto& [name, x] : s.martingales) ms[name] = to_json(x);
  j["martingales"] = std::move(ms);
  Json as = Json::array();
  for (const auto& a : s.assertions) {
    Json o = {{"kind", to_string(a.kind)}};
    for (auto it = a.args.begin(); it != a.args.end(); ++it) o[it.key()] = it.value();
    as.push_back(std::move(o));
  }
  j["assertions"] = std::move(as);
  return j;
}

Scenario scenario_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("scenario must be a JSON object", "");
  const long version = require_integer(require(j, "martlat_schema", ""), "/martlat_schema");
  if (version != kSchemaVersion) {
    throw ParseError("unsupported schema version " + std::to_string(version), "/martlat_schema");
  }
  Scenario s;
  s.id = require_string(require(j, "id", ""), "/id");
  if (s.id.empty()) throw ParseError("id must be nonempty", "/id");
  if (j.contains("citation")) s.citation = require_string(j["citation"], "/citation");
  if (j.contains("description")) s.description = require_string(j["description"], "/description");
  s.space = space_from_json(require(j, "space", ""), "/space");
  if (j.contains("norm")) s.norm = norm_from_json(j["norm"], "/norm");
  if (j.contains("probe_horizon")) s.probe_horizon = require_integer(j["probe_horizon"], "/probe_horizon");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ParseError("seed must be a nonnegative integer", "/seed");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  s.filtration = filtration_from_json(require(j, "filtration", ""), s.space, "/filtration");

  const Json& ms = require(j, "martingales", "");
  if (!ms.is_object()) throw ParseError("expected an object of named martingales", "/martingales");
  for (auto it = ms.begin(); it != ms.end(); ++it) {
    s.martingales.emplace(it.key(), martingale_from_json(it.value(), "/martingales/" + it.key()));
  }
  long max_h = s.filtration.start_index();
  for (const auto& [name, x] : s.martingales) max_h = std::max(max_h, x.horizon());
  s.horizon = j.contains("horizon") ? require_integer(j["horizon"], "/horizon") : max_h;

  const Json& as = require_array(require(j, "assertions", ""), "/assertions");
  for (std::size_t i = 0; i < as.size(); ++i) {
    const std::string p = at("/assertions", i);
    const std::string kind = require_string(require(as[i], "kind", p), at(p, "kind"));
    const auto k = parse_assertion_kind(kind);
    if (!k) throw ParseError("unknown assertion kind \"" + kind + "\"", at(p, "kind"));
    Assertion a{*k, as[i]};
    a.args.erase("kind");
    check_assertion_args(s, a, p);
    s.assertions.push_back(std::move(a));
  }
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, "");
  std::stringstream ss;
  ss << in.rdbuf();
  return scenario_from_json(parse_json_text(ss.str()));
}

Scenario with_horizon(const Scenario& s, long horizon) {
  Scenario out = s;
  out.horizon = horizon;
  for (auto& [name, x] : out.martingales) {
    if (horizon >= x.horizon()) {
      if (x.can_extend_to(horizon)) x = x.extended_to(horizon);
      continue;
    }
    if (horizon < x.start_index()) throw PreconditionError("horizon " + std::to_string(horizon) + " precedes martingale " + name);
    std::vector<ExtSeq> kept(x.terms().begin(), x.terms().begin() + (horizon - x.start_index() + 1));
    Martingale t(x.start_index(), std::move(kept));
    t.set_rule(x.rule());
    t.set_certificate(x.certificate());
    // a truncated window no longer ends at the terminal term
    t.set_closed(false);
    x = std::move(t);
  }
  if (out.filtration.extendable() || horizon <= out.filtration.last_index()) {
    if (horizon > out.filtration.last_index()) out.filtration = out.filtration.extended_to(horizon);
  }
  return out;
}

// ================================================================ reports

bool Report::passed() const {
  return std::all_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.passed; });
}

Json Report::to_json(bool with_timing) const {
  Json j = {{"scenario", scenario_id}, {"citation", citation}, {"tool_version", tool_version}, {"passed", passed()}};
  Json as = Json::array();
  for (const auto& o : outcomes) {
    Json a = {{"index", o.index}, {"kind", o.kind}, {"summary", o.summary}, {"status", o.passed ? "pass" : "fail"}};
    if (!o.witness.empty()) a["witness"] = o.witness;
    if (!o.note.empty()) a["note"] = o.note;
    as.push_back(std::move(a));
  }
  j["assertions"] = std::move(as);
  if (with_timing) j["elapsed_ms"] = elapsed_ms;
  return j;
}

std::string Report::to_text(bool with_timing) const {
  std::ostringstream os;
  os << "scenario " << scenario_id << "  [" << tool_version << "]\n";
  if (!citation.empty()) os << "citation: " << citation << "\n";
  for (const auto& o : outcomes) {
    os << (o.passed ? "  PASS " : "  FAIL ") << "#" << o.index << " " << o.kind << ": " << o.summary << "\n";
    if (!o.witness.empty()) os << "       witness: " << o.witness << "\n";
    if (!o.note.empty()) os << "       note: " << o.note << "\n";
  }
  const auto failed = std::count_if(outcomes.begin(), outcomes.end(), [](const auto& o) { return !o.passed; });
  os << (failed == 0 ? "PASS" : "FAIL") << " " << (outcomes.size() - static_cast<std::size_t>(failed)) << "/"
     << outcomes.size() << " assertions";
  if (with_timing) os << " in " << static_cast<long long>(elapsed_ms) << " ms";
  os << "\n";
  return os.str();
}

// ============================================================= evaluation

namespace {

class Evaluator {
 public:
  explicit Evaluator(const Scenario& s) : s_(s), f_(s.filtration) {}

  AssertionOutcome run(const Assertion& a, std::size_t index) {
    AssertionOutcome o;
    o.index = index;
    o.kind = to_string(a.kind);
    const std::string p = at("/assertions", index);
    try {
      dispatch(a, p, o);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      o.passed = false;
      o.witness = e.what();
    }
    return o;
  }

 private:
  const Scenario& s_;
  Filtration f_;
  std::map<std::pair<std::string, long>, ModulusResult> moduli_;

  const Martingale& mart(const std::string& name) const { return s_.martingales.at(name); }

  const Operator& level(long n) {
    if (!f_.has_level(n)) {
      if (n < f_.start_index()) throw EvalFailure("level " + std::to_string(n) + " precedes the filtration");
      f_ = f_.extended_to(n);
    }
    return f_.level(n);
  }

  const ModulusResult& modulus(const std::string& name, long probe_horizon) {
    auto key = std::make_pair(name, probe_horizon);
    auto it = moduli_.find(key);
    if (it == moduli_.end()) it = moduli_.emplace(key, krickeberg_modulus(mart(name), s_.filtration, probe_horizon)).first;
    return it->second;
  }

  ExtSeq eval(const SeqExpr& e) {
    switch (e.op) {
      case SeqExpr::Op::Literal: return e.literal;
      case SeqExpr::Op::Term: return mart(e.mart).term_at(e.n);
      case SeqExpr::Op::Abs: return seq_abs(eval(*e.inner));
      case SeqExpr::Op::ApplyLevel: {
        const ExtSeq v = eval(*e.inner);
        return op_apply(level(e.n), v);
      }
      case SeqExpr::Op::ModulusTerm:
      case SeqExpr::Op::FormulaTerm: {
        const ModulusResult& r = modulus(e.mart, s_.probe_horizon);
        const auto& m = e.op == SeqExpr::Op::ModulusTerm ? r.modulus : r.formula_terms;
        if (!m) throw EvalFailure("no " + std::string(e.op == SeqExpr::Op::ModulusTerm ? "verified modulus" : "formula terms") +
                                  " for " + e.mart + (r.diagnostics.empty() ? "" : ": " + r.diagnostics));
        return m->term(e.n);
      }
      case SeqExpr::Op::JoinAbs: {
        const Martingale& x = mart(e.mart);
        ExtSeq j = seq_abs(x.term_at(e.from));
        for (long n = e.from + 1; n <= e.to; ++n) j = seq_join(j, seq_abs(x.term_at(n)));
        return j;
      }
      case SeqExpr::Op::JoinAbsLimit: {
        const Martingale& x = mart(e.mart);
        const long end = std::max(e.to, s_.probe_horizon);
        std::vector<ExtSeq> probes;
        ExtSeq j = seq_abs(x.term_at(e.from));
        probes.push_back(j);
        for (long n = e.from + 1; n <= end && x.can_extend_to(n); ++n) {
          j = seq_join(j, seq_abs(x.term_at(n)));
          probes.push_back(j);
        }
        auto lim = certify_increasing_limit(probes);
        if (!lim) throw EvalFailure("partial joins of |" + e.mart + "| have no certified limit; last " + probes.back().str());
        return *lim;
      }
    }
    throw EvalFailure("bad expression");
  }

  std::string describe(const SeqExpr& e) const {
    switch (e.op) {
      case SeqExpr::Op::Literal: return e.literal.str();
      case SeqExpr::Op::Term: return e.mart + "_" + std::to_string(e.n);
      case SeqExpr::Op::Abs: return "|" + describe(*e.inner) + "|";
      case SeqExpr::Op::ApplyLevel: return "E_" + std::to_string(e.n) + " " + describe(*e.inner);
      case SeqExpr::Op::ModulusTerm: return "|" + e.mart + "|_" + std::to_string(e.n);
      case SeqExpr::Op::FormulaTerm: return "sup_m E_" + std::to_string(e.n) + "|" + e.mart + "_m|";
      case SeqExpr::Op::JoinAbs:
        return "join_{" + std::to_string(e.from) + "<=n<=" + std::to_string(e.to) + "} |" + e.mart + "_n|";
      case SeqExpr::Op::JoinAbsLimit: return "lim_N join_{n<=N} |" + e.mart + "_n|";
    }
    return "?";
  }

  NormValue norm_of(const NormTarget& t, std::string& label, std::string& note) {
    const std::string k = to_string(t.kind);
    if (t.seq) {
      label = "||" + describe(*t.seq) + "||_" + k;
      return seq_norm(eval(*t.seq), t.kind);
    }
    const Martingale& x = mart(*t.mart);
    if (t.term) {
      label = "||" + *t.mart + "_" + std::to_string(*t.term) + "||_" + k;
      return seq_norm(x.term_at(*t.term), t.kind);
    }
    label = "||" + *t.mart + "||_" + k;
    const MartingaleNorm mn = martingale_norm(x, t.kind);
    note = mn.exactness == Exactness::Exact ? "exact" : "lower_bound (finite horizon " + std::to_string(x.horizon()) + ")";
    last_exactness_ = mn.exactness;
    return mn.value;
  }
  std::optional<Exactness> last_exactness_;

  void dispatch(const Assertion& as, const std::string& p, AssertionOutcome& o) {
    const Json& a = as.args;
    switch (as.kind) {
      case AssertionKind::FiltrationValid: return filtration_valid(a, p, o);
      case AssertionKind::MartingaleValid: return martingale_valid(a, p, o);
      case AssertionKind::NormEquals: return norm_equals(a, p, o);
      case AssertionKind::NormGreater: return norm_greater(a, p, o);
      case AssertionKind::ModulusEquals: return modulus_equals(a, p, o);
      case AssertionKind::KrickebergMismatch: return krickeberg_mismatch(a, p, o);
      case AssertionKind::ShrinkChain: return shrink_chain(a, p, o);
      case AssertionKind::NotInSpace: return not_in_space(a, p, o);
      case AssertionKind::Domination: return domination(a, p, o);
      case AssertionKind::RegularNormEquals: return regular_norm_equals(a, p, o);
      case AssertionKind::SequenceEquals: return sequence_equals(a, p, o);
    }
  }

  void filtration_valid(const Json& a, const std::string& p, AssertionOutcome& o) {
    const bool expect = opt_bool(a, "expect", p).value_or(true);
    const long through = opt_long(a, "through", p, std::max(s_.horizon, s_.filtration.last_index()));
    Filtration f = s_.filtration;
    if (through > f.last_index() && f.extendable()) f = f.extended_to(through);
    const ValidationReport rep = check_filtration(f);
    o.summary = "levels " + std::to_string(f.start_index()) + ".." + std::to_string(f.last_index()) + " on " +
                s_.space.str() + " form a filtration" + (expect ? "" : " (expected to fail)");
    o.passed = rep.passed() == expect;
    if (const LawResult* bad = rep.first_failure()) {
      o.note = bad->law + ": " + bad->witness;
      if (!o.passed) o.witness = o.note;
    } else if (!expect) {
      o.witness = "every law held";
    }
    if (a.contains("op_norm")) {
      const NormKind k = norm_from_json(a["op_norm"]["norm"], at(at(p, "op_norm"), "norm"));
      const Rational want = rational_from_json(a["op_norm"]["value"], at(at(p, "op_norm"), "value"));
      o.summary += ", op_norm_" + to_string(k) + " = " + want.str() + " per level";
      for (long n = f.start_index(); n <= f.last_index(); ++n) {
        const Rational got = op_norm(f.level(n), k);
        if (got != want) {
          o.passed = false;
          o.witness = "op_norm(E_" + std::to_string(n) + ") = " + got.str();
          break;
        }
      }
    }
  }

  void martingale_valid(const Json& a, const std::string& p, AssertionOutcome& o) {
    const std::string name = name_of(a["martingale"], at(p, "martingale"));
    const bool expect = opt_bool(a, "expect", p).value_or(true);
    const bool super = opt_bool(a, "supermartingale", p).value_or(false);
    const Martingale& x = mart(name);
    const ValidationReport rep = super ? check_supermartingale(x, s_.filtration) : check_martingale(x, s_.filtration);
    o.summary = name + " (indices " + std::to_string(x.start_index()) + ".." + std::to_string(x.horizon()) + ") is a " +
                (super ? "supermartingale" : "martingale") + (expect ? "" : " (expected to fail)");
    o.passed = rep.passed() == expect;
    if (const LawResult* bad = rep.first_failure()) {
      o.note = bad->law + ": " + bad->witness;
      if (!o.passed) o.witness = o.note;
    } else if (!expect) {
      o.witness = "every law held";
    }
  }

  void norm_equals(const Json& a, const std::string& p, AssertionOutcome& o) {
    const NormTarget t = parse_norm_target(s_, a, p);
    const NormValue want = norm_value_from_json(a["value"], at(p, "value"));
    std::string label, note;
    last_exactness_.reset();
    const NormValue got = norm_of(t, label, note);
    o.summary = label + " = " + want.str();
    o.note = note;
    o.passed = got == want;
    if (!o.passed) o.witness = "computed " + got.str();
    if (a.contains("exactness")) {
      const std::string e = a["exactness"].get<std::string>();
      o.summary += " (" + e + ")";
      const bool exact = last_exactness_.value_or(Exactness::Exact) == Exactness::Exact;
      if ((e == "exact") != exact) {
        o.passed = false;
        o.witness += (o.witness.empty() ? "" : "; ") + std::string("exactness is ") + (exact ? "exact" : "lower_bound");
      }
    }
  }

  void norm_greater(const Json& a, const std::string& p, AssertionOutcome& o) {
    const NormTarget t = parse_norm_target(s_, a, p);
    const Rational than = rational_from_json(a["than"], at(p, "than"));
    std::string label, note;
    const NormValue got = norm_of(t, label, note);
    o.summary = label + " > " + than.str();
    o.note = "value " + got.str() + (note.empty() ? "" : ", " + note);
    o.passed = got.infinite || got.value > than;
    if (!o.passed) o.witness = "computed " + got.str();
  }

  void modulus_equals(const Json& a, const std::string& p, AssertionOutcome& o) {
    const std::string name = name_of(a["martingale"], at(p, "martingale"));
    const std::string expected_name = name_of(a["expected"], at(p, "expected"));
    const std::string oracle = a.contains("oracle") ? a["oracle"].get<std::string>() : "krickeberg";
    const long ph = opt_long(a, "probe_horizon", p, s_.probe_horizon);
    const Martingale& x = mart(name);
    const Martingale& want = mart(expected_name);
    o.summary = "|" + name + "| = " + expected_name + " via " + oracle;

    std::optional<Martingale> got;
    if (oracle == "krickeberg") {
      const ModulusResult& r = modulus(name, ph);
      got = r.modulus;
      o.note = "method " + to_string(r.method) + (r.stabilized ? ", stabilized" : ", not stabilized");
      if (r.mismatch) o.note += "; mismatch: " + *r.mismatch;
      if (!r.diagnostics.empty()) o.note += "; " + r.diagnostics;
      if (auto st = opt_bool(a, "stabilized", p); st && *st != r.stabilized) {
        o.passed = false;
        o.witness = std::string("stabilized = ") + (r.stabilized ? "true" : "false");
        return;
      }
      if (a.contains("method") && a["method"].get<std::string>() != to_string(r.method)) {
        o.passed = false;
        o.witness = "method " + to_string(r.method);
        return;
      }
    } else if (oracle == "lp") {
      auto r = lp_least_dominating(x, s_.filtration);
      got = std::move(r.martingale);
      if (!got) o.note = r.certificate;
    } else {
      const Martingale pm[] = {x, x.negated()};
      auto r = martingale_sup(pm, s_.filtration);
      got = std::move(r.martingale);
      if (!got) o.note = r.certificate;
    }
    if (!got) {
      o.passed = false;
      o.witness = "no verified modulus" + (o.note.empty() ? "" : ": " + o.note);
      return;
    }
    if (!(*got == want)) {
      o.passed = false;
      std::ostringstream w;
      for (long n = got->start_index(); n <= got->horizon(); ++n) {
        if (n < want.start_index() || n > want.horizon() || got->term(n) != want.term(n)) {
          w << "term " << n << ": computed " << got->term(n);
          if (n >= want.start_index() && n <= want.horizon()) w << ", expected " << want.term(n);
          break;
        }
      }
      if (w.str().empty()) w << "index ranges differ";
      o.witness = w.str();
      return;
    }
    o.passed = true;
    if (a.contains("below")) {
      for (const auto& b : a["below"]) {
        const Martingale& w = mart(b.get<std::string>());
        if (!dominates(w, x)) {
          o.passed = false;
          o.witness = b.get<std::string>() + " does not dominate +-" + name;
          return;
        }
        if (!termwise_leq(*got, w)) {
          o.passed = false;
          o.witness = "modulus is not below " + b.get<std::string>();
          return;
        }
      }
      o.summary += ", below " + std::to_string(a["below"].size()) + " dominating candidates";
      o.note += (o.note.empty() ? "" : "; ") + std::string("minimality chain-verified, not exhaustive");
    }
  }

  void krickeberg_mismatch(const Json& a, const std::string& p, AssertionOutcome& o) {
    const std::string name = name_of(a["martingale"], at(p, "martingale"));
    const long ph = opt_long(a, "probe_horizon", p, s_.probe_horizon);
    const ModulusResult& r = modulus(name, ph);
    const Martingale& x = mart(name);
    o.summary = "Krickeberg's formula disagrees with the verified modulus of " + name;
    if (!r.formula_terms || !r.modulus || !r.mismatch) {
      o.passed = false;
      o.witness = !r.formula_terms ? "formula did not stabilize: " + r.diagnostics
                  : !r.modulus     ? "no verified modulus"
                                   : "no mismatch: formula values are the modulus";
      return;
    }
    o.note = *r.mismatch;
    o.passed = true;
    const long n0 = x.start_index();
    auto check = [&](const char* key, const Martingale& m, const char* what) {
      if (!a.contains(key)) return;
      const ExtSeq want = eval(parse_seq(s_, a[key], at(p, key)));
      o.summary += std::string(", ") + what + " initial term " + want.str();
      if (m.term(n0) != want) {
        o.passed = false;
        o.witness = std::string(what) + " initial term is " + m.term(n0).str();
      }
    };
    check("formula_initial", *r.formula_terms, "formula");
    check("modulus_initial", *r.modulus, "modulus");
  }

  void shrink_chain(const Json& a, const std::string& p, AssertionOutcome& o) {
    const Martingale& x = mart(name_of(a["martingale"], at(p, "martingale")));
    Martingale cur = mart(name_of(a["dominating"], at(p, "dominating")));
    const long steps = a["steps"].get<long>();
    o.summary = std::to_string(steps) + " shrink steps from " + a["dominating"].get<std::string>();
    std::vector<std::size_t> zeroed;
    for (long i = 0; i < steps; ++i) {
      const ShrinkResult r = shrink_dominating(cur, x, s_.filtration, s_.probe_horizon);
      if (r.status != ShrinkResult::Status::Shrunk) {
        o.passed = false;
        o.witness = "step " + std::to_string(i + 1) + ": " + r.certificate;
        return;
      }
      if (a.contains("zeroed")) {
        const long want = a["zeroed"][static_cast<std::size_t>(i)].get<long>();
        if (static_cast<long>(r.zeroed_coordinate) != want) {
          o.passed = false;
          o.witness = "step " + std::to_string(i + 1) + " zeroed coordinate " + std::to_string(r.zeroed_coordinate) +
                      ", expected " + std::to_string(want);
          return;
        }
      }
      const Martingale& z = *r.smaller;
      // independent re-check of the chain link
      if (!check_martingale(z, s_.filtration).passed() || !dominates(z, x) || !termwise_leq(z, cur) || z == cur) {
        o.passed = false;
        o.witness = "step " + std::to_string(i + 1) + " produced an invalid link";
        return;
      }
      zeroed.push_back(r.zeroed_coordinate);
      cur = z;
    }
    std::ostringstream zs;
    for (std::size_t i = 0; i < zeroed.size(); ++i) zs << (i ? ", " : "") << zeroed[i];
    o.note = "zeroed coordinates " + zs.str() + "; each link re-validated";
    o.passed = true;
    if (a.contains("reject")) {
      const std::string rname = a["reject"].get<std::string>();
      const std::string want = a.contains("certificate_contains") ? a["certificate_contains"].get<std::string>() : "not in c";
      o.summary += ", then " + rname + " rejected (\"" + want + "\")";
      const ShrinkResult r = shrink_dominating(mart(rname), x, s_.filtration, s_.probe_horizon);
      o.note += "; " + rname + ": " + r.certificate;
      if (r.status != ShrinkResult::Status::Rejected || r.certificate.find(want) == std::string::npos) {
        o.passed = false;
        o.witness = rname + " was not rejected as expected: " + r.certificate;
      }
    }
  }

  void not_in_space(const Json& a, const std::string& p, AssertionOutcome& o) {
    const SeqExpr e = parse_seq(s_, a["seq"], at(p, "seq"));
    const SpaceKind space = space_from_json(a["space"], at(p, "space"));
    const ExtSeq v = eval(e);
    o.summary = describe(e) + " = " + v.str() + " is not in " + space.str();
    o.passed = !seq_in_space(v, space);
    if (!o.passed) o.witness = v.str() + " lies in " + space.str();
  }

  void domination(const Json& a, const std::string& p, AssertionOutcome& o) {
    const std::string name = name_of(a["martingale"], at(p, "martingale"));
    const bool expect = opt_bool(a, "expect", p).value_or(true);
    const Martingale& x = mart(name);
    if (a.contains("via_unit")) {
      const ExtSeq e = ext_seq_from_json(a["via_unit"], at(p, "via_unit"));
      const NormKind k = a.contains("norm") ? norm_from_json(a["norm"], at(p, "norm")) : s_.norm;
      const UnitDomination u = dominate_via_unit(x, s_.filtration, e, k);
      o.summary = "+-" + name + " <= C ||" + name + "|| (E_n e)_n for e = " + e.str();
      o.note = "C = " + u.constant.str() + ", ||" + name + "|| = " + u.norm.str();
      o.passed = u.verified == expect;
      if (!o.passed) o.witness = u.verified ? "domination holds" : "domination fails";
      if (a.contains("constant")) {
        const Rational want = rational_from_json(a["constant"], at(p, "constant"));
        o.summary += ", C = " + want.str();
        if (u.constant != want) {
          o.passed = false;
          o.witness = "C = " + u.constant.str();
        }
      }
      return;
    }
    const std::string yname = name_of(a["dominating"], at(p, "dominating"));
    const bool d = dominates(mart(yname), x);
    o.summary = yname + " dominates +-" + name + (expect ? "" : " (expected to fail)");
    o.passed = d == expect;
    if (!o.passed) o.witness = d ? "domination holds" : "some term of +-" + name + " exceeds " + yname;
  }

  void regular_norm_equals(const Json& a, const std::string& p, AssertionOutcome& o) {
    const std::string name = name_of(a["martingale"], at(p, "martingale"));
    const NormKind k = a.contains("norm") ? norm_from_json(a["norm"], at(p, "norm")) : s_.norm;
    const Rational want = rational_from_json(a["value"], at(p, "value"));
    const long ph = opt_long(a, "probe_horizon", p, s_.probe_horizon);
    const RegularNormResult r = regular_norm(mart(name), s_.filtration, k, ph);
    o.summary = "||" + name + "||_r (" + to_string(k) + ") = " + want.str();
    o.note = "route " + r.route + (r.detail.empty() ? "" : "; " + r.detail);
    if (r.status != RegularNormResult::Status::Ok) {
      o.passed = false;
      o.witness = std::string(r.status == RegularNormResult::Status::NotRegular ? "not regular at horizon" : "undetermined") +
                  (r.detail.empty() ? "" : ": " + r.detail);
      return;
    }
    o.passed = r.value == want;
    if (!o.passed) o.witness = "computed " + r.value.str();
  }

  void sequence_equals(const Json& a, const std::string& p, AssertionOutcome& o) {
    const SeqExpr l = parse_seq(s_, a["lhs"], at(p, "lhs"));
    const SeqExpr r = parse_seq(s_, a["rhs"], at(p, "rhs"));
    const ExtSeq lv = eval(l);
    const ExtSeq rv = eval(r);
    o.summary = describe(l) + " = " + describe(r);
    o.passed = lv == rv;
    if (!o.passed) {
      o.witness = lv.str() + " vs " + rv.str();
      if (auto d = first_difference(lv, rv)) o.witness += " (first difference at coordinate " + std::to_string(*d) + ")";
    }
  }
};

}  // namespace

Report run_scenario(const Scenario& s) {
  const auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.scenario_id = s.id;
  rep.citation = s.citation;
  Evaluator ev(s);
  for (std::size_t i = 0; i < s.assertions.size(); ++i) rep.outcomes.push_back(ev.run(s.assertions[i], i));
  rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace martlat
