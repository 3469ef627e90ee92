#include <algorithm>
#include <chrono>
#include <random>
#include <sstream>

#include "corpus_internal.hpp"
#include "martlat/error.hpp"

namespace martlat {

using detail::conditional_expectation;
using detail::coords;
using detail::finite_level;
using detail::make_assertion;

namespace {

using Rng = std::mt19937_64;

struct EvalFailureTag {
  std::string why;
};

long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

Rational random_rational(Rng& rng, long lo, long hi) {
  static const long dens[] = {1, 1, 2, 3, 4};
  const long den = dens[uniform(rng, 0, 4)];
  return Rational(uniform(rng, lo * den, hi * den), den);
}

ExtSeq random_vector(Rng& rng, std::size_t d, long lo, long hi) {
  std::vector<Rational> v(d);
  for (auto& c : v) c = random_rational(rng, lo, hi);
  return ExtSeq::finite(std::move(v));
}

/// Nonnegative vector with roughly half of its coordinates zero.
ExtSeq random_bump(Rng& rng, std::size_t d) {
  std::vector<Rational> v(d);
  for (auto& c : v) c = uniform(rng, 0, 1) ? random_rational(rng, 0, 3) : Rational(0);
  return ExtSeq::finite(std::move(v));
}

/// Merges two distinct blocks of `labels` chosen at random.
void merge_random_blocks(Rng& rng, std::vector<std::size_t>& labels) {
  std::vector<std::size_t> distinct = labels;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2) return;
  const auto a = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(distinct.size()) - 1));
  auto b = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(distinct.size()) - 2));
  if (b >= a) ++b;
  for (auto& l : labels)
    if (l == distinct[b]) l = distinct[a];
}

std::size_t block_count(std::vector<std::size_t> labels) {
  std::sort(labels.begin(), labels.end());
  return static_cast<std::size_t>(std::unique(labels.begin(), labels.end()) - labels.begin());
}

const Filtration& filtration_of(const Scenario& s) { return s.filtration; }
const Martingale& x_of(const Scenario& s) { return s.martingales.at("X"); }

Martingale from_terminal(const Scenario& s, const ExtSeq& terminal) {
  const Martingale& x = x_of(s);
  return martingale_from_levels(s.filtration, terminal, x.start_index(), x.horizon());
}

}  // namespace

Scenario generate_random_instance(std::uint64_t seed, std::size_t d, long levels, long horizon, RandomInstanceOptions opts) {
  if (d < 2) throw PreconditionError("random instances need d >= 2");
  if (levels < 1 || levels > horizon) throw PreconditionError("random instances need 1 <= levels <= horizon");
  Rng rng(seed);

  // Partitions from finest (last level) to coarsest (level 1).
  std::vector<std::vector<std::size_t>> parts(static_cast<std::size_t>(levels));
  std::vector<std::size_t> labels(d);
  for (std::size_t i = 0; i < d; ++i) labels[i] = i;
  for (long m = uniform(rng, 0, static_cast<long>(d) / 2); m > 0; --m) merge_random_blocks(rng, labels);
  parts.back() = labels;
  for (long k = levels - 2; k >= 0; --k) {
    const long blocks = static_cast<long>(block_count(labels));
    for (long m = uniform(rng, 1, std::max(1L, blocks / 2)); m > 0; --m) merge_random_blocks(rng, labels);
    parts[static_cast<std::size_t>(k)] = labels;
  }
  std::vector<Rational> weights(d, Rational(1));
  if (!opts.uniform_weights)
    for (auto& w : weights) w = uniform(rng, 1, 4);

  std::vector<Operator> ops;
  for (long n = 1; n <= horizon; ++n) {
    const auto& p = parts[static_cast<std::size_t>(std::min(n, levels) - 1)];
    ops.push_back(finite_level(conditional_expectation(p, weights)));
  }

  Scenario s;
  s.id = "random-" + std::to_string(seed) + "-d" + std::to_string(d) + "-l" + std::to_string(levels) + "-h" +
         std::to_string(horizon);
  s.description = "nested-partition conditional expectations with random weights";
  s.space = SpaceKind::finite_dim(d);
  s.norm = NormKind::Sup;
  s.horizon = horizon;
  s.seed = seed;
  s.filtration = Filtration(1, std::move(ops), s.space);
  const ExtSeq terminal = opts.positive ? random_vector(rng, d, 0, 6) : random_vector(rng, d, -6, 6);
  s.martingales["X"] = martingale_from_levels(s.filtration, terminal, 1, horizon);
  s.assertions.push_back(make_assertion(AssertionKind::FiltrationValid, Json::object()));
  s.assertions.push_back(make_assertion(AssertionKind::MartingaleValid, {{"martingale", "X"}}));
  return s;
}

// ================================================================ suites

namespace {

struct InstanceResult {
  std::string status = "pass";  // pass | fail | skipped
  std::string detail;
};

InstanceResult fail(std::string why) { return {"fail", std::move(why)}; }

/// Shared precondition of every instance: the generated data really is a filtration and a martingale.
std::optional<InstanceResult> validate_instance(const Scenario& s) {
  const auto fr = check_filtration(s.filtration);
  if (!fr.passed()) return fail("filtration: " + fr.first_failure()->witness);
  for (const auto& [name, x] : s.martingales) {
    const auto mr = check_martingale(x, s.filtration);
    if (!mr.passed()) return fail(name + ": " + mr.first_failure()->witness);
  }
  return std::nullopt;
}

Martingale perturbed(const Martingale& x) {
  std::vector<ExtSeq> terms = x.terms();
  terms.front() = terms.front() + ExtSeq::unit(1);
  return Martingale(x.start_index(), std::move(terms));
}

void add_note_count(SuiteReport& r, const std::string& key) {
  for (auto& n : r.notes) {
    if (n.rfind(key + ": ", 0) == 0) {
      const long c = std::stol(n.substr(key.size() + 2));
      n = key + ": " + std::to_string(c + 1);
      return;
    }
  }
  r.notes.push_back(key + ": 1");
}

RandomInstanceOptions plain(std::size_t) { return {}; }
RandomInstanceOptions positive(std::size_t) { return {false, true}; }
RandomInstanceOptions fatou_options(std::size_t i) { return {i % 2 == 1, false}; }

NormKind alternating_kind(std::size_t i) { return i % 2 == 0 ? NormKind::Sup : NormKind::L1; }

// ------------------------------------------------------------- checks

InstanceResult oracle_equivalence(const Scenario& s, Rng& rng, std::size_t, SuiteReport& rep) {
  const Filtration& f = filtration_of(s);
  const Martingale& x = x_of(s);
  const ModulusResult k = krickeberg_modulus(x, f);
  if (!k.modulus) return fail("krickeberg_modulus: " + k.diagnostics + k.mismatch.value_or(""));
  if (k.mismatch) return fail("Krickeberg mismatch on an order-continuous instance: " + *k.mismatch);
  add_note_count(rep, "method " + to_string(k.method));
  const auto lp = lp_least_dominating(x, f);
  if (!lp.martingale) return fail("lp_least_dominating: " + lp.certificate);
  const Martingale pm[] = {x, x.negated()};
  const auto sup = martingale_sup(pm, f);
  if (!sup.martingale) return fail("martingale_sup: " + sup.certificate);
  if (!(*k.modulus == *lp.martingale)) return fail("krickeberg != lp");
  if (!(*lp.martingale == *sup.martingale)) return fail("lp != sup{X,-X}");

  const ExtSeq top = seq_abs(x.terms().back());
  for (int w = 0; w < 50; ++w) {
    const Martingale dom = from_terminal(s, top + random_bump(rng, f.space().dim));
    if (!dominates(dom, x)) return fail("generated candidate " + std::to_string(w) + " does not dominate X");
    if (!termwise_leq(*k.modulus, dom)) return fail("modulus not below dominating candidate " + std::to_string(w));
  }
  return {};
}

InstanceResult regnorm_axioms(const Scenario& s, Rng& rng, std::size_t index, SuiteReport& rep) {
  const Filtration& f = filtration_of(s);
  const std::size_t d = f.space().dim;
  const NormKind kind = alternating_kind(index);
  const Martingale& x = x_of(s);
  const Martingale y = from_terminal(s, random_vector(rng, d, -6, 6));
  Rational alpha = random_rational(rng, -3, 3);

  auto rnorm = [&](const Martingale& m) -> std::optional<Rational> {
    const auto r = regular_norm(m, f, kind);
    if (r.status != RegularNormResult::Status::Ok) return std::nullopt;
    return r.value;
  };
  const auto rx = rnorm(x), ry = rnorm(y);
  const auto rsum = rnorm(martingale_linear(x, y, 1, 1));
  const auto rscaled = rnorm(martingale_linear(x, x, alpha, 0));
  if (!rx || !ry || !rsum || !rscaled) return fail("regular norm not available");
  const Rational nx = martingale_norm(x, kind).value.value;
  const std::string k = " (" + to_string(kind) + ")";
  if (!(nx <= *rx)) return fail("||X|| = " + nx.str() + " > ||X||_r = " + rx->str() + k);
  if (!(nx <= 2 * *rx)) return fail("||X|| > 2||X||_r" + k);
  if (!(*rsum <= *rx + *ry)) return fail("triangle inequality fails" + k);
  if (*rscaled != abs(alpha) * *rx) return fail("homogeneity fails for alpha = " + alpha.str() + k);
  const auto mod = lp_least_dominating(x, f);
  if (!mod.martingale) return fail("no modulus: " + mod.certificate);
  const Rational nmod = martingale_norm(*mod.martingale, kind).value.value;
  if (nmod != *rx) return fail("||X||_r = " + rx->str() + " but || |X| || = " + nmod.str() + k);
  if (nx == 2 * *rx && !rx->is_zero()) add_note_count(rep, "equality ||X|| = 2||X||_r");
  if (nx < *rx) add_note_count(rep, "strict ||X|| < ||X||_r");
  return {};
}

InstanceResult fatou(const Scenario& s, Rng&, std::size_t index, SuiteReport& rep) {
  const Filtration& f = filtration_of(s);
  // contractivity was checked by the suite gate
  const NormKind kind = alternating_kind(index);
  add_note_count(rep, "checked under " + to_string(kind));
  const Martingale& x = x_of(s);
  const auto r = regular_norm(x, f, kind);
  if (r.status != RegularNormResult::Status::Ok) return fail("regular norm not available: " + r.detail);
  const Rational nx = martingale_norm(x, kind).value.value;
  if (nx != r.value) return fail("||X|| = " + nx.str() + " but ||X||_r = " + r.value.str() + " (" + to_string(kind) + ")");
  return {};
}

InstanceResult ideal(const Scenario& s, Rng& rng, std::size_t, SuiteReport&) {
  const Filtration& f = filtration_of(s);
  const std::size_t d = f.space().dim;
  const Martingale& x = x_of(s);
  const std::vector<Rational> top = coords(x.terms().back(), d);
  std::vector<Rational> yt(d);
  for (std::size_t i = 0; i < d; ++i) yt[i] = top[i] * Rational(uniform(rng, 0, 4), 4);
  const Martingale y = from_terminal(s, ExtSeq::finite(yt));
  const Martingale zero = from_terminal(s, ExtSeq::zero());
  if (!termwise_leq(zero, y) || !termwise_leq(y, x)) return fail("generated Y is not between 0 and X");
  if (!check_martingale(y, f).passed()) return fail("generated Y is not a martingale");
  for (NormKind kind : {NormKind::Sup, NormKind::L1}) {
    const NormValue ny = martingale_norm(y, kind).value;
    const NormValue nx = martingale_norm(x, kind).value;
    if (!(ny <= nx)) return fail("||Y|| = " + ny.str() + " > ||X|| = " + nx.str() + " (" + to_string(kind) + ")");
    const auto ry = regular_norm(y, f, kind);
    const auto rx = regular_norm(x, f, kind);
    if (ry.status != RegularNormResult::Status::Ok || rx.status != RegularNormResult::Status::Ok) {
      return fail("regular norm not available");
    }
    if (!(ry.value <= rx.value)) return fail("||Y||_r > ||X||_r (" + to_string(kind) + ")");
  }
  return {};
}

InstanceResult lattice_axioms(const Scenario& s, Rng& rng, std::size_t, SuiteReport&) {
  const Filtration& f = filtration_of(s);
  const std::size_t d = f.space().dim;
  const Martingale& x = x_of(s);
  const Martingale y = from_terminal(s, random_vector(rng, d, -6, 6));
  const Martingale w = from_terminal(s, random_vector(rng, d, -6, 6));

  auto sup = [&](std::initializer_list<Martingale> a) -> Martingale {
    const std::vector<Martingale> v(a);
    auto r = martingale_sup(v, f);
    if (!r.martingale) throw EvalFailureTag{r.certificate};
    return *r.martingale;
  };
  try {
    const Martingale sxy = sup({x, y});
    const Martingale ixy = sup({x.negated(), y.negated()}).negated();
    if (!check_martingale(sxy, f).passed()) return fail("X v Y is not a martingale");
    if (!termwise_leq(x, sxy) || !termwise_leq(y, sxy)) return fail("X v Y is not an upper bound");
    if (!(sup({y, x}) == sxy)) return fail("join is not commutative");
    if (!(martingale_linear(x, y, 1, 1) == martingale_linear(sxy, ixy, 1, 1))) return fail("X + Y != X v Y + X ^ Y");
    const Martingale absx = sup({x, x.negated()});
    const auto lp = lp_least_dominating(x, f);
    if (!lp.martingale || !(*lp.martingale == absx)) return fail("|X| != X v -X");
    const Martingale left = sup({sxy, w});
    if (!(left == sup({x, sup({y, w})})) || !(left == sup({x, y, w}))) return fail("join is not associative");
    if (!(sup({x, ixy}) == x)) return fail("absorption X v (X ^ Y) = X fails");
    const ExtSeq top = seq_join(x.terms().back(), y.terms().back());
    for (int k = 0; k < 10; ++k) {
      const Martingale ub = from_terminal(s, top + random_bump(rng, d));
      if (!termwise_leq(sxy, ub)) return fail("X v Y is not below upper bound " + std::to_string(k));
    }
  } catch (const EvalFailureTag& e) {
    return fail("martingale_sup: " + e.why);
  }
  return {};
}

// ------------------------------------------------------------- runner

std::optional<InstanceResult> contractive_gate(const Scenario& s, std::size_t index) {
  const Filtration& f = filtration_of(s);
  const NormKind kind = alternating_kind(index);
  for (long n = f.start_index(); n <= f.last_index(); ++n) {
    const Rational on = op_norm(f.level(n), kind);
    if (on != 1) {
      return InstanceResult{"skipped", "hypothesis violated, skipped: op_norm_" + to_string(kind) + "(E_" +
                                           std::to_string(n) + ") = " + on.str()};
    }
  }
  return std::nullopt;
}

struct Suite {
  const char* name;
  const char* citation;
  RandomInstanceOptions (*options)(std::size_t);
  InstanceResult (*check)(const Scenario&, Rng&, std::size_t, SuiteReport&);
  bool gated;
};

const Suite kSuites[] = {
    {"oracle_equivalence", "section 2, Proposition: \"lattice operations are given by the Krickeberg's formula\"", plain,
     oracle_equivalence, false},
    {"regnorm_axioms", "section 3, Theorem on the regular norm: \"we have ||z|| <= 2||z||_r\"", plain, regnorm_axioms, false},
    {"fatou", "section 3, Proposition on the Fatou property: \"then ||X|| = ||X||_r\"", fatou_options, fatou, true},
    {"ideal", "section 3, Theorem: M_r is \"an ideal of M_r\" (calligraphic)", positive, ideal, false},
    {"lattice_axioms", "section 1, Theorem: \"is an order complete vector lattice\"", plain, lattice_axioms, false},
};

const Suite& find_suite(const std::string& name) {
  for (const auto& s : kSuites)
    if (name == s.name) return s;
  throw PreconditionError("unknown suite \"" + name + "\"");
}

InstanceResult run_instance(const Suite& suite, const Scenario& s, std::uint64_t seed, std::size_t index, SuiteReport& rep) {
  try {
    if (suite.gated)
      if (auto skip = contractive_gate(s, index)) return *skip;
    if (auto bad = validate_instance(s)) return *bad;
    Rng extra(seed ^ 0x9E3779B97F4A7C15ULL);
    return suite.check(s, extra, index, rep);
  } catch (const Error& e) {
    return fail(e.what());
  }
}

std::uint64_t instance_seed(std::uint64_t seed, std::size_t i) { return seed * 1000003ULL + i; }

std::string observed(const InstanceResult& r) { return r.status; }

void run_controls(const Suite& suite, std::uint64_t seed, SuiteReport& rep) {
  SuiteReport scratch;
  const std::uint64_t cseed = seed ^ 0xC0FFEEULL;
  {
    Scenario s = generate_random_instance(cseed, 4, 2, 3, suite.options(0));
    s.martingales["X"] = perturbed(s.martingales.at("X"));
    const InstanceResult r = run_instance(suite, s, cseed, 0, scratch);
    rep.controls.push_back({"perturbed martingale", "fail", observed(r), r.detail});
  }
  if (suite.gated) {
    Scenario s = generate_random_instance(cseed, 4, 2, 3, suite.options(0));
    std::vector<Operator> levels = s.filtration.levels();
    Matrix m = levels.front().as_block().head;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= 2;
    levels.front() = finite_level(m);
    s.filtration = Filtration(s.filtration.start_index(), levels, s.space);
    const InstanceResult r = run_instance(suite, s, cseed, 0, scratch);
    rep.controls.push_back({"non-contractive filtration (level scaled by 2)", "skipped", observed(r), r.detail});
  }
  if (std::string(suite.name) == "oracle_equivalence") {
    const Scenario s = generate_random_instance(cseed, 4, 2, 3);
    const Martingale& x = x_of(s);
    ControlOutcome c{"understated modulus (|X| - (E_n e_1)_n)", "fail", "pass", ""};
    if (auto lp = lp_least_dominating(x, s.filtration); lp.martingale) {
      const Martingale e1 = from_terminal(s, ExtSeq::unit(1));
      const Martingale under = martingale_linear(*lp.martingale, e1, 1, -1);
      if (!dominates(under, x)) {
        c.observed = "fail";
        c.detail = "candidate does not dominate +-X";
      }
    } else {
      c.observed = "error";
      c.detail = lp.certificate;
    }
    rep.controls.push_back(std::move(c));
  }
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& s : kSuites) out.emplace_back(s.name);
  return out;
}

SuiteReport run_property_suite(const std::string& name, std::size_t count, std::uint64_t seed) {
  const Suite& suite = find_suite(name);
  if (count < 1) throw PreconditionError("suite count must be at least 1");
  const auto t0 = std::chrono::steady_clock::now();
  SuiteReport rep;
  rep.name = suite.name;
  rep.citation = std::string("Troitsky & Xanthos, \"Spaces of regular abstract martingales\", ") + suite.citation;
  rep.count = count;
  rep.seed = seed;

  Rng params(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const auto d = static_cast<std::size_t>(uniform(params, 2, 8));
    const long levels = uniform(params, 1, 4);
    const long horizon = levels + uniform(params, 0, 1);
    const std::uint64_t iseed = instance_seed(seed, i);
    const Scenario s = generate_random_instance(iseed, d, levels, horizon, suite.options(i));
    const InstanceResult r = run_instance(suite, s, iseed, i, rep);
    if (r.status == "pass") {
      ++rep.passed;
      continue;
    }
    SuiteInstanceOutcome o{i, iseed, r.status, r.detail, std::nullopt};
    if (r.status == "fail") {
      ++rep.failed;
      o.scenario = to_json(s);
    } else {
      ++rep.skipped;
    }
    rep.exceptions.push_back(std::move(o));
  }
  run_controls(suite, seed, rep);
  std::sort(rep.notes.begin(), rep.notes.end());
  rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

bool SuiteReport::ok() const {
  return failed == 0 && std::all_of(controls.begin(), controls.end(), [](const auto& c) { return c.behaved(); });
}

Json SuiteReport::to_json(bool with_timing) const {
  Json j = {{"suite", name},       {"citation", citation}, {"tool_version", kToolVersion},
            {"count", count},      {"seed", seed},         {"passed", passed},
            {"failed", failed},    {"skipped", skipped},   {"ok", ok()}};
  j["notes"] = notes;
  Json ex = Json::array();
  for (const auto& o : exceptions) {
    Json e = {{"index", o.index}, {"seed", o.seed}, {"status", o.status}, {"detail", o.detail}};
    if (o.scenario) e["scenario"] = *o.scenario;
    ex.push_back(std::move(e));
  }
  j["exceptions"] = std::move(ex);
  Json cs = Json::array();
  for (const auto& c : controls) {
    cs.push_back({{"name", c.name}, {"expected", c.expected}, {"observed", c.observed}, {"behaved", c.behaved()}, {"detail", c.detail}});
  }
  j["controls"] = std::move(cs);
  j["verification"] = "chain-verified on sampled instances, not exhaustive";
  if (with_timing) j["elapsed_ms"] = elapsed_ms;
  return j;
}

std::string SuiteReport::to_text(bool with_timing) const {
  std::ostringstream os;
  os << "suite " << name << "  count " << count << "  seed " << seed << "  [" << kToolVersion << "]\n";
  os << "citation: " << citation << "\n";
  for (const auto& n : notes) os << "  note: " << n << "\n";
  for (const auto& o : exceptions) {
    os << "  " << (o.status == "fail" ? "FAIL" : "SKIP") << " instance " << o.index << " (seed " << o.seed << "): " << o.detail
       << "\n";
    if (o.scenario) os << "       reproduce: " << o.scenario->dump() << "\n";
  }
  for (const auto& c : controls) {
    os << "  control " << c.name << ": expected " << c.expected << ", observed " << c.observed
       << (c.behaved() ? "" : "  <-- MISBEHAVED");
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    os << "\n";
  }
  os << (ok() ? "PASS " : "FAIL ") << passed << "/" << count << " passed, " << failed << " failed, " << skipped
     << " skipped (chain-verified, not exhaustive)";
  if (with_timing) os << " in " << static_cast<long long>(elapsed_ms) << " ms";
  os << "\n";
  return os.str();
}

}  // namespace martlat
