#include "martlat/serialize.hpp"

#include "martlat/error.hpp"

namespace martlat {

namespace json_detail {

const Json& require(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ParseError("expected an object", path);
  auto it = j.find(key);
  if (it == j.end()) throw ParseError("missing member \"" + key + "\"", path + "/" + key);
  return *it;
}

long require_integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError("expected an integer", path);
  return j.get<long>();
}

std::string require_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError("expected a string", path);
  return j.get<std::string>();
}

bool require_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw ParseError("expected a boolean", path);
  return j.get<bool>();
}

const Json& require_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError("expected an array", path);
  return j;
}

}  // namespace json_detail

using namespace json_detail;

namespace {

std::string at(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string at(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

std::vector<Rational> rationals_from_json(const Json& j, const std::string& path) {
  require_array(j, path);
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(rational_from_json(j[i], at(path, i)));
  return out;
}

Json to_json(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(to_json(r));
  return a;
}

}  // namespace

// ---------------------------------------------------------------- writers

Json to_json(const Rational& r) { return r.str(); }

Json to_json(const ExtSeq& a) {
  Json tail;
  switch (a.tail_kind()) {
    case TailKind::Zero: tail = {{"kind", "zero"}}; break;
    case TailKind::Const: tail = {{"kind", "const"}, {"value", to_json(a.block()[0])}}; break;
    case TailKind::Periodic: tail = {{"kind", "periodic"}, {"block", to_json(a.block())}}; break;
  }
  return {{"prefix", to_json(a.prefix())}, {"tail", tail}};
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (const auto& r : m.to_rows()) rows.push_back(to_json(r));
  return rows;
}

Json to_json(const Functional& f) {
  return {{"head_weights", to_json(f.head_weights())}, {"residue_weights", to_json(f.residue_weights())}};
}

Json to_json(const Operator& e) {
  if (e.is_block()) {
    const auto& b = e.as_block();
    return {{"kind", "block"}, {"head", to_json(b.head)}, {"period", b.period}, {"tail_block", to_json(b.tail_block)}};
  }
  const auto& r = e.as_rank_one();
  return {{"kind", "rank_one"}, {"functional", to_json(r.functional)}, {"out", to_json(r.out)}};
}

Json to_json(const SpaceKind& s) {
  switch (s.kind) {
    case SpaceKind::Kind::FiniteDim: return {{"kind", "finite"}, {"dim", s.dim}};
    case SpaceKind::Kind::SeqAll: return {{"kind", "all"}};
    case SpaceKind::Kind::C: return {{"kind", "c"}};
    case SpaceKind::Kind::C0: return {{"kind", "c0"}};
    case SpaceKind::Kind::L1: return {{"kind", "l1"}};
    case SpaceKind::Kind::Linf: return {{"kind", "linf"}};
  }
  return {};
}

Json to_json(const Filtration& f) {
  Json j = {{"start_index", f.start_index()}};
  Json levels = Json::array();
  for (const auto& e : f.levels()) levels.push_back(to_json(e));
  j["levels"] = std::move(levels);
  if (const auto& g = f.generator()) {
    j["generator"] = {{"tag", g->tag}, {"stride", g->stride}, {"offset", g->offset}, {"tail_block", to_json(g->tail_block)}};
  }
  return j;
}

Json to_json(const Martingale& x) {
  Json j = {{"start_index", x.start_index()}};
  Json terms = Json::array();
  for (const auto& t : x.terms()) terms.push_back(to_json(t));
  j["terms"] = std::move(terms);
  j["closed"] = x.closed();
  if (const auto& r = x.rule()) j["term_rule"] = {{"block", to_json(r->block)}, {"offset", r->offset}};
  if (const auto& c = x.certificate()) {
    if (c->kind == NormCertificate::Kind::EventuallyConstant) {
      j["norm_certificate"] = {{"kind", "eventually_constant"}, {"from", c->from}};
    } else {
      j["norm_certificate"] = {{"kind", "monotone_limit"}, {"limit", to_json(c->limit)}};
    }
  }
  return j;
}

Json to_json(const ValidationReport& r) {
  Json laws = Json::array();
  for (const auto& l : r.laws) {
    Json o = {{"law", l.law}, {"passed", l.passed}};
    if (!l.witness.empty()) o["witness"] = l.witness;
    if (l.n) o["n"] = *l.n;
    if (l.m) o["m"] = *l.m;
    if (l.coordinate) o["coordinate"] = *l.coordinate;
    if (!l.note.empty()) o["note"] = l.note;
    laws.push_back(std::move(o));
  }
  return {{"passed", r.passed()}, {"laws", std::move(laws)}};
}

Json to_json(const LpResult& r) {
  return {{"status", to_string(r.status)}, {"value", to_json(r.value)}, {"witness", to_json(r.witness)}};
}

// ---------------------------------------------------------------- readers

Rational rational_from_json(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw ParseError("expected a rational string \"p/q\" or an integer", path);
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(e.what(), path);
  } catch (const Error& e) {
    throw ParseError(e.what(), path);
  }
}

ExtSeq ext_seq_from_json(const Json& j, const std::string& path) {
  std::vector<Rational> prefix;
  if (j.is_object() && j.contains("prefix")) prefix = rationals_from_json(j["prefix"], at(path, "prefix"));
  const Json& tail = require(j, "tail", path);
  const std::string tpath = at(path, "tail");
  const std::string kind = require_string(require(tail, "kind", tpath), at(tpath, "kind"));
  if (kind == "zero") return ExtSeq(std::move(prefix), {Rational(0)});
  if (kind == "const") return ExtSeq(std::move(prefix), {rational_from_json(require(tail, "value", tpath), at(tpath, "value"))});
  if (kind == "periodic") {
    auto block = rationals_from_json(require(tail, "block", tpath), at(tpath, "block"));
    if (block.empty()) throw ParseError("periodic block must be nonempty", at(tpath, "block"));
    return ExtSeq(std::move(prefix), std::move(block));
  }
  throw ParseError("unknown tail kind \"" + kind + "\"", at(tpath, "kind"));
}

Matrix matrix_from_json(const Json& j, const std::string& path) {
  require_array(j, path);
  std::vector<std::vector<Rational>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) rows.push_back(rationals_from_json(j[i], at(path, i)));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw ParseError("matrix must be square", at(path, i));
  }
  return Matrix::from_rows(rows);
}

Functional functional_from_json(const Json& j, const std::string& path) {
  std::vector<Rational> head;
  if (j.is_object() && j.contains("head_weights")) head = rationals_from_json(j["head_weights"], at(path, "head_weights"));
  auto residue = rationals_from_json(require(j, "residue_weights", path), at(path, "residue_weights"));
  if (residue.empty()) throw ParseError("residue_weights must be nonempty", at(path, "residue_weights"));
  return Functional(std::move(head), std::move(residue));
}

Operator operator_from_json(const Json& j, const std::string& path) {
  const std::string kind = require_string(require(j, "kind", path), at(path, "kind"));
  if (kind == "identity") return Operator::identity();
  if (kind == "block") {
    Matrix head = j.contains("head") ? matrix_from_json(j["head"], at(path, "head")) : Matrix();
    Matrix tail = matrix_from_json(require(j, "tail_block", path), at(path, "tail_block"));
    if (tail.rows() == 0) throw ParseError("tail_block must be nonempty", at(path, "tail_block"));
    if (j.contains("period")) {
      const long q = require_integer(j["period"], at(path, "period"));
      if (q != static_cast<long>(tail.rows())) {
        throw ParseError("period " + std::to_string(q) + " differs from tail_block size " + std::to_string(tail.rows()),
                         at(path, "period"));
      }
    }
    return Operator::block(std::move(head), std::move(tail));
  }
  if (kind == "rank_one") {
    return Operator::rank_one(functional_from_json(require(j, "functional", path), at(path, "functional")),
                              ext_seq_from_json(require(j, "out", path), at(path, "out")));
  }
  throw ParseError("unknown operator kind \"" + kind + "\"", at(path, "kind"));
}

SpaceKind space_from_json(const Json& j, const std::string& path) {
  const std::string kind = j.is_string() ? j.get<std::string>() : require_string(require(j, "kind", path), at(path, "kind"));
  if (kind == "finite") {
    const long d = require_integer(require(j, "dim", path), at(path, "dim"));
    if (d < 1) throw ParseError("dim must be positive", at(path, "dim"));
    return SpaceKind::finite_dim(static_cast<std::size_t>(d));
  }
  if (kind == "all") return SpaceKind::all();
  if (kind == "c") return SpaceKind::c();
  if (kind == "c0") return SpaceKind::c0();
  if (kind == "l1") return SpaceKind::l1();
  if (kind == "linf") return SpaceKind::linf();
  throw ParseError("unknown space kind \"" + kind + "\"", j.is_string() ? path : at(path, "kind"));
}

NormKind norm_from_json(const Json& j, const std::string& path) {
  const std::string name = require_string(j, path);
  try {
    return parse_norm_kind(name);
  } catch (const Error& e) {
    throw ParseError(e.what(), path);
  }
}

Filtration filtration_from_json(const Json& j, const SpaceKind& space, const std::string& path) {
  const long start = j.is_object() && j.contains("start_index") ? require_integer(j["start_index"], at(path, "start_index")) : 1;
  std::vector<Operator> levels;
  if (j.is_object() && j.contains("levels")) {
    const Json& ls = require_array(j["levels"], at(path, "levels"));
    for (std::size_t i = 0; i < ls.size(); ++i) levels.push_back(operator_from_json(ls[i], at(at(path, "levels"), i)));
  }
  std::optional<RefinementFamily> gen;
  if (j.is_object() && j.contains("generator")) {
    const Json& g = j["generator"];
    const std::string gp = at(path, "generator");
    RefinementFamily fam;
    if (g.is_object() && g.contains("tag")) fam.tag = require_string(g["tag"], at(gp, "tag"));
    const long stride = require_integer(require(g, "stride", gp), at(gp, "stride"));
    if (stride < 0) throw ParseError("stride must be nonnegative", at(gp, "stride"));
    fam.stride = static_cast<std::size_t>(stride);
    if (g.contains("offset")) fam.offset = require_integer(g["offset"], at(gp, "offset"));
    fam.tail_block = matrix_from_json(require(g, "tail_block", gp), at(gp, "tail_block"));
    if (fam.tail_block.rows() == 0) throw ParseError("tail_block must be nonempty", at(gp, "tail_block"));
    gen = std::move(fam);
  }
  if (levels.empty() && !gen) throw ParseError("filtration needs levels or a generator", path);
  try {
    return Filtration(start, std::move(levels), space, std::move(gen));
  } catch (const PreconditionError& e) {
    throw ParseError(e.what(), path);
  }
}

Martingale martingale_from_json(const Json& j, const std::string& path) {
  const long start = j.is_object() && j.contains("start_index") ? require_integer(j["start_index"], at(path, "start_index")) : 1;
  const Json& ts = require_array(require(j, "terms", path), at(path, "terms"));
  if (ts.empty()) throw ParseError("a martingale needs at least one term", at(path, "terms"));
  std::vector<ExtSeq> terms;
  for (std::size_t i = 0; i < ts.size(); ++i) terms.push_back(ext_seq_from_json(ts[i], at(at(path, "terms"), i)));
  Martingale x(start, std::move(terms));
  if (j.contains("term_rule")) {
    const Json& r = j["term_rule"];
    const std::string rp = at(path, "term_rule");
    TermRule rule;
    rule.block = rationals_from_json(require(r, "block", rp), at(rp, "block"));
    if (r.contains("offset")) rule.offset = require_integer(r["offset"], at(rp, "offset"));
    x.set_rule(std::move(rule));
  }
  if (j.contains("closed")) x.set_closed(require_bool(j["closed"], at(path, "closed")));
  if (j.contains("norm_certificate")) {
    const Json& c = j["norm_certificate"];
    const std::string cp = at(path, "norm_certificate");
    const std::string kind = require_string(require(c, "kind", cp), at(cp, "kind"));
    NormCertificate cert;
    if (kind == "eventually_constant") {
      cert.kind = NormCertificate::Kind::EventuallyConstant;
      cert.from = require_integer(require(c, "from", cp), at(cp, "from"));
    } else if (kind == "monotone_limit") {
      cert.kind = NormCertificate::Kind::MonotoneLimit;
      cert.limit = rational_from_json(require(c, "limit", cp), at(cp, "limit"));
    } else {
      throw ParseError("unknown certificate kind \"" + kind + "\"", at(cp, "kind"));
    }
    x.set_certificate(cert);
  }
  return x;
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), "");
  }
}

}  // namespace martlat
