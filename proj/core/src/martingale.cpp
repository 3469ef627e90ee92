#include "martlat/martingale.hpp"

#include <algorithm>
#include <sstream>

#include "martlat/error.hpp"

namespace martlat {

Operator RefinementFamily::level(long n) const {
  const long blocks = std::max(n - offset, 0L);
  return Operator::block(Matrix::identity(stride * static_cast<std::size_t>(blocks)), tail_block);
}

// ---------------------------------------------------------------- Filtration

Filtration::Filtration(long start_index, std::vector<Operator> levels, SpaceKind space,
                       std::optional<RefinementFamily> generator)
    : start_(start_index), levels_(std::move(levels)), space_(space), generator_(std::move(generator)) {}

const Operator& Filtration::level(long n) const {
  if (!has_level(n)) {
    throw PreconditionError("filtration has no level " + std::to_string(n) + " (stored " + std::to_string(start_) +
                            ".." + std::to_string(last_index()) + ")");
  }
  return levels_[static_cast<std::size_t>(n - start_)];
}

Filtration Filtration::extended_to(long n) const {
  if (n <= last_index()) return *this;
  if (!generator_) {
    throw PreconditionError("level " + std::to_string(n) + " exceeds the filtration's " +
                            std::to_string(last_index() - start_ + 1) + " levels and no generator is attached");
  }
  Filtration out = *this;
  for (long k = last_index() + 1; k <= n; ++k) out.levels_.push_back(generator_->level(k));
  return out;
}

// ---------------------------------------------------------------- Martingale

ExtSeq TermRule::term(long n) const {
  const long copies = std::max(n - offset, 0L);
  std::vector<Rational> prefix;
  prefix.reserve(block.size() * static_cast<std::size_t>(copies));
  for (long c = 0; c < copies; ++c) prefix.insert(prefix.end(), block.begin(), block.end());
  return ExtSeq::finite(std::move(prefix));
}

Martingale::Martingale(long start_index, std::vector<ExtSeq> terms) : start_(start_index), terms_(std::move(terms)) {
  if (terms_.empty()) throw PreconditionError("martingale needs at least one term");
}

const ExtSeq& Martingale::term(long n) const {
  if (n < start_ || n > horizon()) {
    throw PreconditionError("martingale has no term " + std::to_string(n) + " (stored " + std::to_string(start_) +
                            ".." + std::to_string(horizon()) + ")");
  }
  return terms_[static_cast<std::size_t>(n - start_)];
}

Martingale& Martingale::set_rule(std::optional<TermRule> r) {
  rule_ = std::move(r);
  if (rule_) closed_ = false;
  return *this;
}

ExtSeq Martingale::term_at(long m) const {
  if (m >= start_ && m <= horizon()) return term(m);
  if (m > horizon() && rule_) return rule_->term(m);
  if (m > horizon() && closed_) return terms_.back();
  throw PreconditionError("martingale term " + std::to_string(m) + " is not available");
}

Martingale Martingale::extended_to(long m) const {
  Martingale out = *this;
  for (long k = horizon() + 1; k <= m; ++k) out.terms_.push_back(term_at(k));
  return out;
}

Martingale Martingale::negated() const {
  Martingale out = *this;
  for (auto& t : out.terms_) t = -t;
  out.rule_.reset();
  if (rule_) {
    TermRule r = *rule_;
    for (auto& v : r.block) v = -v;
    out.rule_ = r;
  }
  out.flags_ = {};
  return out;
}

Martingale martingale_from_levels(const Filtration& f, const ExtSeq& terminal, long start, long horizon) {
  const Filtration ext = f.extended_to(horizon);
  std::vector<ExtSeq> terms;
  for (long n = start; n <= horizon; ++n) terms.push_back(op_apply(ext.level(n), terminal));
  return Martingale(start, std::move(terms));
}

Martingale martingale_linear(const Martingale& a, const Martingale& b, const Rational& alpha, const Rational& beta) {
  if (a.start_index() != b.start_index() || a.horizon() != b.horizon()) {
    throw PreconditionError("martingale_linear: index ranges differ");
  }
  std::vector<ExtSeq> terms;
  for (long n = a.start_index(); n <= a.horizon(); ++n) terms.push_back(seq_linear(a.term(n), b.term(n), alpha, beta));
  Martingale out(a.start_index(), std::move(terms));
  out.set_closed(a.closed() && b.closed());
  return out;
}

Martingale martingale_abs_terms(const Martingale& x) {
  std::vector<ExtSeq> terms;
  for (const auto& t : x.terms()) terms.push_back(seq_abs(t));
  Martingale out(x.start_index(), std::move(terms));
  out.set_closed(x.closed());
  return out;
}

// ------------------------------------------------------------------ reports

bool ValidationReport::passed() const {
  return std::all_of(laws.begin(), laws.end(), [](const LawResult& r) { return r.passed; });
}

const LawResult* ValidationReport::first_failure() const {
  for (const auto& r : laws)
    if (!r.passed) return &r;
  return nullptr;
}

namespace {

std::string idx(long n) { return std::to_string(n); }

/// First probe input on which the two operators differ.
std::optional<ExtSeq> distinguishing_input(const Operator& a, const Operator& b) {
  if (op_equal(a, b)) return std::nullopt;
  for (std::size_t k = 1; k <= 4096; ++k) {
    const ExtSeq e = ExtSeq::unit(k);
    if (op_apply(a, e) != op_apply(b, e)) return e;
  }
  return ExtSeq::constant(1);
}

std::size_t probe_window(const Operator& e) {
  if (e.is_block()) return e.as_block().head_dim + 2 * e.as_block().period;
  return e.as_rank_one().functional.head_weights().size() + 2;
}

std::optional<std::string> space_violation(const Operator& e, const SpaceKind& space) {
  if (space.kind == SpaceKind::Kind::Linf || space.kind == SpaceKind::Kind::SeqAll) return std::nullopt;
  std::vector<ExtSeq> probes;
  const std::size_t window = space.kind == SpaceKind::Kind::FiniteDim ? space.dim : probe_window(e);
  for (std::size_t k = 1; k <= window; ++k) probes.push_back(ExtSeq::unit(k));
  if (space.kind == SpaceKind::Kind::C) probes.push_back(ExtSeq::constant(1));
  for (const auto& p : probes) {
    const ExtSeq out = op_apply(e, p);
    if (!seq_in_space(out, space)) return "maps " + p.str() + " to " + out.str() + " outside " + space.str();
  }
  return std::nullopt;
}

std::string natural_norm_note(const Operator& e, const SpaceKind& space) {
  if (!e.is_block()) return {};
  const NormKind kind = space.kind == SpaceKind::Kind::L1 ? NormKind::L1 : NormKind::Sup;
  return "op_norm(" + to_string(kind) + ") = " + op_norm(e, kind).str();
}

}  // namespace

ValidationReport check_filtration(const Filtration& f) {
  ValidationReport rep;
  const long s = f.start_index();
  const long last = f.last_index();
  if (f.levels().empty()) {
    rep.add({"nonempty", false, "filtration has no levels"});
    return rep;
  }

  for (long n = s; n <= last; ++n) {
    const Operator& e = f.level(n);
    LawResult pos{"positive", op_is_positive(e)};
    pos.n = n;
    if (!pos.passed) pos.witness = "level " + idx(n) + " has a negative entry";
    pos.note = natural_norm_note(e, f.space());
    rep.add(std::move(pos));

    LawResult proj{"projection", op_is_projection(e)};
    proj.n = n;
    if (!proj.passed) proj.witness = "E_" + idx(n) + " E_" + idx(n) + " != E_" + idx(n);
    rep.add(std::move(proj));

    LawResult sp{"space", true};
    sp.n = n;
    if (auto v = space_violation(e, f.space())) {
      sp.passed = false;
      sp.witness = "E_" + idx(n) + " " + *v;
    }
    rep.add(std::move(sp));
  }

  for (long n = s; n <= last; ++n) {
    for (long m = n + 1; m <= last; ++m) {
      const Operator& en = f.level(n);
      const Operator& em = f.level(m);
      LawResult law{"semigroup", true};
      law.n = n;
      law.m = m;
      for (int order = 0; order < 2 && law.passed; ++order) {
        const std::string name = order == 0 ? "E_" + idx(n) + " E_" + idx(m) : "E_" + idx(m) + " E_" + idx(n);
        try {
          const Operator prod = order == 0 ? op_compose(en, em) : op_compose(em, en);
          if (auto w = distinguishing_input(prod, en)) {
            law.passed = false;
            law.witness = name + " != E_" + idx(n) + " on input " + w->str();
          }
        } catch (const UnsupportedError& ex) {
          law.passed = false;
          law.witness = name + ": " + ex.what();
        }
      }
      rep.add(std::move(law));
    }
  }
  return rep;
}

ValidationReport check_filtration(const std::vector<Operator>& ops, const SpaceKind& space, long start_index) {
  return check_filtration(Filtration(start_index, ops, space));
}

namespace {

template <class Cmp>
ValidationReport check_law(const Martingale& x, const Filtration& f, const std::string& law, Cmp holds) {
  ValidationReport rep;
  if (x.start_index() < f.start_index()) {
    throw PreconditionError("martingale starts at " + idx(x.start_index()) + " before the filtration's first level " +
                            idx(f.start_index()));
  }
  const Filtration ext = f.extended_to(x.horizon());

  LawResult sp{"space", true};
  for (long n = x.start_index(); n <= x.horizon() && sp.passed; ++n) {
    if (!seq_in_space(x.term(n), f.space())) {
      sp.passed = false;
      sp.n = n;
      sp.witness = "x_" + idx(n) + " = " + x.term(n).str() + " is not in " + f.space().str();
    }
  }
  rep.add(std::move(sp));

  LawResult res{law, true};
  for (long n = x.start_index(); n <= x.horizon() && res.passed; ++n) {
    for (long m = n; m <= x.horizon() && res.passed; ++m) {
      const ExtSeq lhs = op_apply(ext.level(n), x.term(m));
      if (auto coord = holds(lhs, x.term(n))) {
        res.passed = false;
        res.n = n;
        res.m = m;
        res.coordinate = *coord;
        std::ostringstream os;
        os << "E_" << n << " x_" << m << " = " << lhs << " vs x_" << n << " = " << x.term(n) << " at coordinate "
           << *coord;
        res.witness = os.str();
      }
    }
  }
  rep.add(std::move(res));
  return rep;
}

}  // namespace

ValidationReport check_martingale(const Martingale& x, const Filtration& f) {
  return check_law(x, f, "martingale", [](const ExtSeq& lhs, const ExtSeq& rhs) { return first_difference(lhs, rhs); });
}

ValidationReport check_supermartingale(const Martingale& x, const Filtration& f) {
  return check_law(x, f, "supermartingale", [](const ExtSeq& lhs, const ExtSeq& rhs) -> std::optional<std::size_t> {
    const Alignment al = common_alignment(lhs, rhs);
    for (std::size_t i = 1; i <= al.prefix_len + al.period; ++i)
      if (rhs[i] < lhs[i]) return i;
    return std::nullopt;
  });
}

Martingale validated(const Martingale& x, const Filtration& f) {
  Martingale out = x;
  out.flags().validated_martingale = check_martingale(x, f).passed();
  out.flags().validated_supermartingale = check_supermartingale(x, f).passed();
  out.flags().positive = std::all_of(x.terms().begin(), x.terms().end(),
                                     [](const ExtSeq& t) { return seq_leq(ExtSeq::zero(), t); });
  out.flags().bounded_claim = x.closed() || x.certificate().has_value();
  return out;
}

MartingaleNorm martingale_norm(const Martingale& x, NormKind kind) {
  std::vector<NormValue> norms;
  for (const auto& t : x.terms()) norms.push_back(seq_norm(t, kind));
  NormValue best = NormValue::finite(0);
  for (const auto& v : norms)
    if (!(v <= best)) best = v;

  MartingaleNorm out{best, Exactness::LowerBound};
  if (best.infinite || x.closed()) {
    out.exactness = Exactness::Exact;
    return out;
  }
  if (const auto& cert = x.certificate()) {
    if (cert->kind == NormCertificate::Kind::EventuallyConstant) {
      const long from = std::max(cert->from, x.start_index());
      if (from <= x.horizon()) {
        const NormValue ref = norms[static_cast<std::size_t>(from - x.start_index())];
        bool constant = true;
        for (long n = from; n <= x.horizon(); ++n) constant = constant && norms[static_cast<std::size_t>(n - x.start_index())] == ref;
        if (constant) out.exactness = Exactness::Exact;
      }
    } else {
      bool consistent = true;
      for (std::size_t i = 0; i < norms.size(); ++i) {
        consistent = consistent && norms[i] <= NormValue::finite(cert->limit);
        if (i > 0) consistent = consistent && norms[i - 1] <= norms[i];
      }
      if (consistent) out = {NormValue::finite(cert->limit), Exactness::Exact};
    }
  }
  return out;
}

namespace {

void require_same_range(const Martingale& a, const Martingale& b) {
  if (a.start_index() != b.start_index() || a.horizon() != b.horizon()) {
    throw PreconditionError("martingales have different index ranges: " + idx(a.start_index()) + ".." +
                            idx(a.horizon()) + " vs " + idx(b.start_index()) + ".." + idx(b.horizon()));
  }
}

}  // namespace

bool dominates(const Martingale& y, const Martingale& x) {
  require_same_range(y, x);
  for (long n = x.start_index(); n <= x.horizon(); ++n) {
    if (!seq_leq(x.term(n), y.term(n)) || !seq_leq(-x.term(n), y.term(n))) return false;
  }
  return true;
}

bool termwise_leq(const Martingale& x, const Martingale& y) {
  require_same_range(y, x);
  for (long n = x.start_index(); n <= x.horizon(); ++n)
    if (!seq_leq(x.term(n), y.term(n))) return false;
  return true;
}

}  // namespace martlat
