#ifndef MARTLAT_MARTINGALE_HPP
#define MARTLAT_MARTINGALE_HPP

#include <optional>
#include <string>
#include <vector>

#include "martlat/ext_seq.hpp"
#include "martlat/op.hpp"

namespace martlat {

/// Parametric family of refining block operators: level n keeps the first
/// stride * max(n - offset, 0) coordinates and applies `tail_block` to every
/// later run of tail_block.rows() coordinates. Covers the period-averaging
/// families of the worked examples.
struct RefinementFamily {
  std::string tag = "block-refinement";
  std::size_t stride = 1;
  long offset = 0;
  Matrix tail_block = Matrix::identity(1);

  Operator level(long n) const;
};

/// An ordered family of positive projections indexed start_index, start_index + 1, ...
/// Levels past the explicit list are produced by the generator family when one is present.
class Filtration {
 public:
  Filtration() = default;
  Filtration(long start_index, std::vector<Operator> levels, SpaceKind space,
             std::optional<RefinementFamily> generator = std::nullopt);

  long start_index() const { return start_; }
  /// Index of the last explicitly stored level.
  long last_index() const { return start_ + static_cast<long>(levels_.size()) - 1; }
  bool extendable() const { return generator_.has_value(); }
  const std::optional<RefinementFamily>& generator() const { return generator_; }
  const SpaceKind& space() const { return space_; }
  const std::vector<Operator>& levels() const { return levels_; }

  /// Throws PreconditionError when n is not stored; call extended_to first.
  const Operator& level(long n) const;
  bool has_level(long n) const { return n >= start_ && n <= last_index(); }

  /// Copy with levels materialized through index n. Throws PreconditionError
  /// when n exceeds the stored levels and no generator is available.
  Filtration extended_to(long n) const;

 private:
  long start_ = 1;
  std::vector<Operator> levels_;
  SpaceKind space_;
  std::optional<RefinementFamily> generator_;
};

/// x_n = (block repeated max(n - offset, 0) times; zero tail).
struct TermRule {
  std::vector<Rational> block;
  long offset = 0;

  ExtSeq term(long n) const;
};

/// Declared closed form for the norms of the terms, needed to report an
/// exact martingale norm for an infinite family from finitely many terms.
struct NormCertificate {
  enum class Kind { EventuallyConstant, MonotoneLimit };
  Kind kind = Kind::EventuallyConstant;
  long from = 0;      // EventuallyConstant: norms equal from this index on
  Rational limit;     // MonotoneLimit: norms increase to this value
};

struct MartingaleFlags {
  bool validated_martingale = false;
  bool validated_supermartingale = false;
  bool positive = false;
  bool bounded_claim = false;
};

/// Finite list of terms x_start .. x_horizon.
///
/// A closed martingale stops at its horizon (x_m = x_horizon for m >= horizon);
/// otherwise the terms are a window into an infinite martingale whose later
/// terms come from `rule` when one is attached.
class Martingale {
 public:
  Martingale() = default;
  Martingale(long start_index, std::vector<ExtSeq> terms);

  long start_index() const { return start_; }
  long horizon() const { return start_ + static_cast<long>(terms_.size()) - 1; }
  const std::vector<ExtSeq>& terms() const { return terms_; }
  const ExtSeq& term(long n) const;

  bool closed() const { return closed_; }
  Martingale& set_closed(bool c) {
    closed_ = c;
    return *this;
  }
  const std::optional<TermRule>& rule() const { return rule_; }
  Martingale& set_rule(std::optional<TermRule> r);
  const std::optional<NormCertificate>& certificate() const { return certificate_; }
  Martingale& set_certificate(std::optional<NormCertificate> c) {
    certificate_ = std::move(c);
    return *this;
  }
  MartingaleFlags& flags() { return flags_; }
  const MartingaleFlags& flags() const { return flags_; }

  /// Term m for any m >= start: stored, produced by the rule, or the terminal
  /// term of a closed martingale. Throws PreconditionError otherwise.
  ExtSeq term_at(long m) const;
  bool can_extend_to(long m) const { return m <= horizon() || rule_ || closed_; }
  /// Copy whose stored terms reach index m.
  Martingale extended_to(long m) const;

  Martingale negated() const;
  friend bool operator==(const Martingale& a, const Martingale& b) {
    return a.start_ == b.start_ && a.terms_ == b.terms_;
  }

 private:
  long start_ = 0;
  std::vector<ExtSeq> terms_;
  bool closed_ = true;
  std::optional<TermRule> rule_;
  std::optional<NormCertificate> certificate_;
  MartingaleFlags flags_;
};

Martingale martingale_from_levels(const Filtration& f, const ExtSeq& terminal, long start, long horizon);
Martingale martingale_linear(const Martingale& a, const Martingale& b, const Rational& alpha, const Rational& beta);
Martingale martingale_abs_terms(const Martingale& x);

// ------------------------------------------------------------------ reports

struct LawResult {
  std::string law;
  bool passed = true;
  std::string witness;  // empty when passed
  std::optional<long> n;
  std::optional<long> m;
  std::optional<std::size_t> coordinate;
  std::string note;
};

struct ValidationReport {
  std::vector<LawResult> laws;

  bool passed() const;
  const LawResult* first_failure() const;
  void add(LawResult r) { laws.push_back(std::move(r)); }
};

/// Positivity, idempotence, E_n E_m = E_{min(n,m)} for every pair and
/// preservation of `space` on a spanning set of representable inputs.
ValidationReport check_filtration(const Filtration& f);
ValidationReport check_filtration(const std::vector<Operator>& ops, const SpaceKind& space, long start_index = 1);

/// E_n x_m = x_n for all start <= n <= m <= horizon, and x_n in the space.
/// Levels beyond the stored ones are generated when the filtration is extendable.
ValidationReport check_martingale(const Martingale& x, const Filtration& f);
/// E_n x_m <= x_n for all n <= m (including m = n; E_n x_n = x_n is not required).
ValidationReport check_supermartingale(const Martingale& x, const Filtration& f);

/// Copy of x with flags set from the validation reports.
Martingale validated(const Martingale& x, const Filtration& f);

enum class Exactness { Exact, LowerBound };

struct MartingaleNorm {
  NormValue value;
  Exactness exactness = Exactness::LowerBound;
};

/// sup_n ||x_n|| over the stored terms. Exact for closed martingales and when
/// a declared certificate is consistent with the stored terms; otherwise a lower bound.
MartingaleNorm martingale_norm(const Martingale& x, NormKind kind);

/// x_n <= y_n and -x_n <= y_n for every n. Throws PreconditionError on index-range mismatch.
bool dominates(const Martingale& y, const Martingale& x);
/// x_n <= y_n for every n.
bool termwise_leq(const Martingale& x, const Martingale& y);

}  // namespace martlat

#endif  // MARTLAT_MARTINGALE_HPP
