#ifndef MARTLAT_EXT_SEQ_HPP
#define MARTLAT_EXT_SEQ_HPP

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "martlat/rational.hpp"

namespace martlat {

enum class TailKind { Zero, Const, Periodic };

/// An eventually periodic sequence of rationals, indexed from 1.
///
/// Stored as a finite prefix followed by a repeating block. The representation
/// is always canonical:
///   * the block has minimal period;
///   * a period-1 block is reported as Zero or Const;
///   * no trailing prefix entry can be absorbed into the tail (rotating the block).
/// Consequently two sequences are equal iff their representations are equal.
class ExtSeq {
 public:
  /// The zero sequence.
  ExtSeq();
  /// Canonicalizes `prefix` followed by infinitely many copies of `block`.
  ExtSeq(std::vector<Rational> prefix, std::vector<Rational> block);

  static ExtSeq zero() { return {}; }
  static ExtSeq constant(Rational c) { return ExtSeq({}, {std::move(c)}); }
  static ExtSeq finite(std::vector<Rational> prefix) { return ExtSeq(std::move(prefix), {Rational(0)}); }
  static ExtSeq periodic(std::vector<Rational> prefix, std::vector<Rational> block) {
    return ExtSeq(std::move(prefix), std::move(block));
  }
  /// e_i: one at coordinate i (1-based), zero elsewhere.
  static ExtSeq unit(std::size_t i);

  const std::vector<Rational>& prefix() const { return prefix_; }
  /// Repeating block; never empty. For a Zero tail it is {0}, for Const(c) it is {c}.
  const std::vector<Rational>& block() const { return block_; }
  std::size_t period() const { return block_.size(); }
  TailKind tail_kind() const;

  /// Coordinate i >= 1.
  const Rational& operator[](std::size_t i) const;

  /// Coordinates 1..prefix_len+period, i.e. the sequence unrolled so that its
  /// tail starts right after `prefix_len` with period `period`.
  /// Requires prefix_len >= prefix().size() and period a multiple of this->period().
  std::vector<Rational> unrolled(std::size_t prefix_len, std::size_t period) const;

  /// Largest index that is not part of the periodic tail (the prefix length).
  std::size_t head_length() const { return prefix_.size(); }

  bool is_zero() const { return prefix_.empty() && block_.size() == 1 && block_[0].is_zero(); }

  std::string str() const;

  friend bool operator==(const ExtSeq&, const ExtSeq&) = default;

 private:
  void canonicalize();

  std::vector<Rational> prefix_;
  std::vector<Rational> block_;
};

std::ostream& operator<<(std::ostream& os, const ExtSeq& a);

/// Shape that two or more sequences can be unrolled to simultaneously.
struct Alignment {
  std::size_t prefix_len = 0;
  std::size_t period = 1;
};

Alignment common_alignment(const ExtSeq& a, const ExtSeq& b);
Alignment common_alignment(std::span<const ExtSeq> seqs);
/// Rebuilds a sequence from `prefix_len + period` unrolled coordinates.
ExtSeq from_unrolled(std::span<const Rational> coords, Alignment shape);

// --- vector space and lattice structure ---

ExtSeq seq_linear(const ExtSeq& a, const ExtSeq& b, const Rational& alpha, const Rational& beta);
ExtSeq seq_scale(const ExtSeq& a, const Rational& alpha);
ExtSeq seq_abs(const ExtSeq& a);

enum class LatticeOp { Meet, Join };
ExtSeq seq_lattice(const ExtSeq& a, const ExtSeq& b, LatticeOp op);
inline ExtSeq seq_meet(const ExtSeq& a, const ExtSeq& b) { return seq_lattice(a, b, LatticeOp::Meet); }
inline ExtSeq seq_join(const ExtSeq& a, const ExtSeq& b) { return seq_lattice(a, b, LatticeOp::Join); }

/// a_i <= b_i for every i.
bool seq_leq(const ExtSeq& a, const ExtSeq& b);
/// Smallest index where a and b differ, if any.
std::optional<std::size_t> first_difference(const ExtSeq& a, const ExtSeq& b);
/// (a_2, a_3, ...).
ExtSeq seq_shift(const ExtSeq& a);

inline ExtSeq operator+(const ExtSeq& a, const ExtSeq& b) { return seq_linear(a, b, 1, 1); }
inline ExtSeq operator-(const ExtSeq& a, const ExtSeq& b) { return seq_linear(a, b, 1, -1); }
inline ExtSeq operator-(const ExtSeq& a) { return seq_scale(a, -1); }

// --- norms ---

enum class NormKind { Sup, L1, SupPlusLimsup };

std::string to_string(NormKind kind);
/// Accepts "sup", "l1", "sup-limsup".
NormKind parse_norm_kind(const std::string& name);

/// A norm value: a rational or +infinity.
struct NormValue {
  bool infinite = false;
  Rational value;

  static NormValue finite(Rational v) { return {false, std::move(v)}; }
  static NormValue infinity() { return {true, Rational(0)}; }
  std::string str() const { return infinite ? "inf" : value.str(); }
  friend bool operator==(const NormValue&, const NormValue&) = default;
  friend bool operator<=(const NormValue& a, const NormValue& b) {
    return b.infinite || (!a.infinite && a.value <= b.value);
  }
};

NormValue seq_norm(const ExtSeq& a, NormKind kind);

// --- ambient spaces ---

struct SpaceKind {
  enum class Kind { FiniteDim, SeqAll, C, C0, L1, Linf };
  Kind kind = Kind::SeqAll;
  std::size_t dim = 0;  // FiniteDim only

  static SpaceKind finite_dim(std::size_t d) { return {Kind::FiniteDim, d}; }
  static SpaceKind all() { return {Kind::SeqAll, 0}; }
  static SpaceKind c() { return {Kind::C, 0}; }
  static SpaceKind c0() { return {Kind::C0, 0}; }
  static SpaceKind l1() { return {Kind::L1, 0}; }
  static SpaceKind linf() { return {Kind::Linf, 0}; }

  std::string str() const;
  friend bool operator==(const SpaceKind&, const SpaceKind&) = default;
};

bool seq_in_space(const ExtSeq& a, const SpaceKind& space);

/// Value of any Banach limit on an eventually periodic sequence: the mean of
/// the repeating block. All Banach limits agree on this class.
Rational limit_functional(const ExtSeq& a);

}  // namespace martlat

#endif  // MARTLAT_EXT_SEQ_HPP
