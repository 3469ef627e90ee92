#ifndef MARTLAT_OP_HPP
#define MARTLAT_OP_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "martlat/ext_seq.hpp"
#include "martlat/matrix.hpp"
#include "martlat/rational.hpp"

namespace martlat {

/// Linear functional on eventually periodic sequences:
///
///   f(a) = sum_i head_weights[i] * a_{i+1}
///        + sum_j residue_weights[j] * (eventual value of a at indices i with (i-1) mod q == j)
///
/// where q = residue_weights.size(). Sequences whose period does not divide q
/// are evaluated against the weights spread over lcm(q, period), each residue
/// weight divided evenly among its refinements. With head_weights empty and
/// residue_weights = (1/q, ..., 1/q) this is the Banach limit on the class.
class Functional {
 public:
  Functional() : residue_{Rational(0)} {}
  Functional(std::vector<Rational> head_weights, std::vector<Rational> residue_weights);

  /// Period-mean functional (every Banach limit restricted to ExtSeq).
  static Functional banach_limit() { return Functional({}, {Rational(1)}); }

  const std::vector<Rational>& head_weights() const { return head_; }
  const std::vector<Rational>& residue_weights() const { return residue_; }

  Rational operator()(const ExtSeq& a) const;

  /// Residue weights spread over a period that is a multiple of the stored one.
  std::vector<Rational> residue_weights_at(std::size_t period) const;

  bool is_zero() const;
  bool is_nonnegative() const;
  Functional scaled(const Rational& c) const;

  friend bool operator==(const Functional&, const Functional&) = default;

 private:
  void canonicalize();

  std::vector<Rational> head_;
  std::vector<Rational> residue_;
};

/// Head matrix on coordinates 1..head_dim, then `tail_block` applied to each
/// consecutive run of `period` coordinates.
struct BlockPeriodic {
  std::size_t head_dim = 0;
  Matrix head;
  std::size_t period = 1;
  Matrix tail_block = Matrix::identity(1);
};

/// a -> functional(a) * out.
struct RankOneLimit {
  Functional functional;
  ExtSeq out;
};

class Operator {
 public:
  /// The identity: empty head, period 1, tail block [1].
  Operator() : rep_(BlockPeriodic{}) {}
  /// Throws PreconditionError when the matrices are not square or sizes disagree.
  static Operator block(Matrix head, Matrix tail_block);
  static Operator rank_one(Functional f, ExtSeq out);
  static Operator identity() { return {}; }

  bool is_block() const { return std::holds_alternative<BlockPeriodic>(rep_); }
  const BlockPeriodic& as_block() const { return std::get<BlockPeriodic>(rep_); }
  const RankOneLimit& as_rank_one() const { return std::get<RankOneLimit>(rep_); }

  /// Same action with head_dim + extra_blocks * period head coordinates and a
  /// tail period of period * period_factor.
  Operator renormalized(std::size_t extra_blocks, std::size_t period_factor) const;

  std::string describe() const;

 private:
  explicit Operator(BlockPeriodic b) : rep_(std::move(b)) {}
  explicit Operator(RankOneLimit r) : rep_(std::move(r)) {}

  std::variant<BlockPeriodic, RankOneLimit> rep_;
};

ExtSeq op_apply(const Operator& e, const ExtSeq& a);

/// a o b, i.e. x -> a(b(x)). Throws UnsupportedError when two block operators
/// have misaligned block boundaries (no common block-periodic shape).
Operator op_compose(const Operator& a, const Operator& b);

/// Extensional equality on the eventually periodic class.
bool op_equal(const Operator& a, const Operator& b);

bool op_is_positive(const Operator& e);
bool op_is_projection(const Operator& e);

/// A sign pattern in {-1,0,1} supported on the operator's locality window with
/// |E a| != E|a|, or nullopt when E is a lattice homomorphism.
/// Throws UnsupportedError for rank-one operators.
std::optional<ExtSeq> lattice_hom_violation(const Operator& e);
inline bool op_is_lattice_hom(const Operator& e) { return !lattice_hom_violation(e).has_value(); }

/// Operator norm on l1 (max column sum) or l-infinity (max row sum) of a
/// block operator. Throws UnsupportedError for other norms and for rank-one operators.
Rational op_norm(const Operator& e, NormKind kind);

/// Pullback f o B of a functional through a block operator.
Functional pullback(const Functional& f, const BlockPeriodic& b);

}  // namespace martlat

#endif  // MARTLAT_OP_HPP
