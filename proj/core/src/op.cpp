#include "martlat/op.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "martlat/error.hpp"

namespace martlat {

// ---------------------------------------------------------------- Functional

Functional::Functional(std::vector<Rational> head_weights, std::vector<Rational> residue_weights)
    : head_(std::move(head_weights)), residue_(std::move(residue_weights)) {
  if (residue_.empty()) residue_.push_back(Rational(0));
  canonicalize();
}

void Functional::canonicalize() {
  while (!head_.empty() && head_.back().is_zero()) head_.pop_back();
  const std::size_t q = residue_.size();
  for (std::size_t d = 1; d < q; ++d) {
    if (q % d != 0) continue;
    bool periodic = true;
    for (std::size_t j = d; j < q && periodic; ++j) periodic = residue_[j] == residue_[j - d];
    if (periodic) {
      const Rational factor(static_cast<long>(q / d));
      residue_.resize(d);
      for (auto& w : residue_) w *= factor;
      break;
    }
  }
}

std::vector<Rational> Functional::residue_weights_at(std::size_t period) const {
  const std::size_t q = residue_.size();
  if (period % q != 0) throw PreconditionError("Functional: period must be a multiple of the residue period");
  const Rational spread(static_cast<long>(q), static_cast<long>(period));
  std::vector<Rational> out(period);
  for (std::size_t j = 0; j < period; ++j) out[j] = residue_[j % q] * spread;
  return out;
}

Rational Functional::operator()(const ExtSeq& a) const {
  Rational v(0);
  for (std::size_t i = 0; i < head_.size(); ++i) {
    if (!head_[i].is_zero()) v += head_[i] * a[i + 1];
  }
  const std::size_t period = std::lcm(residue_.size(), a.period());
  const auto w = residue_weights_at(period);
  for (std::size_t j = 0; j < period; ++j) {
    if (w[j].is_zero()) continue;
    std::size_t i = j + 1;
    while (i <= a.head_length()) i += period;
    v += w[j] * a[i];
  }
  return v;
}

bool Functional::is_zero() const {
  return head_.empty() && residue_.size() == 1 && residue_[0].is_zero();
}

bool Functional::is_nonnegative() const {
  auto nonneg = [](const Rational& r) { return r.sign() >= 0; };
  return std::all_of(head_.begin(), head_.end(), nonneg) && std::all_of(residue_.begin(), residue_.end(), nonneg);
}

Functional Functional::scaled(const Rational& c) const {
  auto h = head_;
  auto r = residue_;
  for (auto& x : h) x *= c;
  for (auto& x : r) x *= c;
  return Functional(std::move(h), std::move(r));
}

// ------------------------------------------------------------------ Operator

Operator Operator::block(Matrix head, Matrix tail_block) {
  if (!head.square() || !tail_block.square()) throw PreconditionError("block operator: matrices must be square");
  if (tail_block.rows() == 0) throw PreconditionError("block operator: period must be at least 1");
  BlockPeriodic b;
  b.head_dim = head.rows();
  b.period = tail_block.rows();
  b.head = std::move(head);
  b.tail_block = std::move(tail_block);
  return Operator(std::move(b));
}

Operator Operator::rank_one(Functional f, ExtSeq out) { return Operator(RankOneLimit{std::move(f), std::move(out)}); }

Operator Operator::renormalized(std::size_t extra_blocks, std::size_t period_factor) const {
  if (!is_block()) return *this;
  if (period_factor == 0) throw PreconditionError("renormalized: period factor must be positive");
  const auto& b = as_block();
  return block(Matrix::direct_sum(b.head, Matrix::repeat_diagonal(b.tail_block, extra_blocks)),
               Matrix::repeat_diagonal(b.tail_block, period_factor));
}

std::string Operator::describe() const {
  std::ostringstream os;
  if (is_block()) {
    const auto& b = as_block();
    os << "block(head_dim=" << b.head_dim << ", period=" << b.period << ")";
  } else {
    const auto& r = as_rank_one();
    os << "rank_one(head_weights=" << r.functional.head_weights().size()
       << ", residue_period=" << r.functional.residue_weights().size() << ", out=" << r.out << ")";
  }
  return os.str();
}

// --------------------------------------------------------------- application

namespace {

ExtSeq apply_block(const BlockPeriodic& b, const ExtSeq& a) {
  std::size_t prefix_len = b.head_dim;
  if (a.head_length() > prefix_len) {
    const std::size_t extra = a.head_length() - prefix_len;
    prefix_len += (extra + b.period - 1) / b.period * b.period;
  }
  const Alignment shape{prefix_len, std::lcm(b.period, a.period())};
  const auto in = a.unrolled(shape.prefix_len, shape.period);
  std::vector<Rational> out(in.size());

  for (std::size_t k = 0; k < b.head_dim; ++k) {
    if (in[k].is_zero()) continue;
    for (std::size_t i = 0; i < b.head_dim; ++i) {
      const Rational& m = b.head(i, k);
      if (!m.is_zero()) out[i] += m * in[k];
    }
  }
  for (std::size_t s = b.head_dim; s < in.size(); s += b.period) {
    for (std::size_t u = 0; u < b.period; ++u) {
      if (in[s + u].is_zero()) continue;
      for (std::size_t w = 0; w < b.period; ++w) {
        const Rational& t = b.tail_block(w, u);
        if (!t.is_zero()) out[s + w] += t * in[s + u];
      }
    }
  }
  return from_unrolled(out, shape);
}

/// Head dimension and period at which both block operators can be expressed.
std::optional<std::pair<std::size_t, std::size_t>> common_shape(const BlockPeriodic& a, const BlockPeriodic& b) {
  const std::size_t period = std::lcm(a.period, b.period);
  const std::size_t lo = std::max(a.head_dim, b.head_dim);
  for (std::size_t d = lo; d < lo + period; ++d) {
    if ((d - a.head_dim) % a.period == 0 && (d - b.head_dim) % b.period == 0) return std::pair{d, period};
  }
  return std::nullopt;
}

Operator reshape(const Operator& op, std::size_t head_dim, std::size_t period) {
  const auto& b = op.as_block();
  return op.renormalized((head_dim - b.head_dim) / b.period, period / b.period);
}

std::size_t locality_extent(const Operator& e) {
  if (e.is_block()) return e.as_block().head_dim;
  const auto& r = e.as_rank_one();
  return r.functional.head_weights().size();
}

std::size_t operator_period(const Operator& e) {
  if (e.is_block()) return e.as_block().period;
  return std::lcm(e.as_rank_one().functional.residue_weights().size(), e.as_rank_one().out.period());
}

}  // namespace

ExtSeq op_apply(const Operator& e, const ExtSeq& a) {
  if (e.is_block()) return apply_block(e.as_block(), a);
  const auto& r = e.as_rank_one();
  return seq_scale(r.out, r.functional(a));
}

Functional pullback(const Functional& f, const BlockPeriodic& b) {
  // Head part: re-express b with enough head coordinates to cover f's head weights.
  const std::size_t h = f.head_weights().size();
  std::size_t extra = 0;
  if (h > b.head_dim) extra = (h - b.head_dim + b.period - 1) / b.period;
  const Operator wide = Operator::block(b.head, b.tail_block).renormalized(extra, 1);
  const auto& wb = wide.as_block();

  std::vector<Rational> head(wb.head_dim);
  for (std::size_t i = 0; i < h; ++i) {
    const Rational& hw = f.head_weights()[i];
    if (hw.is_zero()) continue;
    for (std::size_t k = 0; k < wb.head_dim; ++k) {
      if (!wb.head(i, k).is_zero()) head[k] += hw * wb.head(i, k);
    }
  }

  // Residue part: eventual coordinate with residue j sits at offset w_j inside
  // its tail block and reads the block's entries at residues j - w_j + u.
  const std::size_t q = std::lcm(f.residue_weights().size(), b.period);
  const auto r = f.residue_weights_at(q);
  std::vector<Rational> residue(q);
  const std::size_t shift = b.head_dim % b.period;
  for (std::size_t j = 0; j < q; ++j) {
    if (r[j].is_zero()) continue;
    const std::size_t w = (j + b.period - shift) % b.period;
    for (std::size_t u = 0; u < b.period; ++u) {
      const Rational& t = b.tail_block(w, u);
      if (t.is_zero()) continue;
      const std::size_t target = (j + q - w + u) % q;
      residue[target] += r[j] * t;
    }
  }
  return Functional(std::move(head), std::move(residue));
}

Operator op_compose(const Operator& a, const Operator& b) {
  if (a.is_block() && b.is_block()) {
    const auto shape = common_shape(a.as_block(), b.as_block());
    if (!shape) throw UnsupportedError("op_compose: block operators have misaligned block boundaries");
    const Operator ra = reshape(a, shape->first, shape->second);
    const Operator rb = reshape(b, shape->first, shape->second);
    return Operator::block(ra.as_block().head * rb.as_block().head,
                           ra.as_block().tail_block * rb.as_block().tail_block);
  }
  if (a.is_block()) {
    const auto& r = b.as_rank_one();
    return Operator::rank_one(r.functional, op_apply(a, r.out));
  }
  const auto& ra = a.as_rank_one();
  if (b.is_block()) return Operator::rank_one(pullback(ra.functional, b.as_block()), ra.out);
  // (f (x) u) o (g (x) v) = f(v) g (x) u
  const auto& rb = b.as_rank_one();
  return Operator::rank_one(rb.functional.scaled(ra.functional(rb.out)), ra.out);
}

bool op_equal(const Operator& a, const Operator& b) {
  // A block operator is determined by its columns E e_k, which repeat with
  // the period past the head; a rank-one operator additionally by its
  // action on periodic sequences. Probing unit vectors through one common
  // period past every head, plus residue indicators, is therefore exhaustive.
  if (a.is_block() && b.is_block()) {
    // same shape means same representation
    if (const auto shape = common_shape(a.as_block(), b.as_block())) {
      const Operator ra = reshape(a, shape->first, shape->second);
      const Operator rb = reshape(b, shape->first, shape->second);
      return ra.as_block().head == rb.as_block().head && ra.as_block().tail_block == rb.as_block().tail_block;
    }
  }
  const std::size_t period = std::lcm(operator_period(a), operator_period(b));
  const std::size_t window = std::max(locality_extent(a), locality_extent(b)) + period;
  for (std::size_t k = 1; k <= window; ++k) {
    const ExtSeq e = ExtSeq::unit(k);
    if (op_apply(a, e) != op_apply(b, e)) return false;
  }
  for (std::size_t j = 0; j < period; ++j) {
    std::vector<Rational> blk(period, Rational(0));
    blk[(window + j) % period] = 1;
    const ExtSeq ind(std::vector<Rational>(window, Rational(0)), blk);
    if (op_apply(a, ind) != op_apply(b, ind)) return false;
  }
  return true;
}

bool op_is_positive(const Operator& e) {
  if (e.is_block()) {
    const auto& b = e.as_block();
    for (std::size_t i = 0; i < b.head_dim; ++i)
      for (std::size_t j = 0; j < b.head_dim; ++j)
        if (b.head(i, j).sign() < 0) return false;
    for (std::size_t i = 0; i < b.period; ++i)
      for (std::size_t j = 0; j < b.period; ++j)
        if (b.tail_block(i, j).sign() < 0) return false;
    return true;
  }
  const auto& r = e.as_rank_one();
  if (r.functional.is_zero() || r.out.is_zero()) return true;
  const bool out_nonneg = seq_leq(ExtSeq::zero(), r.out);
  const bool out_nonpos = seq_leq(r.out, ExtSeq::zero());
  if (out_nonneg && r.functional.is_nonnegative()) return true;
  return out_nonpos && r.functional.scaled(-1).is_nonnegative();
}

bool op_is_projection(const Operator& e) {
  try {
    return op_equal(op_compose(e, e), e);
  } catch (const UnsupportedError&) {
    return false;
  }
}

namespace {

/// Violating pattern for a single row: entries `row` sit at coordinates `base + k` (1-based).
std::optional<ExtSeq> row_violation(const std::vector<Rational>& row, std::size_t base) {
  std::vector<std::size_t> support;
  for (std::size_t k = 0; k < row.size(); ++k)
    if (!row[k].is_zero()) support.push_back(k);

  auto pattern = [&](std::size_t j, int sj, std::optional<std::size_t> k, int sk) {
    std::vector<Rational> v(base + row.size(), Rational(0));
    v[base + j] = sj;
    if (k) v[base + *k] = sk;
    return ExtSeq::finite(std::move(v));
  };
  for (std::size_t j : support) {
    if (row[j].sign() < 0) return pattern(j, 1, std::nullopt, 0);
  }
  if (support.size() >= 2) {
    // Two positive entries: opposite signs cancel in |Ea| but not in E|a|.
    return pattern(support[0], 1, support[1], -1);
  }
  return std::nullopt;
}

}  // namespace

std::optional<ExtSeq> lattice_hom_violation(const Operator& e) {
  if (!e.is_block()) throw UnsupportedError("lattice homomorphism check is not supported for rank-one operators");
  const auto& b = e.as_block();
  for (std::size_t i = 0; i < b.head_dim; ++i) {
    std::vector<Rational> row(b.head_dim);
    for (std::size_t k = 0; k < b.head_dim; ++k) row[k] = b.head(i, k);
    if (auto v = row_violation(row, 0)) return v;
  }
  for (std::size_t w = 0; w < b.period; ++w) {
    std::vector<Rational> row(b.period);
    for (std::size_t u = 0; u < b.period; ++u) row[u] = b.tail_block(w, u);
    if (auto v = row_violation(row, b.head_dim)) return v;
  }
  return std::nullopt;
}

Rational op_norm(const Operator& e, NormKind kind) {
  if (!e.is_block()) throw UnsupportedError("op_norm: rank-one operators are not supported");
  if (kind == NormKind::SupPlusLimsup) throw UnsupportedError("op_norm: only sup and l1 operator norms are supported");
  const auto& b = e.as_block();
  const bool by_column = kind == NormKind::L1;
  auto extreme = [by_column](const Matrix& m) {
    Rational best(0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      Rational s(0);
      for (std::size_t j = 0; j < m.cols(); ++j) s += abs(by_column ? m(j, i) : m(i, j));
      best = max(best, s);
    }
    return best;
  };
  return max(extreme(b.head), extreme(b.tail_block));
}

}  // namespace martlat
