#include "martlat/ext_seq.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "martlat/error.hpp"

namespace martlat {

ExtSeq::ExtSeq() : block_{Rational(0)} {}

ExtSeq::ExtSeq(std::vector<Rational> prefix, std::vector<Rational> block)
    : prefix_(std::move(prefix)), block_(std::move(block)) {
  if (block_.empty()) throw PreconditionError("ExtSeq: periodic block must be nonempty");
  canonicalize();
}

ExtSeq ExtSeq::unit(std::size_t i) {
  if (i == 0) throw PreconditionError("ExtSeq::unit: coordinates are 1-based");
  std::vector<Rational> p(i, Rational(0));
  p.back() = 1;
  return finite(std::move(p));
}

void ExtSeq::canonicalize() {
  const std::size_t q = block_.size();
  for (std::size_t d = 1; d < q; ++d) {
    if (q % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = d; i < q && periodic; ++i) periodic = block_[i] == block_[i - d];
    if (periodic) {
      block_.resize(d);
      break;
    }
  }
  while (!prefix_.empty() && prefix_.back() == block_.back()) {
    prefix_.pop_back();
    std::rotate(block_.rbegin(), block_.rbegin() + 1, block_.rend());
  }
}

TailKind ExtSeq::tail_kind() const {
  if (block_.size() > 1) return TailKind::Periodic;
  return block_[0].is_zero() ? TailKind::Zero : TailKind::Const;
}

const Rational& ExtSeq::operator[](std::size_t i) const {
  if (i == 0) throw PreconditionError("ExtSeq: coordinates are 1-based");
  if (i <= prefix_.size()) return prefix_[i - 1];
  return block_[(i - 1 - prefix_.size()) % block_.size()];
}

std::vector<Rational> ExtSeq::unrolled(std::size_t prefix_len, std::size_t period) const {
  if (prefix_len < prefix_.size() || period % block_.size() != 0) {
    throw PreconditionError("ExtSeq::unrolled: incompatible alignment");
  }
  std::vector<Rational> out;
  out.reserve(prefix_len + period);
  for (std::size_t i = 1; i <= prefix_len + period; ++i) out.push_back((*this)[i]);
  return out;
}

std::string ExtSeq::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < prefix_.size(); ++i) os << (i ? ", " : "") << prefix_[i];
  if (!prefix_.empty()) os << "; ";
  switch (tail_kind()) {
    case TailKind::Zero: os << "zero"; break;
    case TailKind::Const: os << "const " << block_[0]; break;
    case TailKind::Periodic:
      os << "periodic [";
      for (std::size_t i = 0; i < block_.size(); ++i) os << (i ? ", " : "") << block_[i];
      os << ']';
      break;
  }
  os << ')';
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const ExtSeq& a) { return os << a.str(); }

Alignment common_alignment(const ExtSeq& a, const ExtSeq& b) {
  return {std::max(a.head_length(), b.head_length()), std::lcm(a.period(), b.period())};
}

Alignment common_alignment(std::span<const ExtSeq> seqs) {
  Alignment al;
  for (const auto& s : seqs) {
    al.prefix_len = std::max(al.prefix_len, s.head_length());
    al.period = std::lcm(al.period, s.period());
  }
  return al;
}

ExtSeq from_unrolled(std::span<const Rational> coords, Alignment shape) {
  if (coords.size() != shape.prefix_len + shape.period) {
    throw PreconditionError("from_unrolled: coordinate count does not match alignment");
  }
  return ExtSeq(std::vector<Rational>(coords.begin(), coords.begin() + static_cast<std::ptrdiff_t>(shape.prefix_len)),
                std::vector<Rational>(coords.begin() + static_cast<std::ptrdiff_t>(shape.prefix_len), coords.end()));
}

namespace {

template <class F>
ExtSeq zip_with(const ExtSeq& a, const ExtSeq& b, F f) {
  const Alignment al = common_alignment(a, b);
  auto ua = a.unrolled(al.prefix_len, al.period);
  const auto ub = b.unrolled(al.prefix_len, al.period);
  for (std::size_t i = 0; i < ua.size(); ++i) ua[i] = f(ua[i], ub[i]);
  return from_unrolled(ua, al);
}

template <class F>
ExtSeq map_coords(const ExtSeq& a, F f) {
  std::vector<Rational> p = a.prefix();
  std::vector<Rational> q = a.block();
  for (auto& v : p) v = f(v);
  for (auto& v : q) v = f(v);
  return ExtSeq(std::move(p), std::move(q));
}

}  // namespace

ExtSeq seq_linear(const ExtSeq& a, const ExtSeq& b, const Rational& alpha, const Rational& beta) {
  return zip_with(a, b, [&](const Rational& x, const Rational& y) { return alpha * x + beta * y; });
}

ExtSeq seq_scale(const ExtSeq& a, const Rational& alpha) {
  return map_coords(a, [&](const Rational& x) { return alpha * x; });
}

ExtSeq seq_abs(const ExtSeq& a) {
  return map_coords(a, [](const Rational& x) { return abs(x); });
}

ExtSeq seq_lattice(const ExtSeq& a, const ExtSeq& b, LatticeOp op) {
  if (op == LatticeOp::Meet) return zip_with(a, b, [](const Rational& x, const Rational& y) { return min(x, y); });
  return zip_with(a, b, [](const Rational& x, const Rational& y) { return max(x, y); });
}

bool seq_leq(const ExtSeq& a, const ExtSeq& b) {
  const Alignment al = common_alignment(a, b);
  for (std::size_t i = 1; i <= al.prefix_len + al.period; ++i) {
    if (b[i] < a[i]) return false;
  }
  return true;
}

std::optional<std::size_t> first_difference(const ExtSeq& a, const ExtSeq& b) {
  const Alignment al = common_alignment(a, b);
  for (std::size_t i = 1; i <= al.prefix_len + al.period; ++i) {
    if (a[i] != b[i]) return i;
  }
  return std::nullopt;
}

ExtSeq seq_shift(const ExtSeq& a) {
  if (a.prefix().empty()) {
    std::vector<Rational> blk = a.block();
    std::rotate(blk.begin(), blk.begin() + 1, blk.end());
    return ExtSeq({}, std::move(blk));
  }
  return ExtSeq(std::vector<Rational>(a.prefix().begin() + 1, a.prefix().end()), a.block());
}

std::string to_string(NormKind kind) {
  switch (kind) {
    case NormKind::Sup: return "sup";
    case NormKind::L1: return "l1";
    case NormKind::SupPlusLimsup: return "sup-limsup";
  }
  return "?";
}

NormKind parse_norm_kind(const std::string& name) {
  if (name == "sup") return NormKind::Sup;
  if (name == "l1") return NormKind::L1;
  if (name == "sup-limsup") return NormKind::SupPlusLimsup;
  throw ParseError("unknown norm '" + name + "' (expected sup, l1 or sup-limsup)");
}

NormValue seq_norm(const ExtSeq& a, NormKind kind) {
  Rational tail_max(0);
  for (const auto& v : a.block()) tail_max = max(tail_max, abs(v));

  switch (kind) {
    case NormKind::L1: {
      if (!tail_max.is_zero()) return NormValue::infinity();
      Rational s(0);
      for (const auto& v : a.prefix()) s += abs(v);
      return NormValue::finite(s);
    }
    case NormKind::Sup:
    case NormKind::SupPlusLimsup: {
      Rational sup = tail_max;
      for (const auto& v : a.prefix()) sup = max(sup, abs(v));
      return NormValue::finite(kind == NormKind::Sup ? sup : sup + tail_max);
    }
  }
  return NormValue::infinity();
}

std::string SpaceKind::str() const {
  switch (kind) {
    case Kind::FiniteDim: return "R^" + std::to_string(dim);
    case Kind::SeqAll: return "R^N";
    case Kind::C: return "c";
    case Kind::C0: return "c0";
    case Kind::L1: return "l1";
    case Kind::Linf: return "linf";
  }
  return "?";
}

bool seq_in_space(const ExtSeq& a, const SpaceKind& space) {
  switch (space.kind) {
    case SpaceKind::Kind::FiniteDim:
      return a.tail_kind() == TailKind::Zero && a.head_length() <= space.dim;
    case SpaceKind::Kind::C:
      return a.tail_kind() != TailKind::Periodic;
    case SpaceKind::Kind::C0:
    case SpaceKind::Kind::L1:
      return a.tail_kind() == TailKind::Zero;
    case SpaceKind::Kind::SeqAll:
    case SpaceKind::Kind::Linf:
      return true;
  }
  return false;
}

Rational limit_functional(const ExtSeq& a) {
  Rational s(0);
  for (const auto& v : a.block()) s += v;
  return s / Rational(static_cast<long>(a.period()));
}

}  // namespace martlat
