// Test-side oracles and random generators. Nothing here calls into the
// library's algorithms beyond constructors and the coordinate accessor.
#ifndef MARTLAT_TESTS_ORACLES_HPP
#define MARTLAT_TESTS_ORACLES_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "martlat/ext_seq.hpp"
#include "martlat/lp.hpp"
#include "martlat/matrix.hpp"
#include "martlat/op.hpp"
#include "martlat/rational.hpp"

namespace oracle {

using martlat::ExtSeq;
using martlat::Matrix;
using martlat::Rational;

// coordinate i (1-based) straight from prefix/block, without ExtSeq::operator[]
inline Rational coord(const ExtSeq& a, std::size_t i) {
  const auto& p = a.prefix();
  if (i <= p.size()) return p[i - 1];
  const auto& b = a.block();
  return b[(i - 1 - p.size()) % b.size()];
}

inline std::vector<Rational> window(const ExtSeq& a, std::size_t n) {
  std::vector<Rational> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = coord(a, i + 1);
  return v;
}

// Window long enough that two sequences agreeing on it agree everywhere.
inline std::size_t decisive_length(const ExtSeq& a, const ExtSeq& b) {
  const std::size_t p = std::max(a.prefix().size(), b.prefix().size());
  return p + std::lcm(a.block().size(), b.block().size());
}

inline bool same_seq(const ExtSeq& a, const ExtSeq& b) {
  return window(a, decisive_length(a, b)) == window(b, decisive_length(a, b));
}

// Direct block multiplication on coordinates 1..n. n must cover whole blocks.
inline std::vector<Rational> block_apply(const martlat::BlockPeriodic& op, const std::vector<Rational>& x) {
  std::vector<Rational> y(x.size());
  const std::size_t h = op.head_dim;
  for (std::size_t i = 0; i < std::min(h, x.size()); ++i)
    for (std::size_t j = 0; j < h && j < x.size(); ++j) y[i] += op.head(i, j) * x[j];
  for (std::size_t start = h; start + op.period <= x.size(); start += op.period)
    for (std::size_t i = 0; i < op.period; ++i)
      for (std::size_t j = 0; j < op.period; ++j) y[start + i] += op.tail_block(i, j) * x[start + j];
  return y;
}

inline std::size_t block_window(const martlat::BlockPeriodic& op, const ExtSeq& a, std::size_t extra_periods = 2) {
  // head, then enough whole blocks to cover a's prefix and an aligned period of both
  std::size_t n = op.head_dim;
  const std::size_t need = op.head_dim + a.prefix().size() + std::lcm(op.period, a.block().size()) * extra_periods;
  while (n < need) n += op.period;
  return n;
}

// ---------------------------------------------------------------- random data

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
  bool coin() { return integer(0, 1) == 1; }

  Rational rational(long lo = -5, long hi = 5) {
    static const long dens[] = {1, 1, 2, 3, 4, 6};
    const long d = dens[integer(0, 5)];
    return Rational(integer(lo * d, hi * d), d);
  }
  Rational nonneg(long hi = 5) { return rational(0, hi); }

  std::vector<Rational> vec(std::size_t n, bool nonnegative = false) {
    std::vector<Rational> v(n);
    for (auto& x : v) x = nonnegative ? nonneg() : rational();
    return v;
  }

  ExtSeq seq(bool nonnegative = false) {
    const auto plen = static_cast<std::size_t>(integer(0, 4));
    switch (integer(0, 2)) {
      case 0: return ExtSeq::finite(vec(plen, nonnegative));
      case 1: return ExtSeq::periodic(vec(plen, nonnegative), {nonnegative ? nonneg() : rational()});
      default: return ExtSeq::periodic(vec(plen, nonnegative), vec(static_cast<std::size_t>(integer(1, 3)), nonnegative));
    }
  }

  Matrix matrix(std::size_t n, bool nonnegative = true) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = coin() ? Rational(0) : (nonnegative ? nonneg(3) : rational(-3, 3));
    return m;
  }

  martlat::Operator block_op(bool nonnegative = true) {
    const auto h = static_cast<std::size_t>(integer(0, 3));
    const auto q = static_cast<std::size_t>(integer(1, 3));
    return martlat::Operator::block(matrix(h, nonnegative), matrix(q, nonnegative));
  }

  // weighted conditional expectation on R^d for a random partition
  Matrix cond_exp(std::size_t d) {
    std::vector<std::size_t> block_of(d);
    for (auto& b : block_of) b = static_cast<std::size_t>(integer(0, static_cast<long>(d) - 1));
    std::vector<Rational> w(d);
    for (auto& x : w) x = Rational(integer(1, 4));
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      Rational total(0);
      for (std::size_t j = 0; j < d; ++j)
        if (block_of[j] == block_of[i]) total += w[j];
      for (std::size_t j = 0; j < d; ++j)
        if (block_of[j] == block_of[i]) m(i, j) = w[j] / total;
    }
    return m;
  }
};

// ------------------------------------------------------- vertex enumeration LP

// Solves A x = b by Gauss-Jordan; nullopt when singular.
inline std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c].is_zero()) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c].is_zero()) continue;
      const Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

// Minimum of an LP that attains its optimum at a vertex: try every choice of
// num_vars constraint rows (equalities included) with a unique solution and
// keep the feasible ones. nullopt when there is no feasible vertex.
inline std::optional<Rational> vertex_minimum(const martlat::LpProblem& p) {
  std::vector<const martlat::LinearConstraint*> all;
  for (const auto& c : p.eq_constraints) all.push_back(&c);
  for (const auto& c : p.geq_constraints) all.push_back(&c);
  const std::size_t n = p.num_vars;
  if (all.size() < n) return std::nullopt;
  std::optional<Rational> best;
  std::vector<bool> pick(all.size(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(n), true);
  do {
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (pick[i]) {
        rows.push_back(all[i]->coeffs);
        rhs.push_back(all[i]->rhs);
      }
    auto x = solve_square(rows, rhs);
    if (!x || !martlat::lp_satisfies(p, *x)) continue;
    Rational v(0);
    for (std::size_t i = 0; i < n; ++i) v += p.objective[i] * (*x)[i];
    if (!best || v < *best) best = v;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

// ||x_n||_1 in the l1 example: n - 1 unit pairs, then sum_{k>=n} 2^{1-k}
// as a geometric series a / (1 - r) with a = 2^{1-n}, r = 1/2.
inline Rational l1_example_norm(long n) {
  const Rational a = Rational::pow2(1 - n);
  const Rational r(1, 2);
  return Rational(n - 1) + a / (Rational(1) - r);
}

}  // namespace oracle

#endif  // MARTLAT_TESTS_ORACLES_HPP
