#include <gtest/gtest.h>

#include "martlat/error.hpp"
#include "martlat/lattice_calc.hpp"
#include "martlat/martingale.hpp"
#include "martlat/op.hpp"
#include "oracles.hpp"

using namespace martlat;

namespace {

const Rational kHalf(1, 2);

Matrix pair_avg() { return Matrix::from_rows({{kHalf, kHalf}, {kHalf, kHalf}}); }

Operator p_alpha(const Rational& a) { return Operator::block(Matrix::from_rows({{0, 0}, {a, 1}}), Matrix::identity(1)); }

Operator section1_level(long n) { return RefinementFamily{"t", 3, 0, pair_average_triple_block()}.level(n); }
Operator halves_level(long n) { return RefinementFamily{"h", 2, 0, pair_avg()}.level(n); }

// |E a| == E|a| on every a in {-1,0,1}^window, by direct block multiplication
bool brute_lattice_hom(const BlockPeriodic& b) {
  const std::size_t n = b.head_dim + 2 * b.period;
  std::vector<int> digits(n, -1);
  while (true) {
    std::vector<Rational> a(n), abs_a(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = digits[i];
      abs_a[i] = digits[i] < 0 ? -digits[i] : digits[i];
    }
    auto ea = oracle::block_apply(b, a);
    auto e_abs = oracle::block_apply(b, abs_a);
    for (std::size_t i = 0; i < n; ++i)
      if (abs(ea[i]) != e_abs[i]) return false;
    std::size_t k = 0;
    while (k < n && digits[k] == 1) digits[k++] = -1;
    if (k == n) return true;
    ++digits[k];
  }
}

Functional random_functional(oracle::Gen& g) {
  return Functional(g.vec(static_cast<std::size_t>(g.integer(0, 3)), true), g.vec(static_cast<std::size_t>(g.integer(1, 3)), true));
}

Operator random_op(oracle::Gen& g) {
  if (g.integer(0, 3) == 0) return Operator::rank_one(random_functional(g), g.seq());
  return g.block_op();
}

// matrices with at most one nonzero per row are lattice homomorphisms
Matrix sparse_rows(oracle::Gen& g, std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    if (g.coin()) m(i, static_cast<std::size_t>(g.integer(0, static_cast<long>(n) - 1))) = g.nonneg(3);
  return m;
}

}  // namespace

// ------------------------------------------------------------------ apply

TEST(OpApply, Examples) {
  // E_0 of halves averages every pair: x_1 = (-1, 1) goes to x_0 = 0
  EXPECT_EQ(op_apply(halves_level(0), ExtSeq::finite({-1, 1})), ExtSeq::zero());
  oracle::Gen g(21);
  for (int t = 0; t < 50; ++t) {
    ExtSeq a = g.seq();
    EXPECT_EQ(op_apply(Operator::identity(), a), a);
  }
  EXPECT_EQ(op_apply(section1_level(1), ExtSeq::constant(1)), ExtSeq::constant(1));
}

TEST(OpApply, DirectBlockMultiplicationOracle) {
  oracle::Gen g(22);
  for (int t = 0; t < 300; ++t) {
    Operator e = g.block_op(g.coin());
    ExtSeq a = g.seq();
    const auto& b = e.as_block();
    const std::size_t n = oracle::block_window(b, a);
    const auto expect = oracle::block_apply(b, oracle::window(a, n));
    EXPECT_EQ(oracle::window(op_apply(e, a), n), expect) << e.describe() << " on " << a;
  }
}

TEST(OpApply, RankOne) {
  Operator p = Operator::rank_one(Functional::banach_limit(), ExtSeq::constant(1));
  EXPECT_EQ(op_apply(p, ExtSeq::periodic({9}, {1, 0})), ExtSeq::constant(kHalf));
  EXPECT_EQ(op_apply(p, ExtSeq::finite({1, 1, 1})), ExtSeq::zero());
  Functional f({2, 0, 1}, {1, 3});
  // head: 2*a1 + a3; residues by absolute index, a_5 = 2 is class 0 and a_4 = 1 is class 1
  EXPECT_EQ(f(ExtSeq::periodic({1, 1, 1}, {1, 2})), Rational(2 + 1 + 1 * 2 + 3 * 1));
}

// ----------------------------------------------------------------- compose

TEST(OpCompose, Examples) {
  EXPECT_TRUE(op_equal(op_compose(section1_level(1), section1_level(2)), section1_level(1)));
  EXPECT_TRUE(op_equal(op_compose(section1_level(2), section1_level(1)), section1_level(1)));
  oracle::Gen g(23);
  for (int t = 0; t < 50; ++t) {
    Operator a = random_op(g);
    EXPECT_TRUE(op_equal(op_compose(a, Operator::identity()), a));
    EXPECT_TRUE(op_equal(op_compose(Operator::identity(), a), a));
  }
  // banach example: E_n P = P, with E_n keeping 2n coordinates and averaging later pairs
  Operator p = Operator::rank_one(Functional::banach_limit(), ExtSeq::constant(1));
  for (long n = 0; n <= 2; ++n) EXPECT_TRUE(op_equal(op_compose(halves_level(n), p), p)) << n;
}

TEST(OpCompose, MatchesSequentialApplyProperty) {
  oracle::Gen g(24);
  int misaligned = 0;
  for (int t = 0; t < 400; ++t) {
    Operator a = random_op(g), b = random_op(g);
    Operator ab;
    try {
      ab = op_compose(a, b);
    } catch (const UnsupportedError&) {
      // only block pairs whose boundaries never coincide have no block form
      ASSERT_TRUE(a.is_block() && b.is_block());
      const auto &ba = a.as_block(), &bb = b.as_block();
      const std::size_t q = std::lcm(ba.period, bb.period);
      for (std::size_t d = 0; d < ba.head_dim + bb.head_dim + q; ++d)
        EXPECT_FALSE(d >= ba.head_dim && d >= bb.head_dim && (d - ba.head_dim) % ba.period == 0 && (d - bb.head_dim) % bb.period == 0);
      ++misaligned;
      continue;
    }
    for (int k = 0; k < 3; ++k) {
      ExtSeq x = g.seq();
      EXPECT_EQ(op_apply(ab, x), op_apply(a, op_apply(b, x))) << a.describe() << " o " << b.describe() << " on " << x;
    }
  }
  EXPECT_LT(misaligned, 200);
}

TEST(OpCompose, RenormalizationSoundProperty) {
  oracle::Gen g(25);
  for (int t = 0; t < 200; ++t) {
    Operator a = g.block_op(g.coin());
    Operator r = a.renormalized(static_cast<std::size_t>(g.integer(0, 3)), static_cast<std::size_t>(g.integer(1, 3)));
    EXPECT_TRUE(op_equal(a, r));
    for (int k = 0; k < 3; ++k) {
      ExtSeq x = g.seq();
      EXPECT_EQ(op_apply(a, x), op_apply(r, x));
    }
  }
}

TEST(OpEqual, DetectsDifference) {
  EXPECT_FALSE(op_equal(section1_level(1), section1_level(2)));
  EXPECT_FALSE(op_equal(halves_level(0), Operator::identity()));
  EXPECT_FALSE(op_equal(Operator::block(Matrix::identity(4), pair_avg()), Operator::block(Matrix::identity(2), pair_avg())));
  // head of two identity coordinates equals identity with period 2 blocks of the identity
  EXPECT_TRUE(op_equal(Operator::block(Matrix::identity(2), Matrix::identity(2)), Operator::identity()));
}

// ---------------------------------------------------------------- positivity

TEST(OpPositive, Examples) {
  EXPECT_TRUE(op_is_positive(p_alpha(kHalf)));
  EXPECT_FALSE(op_is_positive(Operator::block(Matrix::from_rows({{1, -1}, {0, 1}}), Matrix::identity(1))));
  const Operator e0 = RefinementFamily{"h", 2, 1, pair_avg()}.level(0);
  Functional pe0 = pullback(Functional::banach_limit(), e0.as_block());
  EXPECT_TRUE(op_is_positive(Operator::rank_one(pe0, ExtSeq::constant(1))));
  // oracle: PE_0 on coordinate basis vectors and 0/1 patterns of period 1 and 2
  for (std::size_t i = 1; i <= 6; ++i) EXPECT_GE(pe0(ExtSeq::unit(i)), Rational(0));
  for (auto pat : {std::vector<Rational>{1}, {1, 0}, {0, 1}}) EXPECT_GE(pe0(ExtSeq::periodic({}, pat)), Rational(0));
  EXPECT_EQ(pe0(ExtSeq::constant(1)), Rational(1));
}

TEST(OpPositive, PreservesNonnegativeProperty) {
  oracle::Gen g(26);
  for (int t = 0; t < 300; ++t) {
    Operator e = g.coin() ? g.block_op(true) : Operator::rank_one(random_functional(g), g.seq(true));
    ASSERT_TRUE(op_is_positive(e));
    ExtSeq x = g.seq(true);
    EXPECT_TRUE(seq_leq(ExtSeq::zero(), op_apply(e, x)));
  }
}

// --------------------------------------------------------------- projection

TEST(OpProjection, Examples) {
  EXPECT_TRUE(op_is_projection(p_alpha(kHalf)));
  EXPECT_TRUE(op_is_projection(Operator::block(Matrix(0, 0), pair_avg())));
  Matrix sq = pair_avg() * pair_avg();
  EXPECT_EQ(sq, pair_avg());
  EXPECT_FALSE(op_is_projection(Operator::block(Matrix(0, 0), Matrix::from_rows({{0, 1}, {0, 0}}))));
  EXPECT_TRUE(op_is_projection(Operator::rank_one(Functional::banach_limit(), ExtSeq::constant(1))));
  EXPECT_FALSE(op_is_projection(Operator::rank_one(Functional::banach_limit(), ExtSeq::constant(2))));
}

// ---------------------------------------------------------- lattice homs

TEST(OpLatticeHom, Examples) {
  EXPECT_TRUE(op_is_lattice_hom(Operator::identity()));
  EXPECT_FALSE(op_is_lattice_hom(Operator::block(Matrix(0, 0), pair_avg())));
  auto w = lattice_hom_violation(Operator::block(Matrix(0, 0), pair_avg()));
  ASSERT_TRUE(w.has_value());
  const Operator avg = Operator::block(Matrix(0, 0), pair_avg());
  EXPECT_NE(seq_abs(op_apply(avg, *w)), op_apply(avg, seq_abs(*w)));
  EXPECT_TRUE(op_is_lattice_hom(Operator::block(Matrix::from_rows({{2, 0}, {0, 3}}), Matrix::identity(1))));
  EXPECT_THROW(op_is_lattice_hom(Operator::rank_one(Functional::banach_limit(), ExtSeq::constant(1))), UnsupportedError);
}

TEST(OpLatticeHom, AgreesWithSignPatternWindow) {
  oracle::Gen g(27);
  for (int t = 0; t < 150; ++t) {
    const auto h = static_cast<std::size_t>(g.integer(0, 2));
    const auto q = static_cast<std::size_t>(g.integer(1, 2));
    Operator e = g.coin() ? Operator::block(sparse_rows(g, h), sparse_rows(g, q)) : Operator::block(g.matrix(h), g.matrix(q));
    EXPECT_EQ(op_is_lattice_hom(e), brute_lattice_hom(e.as_block())) << e.describe();
  }
}

TEST(OpLatticeHom, CertificateHoldsBeyondWindowProperty) {
  oracle::Gen g(28);
  int homs = 0;
  for (int t = 0; t < 200; ++t) {
    Operator e = Operator::block(sparse_rows(g, static_cast<std::size_t>(g.integer(0, 3))),
                                 sparse_rows(g, static_cast<std::size_t>(g.integer(1, 3))));
    if (!op_is_lattice_hom(e)) continue;
    ++homs;
    for (int k = 0; k < 5; ++k) {
      ExtSeq x = g.seq();
      EXPECT_EQ(seq_abs(op_apply(e, x)), op_apply(e, seq_abs(x)));
    }
  }
  EXPECT_GT(homs, 50);
}

// -------------------------------------------------------------------- norms

TEST(OpNorm, Examples) {
  EXPECT_EQ(op_norm(Operator::identity(), NormKind::Sup), Rational(1));
  EXPECT_EQ(op_norm(Operator::identity(), NormKind::L1), Rational(1));
  EXPECT_EQ(op_norm(p_alpha(kHalf), NormKind::L1), Rational(1));
  EXPECT_EQ(op_norm(p_alpha(kHalf), NormKind::Sup), Rational(3, 2));
  // E_1 of the l1 example: P_{2^{-(k-1)}} on every pair
  Matrix m(6, 6);
  for (std::size_t k = 1; k <= 3; ++k) {
    m(2 * k - 1, 2 * k - 2) = Rational::pow2(1 - static_cast<long>(k));
    m(2 * k - 1, 2 * k - 1) = 1;
  }
  EXPECT_EQ(op_norm(Operator::block(m, Matrix::identity(1)), NormKind::L1), Rational(1));
  EXPECT_THROW(op_norm(p_alpha(kHalf), NormKind::SupPlusLimsup), UnsupportedError);
  EXPECT_THROW(op_norm(Operator::rank_one(Functional::banach_limit(), ExtSeq::constant(1)), NormKind::Sup), UnsupportedError);
}

TEST(OpNorm, BasisVectorOracle) {
  // L1 norm of a nonnegative block operator = largest image norm of a basis vector
  oracle::Gen g(29);
  for (int t = 0; t < 200; ++t) {
    Operator e = g.block_op(true);
    const auto& b = e.as_block();
    Rational best(0);
    for (std::size_t i = 1; i <= b.head_dim + b.period; ++i) best = max(best, seq_norm(op_apply(e, ExtSeq::unit(i)), NormKind::L1).value);
    EXPECT_EQ(op_norm(e, NormKind::L1), best) << e.describe();
  }
}

TEST(OpNorm, BoundsImagesProperty) {
  oracle::Gen g(30);
  for (int t = 0; t < 300; ++t) {
    Operator e = g.block_op(true);
    ExtSeq x = g.seq();
    EXPECT_LE(seq_norm(op_apply(e, x), NormKind::Sup).value, op_norm(e, NormKind::Sup) * seq_norm(x, NormKind::Sup).value);
    ExtSeq f = ExtSeq::finite(x.prefix());
    EXPECT_LE(seq_norm(op_apply(e, f), NormKind::L1).value, op_norm(e, NormKind::L1) * seq_norm(f, NormKind::L1).value);
  }
}
