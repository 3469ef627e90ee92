#include <functional>

#include "corpus_internal.hpp"
#include "martlat/error.hpp"

namespace martlat {

namespace detail {

Matrix conditional_expectation(const std::vector<std::size_t>& block_of, const std::vector<Rational>& weights) {
  const std::size_t d = block_of.size();
  Matrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    Rational total(0);
    for (std::size_t j = 0; j < d; ++j)
      if (block_of[j] == block_of[i]) total += weights[j];
    for (std::size_t j = 0; j < d; ++j)
      if (block_of[j] == block_of[i]) m(i, j) = weights[j] / total;
  }
  return m;
}

Operator finite_level(const Matrix& m) { return Operator::block(m, Matrix::identity(1)); }

std::vector<Rational> coords(const ExtSeq& a, std::size_t d) {
  std::vector<Rational> v(d);
  for (std::size_t i = 0; i < d; ++i) v[i] = a[i + 1];
  return v;
}

Assertion make_assertion(AssertionKind k, Json args) { return Assertion{k, std::move(args)}; }

}  // namespace detail

using detail::make_assertion;

namespace {

const char* kSource = "Troitsky & Xanthos, \"Spaces of regular abstract martingales\"";

std::string cite(const std::string& where) { return std::string(kSource) + ", " + where; }

Json lit(const ExtSeq& a) { return {{"literal", to_json(a)}}; }
Json term(const std::string& x, long n) { return {{"term", {{"martingale", x}, {"n", n}}}}; }
Json abs_of(Json e) { return {{"abs", std::move(e)}}; }
Json at_level(long level, Json e) { return {{"apply_level", {{"level", level}, {"seq", std::move(e)}}}}; }

ExtSeq ones(std::size_t count) { return ExtSeq::finite(std::vector<Rational>(count, Rational(1))); }

Martingale constant_martingale(long start, long horizon, const ExtSeq& v) {
  return Martingale(start, std::vector<ExtSeq>(static_cast<std::size_t>(horizon - start + 1), v));
}

Martingale rule_martingale(long start, long horizon, std::vector<Rational> block, long offset) {
  TermRule rule{std::move(block), offset};
  std::vector<ExtSeq> terms;
  for (long n = start; n <= horizon; ++n) terms.push_back(rule.term(n));
  Martingale x(start, std::move(terms));
  x.set_rule(rule);
  return x;
}

Matrix pair_average() {
  const Rational h(1, 2);
  return Matrix::from_rows({{h, h}, {h, h}});
}

Filtration halves_filtration(const SpaceKind& space, long horizon) {
  RefinementFamily fam{"pair-average", 2, 0, pair_average()};
  return Filtration(0, {}, space, fam).extended_to(horizon);
}

// ----------------------------------------------------------------- scenarios

Scenario c_no_modulus() {
  Scenario s;
  s.id = "example-c-no-modulus";
  s.citation = cite("section 1, Example \"M_r need not be a vector lattice\": \"It follows that X has no modulus\"");
  s.description =
      "On c, E_n keeps 3n coordinates and averages coordinates 1,2 of every later triple. x_n = (1,-1,0)^n. "
      "Every dominating martingale can be shrunk at a coordinate 3k0, so X has no least dominating martingale.";
  s.space = SpaceKind::c();
  s.norm = NormKind::Sup;
  s.horizon = 6;
  RefinementFamily fam{"triple-pair-average", 3, 0, pair_average_triple_block()};
  s.filtration = Filtration(1, {}, s.space, fam).extended_to(s.horizon);
  s.martingales["X"] = rule_martingale(1, s.horizon, {1, -1, 0}, 0);
  s.martingales["One"] = constant_martingale(1, s.horizon, ExtSeq::constant(1));
  s.martingales["Residue"] = constant_martingale(1, s.horizon, ExtSeq::periodic({}, {1, 1, 0}));

  using K = AssertionKind;
  auto& a = s.assertions;
  a.push_back(make_assertion(K::FiltrationValid, Json::object()));
  a.push_back(make_assertion(K::MartingaleValid, {{"martingale", "X"}}));
  a.push_back(make_assertion(K::MartingaleValid, {{"martingale", "One"}}));
  a.push_back(make_assertion(K::Domination, {{"dominating", "One"}, {"martingale", "X"}}));
  for (long n : {2L, 6L}) {
    a.push_back(make_assertion(K::SequenceEquals, {{"lhs", at_level(1, abs_of(term("X", n)))}, {"rhs", abs_of(term("X", n))}}));
  }
  a.push_back(make_assertion(K::ShrinkChain, {{"dominating", "One"},
                                               {"martingale", "X"},
                                               {"steps", 5},
                                               {"zeroed", {3, 6, 9, 12, 15}},
                                               {"reject", "Residue"},
                                               {"certificate_contains", "not in c"}}));
  a.push_back(make_assertion(K::Domination, {{"dominating", "Residue"}, {"martingale", "X"}}));
  a.push_back(make_assertion(K::NotInSpace, {{"seq", term("Residue", 1)}, {"space", "c"}}));
  a.push_back(make_assertion(K::MartingaleValid, {{"martingale", "Residue"}, {"expect", false}}));
  return s;
}

Scenario halves(const std::string& id, NormKind norm) {
  Scenario s;
  s.id = id;
  s.space = SpaceKind::linf();
  s.norm = norm;
  s.horizon = 10;
  s.filtration = halves_filtration(s.space, s.horizon);
  Martingale x = rule_martingale(0, s.horizon, {-1, 1}, 0);
  x.set_certificate(NormCertificate{NormCertificate::Kind::EventuallyConstant, 1, Rational(0)});
  s.martingales["X"] = x;
  s.martingales["One"] = constant_martingale(0, s.horizon, ExtSeq::constant(1));
  return s;
}

Scenario example_halves() {
  Scenario s = halves("example-halves", NormKind::Sup);
  s.citation = cite("section 2, Example halves: \"X is a martingale with respect to (E_n)\"");
  s.description =
      "On l_inf, E_n keeps 2n coordinates and averages later pairs; x_n = (-1,1)^n, x_0 = 0. "
      "Krickeberg's formula stabilizes symbolically to the constant-one martingale.";
  using K = AssertionKind;
  auto& a = s.assertions;
  a.push_back(make_assertion(K::FiltrationValid, Json::object()));
  a.push_back(make_assertion(K::MartingaleValid, {{"martingale", "X"}}));
  a.push_back(make_assertion(K::SequenceEquals, {{"lhs", at_level(0, term("X", 1))}, {"rhs", term("X", 0)}}));
  a.push_back(make_assertion(K::SequenceEquals, {{"lhs", abs_of(term("X", 2))}, {"rhs", lit(ones(4))}}));
  a.push_back(make_assertion(K::MartingaleValid, {{"martingale", "One"}}));
  a.push_back(make_assertion(K::Domination, {{"dominating", "One"}, {"martingale", "X"}}));
  a.push_back(make_assertion(K::ModulusEquals, {{"martingale", "X"},
                                                 {"expected", "One"},
                                                 {"oracle", "krickeberg"},
                                                 {"stabilized", true},
                                                 {"method", "krickeberg"},
                                                 {"probe_horizon", 10}}));
  a.push_back(make_assertion(K::NormEquals, {{"martingale", "X"}, {"value", "1"}, {"exactness", "exact"}}));
  return s;
}

Scenario example_limsup_norm() {
  Scenario s = halves("example-limsup-norm", NormKind::SupPlusLimsup);
  s.citation = cite("section 3, Example \"M_r need not be a Banach lattice under the martingale norm\": \"1 = ||X|| < || |X| ||\"");
  s.description =
      "The halves martingale on l_inf renormed by ||a|| = ||a||_inf + limsup |a_i|. Every term has norm 1, "
      "while the modulus is the constant-one martingale of norm 2.";
  using K = AssertionKind;
  auto& a = s.assertions;
  a.push_back(make_assertion(K::FiltrationValid, Json::object()));
  a.push_back(make_assertion(K::MartingaleValid, {{"martingale", "X"}}));
  for (long n : {1L, 5L, 10L}) a.push_back(make_assertion(K::NormEquals, {{"martingale", "X"}, {"term", n}, {"value", "1"}}));
  a.push_back(make_assertion(K::NormEquals, {{"martingale", "X"}, {"value", "1"}, {"exactness", "exact"}}));
  a.push_back(make_assertion(K::ModulusEquals, {{"martingale", "X"}, {"expected", "One"}, {"stabilized", true}}));
  a.push_back(make_assertion(K::NormEquals, {{"martingale", "One"}, {"value", "2"}, {"exactness", "exact"}}));
  a.push_back(make_assertion(K::RegularNormEquals, {{"martingale", "X"}, {"value", "2"}}));
  return s;
}

Scenario example_banach_limit() {
  Scenario s;
  s.id = "example-banach-limit";
  s.citation = cite("section 2, Example \"M_r is a vector lattice, yet Krickeberg's formula fails\"");
  s.description =
      "Filtration (P E_0, E_0, E_1, ...) on l_inf with P = phi (x) 1 for a Banach limit phi, realized on "
      "eventually periodic sequences by the period mean. X = (x_0, x_0, x_1, ...). The formula gives 0 at the "
      "first level while the modulus is the constant-one martingale.";
  s.space = SpaceKind::linf();
  s.norm = NormKind::Sup;
  s.horizon = 10;
  const Operator e0 = Operator::block(Matrix(), pair_average());
  const Operator pe0 = Operator::rank_one(pullback(Functional::banach_limit(), e0.as_block()), ExtSeq::constant(1));
  RefinementFamily fam{"pair-average", 2, 1, pair_average()};
  s.filtration = Filtration(0, {pe0}, s.space, fam).extended_to(s.horizon);

  const long h = s.horizon;
  s.martingales["X"] = rule_martingale(0, h, {-1, 1}, 1);
  const ExtSeq one = ExtSeq::constant(1);
  s.martingales["One"] = constant_martingale(0, h, one);
  s.martingales["Two"] = constant_martingale(0, h, ExtSeq::constant(2));
  // One + (E'_n e_1)_n and One + (E'_n (1,0,1,0,...))_n
  std::vector<ExtSeq> t1, t2;
  const ExtSeq alt = ExtSeq::periodic({}, {1, 0});
  for (long n = 0; n <= h; ++n) {
    t1.push_back(one + op_apply(s.filtration.level(n), ExtSeq::unit(1)));
    t2.push_back(one + op_apply(s.filtration.level(n), alt));
  }
  s.martingales["OnePlusE1"] = Martingale(0, t1);
  s.martingales["OnePlusAlt"] = Martingale(0, t2);

  using K = AssertionKind;
  auto& a = s.assertions;
  a.push_back(make_assertion(K::FiltrationValid, Json::object()));
  a.push_back(make_assertion(K::MartingaleValid, {{"martingale", "X"}}));
  a.push_back(make_assertion(K::SequenceEquals, {{"lhs", at_level(0, abs_of(term("X", h)))}, {"rhs", lit(ExtSeq::zero())}}));
  a.push_back(make_assertion(K::KrickebergMismatch, {{"martingale", "X"},
                                                      {"formula_initial", lit(ExtSeq::zero())},
                                                      {"modulus_initial", lit(one)}}));
  a.push_back(make_assertion(K::MartingaleValid, {{"martingale", "One"}}));
  a.push_back(make_assertion(K::Domination, {{"dominating", "One"}, {"martingale", "X"}}));
  for (auto [n, m] : {std::pair{1L, 1L}, {1L, 4L}, {3L, 7L}, {6L, 10L}}) {
    a.push_back(make_assertion(K::SequenceEquals, {{"lhs", at_level(n, abs_of(term("X", m)))}, {"rhs", abs_of(term("X", m))}}));
  }
  a.push_back(make_assertion(K::SequenceEquals, {{"lhs", at_level(0, lit(one))}, {"rhs", lit(one)}}));
  for (const char* y : {"Two", "OnePlusE1", "OnePlusAlt"}) a.push_back(make_assertion(K::MartingaleValid, {{"martingale", y}}));
  a.push_back(make_assertion(K::ModulusEquals, {{"martingale", "X"},
                                                 {"expected", "One"},
                                                 {"oracle", "krickeberg"},
                                                 {"below", {"Two", "OnePlusE1", "OnePlusAlt"}}}));
  return s;
}

// l1 example, lossless finite window: blocks 1..N+1 of the pair structure, the
// last block carrying the whole tail mass sum_{k>N} 2^{-(k-1)} = 2^{1-N}.
Scenario example_l1_unbounded() {
  constexpr long N = 20;
  constexpr std::size_t K = N + 1;
  constexpr std::size_t d = 2 * K;
  Scenario s;
  s.id = "example-l1-unbounded";
  s.citation = cite("section 3, Example \"Positive unbounded martingale on l_1\": \"||x_n|| > n-1\"");
  s.description =
      "E_n is the identity on the first n-1 coordinate pairs and P_a = [[0,0],[a,1]] with a = 2^{-(k-1)} on pair "
      "k >= n. The martingale is positive with ||x_n||_1 = (n-1) + 2^{2-n}. Pairs beyond " + std::to_string(N) +
      " are lumped into pair " + std::to_string(K) + ", which no level up to the horizon distinguishes.";
  s.space = SpaceKind::l1();
  s.norm = NormKind::L1;
  s.horizon = N;

  auto alpha = [](std::size_t k) { return Rational::pow2(-static_cast<long>(k - 1)); };
  std::vector<Operator> levels;
  for (long n = 1; n <= N; ++n) {
    Matrix m(d, d);
    for (std::size_t k = 1; k <= K; ++k) {
      const std::size_t i = 2 * (k - 1);
      if (static_cast<long>(k) < n) {
        m(i, i) = 1;
        m(i + 1, i + 1) = 1;
      } else {
        m(i + 1, i) = alpha(k);
        m(i + 1, i + 1) = 1;
      }
    }
    levels.push_back(Operator::block(m, Matrix::identity(1)));
  }
  s.filtration = Filtration(1, std::move(levels), s.space);

  std::vector<ExtSeq> terms;
  for (long n = 1; n <= N; ++n) {
    std::vector<Rational> v(d);
    for (std::size_t k = 1; k <= K; ++k) {
      const std::size_t i = 2 * (k - 1);
      if (static_cast<long>(k) < n) {
        v[i] = 1;
      } else if (k < K) {
        v[i + 1] = alpha(k);
      } else {
        v[i + 1] = Rational::pow2(2 - static_cast<long>(K));
      }
    }
    terms.push_back(ExtSeq::finite(std::move(v)));
  }
  Martingale x(1, std::move(terms));
  x.set_closed(false);
  s.martingales["X"] = x;

  using K_ = AssertionKind;
  auto& a = s.assertions;
  a.push_back(make_assertion(K_::FiltrationValid, {{"op_norm", {{"norm", "l1"}, {"value", "1"}}}}));
  a.push_back(make_assertion(K_::MartingaleValid, {{"martingale", "X"}}));
  for (long n = 1; n <= N; ++n) {
    const Rational closed_form = Rational(n - 1) + Rational::pow2(2 - n);
    a.push_back(make_assertion(K_::NormEquals, {{"martingale", "X"}, {"term", n}, {"value", closed_form.str()}}));
    a.push_back(make_assertion(K_::NormGreater, {{"martingale", "X"}, {"term", n}, {"than", std::to_string(n - 1)}}));
  }
  const Rational top = Rational(N - 1) + Rational::pow2(2 - N);
  a.push_back(make_assertion(K_::NormEquals, {{"martingale", "X"}, {"value", top.str()}, {"exactness", "lower_bound"}}));
  return s;
}

Scenario prop_strong_unit() {
  Scenario s;
  s.id = "prop-strong-unit";
  s.citation = cite("section 3, Proposition on strong units: \"pm X <= C ||X|| Y\"");
  s.description =
      "R^4 with the sup norm and e = 1. Y = (E_n e)_n is a bounded positive martingale and every martingale "
      "X satisfies pm X <= C ||X|| Y, so X is regular.";
  s.space = SpaceKind::finite_dim(4);
  s.norm = NormKind::Sup;
  s.horizon = 3;
  const std::vector<Rational> w = {1, 2, 1, 3};
  std::vector<Operator> levels = {
      detail::finite_level(detail::conditional_expectation({0, 0, 1, 1}, w)),
      detail::finite_level(detail::conditional_expectation({0, 0, 1, 2}, w)),
      detail::finite_level(Matrix::identity(4)),
  };
  s.filtration = Filtration(1, levels, s.space);
  const ExtSeq terminal = ExtSeq::finite({2, -1, Rational(1, 2), Rational(-3, 2)});
  s.martingales["X"] = martingale_from_levels(s.filtration, terminal, 1, 3);
  const ExtSeq unit = ExtSeq::finite({1, 1, 1, 1});
  s.martingales["Y"] = martingale_from_levels(s.filtration, unit, 1, 3);
  s.martingales["Zero"] = martingale_from_levels(s.filtration, ExtSeq::zero(), 1, 3);

  using K = AssertionKind;
  auto& a = s.assertions;
  a.push_back(make_assertion(K::FiltrationValid, Json::object()));
  a.push_back(make_assertion(K::MartingaleValid, {{"martingale", "X"}}));
  a.push_back(make_assertion(K::MartingaleValid, {{"martingale", "Y"}}));
  a.push_back(make_assertion(K::NormEquals, {{"martingale", "Y"}, {"value", "1"}, {"exactness", "exact"}}));
  a.push_back(make_assertion(K::Domination, {{"martingale", "X"}, {"via_unit", to_json(unit)}, {"constant", "1"}}));
  a.push_back(make_assertion(K::Domination, {{"martingale", "Zero"}, {"via_unit", to_json(unit)}, {"constant", "0"}}));
  a.push_back(make_assertion(K::RegularNormEquals, {{"martingale", "X"}, {"value", "2"}}));
  return s;
}

Scenario kb_c0_failure() {
  constexpr long N = 20;
  Scenario s;
  s.id = "kb-c0-failure";
  s.citation = cite("section 3, KB-space theorem, concrete c_0 scenario: \"which is clearly false\"");
  s.description =
      "The halves filtration and martingale viewed in c_0. The increasing sequence E_0|x_n| = |x_n| is bounded "
      "but its limit, the constant one sequence, is not in c_0, so X is not regular there.";
  s.space = SpaceKind::c0();
  s.norm = NormKind::Sup;
  s.horizon = N;
  s.filtration = halves_filtration(s.space, N);
  s.martingales["X"] = rule_martingale(0, N, {-1, 1}, 0);

  const Json joined = {{"join_abs", {{"martingale", "X"}, {"from", 0}, {"to", N}}}};
  const Json limit = {{"join_abs_limit", {{"martingale", "X"}, {"from", 0}, {"to", N}}}};
  using K = AssertionKind;
  auto& a = s.assertions;
  a.push_back(make_assertion(K::FiltrationValid, Json::object()));
  a.push_back(make_assertion(K::MartingaleValid, {{"martingale", "X"}}));
  a.push_back(make_assertion(K::SequenceEquals, {{"lhs", joined}, {"rhs", lit(ones(2 * N))}}));
  a.push_back(make_assertion(K::NormEquals, {{"seq", joined}, {"value", "1"}}));
  a.push_back(make_assertion(K::SequenceEquals, {{"lhs", at_level(0, abs_of(term("X", N)))}, {"rhs", abs_of(term("X", N))}}));
  a.push_back(make_assertion(K::SequenceEquals, {{"lhs", limit}, {"rhs", lit(ExtSeq::constant(1))}}));
  a.push_back(make_assertion(K::NotInSpace, {{"seq", limit}, {"space", "c0"}}));
  return s;
}

const std::vector<std::pair<std::string, std::function<Scenario()>>>& registry() {
  static const std::vector<std::pair<std::string, std::function<Scenario()>>> r = {
      {"example-c-no-modulus", c_no_modulus},
      {"example-halves", example_halves},
      {"example-banach-limit", example_banach_limit},
      {"example-l1-unbounded", example_l1_unbounded},
      {"example-limsup-norm", example_limsup_norm},
      {"prop-strong-unit", prop_strong_unit},
      {"kb-c0-failure", kb_c0_failure},
  };
  return r;
}

}  // namespace

std::vector<std::string> builtin_scenario_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, make] : registry()) ids.push_back(id);
  return ids;
}

Scenario builtin_scenario(const std::string& id) {
  for (const auto& [name, make] : registry())
    if (name == id) return make();
  throw PreconditionError("unknown scenario \"" + id + "\"");
}

}  // namespace martlat
