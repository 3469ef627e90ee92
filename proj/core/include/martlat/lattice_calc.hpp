#ifndef MARTLAT_LATTICE_CALC_HPP
#define MARTLAT_LATTICE_CALC_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "martlat/lp.hpp"
#include "martlat/martingale.hpp"

namespace martlat {

inline constexpr long kDefaultProbeHorizon = 10;

/// Limit of an increasing sequence of probes, when it can be certified.
///
/// Two cases are recognized: the last two probes coincide (the sequence has
/// become stationary), or the probes settle one fixed block of coordinates per
/// step. In the second case the block-growth extrapolation of the last three
/// probes must agree with that of the three before, and the limit must bound
/// the last probe. Anything else yields nullopt; no limit is guessed.
std::optional<ExtSeq> certify_increasing_limit(std::span<const ExtSeq> probes);

enum class ModulusMethod { Krickeberg, LatticeHomFastPath, LpOracle };
std::string to_string(ModulusMethod m);

struct ModulusResult {
  /// Least martingale dominating +-X, present only when verified.
  std::optional<Martingale> modulus;
  ModulusMethod method = ModulusMethod::Krickeberg;
  bool stabilized = false;
  /// Termwise values sup_{m>=n} E_n|x_m| when every level stabilized.
  std::optional<Martingale> formula_terms;
  /// Set when the formula values differ from the verified modulus (or no
  /// verified modulus could be assembled from them).
  std::optional<std::string> mismatch;
  /// Non-stabilization details: level and the last two probe values.
  std::string diagnostics;
};

/// Modulus of X by Krickeberg's formula |X|_n = sup_{m>=n} E_n|x_m|.
///
/// For each level n the increasing probes E_n|x_m|, m = n..max(probe_horizon, n+3),
/// are reduced to a certified limit; terms past X's horizon come from its term
/// rule (or its terminal term when X is closed). When every level is a lattice
/// homomorphism the formula collapses to (|x_n|). The result is verified to be
/// a martingale dominating +-X. If the formula values fail that check, the
/// lower bound sup_{n>=k} E_k z_n that every dominating martingale must clear
/// is tried instead and, when it verifies, becomes the modulus while the
/// mismatch is recorded. In finite dimensions a non-stabilized run falls back
/// to lp_least_dominating.
ModulusResult krickeberg_modulus(const Martingale& x, const Filtration& f, long probe_horizon = kDefaultProbeHorizon);

struct LeastDominatingResult {
  std::optional<Martingale> martingale;
  /// Why `martingale` is absent: infeasible or unbounded LP, or a failed post-check.
  std::string certificate;
};

/// Least martingale Z with z_n >= +-x_n, computed coordinate by coordinate:
/// with y the terminal term (y_n = E_n y), minimize (E_n y)_i subject to
/// E_N y = y and E_n y >= +-x_n. The assembled candidate is re-validated.
/// Requires a finite-dimensional space.
LeastDominatingResult lp_least_dominating(const Martingale& x, const Filtration& f);

/// Least martingale dominating every member of `family` (same LP scheme with
/// E_n y >= x_n for each X). sup{X, -X} is the modulus.
LeastDominatingResult martingale_sup(std::span<const Martingale> family, const Filtration& f);

/// The LP whose optimum is the regular norm in finite dimensions; exposed for dumps and tests.
LpProblem regular_norm_lp(const Martingale& x, const Filtration& f, NormKind kind);

struct RegularNormResult {
  enum class Status { Ok, NotRegular, Undetermined };
  Status status = Status::Undetermined;
  Rational value;
  std::string route;  // "lp" or "modulus"
  std::string detail;
};

/// ||X||_r = inf{ ||Y|| : Y positive martingale, Y >= +-X }.
/// Finite dimensions: one LP in (y, t) minimizing t. Sequence spaces: the norm of
/// the verified modulus (||X||_r = || |X| ||), so Krickeberg must stabilize.
RegularNormResult regular_norm(const Martingale& x, const Filtration& f, NormKind kind,
                               long probe_horizon = kDefaultProbeHorizon);

/// Block matrix of the period-3 family on c: averages coordinates 1,2 of each
/// triple and keeps the third.
Matrix pair_average_triple_block();

struct ShrinkResult {
  enum class Status { Shrunk, Rejected, PreconditionViolated, Failed };
  Status status = Status::Failed;
  std::optional<Martingale> smaller;
  std::size_t zeroed_coordinate = 0;
  std::string certificate;
};

/// Given Y dominating +-X for the period-3 averaging filtration on c, zeroes
/// the first coordinate 3k with y_{1,3k} > 0 in every term. Such coordinates
/// are fixed by every level, so the result is again a dominating martingale,
/// strictly below Y. When no such coordinate exists y_1 is not in c, which is
/// reported as a rejection certificate.
ShrinkResult shrink_dominating(const Martingale& y, const Martingale& x, const Filtration& f,
                               long probe_horizon = kDefaultProbeHorizon);

struct UnitDomination {
  Rational constant;     // least C with |x_n| <= C ||X|| e for all n
  Rational norm;         // ||X||
  Martingale dominator;  // (E_n e)_n
  bool verified = false; // +-X <= C ||X|| (E_n e)_n
};

/// Domination of a bounded martingale through a strong unit e. Throws
/// PreconditionError naming the first non-positive coordinate of e, or when
/// ||X|| is not a finite exact value.
UnitDomination dominate_via_unit(const Martingale& x, const Filtration& f, const ExtSeq& e, NormKind kind);

}  // namespace martlat

#endif  // MARTLAT_LATTICE_CALC_HPP
