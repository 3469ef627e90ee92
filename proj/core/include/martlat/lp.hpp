#ifndef MARTLAT_LP_HPP
#define MARTLAT_LP_HPP

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "martlat/rational.hpp"

namespace martlat {

struct LinearConstraint {
  std::vector<Rational> coeffs;
  Rational rhs;
};

/// minimize objective . v  subject to  eq: a . v = rhs,  geq: a . v >= rhs.
/// Variables are free; sign constraints are written as geq rows.
struct LpProblem {
  std::size_t num_vars = 0;
  std::vector<Rational> objective;
  std::vector<LinearConstraint> eq_constraints;
  std::vector<LinearConstraint> geq_constraints;

  /// Plain-text dump, one constraint per line, rationals as "p/q".
  std::string dump() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };
std::string to_string(LpStatus s);

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  std::vector<Rational> witness;

  friend bool operator==(const LpResult&, const LpResult&) = default;
};

/// Two-phase dense-tableau simplex over exact rationals with Bland's rule
/// (smallest-index entering and leaving variables), so it never cycles and is
/// deterministic. Phase one runs once in the constructor; every call to
/// minimize() starts phase two from that feasible basis, which makes solving
/// many objectives over one polyhedron cheap.
class LpSolver {
 public:
  /// Throws PreconditionError on malformed rows.
  explicit LpSolver(const LpProblem& constraints);
  ~LpSolver();
  LpSolver(LpSolver&&) noexcept;
  LpSolver& operator=(LpSolver&&) noexcept;

  bool feasible() const;
  LpResult minimize(const std::vector<Rational>& objective) const;

 private:
  struct Tableau;
  std::size_t num_vars_ = 0;
  std::unique_ptr<Tableau> tableau_;
};

LpResult solve_lp_exact(const LpProblem& p);

/// Checks every constraint of `p` at `v` exactly.
bool lp_satisfies(const LpProblem& p, const std::vector<Rational>& v);

}  // namespace martlat

#endif  // MARTLAT_LP_HPP
