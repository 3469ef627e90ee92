#include "martlat/lp.hpp"

#include <sstream>

#include "martlat/error.hpp"

namespace martlat {

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

std::string LpProblem::dump() const {
  std::ostringstream os;
  auto row = [&](const std::vector<Rational>& c) {
    bool first = true;
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (c[j].is_zero()) continue;
      os << (first ? "" : " + ") << c[j] << "*v" << (j + 1);
      first = false;
    }
    if (first) os << "0";
  };
  os << "vars " << num_vars << "\n";
  os << "minimize ";
  row(objective);
  os << "\n";
  for (const auto& c : eq_constraints) {
    row(c.coeffs);
    os << " = " << c.rhs << "\n";
  }
  for (const auto& c : geq_constraints) {
    row(c.coeffs);
    os << " >= " << c.rhs << "\n";
  }
  return os.str();
}

// Columns: [0,n) positive parts, [n,2n) negative parts of the free variables,
// then one surplus column per geq row. Artificial columns exist only during
// phase one and are dropped afterwards.
struct LpSolver::Tableau {
  std::size_t n = 0;
  std::size_t cols = 0;
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  std::vector<std::size_t> basis;

  void pivot(std::size_t r, std::size_t c, std::vector<Rational>* reduced, Rational* value) {
    const Rational inv = Rational(1) / a[r][c];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < cols; ++j) {
      if (a[r][j].is_zero()) continue;
      a[r][j] *= inv;
      nz.push_back(j);
    }
    b[r] *= inv;
    auto eliminate = [&](std::vector<Rational>& row, Rational& rhs) {
      const Rational f = row[c];
      if (f.is_zero()) return;
      for (std::size_t j : nz) row[j] -= f * a[r][j];
      rhs -= f * b[r];
    };
    for (std::size_t i = 0; i < a.size(); ++i)
      if (i != r) eliminate(a[i], b[i]);
    if (reduced) eliminate(*reduced, *value);
    basis[r] = c;
  }

  /// Bland's rule. `reduced` holds reduced costs, `value` minus the objective value.
  /// Returns false when unbounded.
  bool optimize(std::vector<Rational>& reduced, Rational& value, std::size_t usable_cols) {
    for (;;) {
      std::size_t enter = usable_cols;
      for (std::size_t j = 0; j < usable_cols; ++j) {
        if (reduced[j].sign() < 0) {
          enter = j;
          break;
        }
      }
      if (enter == usable_cols) return true;
      std::size_t leave = a.size();
      Rational best;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i][enter].sign() <= 0) continue;
        const Rational ratio = b[i] / a[i][enter];
        if (leave == a.size() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == a.size()) return false;
      pivot(leave, enter, &reduced, &value);
    }
  }

  /// Reduced costs and (negated) objective value for the current basis.
  std::pair<std::vector<Rational>, Rational> price(const std::vector<Rational>& cost) const {
    std::vector<Rational> reduced(cost.begin(), cost.begin() + static_cast<std::ptrdiff_t>(cols));
    Rational value(0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const Rational& cb = cost[basis[i]];
      if (cb.is_zero()) continue;
      for (std::size_t j = 0; j < cols; ++j)
        if (!a[i][j].is_zero()) reduced[j] -= cb * a[i][j];
      value -= cb * b[i];
    }
    return {std::move(reduced), std::move(value)};
  }

  std::vector<Rational> point() const {
    std::vector<Rational> v(n);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (basis[i] < n) v[basis[i]] += b[i];
      else if (basis[i] < 2 * n) v[basis[i] - n] -= b[i];
    }
    return v;
  }
};

LpSolver::LpSolver(const LpProblem& p) : num_vars_(p.num_vars), tableau_(std::make_unique<Tableau>()) {
  const std::size_t n = p.num_vars;
  const std::size_t g = p.geq_constraints.size();
  const std::size_t m = p.eq_constraints.size() + g;
  for (const auto* group : {&p.eq_constraints, &p.geq_constraints})
    for (const auto& c : *group)
      if (c.coeffs.size() != n) throw PreconditionError("LpProblem: constraint width differs from num_vars");

  Tableau& t = *tableau_;
  t.n = n;
  // Rows needing an artificial get one; geq rows with rhs <= 0 start with their surplus basic.
  std::vector<bool> needs_art(m, false);
  std::size_t arts = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const bool is_eq = i < p.eq_constraints.size();
    const auto& c = is_eq ? p.eq_constraints[i] : p.geq_constraints[i - p.eq_constraints.size()];
    needs_art[i] = is_eq || c.rhs.sign() > 0;
    if (needs_art[i]) ++arts;
  }
  const std::size_t real_cols = 2 * n + g;
  t.cols = real_cols + arts;
  t.a.assign(m, std::vector<Rational>(t.cols));
  t.b.assign(m, Rational(0));
  t.basis.assign(m, 0);

  std::size_t next_art = real_cols;
  for (std::size_t i = 0; i < m; ++i) {
    const bool is_eq = i < p.eq_constraints.size();
    const std::size_t gi = i - p.eq_constraints.size();
    const auto& c = is_eq ? p.eq_constraints[i] : p.geq_constraints[gi];
    auto& row = t.a[i];
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = c.coeffs[j];
      row[n + j] = -c.coeffs[j];
    }
    if (!is_eq) row[2 * n + gi] = -1;
    t.b[i] = c.rhs;
    if (t.b[i].sign() < 0 || (!is_eq && !needs_art[i])) {
      for (std::size_t j = 0; j < real_cols; ++j) row[j] = -row[j];
      t.b[i] = -t.b[i];
    }
    if (needs_art[i]) {
      row[next_art] = 1;
      t.basis[i] = next_art++;
    } else {
      t.basis[i] = 2 * n + gi;
    }
  }

  if (arts > 0) {
    std::vector<Rational> cost(t.cols, Rational(0));
    for (std::size_t j = real_cols; j < t.cols; ++j) cost[j] = 1;
    auto [reduced, value] = t.price(cost);
    t.optimize(reduced, value, t.cols);
    if (value.sign() != 0) {
      tableau_.reset();
      return;
    }
    // Drive zero-valued artificials out of the basis; rows where that is
    // impossible are linear combinations of the others.
    for (std::size_t i = 0; i < t.a.size();) {
      if (t.basis[i] < real_cols) {
        ++i;
        continue;
      }
      std::size_t col = real_cols;
      for (std::size_t j = 0; j < real_cols; ++j) {
        if (!t.a[i][j].is_zero()) {
          col = j;
          break;
        }
      }
      if (col == real_cols) {
        t.a.erase(t.a.begin() + static_cast<std::ptrdiff_t>(i));
        t.b.erase(t.b.begin() + static_cast<std::ptrdiff_t>(i));
        t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
      t.pivot(i, col, nullptr, nullptr);
      ++i;
    }
    for (auto& row : t.a) row.resize(real_cols);
    t.cols = real_cols;
  }
}

LpSolver::~LpSolver() = default;
LpSolver::LpSolver(LpSolver&&) noexcept = default;
LpSolver& LpSolver::operator=(LpSolver&&) noexcept = default;

bool LpSolver::feasible() const { return tableau_ != nullptr; }

LpResult LpSolver::minimize(const std::vector<Rational>& objective) const {
  if (objective.size() != num_vars_) throw PreconditionError("LpSolver::minimize: objective width differs from num_vars");
  if (!tableau_) return {LpStatus::Infeasible, Rational(0), {}};

  Tableau t = *tableau_;
  const std::size_t n = num_vars_;
  std::vector<Rational> cost(t.cols, Rational(0));
  for (std::size_t j = 0; j < n; ++j) {
    cost[j] = objective[j];
    cost[n + j] = -objective[j];
  }
  auto [reduced, value] = t.price(cost);
  if (!t.optimize(reduced, value, t.cols)) return {LpStatus::Unbounded, Rational(0), {}};
  return {LpStatus::Optimal, -value, t.point()};
}

LpResult solve_lp_exact(const LpProblem& p) { return LpSolver(p).minimize(p.objective); }

bool lp_satisfies(const LpProblem& p, const std::vector<Rational>& v) {
  if (v.size() != p.num_vars) return false;
  auto dot = [&](const std::vector<Rational>& c) {
    Rational s(0);
    for (std::size_t j = 0; j < c.size(); ++j)
      if (!c[j].is_zero()) s += c[j] * v[j];
    return s;
  };
  for (const auto& c : p.eq_constraints)
    if (dot(c.coeffs) != c.rhs) return false;
  for (const auto& c : p.geq_constraints)
    if (dot(c.coeffs) < c.rhs) return false;
  return true;
}

}  // namespace martlat
