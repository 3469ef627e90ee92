#include "martlat/lattice_calc.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "martlat/error.hpp"

namespace martlat {

// ------------------------------------------------------- symbolic limits

namespace {

/// The limit suggested by three increasing probes that settle one block of
/// coordinates per step: a and b first differ at d1, b and c at d2, and the
/// block c[d1 .. d2-1] must repeat the block b settled just before.
std::optional<ExtSeq> block_growth_limit(const ExtSeq& a, const ExtSeq& b, const ExtSeq& c) {
  const auto d1 = first_difference(a, b);
  const auto d2 = first_difference(b, c);
  if (!d1 || !d2 || *d2 <= *d1) return std::nullopt;
  const std::size_t stride = *d2 - *d1;
  if (*d1 <= stride) return std::nullopt;
  std::vector<Rational> block;
  for (std::size_t i = *d1; i < *d2; ++i) {
    if (c[i] != b[i - stride]) return std::nullopt;
    block.push_back(c[i]);
  }
  std::vector<Rational> prefix;
  for (std::size_t i = 1; i < *d1; ++i) prefix.push_back(c[i]);
  return ExtSeq(std::move(prefix), std::move(block));
}

}  // namespace

std::optional<ExtSeq> certify_increasing_limit(std::span<const ExtSeq> probes) {
  const std::size_t k = probes.size();
  if (k >= 2 && probes[k - 1] == probes[k - 2]) return probes[k - 1];
  if (k < 4) return std::nullopt;
  const auto early = block_growth_limit(probes[k - 4], probes[k - 3], probes[k - 2]);
  const auto late = block_growth_limit(probes[k - 3], probes[k - 2], probes[k - 1]);
  if (!early || !late || *early != *late) return std::nullopt;
  if (!seq_leq(probes[k - 1], *late)) return std::nullopt;
  return late;
}

std::string to_string(ModulusMethod m) {
  switch (m) {
    case ModulusMethod::Krickeberg: return "krickeberg";
    case ModulusMethod::LatticeHomFastPath: return "lattice_hom_fastpath";
    case ModulusMethod::LpOracle: return "lp_oracle";
  }
  return "?";
}

// ------------------------------------------------------ finite dimensions

namespace {

std::size_t finite_dim(const Filtration& f) {
  if (f.space().kind != SpaceKind::Kind::FiniteDim) {
    throw PreconditionError("LP oracle requires a finite-dimensional space, got " + f.space().str());
  }
  return f.space().dim;
}

/// d x d matrix of a level restricted to R^d.
Matrix level_matrix(const Operator& e, std::size_t d) {
  Matrix m(d, d);
  for (std::size_t k = 1; k <= d; ++k) {
    const ExtSeq col = op_apply(e, ExtSeq::unit(k));
    for (std::size_t i = 1; i <= d; ++i) m(i - 1, k - 1) = col[i];
  }
  return m;
}

std::vector<Rational> row_of(const Matrix& m, std::size_t i) {
  std::vector<Rational> r(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) r[j] = m(i, j);
  return r;
}

/// Domination LP skeleton: variables are the terminal term y in R^d (padded by
/// `extra` trailing variables), with E_N y = y and E_n y >= each lower bound.
struct DominationLp {
  std::size_t d = 0;
  long start = 0;
  long horizon = 0;
  std::vector<Matrix> levels;  // levels[n - start]
  LpProblem problem;
};

DominationLp build_domination_lp(std::span<const Martingale> lower_bounds, const Filtration& f, std::size_t extra) {
  DominationLp lp;
  lp.d = finite_dim(f);
  lp.start = lower_bounds.front().start_index();
  lp.horizon = lower_bounds.front().horizon();
  for (const auto& m : lower_bounds) {
    if (m.start_index() != lp.start || m.horizon() != lp.horizon) {
      throw PreconditionError("martingales in a supremum must share their index range");
    }
  }
  const Filtration ext = f.extended_to(lp.horizon);
  for (long n = lp.start; n <= lp.horizon; ++n) lp.levels.push_back(level_matrix(ext.level(n), lp.d));

  const std::size_t nv = lp.d + extra;
  lp.problem.num_vars = nv;
  lp.problem.objective.assign(nv, Rational(0));
  const Matrix& top = lp.levels.back();
  for (std::size_t i = 0; i < lp.d; ++i) {
    std::vector<Rational> c(nv);
    for (std::size_t j = 0; j < lp.d; ++j) c[j] = top(i, j) - (i == j ? Rational(1) : Rational(0));
    lp.problem.eq_constraints.push_back({std::move(c), Rational(0)});
  }
  // Identical rows are merged keeping the largest right-hand side.
  std::map<std::vector<std::string>, std::size_t> seen;
  auto key_of = [](const std::vector<Rational>& c) {
    std::vector<std::string> k;
    for (const auto& v : c) k.push_back(v.str());
    return k;
  };
  for (long n = lp.start; n <= lp.horizon; ++n) {
    const Matrix& e = lp.levels[static_cast<std::size_t>(n - lp.start)];
    for (std::size_t i = 0; i < lp.d; ++i) {
      std::vector<Rational> c = row_of(e, i);
      c.resize(nv);
      Rational rhs;
      bool first = true;
      for (const auto& m : lower_bounds) {
        const Rational& v = m.term(n)[i + 1];
        if (first || rhs < v) rhs = v;
        first = false;
      }
      auto key = key_of(c);
      auto it = seen.find(key);
      if (it == seen.end()) {
        seen.emplace(std::move(key), lp.problem.geq_constraints.size());
        lp.problem.geq_constraints.push_back({std::move(c), rhs});
      } else if (lp.problem.geq_constraints[it->second].rhs < rhs) {
        lp.problem.geq_constraints[it->second].rhs = rhs;
      }
    }
  }
  return lp;
}

LeastDominatingResult least_dominating(std::span<const Martingale> lower_bounds, const Filtration& f,
                                       std::span<const Martingale> must_dominate, bool both_signs) {
  DominationLp lp = build_domination_lp(lower_bounds, f, 0);
  const LpSolver solver(lp.problem);
  if (!solver.feasible()) return {std::nullopt, "domination LP is infeasible: no martingale dominates the family"};

  std::map<std::vector<std::string>, Rational> cache;
  std::vector<ExtSeq> terms;
  for (long n = lp.start; n <= lp.horizon; ++n) {
    const Matrix& e = lp.levels[static_cast<std::size_t>(n - lp.start)];
    std::vector<Rational> coords(lp.d);
    for (std::size_t i = 0; i < lp.d; ++i) {
      const auto obj = row_of(e, i);
      std::vector<std::string> key;
      for (const auto& v : obj) key.push_back(v.str());
      auto it = cache.find(key);
      if (it == cache.end()) {
        const LpResult r = solver.minimize(obj);
        if (r.status != LpStatus::Optimal) {
          std::ostringstream os;
          os << "minimizing (E_" << n << " y)_" << (i + 1) << " is " << to_string(r.status);
          return {std::nullopt, os.str()};
        }
        it = cache.emplace(std::move(key), r.value).first;
      }
      coords[i] = it->second;
    }
    terms.push_back(ExtSeq::finite(std::move(coords)));
  }
  Martingale z(lp.start, std::move(terms));

  const auto rep = check_martingale(z, f);
  if (!rep.passed()) {
    return {std::nullopt, "per-coordinate minima do not assemble into a martingale: " + rep.first_failure()->witness};
  }
  for (const auto& x : must_dominate) {
    const bool ok = both_signs ? dominates(z, x) : termwise_leq(x, z);
    if (!ok) return {std::nullopt, "assembled candidate fails to dominate the family"};
  }
  return {std::move(z), {}};
}

}  // namespace

LeastDominatingResult lp_least_dominating(const Martingale& x, const Filtration& f) {
  const Martingale pm[] = {x, x.negated()};
  const Martingale just_x[] = {x};
  return least_dominating(pm, f, just_x, true);
}

LeastDominatingResult martingale_sup(std::span<const Martingale> family, const Filtration& f) {
  if (family.empty()) throw PreconditionError("martingale_sup of an empty family");
  return least_dominating(family, f, family, false);
}

LpProblem regular_norm_lp(const Martingale& x, const Filtration& f, NormKind kind) {
  const Martingale pm[] = {x, x.negated()};
  DominationLp lp = build_domination_lp(pm, f, 1);
  const std::size_t t = lp.d;
  lp.problem.objective[t] = 1;
  // Y >= +-X forces Y >= 0, so the sup norm is the largest coordinate and the
  // l1 norm the coordinate sum.
  for (const Matrix& e : lp.levels) {
    if (kind == NormKind::L1) {
      std::vector<Rational> c(lp.d + 1);
      for (std::size_t i = 0; i < lp.d; ++i)
        for (std::size_t j = 0; j < lp.d; ++j) c[j] -= e(i, j);
      c[t] = 1;
      lp.problem.geq_constraints.push_back({std::move(c), Rational(0)});
    } else {
      for (std::size_t i = 0; i < lp.d; ++i) {
        std::vector<Rational> c(lp.d + 1);
        for (std::size_t j = 0; j < lp.d; ++j) c[j] = -e(i, j);
        c[t] = 1;
        lp.problem.geq_constraints.push_back({std::move(c), Rational(0)});
      }
    }
  }
  return lp.problem;
}

// ------------------------------------------------------------- Krickeberg

ModulusResult krickeberg_modulus(const Martingale& x, const Filtration& f, long probe_horizon) {
  constexpr long kMinProbes = 4;
  ModulusResult res;
  const long start = x.start_index();
  const long horizon = x.horizon();

  // Probe window per level, limited by the terms X can produce.
  auto probe_end = [&](long n) {
    long end = std::max(probe_horizon, n + kMinProbes - 1);
    end = std::max(end, horizon);
    while (end > horizon && (!x.can_extend_to(end) || !(f.extendable() || f.has_level(end)))) --end;
    return end;
  };
  long max_end = horizon;
  for (long n = start; n <= horizon; ++n) max_end = std::max(max_end, probe_end(n));
  const Filtration ext = f.extended_to(max_end);

  bool all_hom = true;
  for (long n = start; n <= horizon && all_hom; ++n) {
    const Operator& e = ext.level(n);
    all_hom = e.is_block() && op_is_lattice_hom(e);
  }

  std::vector<ExtSeq> formula;
  if (all_hom) {
    res.method = ModulusMethod::LatticeHomFastPath;
    for (long n = start; n <= horizon; ++n) formula.push_back(seq_abs(x.term(n)));
    res.stabilized = true;
  } else {
    res.method = ModulusMethod::Krickeberg;
    res.stabilized = true;
    for (long n = start; n <= horizon && res.stabilized; ++n) {
      const Operator& en = ext.level(n);
      const long end = probe_end(n);
      std::vector<ExtSeq> probes;
      for (long m = n; m <= end; ++m) probes.push_back(op_apply(en, seq_abs(x.term_at(m))));
      if (x.closed() && end >= horizon) probes.push_back(probes.back());

      auto limit = certify_increasing_limit(probes);
      if (limit) {
        for (long k = n; k <= end && limit; ++k) {
          if (op_apply(ext.level(k), *limit) != *limit) limit.reset();
        }
      }
      if (!limit) {
        res.stabilized = false;
        std::ostringstream os;
        os << "level " << n << " did not stabilize";
        if (probes.size() >= 2) {
          os << "; last probes " << probes[probes.size() - 2] << " and " << probes.back();
        }
        res.diagnostics = os.str();
        break;
      }
      formula.push_back(*limit);
    }
  }

  if (!res.stabilized) {
    if (f.space().kind == SpaceKind::Kind::FiniteDim) {
      auto lp = lp_least_dominating(x, f);
      res.method = ModulusMethod::LpOracle;
      res.modulus = std::move(lp.martingale);
      if (!res.modulus) res.diagnostics += "; LP fallback: " + lp.certificate;
    }
    return res;
  }

  Martingale z(start, formula);
  z.set_closed(x.closed());
  res.formula_terms = z;
  if (check_martingale(z, f).passed() && dominates(z, x)) {
    res.modulus = std::move(z);
    return res;
  }

  // Every dominating martingale W has w_n >= z_n, hence w_k = E_k w_n >= E_k z_n.
  std::vector<ExtSeq> repaired;
  for (long k = start; k <= horizon; ++k) {
    ExtSeq lower = formula[static_cast<std::size_t>(k - start)];
    for (long n = k + 1; n <= horizon; ++n) {
      lower = seq_join(lower, op_apply(ext.level(k), formula[static_cast<std::size_t>(n - start)]));
    }
    repaired.push_back(std::move(lower));
  }
  Martingale r(start, repaired);
  r.set_closed(x.closed());
  std::ostringstream os;
  if (check_martingale(r, f).passed() && dominates(r, x)) {
    bool first = true;
    for (long n = start; n <= horizon; ++n) {
      const auto i = static_cast<std::size_t>(n - start);
      if (formula[i] == repaired[i]) continue;
      os << (first ? "" : "; ") << "term " << n << ": formula " << formula[i] << ", modulus " << repaired[i];
      first = false;
    }
    res.modulus = std::move(r);
  } else {
    os << "formula values are not a dominating martingale and no verified modulus was assembled";
  }
  res.mismatch = os.str();
  return res;
}

// ----------------------------------------------------------- regular norm

RegularNormResult regular_norm(const Martingale& x, const Filtration& f, NormKind kind, long probe_horizon) {
  RegularNormResult out;
  if (f.space().kind == SpaceKind::Kind::FiniteDim) {
    // No tail in R^d: the limsup term vanishes.
    const NormKind k = kind == NormKind::L1 ? NormKind::L1 : NormKind::Sup;
    const LpResult r = solve_lp_exact(regular_norm_lp(x, f, k));
    out.route = "lp";
    if (r.status != LpStatus::Optimal) {
      out.status = RegularNormResult::Status::NotRegular;
      out.detail = "regular-norm LP is " + to_string(r.status);
      return out;
    }
    out.status = RegularNormResult::Status::Ok;
    out.value = r.value;
    return out;
  }

  out.route = "modulus";
  const ModulusResult mod = krickeberg_modulus(x, f, probe_horizon);
  if (!mod.modulus) {
    out.status = mod.stabilized ? RegularNormResult::Status::NotRegular : RegularNormResult::Status::Undetermined;
    out.detail = mod.stabilized ? mod.mismatch.value_or("no dominating martingale") : mod.diagnostics;
    return out;
  }
  const MartingaleNorm n = martingale_norm(*mod.modulus, kind);
  if (n.value.infinite) {
    out.status = RegularNormResult::Status::NotRegular;
    out.detail = "modulus has infinite norm";
    return out;
  }
  out.status = RegularNormResult::Status::Ok;
  out.value = n.value.value;
  return out;
}

// ------------------------------------------------------------- shrinking

Matrix pair_average_triple_block() {
  const Rational h(1, 2);
  return Matrix::from_rows({{h, h, 0}, {h, h, 0}, {0, 0, 1}});
}

ShrinkResult shrink_dominating(const Martingale& y, const Martingale& x, const Filtration& f, long probe_horizon) {
  ShrinkResult res;
  const Filtration ext = f.extended_to(std::max(x.horizon(), y.horizon()));
  const Matrix triple = pair_average_triple_block();
  for (long n = y.start_index(); n <= y.horizon(); ++n) {
    const Operator& e = ext.level(n);
    const bool family = e.is_block() && e.as_block().period == 3 && e.as_block().tail_block == triple &&
                        e.as_block().head == Matrix::identity(e.as_block().head_dim);
    if (!family) {
      res.status = ShrinkResult::Status::PreconditionViolated;
      res.certificate = "level " + std::to_string(n) + " is not a member of the period-3 averaging family";
      return res;
    }
  }
  if (!dominates(y, x)) {
    res.status = ShrinkResult::Status::PreconditionViolated;
    res.certificate = "Y does not dominate +-X";
    return res;
  }

  const ExtSeq& y1 = y.term(y.start_index());
  // y_1 = E_1 y_n >= E_1 |x_n| = |x_n| for every n.
  for (long n = x.start_index(); n <= std::max(probe_horizon, x.horizon()) && x.can_extend_to(n); ++n) {
    const ExtSeq u = seq_abs(x.term_at(n));
    if (!seq_leq(u, y1)) {
      res.status = ShrinkResult::Status::PreconditionViolated;
      res.certificate = "y_1 = " + y1.str() + " is not above u_" + std::to_string(n) + " = " + u.str();
      return res;
    }
  }

  const std::size_t scan = y1.head_length() + 3 * y1.period() + 3;
  std::size_t k0 = 0;
  for (std::size_t k = 1; 3 * k <= scan; ++k) {
    if (y1[3 * k].sign() > 0) {
      k0 = k;
      break;
    }
  }
  if (k0 == 0) {
    res.status = ShrinkResult::Status::Rejected;
    if (!seq_in_space(y1, SpaceKind::c())) {
      res.certificate = "y_1 = " + y1.str() +
                        " has unit entries at residues 1,2 and zero at residue 0, hence not in c";
    } else {
      res.certificate = "y_1 = " + y1.str() + " has no positive coordinate 3k";
    }
    return res;
  }

  const std::size_t coord = 3 * k0;
  std::vector<ExtSeq> terms;
  for (const auto& t : y.terms()) {
    std::vector<Rational> u = t.unrolled(std::max(t.head_length(), coord), t.period());
    u[coord - 1] = 0;
    terms.push_back(from_unrolled(u, {std::max(t.head_length(), coord), t.period()}));
  }
  Martingale z(y.start_index(), std::move(terms));
  z.set_closed(y.closed());
  res.zeroed_coordinate = coord;

  const auto rep = check_martingale(z, f);
  if (!rep.passed() || !dominates(z, x) || !termwise_leq(z, y) || z == y) {
    res.status = ShrinkResult::Status::Failed;
    res.certificate = rep.passed() ? "shrunk candidate fails domination or strictness"
                                   : "shrunk candidate is not a martingale: " + rep.first_failure()->witness;
    return res;
  }
  res.status = ShrinkResult::Status::Shrunk;
  res.smaller = std::move(z);
  res.certificate = "zeroed coordinate " + std::to_string(coord);
  return res;
}

// ------------------------------------------------------------ strong unit

UnitDomination dominate_via_unit(const Martingale& x, const Filtration& f, const ExtSeq& e, NormKind kind) {
  // In R^d only coordinates 1..d exist.
  const bool finite = f.space().kind == SpaceKind::Kind::FiniteDim;
  const std::size_t span_e = finite ? f.space().dim : e.head_length() + e.period();
  for (std::size_t i = 1; i <= span_e; ++i) {
    if (e[i].sign() <= 0) {
      throw PreconditionError("e is not a strong unit: coordinate " + std::to_string(i) + " is " + e[i].str());
    }
  }
  const MartingaleNorm mn = martingale_norm(x, kind);
  if (mn.value.infinite || mn.exactness != Exactness::Exact) {
    throw PreconditionError("dominate_via_unit needs a bounded martingale with an exact norm");
  }
  UnitDomination out;
  out.norm = mn.value.value;

  Rational c(0);
  if (!out.norm.is_zero()) {
    for (const auto& t : x.terms()) {
      const Alignment al = common_alignment(t, e);
      const std::size_t last = finite ? f.space().dim : al.prefix_len + al.period;
      for (std::size_t i = 1; i <= last; ++i) c = max(c, abs(t[i]) / (out.norm * e[i]));
    }
  }
  out.constant = c;

  const Filtration ext = f.extended_to(x.horizon());
  std::vector<ExtSeq> ys;
  for (long n = x.start_index(); n <= x.horizon(); ++n) ys.push_back(op_apply(ext.level(n), e));
  out.dominator = Martingale(x.start_index(), ys);

  std::vector<ExtSeq> scaled;
  for (const auto& t : ys) scaled.push_back(seq_scale(t, c * out.norm));
  out.verified = dominates(Martingale(x.start_index(), std::move(scaled)), x);
  return out;
}

}  // namespace martlat
