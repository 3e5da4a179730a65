#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "adq/form.hpp"
#include "adq/poly.hpp"
#include "adq/rational.hpp"
#include "adq/sieve.hpp"

namespace adq {

// One equation instance, normalized to poly = 0, tagged with the composite
// argument n and the generating pair (x, y). Synthetic constraints (symbol
// definitions, eliminants) carry n = x = y = 0.
struct Constraint {
  Poly poly;
  std::uint64_t n = 0;
  std::uint64_t x = 0;
  std::uint64_t y = 0;

  std::string describe() const {
    return "n=" + std::to_string(n) + " from (" + std::to_string(x) + "," +
           std::to_string(y) + "): " + poly.to_string() + " = 0";
  }
};

struct ConstraintSystem {
  Form form = Form::shifted;
  std::uint64_t prime_limit = 0;
  std::vector<Constraint> constraints;  // sorted by (n, x, y)
  std::uint64_t pairs_enumerated = 0;   // includes pairs whose equation is vacuous
  std::set<Sym> syms;
};

// f(n) as a polynomial: the product of one symbol per prime power of n,
// multiplicativity built into the encoding. f(1) is the constant 1.
inline Poly value_monomial(std::uint64_t n, const SpfTable* spf = nullptr) {
  Poly out = Poly::constant(Rational(1));
  for (const auto& [p, e] : factorize(n, spf).factors)
    out = out * Poly::symbol(Sym{p, e});
  return out;
}

// All equation instances with pair members up to prime_limit. Vacuously true
// pairs (zero polynomial) are counted but not stored.
inline ConstraintSystem build_system(Form form, std::uint64_t prime_limit,
                                     const PrimeSet& ps) {
  if (form == Form::shifted && prime_limit < 3)
    throw std::domain_error("build_system: shifted form needs prime_limit >= 3");
  if (form == Form::primesm1 && prime_limit < 2)
    throw std::domain_error("build_system: primesm1 form needs prime_limit >= 2");
  if (ps.limit() < prime_limit)
    throw std::out_of_range("build_system: prime set smaller than prime_limit");

  ConstraintSystem sys;
  sys.form = form;
  sys.prime_limit = prime_limit;
  const SpfTable spf = build_spf_table(2 * prime_limit);

  std::vector<std::uint64_t> side = ps.primes_in(2, prime_limit);
  if (form == Form::primesm1)
    for (std::uint64_t& v : side) v -= 1;

  for (std::size_t i = 0; i < side.size(); ++i) {
    for (std::size_t j = i; j < side.size(); ++j) {
      const std::uint64_t x = side[i], y = side[j];
      ++sys.pairs_enumerated;
      std::uint64_t n;
      Poly poly;
      if (form == Form::shifted) {
        n = x + y - 2;
        poly = value_monomial(n, &spf) - value_monomial(x, &spf) -
               value_monomial(y, &spf) + value_monomial(2, &spf);
      } else {
        n = x + y;
        poly = value_monomial(n, &spf) - value_monomial(x, &spf) -
               value_monomial(y, &spf);
      }
      if (poly.is_zero()) continue;
      sys.constraints.push_back({std::move(poly), n, x, y});
    }
  }
  std::sort(sys.constraints.begin(), sys.constraints.end(),
            [](const Constraint& a, const Constraint& b) {
              return std::tie(a.n, a.x, a.y) < std::tie(b.n, b.x, b.y);
            });
  for (const Constraint& c : sys.constraints)
    for (const Sym& s : c.poly.syms()) sys.syms.insert(s);
  return sys;
}

using Assignment = std::map<Sym, Rational>;

enum class PropagateStatus { progressed, stalled, contradiction };

struct PropagateResult {
  PropagateStatus status = PropagateStatus::stalled;
  std::optional<Constraint> origin;  // the constraint a contradiction came from
};

// To fixpoint: substitute known symbols (a zero value annihilates its whole
// monomial), then solve any constraint that has become linear in exactly one
// symbol. A constraint reducing to a nonzero constant is a contradiction.
inline PropagateResult propagate(Assignment& assign,
                                 const std::vector<Constraint>& constraints) {
  bool made = false;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Constraint& c : constraints) {
      const Poly r = c.poly.substitute(assign);
      if (r.is_zero()) continue;
      if (r.is_constant()) return {PropagateStatus::contradiction, c};
      const std::set<Sym> ss = r.syms();
      if (ss.size() != 1) continue;
      const Sym s = *ss.begin();
      if (r.degree_in(s) != 1) continue;
      const Rational c1 = r.coeff_of_power(s, 1).constant_value();
      const Rational c0 = r.coeff_of_power(s, 0).constant_value();
      assign[s] = -c0 / c1;
      changed = made = true;
    }
  }
  return {made ? PropagateStatus::progressed : PropagateStatus::stalled,
          std::nullopt};
}

// A consistent assignment of the system's symbols, possibly leaving some
// free, that satisfies every original constraint after zero-annihilation.
struct SolutionFamily {
  Assignment assignments;
  std::set<Sym> free;
  std::string provenance;  // branching trace that produced the family
  std::vector<std::string> warnings;
};

// The elimination hit a shape outside the configured base/degree budget.
class CapabilityError : public std::runtime_error {
 public:
  CapabilityError(const std::string& what, std::string constraint)
      : std::runtime_error(what + " [" + constraint + "]"),
        constraint_(std::move(constraint)) {}
  const std::string& constraint() const { return constraint_; }

 private:
  std::string constraint_;
};

// Triangularization result: definitions for solved symbols, the residue the
// definitions cannot absorb, and the univariate eliminants derived from it.
struct Elimination {
  Assignment pre_assigned;  // forced by propagation before any elimination
  std::map<Sym, Poly, SymValueLess> defs;
  std::vector<Constraint> residue;
  std::vector<Sym> base;  // residue variables kept, smallest values first
  std::vector<std::vector<Rational>> eliminants;  // univariate in base[0]
  std::vector<Rational> eliminant_gcd;
  std::vector<std::string> warnings;
  bool inconsistent = false;
  std::optional<Constraint> conflict;
};

inline Elimination eliminate(const ConstraintSystem& system, int max_base = 2,
                             int max_degree = 2) {
  if (max_base < 2) throw std::domain_error("eliminate: max_base must be >= 2");
  if (max_degree < 2)
    throw std::domain_error("eliminate: max_degree must be >= 2");
  Elimination elim;

  const PropagateResult pre = propagate(elim.pre_assigned, system.constraints);
  if (pre.status == PropagateStatus::contradiction) {
    elim.inconsistent = true;
    elim.conflict = pre.origin;
    return elim;
  }

  const auto apply_defs = [&elim](Poly p) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Sym& s : p.syms()) {
        const auto it = elim.defs.find(s);
        if (it == elim.defs.end()) continue;
        p = p.substitute_sym(s, it->second);
        changed = true;
        break;
      }
    }
    return p;
  };

  std::vector<Constraint> pool;
  for (const Constraint& c : system.constraints) {
    Poly r = c.poly.substitute(elim.pre_assigned);
    if (!r.is_zero()) pool.push_back({std::move(r), c.n, c.x, c.y});
  }
  // Canonical processing order: the solved families must not depend on how
  // the caller happened to arrange the constraints.
  std::stable_sort(pool.begin(), pool.end(),
                   [](const Constraint& a, const Constraint& b) {
                     return std::tie(a.n, a.x, a.y) < std::tie(b.n, b.x, b.y);
                   });

  // Solve each constraint for its value-largest symbol whenever that symbol
  // is linear with a nonzero constant coefficient; the additive equations
  // make every composite symbol linear in itself, so this cascades down to
  // a residue in the smallest symbols.
  bool progressed = true;
  while (progressed) {
    progressed = false;
    std::vector<Constraint> next;
    for (const Constraint& item : pool) {
      Poly p = apply_defs(item.poly);
      if (p.is_zero()) continue;
      if (p.is_constant()) {
        elim.inconsistent = true;
        elim.conflict = Constraint{p, item.n, item.x, item.y};
        return elim;
      }
      const std::set<Sym> ss = p.syms();
      const Sym big =
          *std::max_element(ss.begin(), ss.end(), SymValueLess{});
      if (p.degree_in(big) == 1) {
        const Poly co = p.coeff_of_power(big, 1);
        if (co.is_constant() && !co.constant_value().is_zero()) {
          const Rational c = co.constant_value();
          const Poly rhs =
              p.coeff_of_power(big, 0) * Poly::constant(Rational(-1) / c);
          elim.defs[big] = rhs;
          for (auto& [s2, r2] : elim.defs)
            if (!(s2 == big)) r2 = apply_defs(r2);
          progressed = true;
          continue;
        }
      }
      next.push_back({std::move(p), item.n, item.x, item.y});
    }
    pool = std::move(next);
  }
  elim.residue = std::move(pool);

  if (elim.residue.empty()) return elim;

  std::set<Sym, SymValueLess> rsyms;
  for (const Constraint& c : elim.residue)
    for (const Sym& s : c.poly.syms()) rsyms.insert(s);
  for (const Sym& s : rsyms) {
    if (static_cast<int>(elim.base.size()) == max_base) break;
    elim.base.push_back(s);
  }
  const std::set<Sym> base_set(elim.base.begin(), elim.base.end());

  std::vector<const Constraint*> rb;
  for (const Constraint& c : elim.residue) {
    const std::set<Sym> cs = c.poly.syms();
    if (std::includes(base_set.begin(), base_set.end(), cs.begin(), cs.end()))
      rb.push_back(&c);
  }
  if (rb.empty())
    throw CapabilityError("no residue constraint within the base symbols",
                          elim.residue.front().describe());
  for (const Constraint* c : rb)
    for (const Sym& s : elim.base)
      if (static_cast<int>(c->poly.degree_in(s)) > max_degree)
        throw CapabilityError("residue constraint exceeds the degree cap",
                              c->describe());

  const Sym b0 = elim.base.front();
  if (elim.base.size() >= 2) {
    const Sym b1 = elim.base[1];
    for (std::size_t i = 0; i < rb.size(); ++i) {
      for (std::size_t j = i + 1; j < rb.size(); ++j) {
        if (rb[i]->poly.degree_in(b1) == 0 || rb[j]->poly.degree_in(b1) == 0)
          continue;  // a b1-free constraint is univariate; handled below
        const Poly r = sylvester_resultant(rb[i]->poly, rb[j]->poly, b1);
        if (!r.is_zero()) elim.eliminants.push_back(r.univariate_in(b0));
      }
    }
  }
  for (const Constraint* c : rb) {
    const std::set<Sym> cs = c->poly.syms();
    if (cs.size() == 1 && *cs.begin() == b0)
      elim.eliminants.push_back(c->poly.univariate_in(b0));
  }

  if (elim.eliminants.empty()) {
    elim.warnings.push_back(
        "no univariate eliminant derivable from the residue");
    return elim;
  }
  elim.eliminant_gcd = elim.eliminants.front();
  for (std::size_t i = 1; i < elim.eliminants.size(); ++i)
    elim.eliminant_gcd = upoly_gcd(elim.eliminant_gcd, elim.eliminants[i]);
  elim.eliminant_gcd = upoly_canonical(elim.eliminant_gcd);
  return elim;
}

// Original constraints plus every sound consequence the elimination derived:
// definitions as equations, the residue, and the eliminants. Propagating a
// branch over this set reaches the values the hand proof reaches.
inline std::vector<Constraint> augmented_system(const ConstraintSystem& system,
                                                const Elimination& elim) {
  std::vector<Constraint> aug = system.constraints;
  for (const auto& [s, rhs] : elim.defs)
    aug.push_back({Poly::symbol(s) - rhs, 0, 0, 0});
  for (const Constraint& c : elim.residue) aug.push_back(c);
  if (!elim.base.empty()) {
    const Poly b0 = Poly::symbol(elim.base.front());
    for (const auto& coeffs : elim.eliminants) {
      Poly p;
      for (std::size_t i = 0; i < coeffs.size(); ++i)
        p = p + Poly::constant(coeffs[i]) * poly_pow(b0, static_cast<std::uint32_t>(i));
      aug.push_back({std::move(p), 0, 0, 0});
    }
  }
  return aug;
}

namespace detail {

struct BranchRun {
  Elimination elimination;
  std::vector<SolutionFamily> families;
  std::vector<std::string> warnings;
};

inline BranchRun run_branches(const ConstraintSystem& system, int max_base,
                              int max_degree) {
  BranchRun run;
  run.elimination = eliminate(system, max_base, max_degree);
  Elimination& elim = run.elimination;
  run.warnings = elim.warnings;
  if (elim.inconsistent) return run;

  const std::vector<Constraint> aug = augmented_system(system, elim);

  std::vector<std::pair<Assignment, std::string>> seeds;
  if (elim.residue.empty() || elim.eliminants.empty()) {
    seeds.emplace_back(elim.pre_assigned, "propagation");
  } else {
    const RootResult rr = rational_roots(elim.eliminant_gcd);
    if (rr.leftover_degree >= 2)
      run.warnings.push_back("eliminant factor of degree " +
                             std::to_string(rr.leftover_degree) +
                             " with no rational roots");
    const Sym b0 = elim.base.front();
    for (const Rational& root : rr.roots) {
      Assignment seed = elim.pre_assigned;
      seed[b0] = root;
      seeds.emplace_back(std::move(seed), "f(" + b0.to_string() + ")=" +
                                              root.to_string() +
                                              " eliminant root");
    }
  }

  // Propagate each branch; a surviving univariate constraint of degree >= 2
  // splits the branch at its rational roots.
  std::vector<std::pair<Assignment, std::string>> finished;
  const std::function<void(Assignment, std::string)> resolve =
      [&](Assignment a, std::string trace) {
        if (propagate(a, aug).status == PropagateStatus::contradiction) return;
        for (const Constraint& c : aug) {
          const Poly r = c.poly.substitute(a);
          if (r.is_zero() || r.is_constant()) continue;
          const std::set<Sym> ss = r.syms();
          if (ss.size() != 1) continue;
          const Sym s = *ss.begin();
          if (r.degree_in(s) < 2) continue;
          const RootResult rr = rational_roots(r.univariate_in(s));
          if (rr.leftover_degree >= 2)
            run.warnings.push_back("branch factor of degree " +
                                   std::to_string(rr.leftover_degree) +
                                   " with no rational roots");
          for (const Rational& root : rr.roots) {
            Assignment next = a;
            next[s] = root;
            resolve(std::move(next), trace + "; f(" + s.to_string() + ")=" +
                                         root.to_string() + " factor root");
          }
          return;
        }
        finished.emplace_back(std::move(a), std::move(trace));
      };
  for (auto& [seed, trace] : seeds) resolve(std::move(seed), std::move(trace));

  // Verify against the original system; free symbols stay symbolic, so a
  // surviving constraint must vanish by cancellation or zero-annihilation.
  for (auto& [a, trace] : finished) {
    bool ok = true;
    for (const Constraint& c : system.constraints) {
      if (!c.poly.substitute(a).is_zero()) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    SolutionFamily fam;
    for (const Sym& s : system.syms) {
      const auto it = a.find(s);
      if (it != a.end())
        fam.assignments[s] = it->second;
      else
        fam.free.insert(s);
    }
    fam.provenance = trace;
    const auto dup = std::find_if(
        run.families.begin(), run.families.end(), [&](const SolutionFamily& g) {
          return g.assignments == fam.assignments && g.free == fam.free;
        });
    if (dup == run.families.end()) run.families.push_back(std::move(fam));
  }

  std::sort(run.families.begin(), run.families.end(),
            [](const SolutionFamily& a, const SolutionFamily& b) {
              const Sym f2{2, 1};
              const auto ia = a.assignments.find(f2);
              const auto ib = b.assignments.find(f2);
              const bool ha = ia != a.assignments.end();
              const bool hb = ib != b.assignments.end();
              if (ha != hb) return ha;  // families pinning f(2) first
              if (ha && !(ia->second == ib->second))
                return ia->second < ib->second;
              if (a.assignments != b.assignments)
                return a.assignments < b.assignments;
              return a.free < b.free;
            });
  for (SolutionFamily& fam : run.families) fam.warnings = run.warnings;
  return run;
}

}  // namespace detail

// Steps: (1) triangular elimination toward the smallest symbols; (2) collect
// the residue over at most max_base symbols; (3) pairwise resultants down to
// one variable; (4) branch on the rational roots of the eliminant gcd;
// (5) propagate each branch to fixpoint, splitting on stalled univariate
// constraints; (6) verify every candidate against the original system.
inline std::vector<SolutionFamily> eliminate_and_branch(
    const ConstraintSystem& system, int max_base = 2, int max_degree = 2) {
  return detail::run_branches(system, max_base, max_degree).families;
}

struct Classification {
  ConstraintSystem system;
  Elimination elimination;
  std::vector<SolutionFamily> families;
  std::vector<std::string> warnings;
};

inline Classification classify_full(Form form, std::uint64_t prime_limit,
                                    int max_base = 2, int max_degree = 2) {
  Classification out;
  const PrimeSet ps = build_prime_set(std::max<std::uint64_t>(prime_limit, 2));
  out.system = build_system(form, prime_limit, ps);
  detail::BranchRun run =
      detail::run_branches(out.system, max_base, max_degree);
  out.elimination = std::move(run.elimination);
  out.families = std::move(run.families);
  out.warnings = std::move(run.warnings);
  return out;
}

inline std::vector<SolutionFamily> classify(Form form,
                                            std::uint64_t prime_limit) {
  return classify_full(form, prime_limit).families;
}

enum class ForcedKind { value, free_sym, undetermined };

inline std::string to_string(ForcedKind k) {
  switch (k) {
    case ForcedKind::value: return "value";
    case ForcedKind::free_sym: return "free";
    default: return "undetermined";
  }
}

struct ForcedValue {
  std::uint64_t n = 0;
  ForcedKind kind = ForcedKind::value;
  Rational value;  // meaningful only when kind == value
};

// f(n) per family for each n <= up_to: the product of assigned factor values;
// 0 as soon as any factor is assigned 0 (zero-annihilation); otherwise
// "undetermined" if a factor symbol never entered the system, or "free" if a
// factor symbol is free.
inline std::vector<ForcedValue> forced_values(const SolutionFamily& family,
                                              std::uint64_t up_to,
                                              const SpfTable* spf = nullptr) {
  std::vector<ForcedValue> out;
  out.reserve(up_to);
  for (std::uint64_t n = 1; n <= up_to; ++n) {
    Rational prod(1);
    bool has_zero = false, has_undetermined = false, has_free = false;
    for (const auto& [p, e] : factorize(n, spf).factors) {
      const Sym s{p, e};
      const auto it = family.assignments.find(s);
      if (it != family.assignments.end()) {
        if (it->second.is_zero()) {
          has_zero = true;
          break;
        }
        prod *= it->second;
      } else if (family.free.count(s)) {
        has_free = true;
      } else {
        has_undetermined = true;
      }
    }
    ForcedValue fv;
    fv.n = n;
    if (has_zero) {
      fv.kind = ForcedKind::value;
      fv.value = Rational(0);
    } else if (has_undetermined) {
      fv.kind = ForcedKind::undetermined;
    } else if (has_free) {
      fv.kind = ForcedKind::free_sym;
    } else {
      fv.kind = ForcedKind::value;
      fv.value = prod;
    }
    out.push_back(fv);
  }
  return out;
}

}  // namespace adq
