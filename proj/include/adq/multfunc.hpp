#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "adq/form.hpp"
#include "adq/rational.hpp"
#include "adq/sieve.hpp"

namespace adq {

// The three solution families, each given by a rule on prime powers.
enum class FamilyKind { identity, one, odd_squareful_indicator };

inline std::string to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::identity: return "identity";
    case FamilyKind::one: return "one";
    default: return "odd-squareful";
  }
}

inline std::optional<FamilyKind> parse_family_kind(const std::string& s) {
  if (s == "identity") return FamilyKind::identity;
  if (s == "one") return FamilyKind::one;
  if (s == "odd-squareful") return FamilyKind::odd_squareful_indicator;
  return std::nullopt;
}

// A multiplicative function, represented by its values on prime powers.
// identity: (p,e) -> p^e.  one: -> 1.  odd_squareful_indicator: -> 0 when
// p = 2 or e = 1, otherwise the assigned value (default 1).
struct MultiplicativeFn {
  std::string name;
  FamilyKind kind = FamilyKind::identity;
  // Overrides for the indicator family's free prime powers (odd p, e >= 2).
  std::map<std::pair<std::uint64_t, std::uint32_t>, Rational> assignments;

  Rational prime_power(std::uint64_t p, std::uint32_t e) const {
    switch (kind) {
      case FamilyKind::identity:
        return Rational(static_cast<std::int64_t>(p)).pow(e);
      case FamilyKind::one:
        return Rational(1);
      default: {
        if (p == 2 || e == 1) return Rational(0);
        const auto it = assignments.find({p, e});
        return it == assignments.end() ? Rational(1) : it->second;
      }
    }
  }
};

// Builds a family, validating assignment keys. Only the indicator family has
// free prime powers, and only at odd primes with exponent >= 2.
inline MultiplicativeFn family(
    FamilyKind kind,
    std::map<std::pair<std::uint64_t, std::uint32_t>, Rational> assignments =
        {}) {
  if (kind != FamilyKind::odd_squareful_indicator && !assignments.empty())
    throw std::domain_error("family: only odd-squareful takes assignments");
  for (const auto& [key, val] : assignments) {
    const auto [p, e] = key;
    if (p == 2 || e < 2)
      throw std::domain_error(
          "family: f(n) vanishes when n is even or nonsquareful");
    if (!is_prime(p))
      throw std::domain_error("family: assignment base must be an odd prime");
    (void)val;
  }
  MultiplicativeFn f;
  f.name = to_string(kind);
  f.kind = kind;
  f.assignments = std::move(assignments);
  return f;
}

// f(n) as the product of the prime-power rule over the factorization of n.
inline Rational eval(const MultiplicativeFn& f, std::uint64_t n,
                     const SpfTable* spf = nullptr) {
  if (n == 0) throw std::domain_error("eval: n must be positive");
  Rational acc(1);
  for (const auto& [p, e] : factorize(n, spf).factors)
    acc *= f.prime_power(p, e);
  return acc;
}

// True iff every prime in the factorization of n has exponent >= 2.
inline bool is_squareful(std::uint64_t n, const SpfTable* spf = nullptr) {
  if (n < 2) throw std::domain_error("is_squareful: n must be >= 2");
  for (const auto& [p, e] : factorize(n, spf).factors)
    if (e < 2) return false;
  return true;
}

// One failed instance of a functional equation: the pair (x, y) and the two
// sides. For the shifted form (x, y) is a prime pair; for the sums-of-
// predecessors form it is a pair of prime predecessors.
struct ViolationRecord {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  Rational lhs;
  Rational rhs;

  friend bool operator==(const ViolationRecord&,
                         const ViolationRecord&) = default;
};

// Checks every pair instance of the chosen equation form with x <= y <= limit
// and returns the violations in ascending (x, y) order.
//   shifted:   x, y prime, f(x+y-2) = f(x) + f(y) - f(2)
//   primesm1:  x, y in {p-1 : p prime}, f(x+y) = f(x) + f(y)
inline std::vector<ViolationRecord> check_equation(const MultiplicativeFn& f,
                                                   Form form,
                                                   std::uint64_t limit,
                                                   const PrimeSet& ps) {
  if (limit < 2) throw std::domain_error("check_equation: limit must be >= 2");
  if (ps.limit() < limit)
    throw std::out_of_range("check_equation: prime set smaller than limit");

  // Arguments never exceed 2*limit; evaluate once per integer.
  const std::uint64_t top = 2 * limit;
  const SpfTable spf = build_spf_table(top);
  std::vector<Rational> val(top + 1);
  val[1] = Rational(1);
  for (std::uint64_t n = 2; n <= top; ++n) val[n] = eval(f, n, &spf);

  std::vector<std::uint64_t> side;
  if (form == Form::shifted) {
    side = ps.primes_in(2, limit);
  } else {
    for (const std::uint64_t p : ps.primes_in(2, limit)) side.push_back(p - 1);
    if (is_prime(limit + 1, &ps)) side.push_back(limit);
  }

  std::vector<ViolationRecord> out;
  for (std::size_t i = 0; i < side.size(); ++i) {
    for (std::size_t j = i; j < side.size(); ++j) {
      const std::uint64_t x = side[i], y = side[j];
      Rational lhs, rhs;
      if (form == Form::shifted) {
        lhs = val[x + y - 2];
        rhs = val[x] + val[y] - val[2];
      } else {
        lhs = val[x + y];
        rhs = val[x] + val[y];
      }
      if (lhs != rhs) out.push_back({x, y, lhs, rhs});
    }
  }
  return out;
}

// Outcome of testing the chain: f additive on prime predecessors up to limit
// implies f(2) = 2, f(p) = f(p-1) + 1 at every prime p <= limit, and no
// shifted-form violations up to limit. A failed premise short-circuits with
// its witness pair.
struct ShiftImplicationReport {
  std::uint64_t limit = 0;
  bool premise_holds = false;
  std::optional<ViolationRecord> premise_witness;
  bool f2_equals_2 = false;
  bool prime_rule_holds = false;
  std::optional<std::uint64_t> first_prime_rule_failure;
  std::vector<ViolationRecord> shifted_violations;
};

inline ShiftImplicationReport check_shift_implication(
    const MultiplicativeFn& f, std::uint64_t limit, const PrimeSet& ps) {
  if (limit < 3)
    throw std::domain_error("check_shift_implication: limit must be >= 3");
  ShiftImplicationReport rep;
  rep.limit = limit;

  const auto premise = check_equation(f, Form::primesm1, limit, ps);
  if (!premise.empty()) {
    rep.premise_witness = premise.front();
    return rep;
  }
  rep.premise_holds = true;

  const SpfTable spf = build_spf_table(limit);
  rep.f2_equals_2 = eval(f, 2, &spf) == Rational(2);
  rep.prime_rule_holds = true;
  for (const std::uint64_t p : ps.primes_in(2, limit)) {
    if (eval(f, p, &spf) != eval(f, p - 1, &spf) + Rational(1)) {
      rep.prime_rule_holds = false;
      rep.first_prime_rule_failure = p;
      break;
    }
  }
  rep.shifted_violations = check_equation(f, Form::shifted, limit, ps);
  return rep;
}

}  // namespace adq
