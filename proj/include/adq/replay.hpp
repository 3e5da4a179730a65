#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adq/goldbach.hpp"
#include "adq/rational.hpp"
#include "adq/sieve.hpp"
#include "adq/spiro.hpp"

namespace adq {

// A replay was asked to run without the evidence its argument depends on.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ReplayCase {
  base_table,
  even_goldbach,
  odd_prime_q35,
  coprime_split,
  prime_power_split,
  h_composite,
  h_prime_q,
};

inline std::string to_string(ReplayCase c) {
  switch (c) {
    case ReplayCase::base_table: return "base-table";
    case ReplayCase::even_goldbach: return "even-goldbach";
    case ReplayCase::odd_prime_q35: return "odd-prime-q35";
    case ReplayCase::coprime_split: return "coprime-split";
    case ReplayCase::prime_power_split: return "prime-power-split";
    case ReplayCase::h_composite: return "h-composite";
    default: return "h-prime-q";
  }
}

struct ReplayOutcome {
  std::uint64_t n = 0;
  bool established = false;
  ReplayCase rcase = ReplayCase::base_table;
  std::vector<std::uint64_t> witnesses;
  Rational value;
};

struct ReplayFailure {
  std::uint64_t n = 0;
  std::string reason;
};

struct ReplayReport {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::vector<ReplayOutcome> outcomes;
  std::vector<ReplayFailure> failures;
  std::map<std::string, std::uint64_t> case_counts;
  std::vector<std::uint64_t> free_values;
  std::map<std::string, std::string> params;
};

// Which constant family an induction is expected to land on.
enum class ReplayTarget { identity, one };

namespace detail {

// The induction's case machine: establishes f(n) for 19 <= n <= N-2 on top
// of the n <= 18 base table, in the source case order: even argument via a
// Goldbach pair; odd prime via the mod-4 residue choice; coprime composite
// via multiplicativity; odd prime power via the unbalanced split plus the
// mod-8 residue choice.
inline ReplayReport case_machine(std::uint64_t N, const PrimeSet& ps,
                                 const SpfTable* spf, ReplayTarget target) {
  if (N < 21) throw std::domain_error("case machine needs N >= 21");
  // unbalanced_split(n) reaches pairs summing to 2n + 2 <= 2N - 2.
  if (ps.limit() < 2 * N - 2)
    throw std::out_of_range("case machine: prime set must cover 2N-2");

  ReplayReport rep;
  rep.lo = 1;
  rep.hi = N - 2;
  rep.params["N"] = std::to_string(N);
  rep.params["target"] =
      target == ReplayTarget::identity ? "identity" : "one";

  const auto expect = [&](std::uint64_t n) {
    return target == ReplayTarget::identity
               ? Rational(static_cast<std::int64_t>(n))
               : Rational(1);
  };

  std::vector<Rational> est(N + 1);
  std::vector<bool> known(N + 1, false);
  const auto settle = [&](std::uint64_t n, const Rational& v, ReplayCase c,
                          std::vector<std::uint64_t> wit) {
    est[n] = v;
    known[n] = true;
    ++rep.case_counts[to_string(c)];
    rep.outcomes.push_back({n, true, c, std::move(wit), v});
  };

  for (std::uint64_t n = 1; n <= 18 && n <= N - 2; ++n)
    settle(n, expect(n), ReplayCase::base_table, {});

  for (std::uint64_t n = 19; n <= N - 2; ++n) {
    if (n % 2 == 0) {
      // f(n) = f(p) + f(q) - f(2) over the pair p + q = n + 2.
      const auto pair = goldbach_pair(n + 2, ps);
      if (!pair) {
        rep.failures.push_back({n, "no prime pair for " + std::to_string(n + 2)});
        continue;
      }
      const std::uint64_t p = pair->p, q = pair->q;
      if (!known[p] || !known[q]) {
        rep.failures.push_back({n, "pair member not yet established"});
        continue;
      }
      const Rational cand = est[p] + est[q] - est[2];
      if (cand == expect(n))
        settle(n, cand, ReplayCase::even_goldbach, {p, q});
      else
        rep.failures.push_back({n, "value mismatch on even case"});
    } else if (ps.contains(n)) {
      // f(n + q - 2) = f(2k) = f(2) f(k) with k odd and below n.
      const std::uint64_t q = choose_q_mod4(n);
      const std::uint64_t k = (n + q - 2) / 2;
      if (k % 2 == 0 || k >= n || !known[k] || !known[q]) {
        rep.failures.push_back({n, "mod-4 residue witness unusable"});
        continue;
      }
      const Rational cand = est[2] * est[k] - est[q] + est[2];
      if (cand == expect(n))
        settle(n, cand, ReplayCase::odd_prime_q35, {q, k});
      else
        rep.failures.push_back({n, "value mismatch on odd-prime case"});
    } else {
      const Factorization fac = factorize(n, spf);
      if (fac.factors.size() >= 2) {
        // n = a * b with coprime proper parts.
        std::uint64_t a = 1;
        const auto& [p0, e0] = fac.factors.front();
        for (std::uint32_t i = 0; i < e0; ++i) a *= p0;
        const std::uint64_t b = n / a;
        if (!known[a] || !known[b]) {
          rep.failures.push_back({n, "coprime part not yet established"});
          continue;
        }
        const Rational cand = est[a] * est[b];
        if (cand == expect(n))
          settle(n, cand, ReplayCase::coprime_split, {a, b});
        else
          rep.failures.push_back({n, "value mismatch on coprime case"});
      } else {
        // Odd prime power: P + Q = 2n + 2 unbalanced, then the mod-8
        // residue pins f(Q) through f(4k) = f(4) f(k).
        const auto split = unbalanced_split(n, ps);
        if (!split) {
          rep.failures.push_back({n, "no unbalanced prime split"});
          continue;
        }
        const std::uint64_t P = split->first, Q = split->second;
        const std::uint64_t r = choose_r_mod8(Q);
        const std::uint64_t k = (Q + r - 2) / 4;
        if ((Q + r - 2) % 4 != 0 || k % 2 == 0 || k >= n - 1 || !known[k] ||
            !known[r] || !known[P] || !known[4]) {
          rep.failures.push_back({n, "mod-8 residue witness unusable"});
          continue;
        }
        const Rational fQ = est[4] * est[k] - est[r] + est[2];
        const Rational cand = (est[P] + fQ - est[2]) / est[2];
        if (cand == expect(n))
          settle(n, cand, ReplayCase::prime_power_split, {P, Q, r, k});
        else
          rep.failures.push_back({n, "value mismatch on prime-power case"});
      }
    }
  }
  return rep;
}

}  // namespace detail

// Replays the induction that extends f(n) = n from the n <= 18 base to all
// n <= N-2, refusing to run without evidence that every even number in
// [4, 2N] is a sum of two primes.
inline ReplayReport lemma4_replay(std::uint64_t N,
                                  const ExceptionReport& evidence,
                                  const PrimeSet& ps,
                                  const SpfTable* spf = nullptr) {
  if (N < 21) throw std::domain_error("lemma4_replay: N must be >= 21");
  if (evidence.lo > 4 || evidence.hi < 2 * N || !evidence.exceptions.empty())
    throw PreconditionError(
        "lemma4_replay: needs an exception-free scan covering [4, 2N]");
  ReplayReport rep = detail::case_machine(N, ps, spf, ReplayTarget::identity);
  rep.params["evidence"] = "[" + std::to_string(evidence.lo) + "," +
                           std::to_string(evidence.hi) + "] clean";
  return rep;
}

// Replays the H-restricted induction: f(n) = n for H-members up to limit,
// assuming coverage up to base_bound. The desk-scale H uses base_bound as
// its cap bound so every prime power dividing an H-member lies in the base.
inline ReplayReport h_induction_replay(std::uint64_t base_bound,
                                       std::uint64_t limit, const PrimeSet& ps,
                                       const SpfTable* spf = nullptr) {
  if (base_bound < 2)
    throw std::domain_error("h_induction_replay: base_bound must be >= 2");
  if (base_bound >= limit)
    throw std::domain_error("h_induction_replay: base_bound must be < limit");
  if (ps.limit() < limit)
    throw std::out_of_range("h_induction_replay: prime set must cover limit");

  const HParams hp{base_bound, 1000, false};
  ReplayReport rep;
  rep.lo = base_bound + 1;
  rep.hi = limit;
  rep.params["base_bound"] = std::to_string(base_bound);
  rep.params["cap_bound"] = std::to_string(hp.cap_bound);
  rep.params["prime_threshold"] = std::to_string(hp.prime_threshold);
  rep.params["base_policy"] = "values up to base_bound seeded as established";

  std::map<std::uint64_t, Rational> est;
  const auto lookup = [&](std::uint64_t m) -> std::optional<Rational> {
    if (m <= base_bound) return Rational(static_cast<std::int64_t>(m));
    const auto it = est.find(m);
    if (it == est.end()) return std::nullopt;
    return it->second;
  };

  std::uint64_t max_s = 0;
  for (std::uint64_t n = base_bound + 1; n <= limit; ++n) {
    if (!in_h(n, hp, spf)) continue;
    const Factorization fac = factorize(n, spf);
    if (fac.factors.size() >= 2) {
      // Coprime split into H-parts (divisor closure keeps both in H).
      std::uint64_t a = 1;
      const auto& [p0, e0] = fac.factors.front();
      for (std::uint32_t i = 0; i < e0; ++i) a *= p0;
      const std::uint64_t b = n / a;
      const auto va = lookup(a), vb = lookup(b);
      if (!va || !vb) {
        rep.failures.push_back({n, "coprime H-part not yet established"});
        continue;
      }
      const Rational cand = *va * *vb;
      if (cand == Rational(static_cast<std::int64_t>(n))) {
        est[n] = cand;
        ++rep.case_counts[to_string(ReplayCase::h_composite)];
        rep.outcomes.push_back(
            {n, true, ReplayCase::h_composite, {a, b}, cand});
      } else {
        rep.failures.push_back({n, "value mismatch on H-composite case"});
      }
      continue;
    }
    // Single prime power in H above the base: the cap choice makes this a
    // prime. Witness q with (n-2)+q in H, then n+q-2 = 2^s * k.
    const auto q = find_q_for_m(n - 2, &ps, hp, spf);
    if (!q) {
      rep.failures.push_back({n, "no odd prime witness q"});
      continue;
    }
    std::uint64_t rest = n + *q - 2;
    std::uint64_t s = 0;
    while (rest % 2 == 0) {
      rest /= 2;
      ++s;
    }
    const std::uint64_t two_s = 1ULL << s;
    const std::uint64_t k = rest;
    const auto v2s = lookup(two_s), vk = lookup(k), vq = lookup(*q);
    if (!v2s || !vk || !vq) {
      rep.failures.push_back({n, "witness decomposition not yet established"});
      continue;
    }
    max_s = std::max(max_s, s);
    const Rational cand = *v2s * *vk - *vq + Rational(2);
    if (cand == Rational(static_cast<std::int64_t>(n))) {
      est[n] = cand;
      ++rep.case_counts[to_string(ReplayCase::h_prime_q)];
      rep.outcomes.push_back(
          {n, true, ReplayCase::h_prime_q, {*q, two_s, k}, cand});
    } else {
      rep.failures.push_back({n, "value mismatch on H-prime case"});
    }
  }
  rep.params["max_s"] = std::to_string(max_s);
  return rep;
}

// Smallest k in H_n, k <= search_limit, with k + 2 a sum of two primes.
inline std::optional<std::uint64_t> hn_witness(std::uint64_t n,
                                               std::uint64_t search_limit,
                                               const PrimeSet& ps,
                                               const HParams& hp = {},
                                               const SpfTable* spf = nullptr) {
  if (n < 2) throw std::domain_error("hn_witness: n must be >= 2");
  if (ps.limit() < search_limit + 2)
    throw std::out_of_range("hn_witness: prime set must cover search_limit+2");
  for (const std::uint64_t k : hn_stream(n, search_limit, hp, spf))
    if (goldbach_pair(k + 2, ps).has_value()) return k;
  return std::nullopt;
}

// Replays the two constant branches. Branch 1 is the identity induction's
// case machine with target value 1. Branch 0 chains zeros: the base table
// (zeros except f(9)), every odd prime via the mod-4 residue and
// zero-annihilation of f(2) f(k), and every power of two via a Goldbach
// pair of odd primes; odd prime powers stay free because an odd argument
// p + q - 2 forces q = 2 and a prime argument.
inline ReplayReport branch_replay(int branch_value, std::uint64_t limit,
                                  const PrimeSet& ps,
                                  const SpfTable* spf = nullptr) {
  if (branch_value != 0 && branch_value != 1)
    throw std::domain_error("branch_replay: value must be 0 or 1");
  if (limit < 19) throw std::domain_error("branch_replay: limit must be >= 19");

  if (branch_value == 1) {
    ReplayReport rep =
        detail::case_machine(limit + 2, ps, spf, ReplayTarget::one);
    rep.params["branch"] = "1";
    return rep;
  }

  if (ps.limit() < limit)
    throw std::out_of_range("branch_replay: prime set must cover limit");
  ReplayReport rep;
  rep.lo = 2;
  rep.hi = limit;
  rep.params["branch"] = "0";

  // Base table: zeros for 2..18 except the free f(9).
  for (std::uint64_t n = 2; n <= 18 && n <= limit; ++n) {
    if (n == 9) continue;
    ++rep.case_counts[to_string(ReplayCase::base_table)];
    rep.outcomes.push_back({n, true, ReplayCase::base_table, {}, Rational(0)});
  }

  // Odd primes: f(p + q - 2) = f(2k) = f(2) f(k) = 0 by zero-annihilation,
  // so f(p) = 0 - f(q) + f(2) = 0 with q in {3, 5} already zero.
  for (const std::uint64_t p : ps.primes_in(19, limit)) {
    const std::uint64_t q = choose_q_mod4(p);
    const std::uint64_t k = (p + q - 2) / 2;
    if (k % 2 == 0 || k >= p) {
      rep.failures.push_back({p, "mod-4 residue witness unusable"});
      continue;
    }
    ++rep.case_counts[to_string(ReplayCase::odd_prime_q35)];
    rep.outcomes.push_back(
        {p, true, ReplayCase::odd_prime_q35, {q, k}, Rational(0)});
  }

  // Powers of two beyond the base: 2^s + 2 = p + q with both odd primes,
  // both already zeroed.
  for (std::uint64_t pw = 32; pw <= limit; pw *= 2) {
    if (pw + 2 > ps.limit()) {
      rep.failures.push_back({pw, "prime set too small for the pair"});
      continue;
    }
    const auto pair = goldbach_pair(pw + 2, ps);
    if (!pair || pair->p == 2) {
      rep.failures.push_back({pw, "no odd prime pair"});
      continue;
    }
    ++rep.case_counts[to_string(ReplayCase::even_goldbach)];
    rep.outcomes.push_back(
        {pw, true, ReplayCase::even_goldbach, {pair->p, pair->q}, Rational(0)});
  }

  // Free odd prime powers: an odd argument p + q - 2 needs q = 2 and a
  // prime argument, so no equation instance touches these composites.
  for (std::uint64_t p = 3; p * p <= limit; p += 2) {
    if (!is_prime(p, &ps)) continue;
    for (std::uint64_t v = p * p; v <= limit; v *= p)
      rep.free_values.push_back(v);
  }
  std::sort(rep.free_values.begin(), rep.free_values.end());
  return rep;
}

}  // namespace adq
