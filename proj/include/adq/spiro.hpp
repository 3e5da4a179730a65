#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "adq/rational.hpp"
#include "adq/sieve.hpp"

namespace adq {

// Exponent-cap parameters for the set H. The default cap rule is the largest
// e with p^e <= cap_bound, which matches the source table (2^29, 3^18, ...,
// 997^3); minus_one switches to the displayed formula's extra -1, an
// internal inconsistency in the source that both resolve to the same
// smallest non-member.
struct HParams {
  std::uint64_t cap_bound = 1'000'000'000ULL;
  std::uint64_t prime_threshold = 1000;
  bool minus_one = false;
};

namespace detail {

// Cap for a prime p, primality already known to the caller.
inline std::uint32_t h_cap_unchecked(std::uint64_t p, const HParams& hp) {
  if (hp.cap_bound < 2 || hp.prime_threshold < 2)
    throw std::domain_error("HParams: bounds must be >= 2");
  if (p > hp.prime_threshold) return 1;
  std::uint32_t e = 0;
  unsigned __int128 v = 1;
  while (v * p <= hp.cap_bound) {
    v *= p;
    ++e;
  }
  if (hp.minus_one && e >= 2) --e;
  return e;
}

}  // namespace detail

// Largest admissible exponent of p in an H-member: 1 above the prime
// threshold, else capped by cap_bound. Integer arithmetic throughout.
inline std::uint32_t h_cap(std::uint64_t p, const HParams& hp = {}) {
  if (!is_prime(p)) throw std::domain_error("h_cap: p must be prime");
  return detail::h_cap_unchecked(p, hp);
}

// True iff every prime exponent of n respects its cap; 1 is a member.
inline bool in_h(std::uint64_t n, const HParams& hp = {},
                 const SpfTable* spf = nullptr) {
  if (n == 0) throw std::domain_error("in_h: n must be positive");
  for (const auto& [p, e] : factorize(n, spf).factors)
    if (e > detail::h_cap_unchecked(p, hp)) return false;
  return true;
}

// Minimal n <= limit outside H, or none.
inline std::optional<std::uint64_t> smallest_non_member(std::uint64_t limit,
                                                        const HParams& hp = {}) {
  if (limit == 0)
    throw std::domain_error("smallest_non_member: limit must be >= 1");
  std::optional<SpfTable> spf;
  if (limit >= 2 && limit <= 4'000'000ULL) spf = build_spf_table(limit);
  const SpfTable* sp = spf ? &*spf : nullptr;
  for (std::uint64_t n = 2; n <= limit; ++n)
    if (!in_h(n, hp, sp)) return n;
  return std::nullopt;
}

// Membership in H_n: even multiples m*n (even n) or 2*m*n (odd n) with m
// coprime to n and m (resp. 2m) in H.
inline bool hn_member(std::uint64_t k, std::uint64_t n, const HParams& hp = {},
                      const SpfTable* spf = nullptr) {
  if (n == 0) throw std::domain_error("hn_member: n must be positive");
  if (k == 0) return false;
  if (n % 2 == 0) {
    if (k % n) return false;
    const std::uint64_t m = k / n;
    return std::gcd(m, n) == 1 && in_h(m, hp, spf);
  }
  if (k % (2 * n)) return false;
  const std::uint64_t m = k / (2 * n);
  return std::gcd(m, n) == 1 && in_h(2 * m, hp, spf);
}

// Ascending members of H_n up to limit. Every member is even.
inline std::vector<std::uint64_t> hn_stream(std::uint64_t n,
                                            std::uint64_t limit,
                                            const HParams& hp = {},
                                            const SpfTable* spf = nullptr) {
  if (n == 0) throw std::domain_error("hn_stream: n must be positive");
  std::vector<std::uint64_t> out;
  if (n % 2 == 0) {
    for (std::uint64_t m = 1; m * n <= limit; ++m)
      if (std::gcd(m, n) == 1 && in_h(m, hp, spf)) out.push_back(m * n);
  } else {
    for (std::uint64_t m = 1; 2 * m * n <= limit; ++m)
      if (std::gcd(m, n) == 1 && in_h(2 * m, hp, spf))
        out.push_back(2 * m * n);
  }
  return out;
}

struct HnDensity {
  std::uint64_t n = 0;
  std::uint64_t limit = 0;
  std::uint64_t count = 0;
  Rational density;  // count/limit, reduced
};

inline HnDensity hn_density(std::uint64_t n, std::uint64_t limit,
                            const HParams& hp = {},
                            const SpfTable* spf = nullptr) {
  if (n == 0) throw std::domain_error("hn_density: n must be positive");
  if (limit < n) throw std::domain_error("hn_density: limit must be >= n");
  HnDensity out;
  out.n = n;
  out.limit = limit;
  if (n % 2 == 0) {
    for (std::uint64_t m = 1; m * n <= limit; ++m)
      if (std::gcd(m, n) == 1 && in_h(m, hp, spf)) ++out.count;
  } else {
    for (std::uint64_t m = 1; 2 * m * n <= limit; ++m)
      if (std::gcd(m, n) == 1 && in_h(2 * m, hp, spf)) ++out.count;
  }
  out.density = Rational(static_cast<std::int64_t>(out.count),
                         static_cast<std::int64_t>(limit));
  return out;
}

// Smallest odd prime q <= m-1 with m+q in H, or none.
inline std::optional<std::uint64_t> find_q_for_m(std::uint64_t m,
                                                 const PrimeSet* ps = nullptr,
                                                 const HParams& hp = {},
                                                 const SpfTable* spf = nullptr) {
  if (m < 4) throw std::domain_error("find_q_for_m: m must be >= 4");
  for (std::uint64_t q = 3; q <= m - 1; q += 2)
    if (is_prime(q, ps) && in_h(m + q, hp, spf)) return q;
  return std::nullopt;
}

}  // namespace adq
