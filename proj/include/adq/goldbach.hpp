#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "adq/sieve.hpp"

namespace adq {

struct GoldbachPair {
  std::uint64_t n = 0, p = 0, q = 0;  // p + q = n, p <= q, both prime
  friend bool operator==(const GoldbachPair&, const GoldbachPair&) = default;
};

// Minimal-p decomposition of an even n >= 4 into two primes.
inline std::optional<GoldbachPair> goldbach_pair(std::uint64_t n, const PrimeSet& ps) {
  if (n < 4 || (n & 1) != 0) throw std::domain_error("goldbach_pair needs even n >= 4");
  if (n > ps.limit()) throw std::out_of_range("goldbach_pair beyond sieve limit");
  if (n == 4) return GoldbachPair{4, 2, 2};
  // n - 2 is even and > 2, so p = 2 never works; walk odd p ascending.
  for (std::uint64_t p = 3; p <= n / 2; p += 2)
    if (ps.contains(p) && ps.contains(n - p)) return GoldbachPair{n, p, n - p};
  return std::nullopt;
}

struct ExceptionReport {
  std::uint64_t lo = 0, hi = 0;
  std::vector<std::uint64_t> exceptions;  // even n with no prime pair
  std::uint64_t scanned = 0;

  friend bool operator==(const ExceptionReport&, const ExceptionReport&) = default;
};

namespace detail {

inline void scan_chunk(std::uint64_t lo, std::uint64_t hi, const PrimeSet& ps,
                       const std::vector<std::uint64_t>& small_primes,
                       std::vector<std::uint64_t>& out) {
  for (std::uint64_t n = lo; n <= hi; n += 2) {
    if (n == 4) continue;  // 2 + 2
    bool found = false;
    bool exhaustive = false;  // every prime p <= n/2 was tried
    for (const std::uint64_t p : small_primes) {
      if (p > n / 2) {
        exhaustive = true;
        break;
      }
      if (ps.contains(n - p)) {
        found = true;
        break;
      }
    }
    if (!found && !exhaustive) {
      // The list ended below n/2: finish the half-range. At desk scale the
      // minimal p is tiny and this never runs; it exists so the scan stays
      // exhaustive by construction.
      for (std::uint64_t p = 3; p <= n / 2 && !found; p += 2)
        found = ps.contains(p) && ps.contains(n - p);
    }
    if (!found) out.push_back(n);
  }
}

}  // namespace detail

// Exhaustive scan for even integers in [lo, hi] with no two-prime
// decomposition. Partition-invariant: the jobs count never changes results.
inline ExceptionReport scan_goldbach(std::uint64_t lo, std::uint64_t hi,
                                     const PrimeSet& ps, unsigned jobs = 0) {
  if (lo < 4 || lo > hi || (lo & 1) != 0 || (hi & 1) != 0)
    throw std::domain_error("scan_goldbach needs even bounds with 4 <= lo <= hi");
  if (hi > ps.limit()) throw std::out_of_range("scan_goldbach beyond sieve limit");

  ExceptionReport rep;
  rep.lo = lo;
  rep.hi = hi;
  rep.scanned = (hi - lo) / 2 + 1;

  // Ascending small primes; minimal p is tiny for every n in a clean range.
  const std::vector<std::uint64_t> small_primes =
      ps.primes_in(3, std::min<std::uint64_t>(ps.limit(), 100'000));

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t total = rep.scanned;
  jobs = static_cast<unsigned>(std::min<std::uint64_t>(jobs, total));

  if (jobs <= 1) {
    detail::scan_chunk(lo, hi, ps, small_primes, rep.exceptions);
    return rep;
  }

  std::vector<std::vector<std::uint64_t>> found(jobs);
  std::vector<std::thread> workers;
  const std::uint64_t per = total / jobs, extra = total % jobs;
  std::uint64_t start_idx = 0;
  for (unsigned j = 0; j < jobs; ++j) {
    const std::uint64_t count = per + (j < extra ? 1 : 0);
    const std::uint64_t clo = lo + 2 * start_idx;
    const std::uint64_t chi = clo + 2 * (count - 1);
    start_idx += count;
    workers.emplace_back([&, clo, chi, j] {
      detail::scan_chunk(clo, chi, ps, small_primes, found[j]);
    });
  }
  for (auto& w : workers) w.join();
  for (auto& part : found)
    rep.exceptions.insert(rep.exceptions.end(), part.begin(), part.end());
  return rep;
}

// q in {3,5} with m + q == 0 (mod 4); total on odd m.
inline std::uint64_t choose_q_mod4(std::uint64_t m) {
  if ((m & 1) == 0) throw std::domain_error("choose_q_mod4 needs odd m");
  return m % 4 == 1 ? 3 : 5;
}

// r in {3,5,7,17} with q + r == 6 (mod 8); total on odd q.
inline std::uint64_t choose_r_mod8(std::uint64_t q) {
  if ((q & 1) == 0) throw std::domain_error("choose_r_mod8 needs odd q");
  switch (q % 8) {
    case 1: return 5;
    case 3: return 3;
    case 5: return 17;
    default: return 7;  // q % 8 == 7
  }
}

// p + q = 2m + 2 with p < m + 1 < q, minimal p. Not-found is a first-class
// outcome: the construction this feeds assumes such a split exists without
// proof, so callers must be able to see it fail.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>>
unbalanced_split(std::uint64_t m, const PrimeSet& ps) {
  if (m < 2) throw std::domain_error("unbalanced_split needs m >= 2");
  const std::uint64_t s = 2 * m + 2;
  if (s > ps.limit()) throw std::out_of_range("unbalanced_split beyond sieve limit");
  for (std::uint64_t p = 2; p <= m; p = (p == 2 ? 3 : p + 2))
    if (ps.contains(p) && ps.contains(s - p)) return std::make_pair(p, s - p);
  return std::nullopt;
}

}  // namespace adq
