#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace adq {

inline constexpr std::uint64_t kMaxSieveLimit = 1'000'000'000ULL;
// Segment width in integers (not bits). Chosen so a segment's bitmap slice
// stays inside L2 while marking.
inline constexpr std::uint64_t kDefaultSegmentNumbers = 1ULL << 20;

// Primes up to a fixed limit, odd-only bitmap: bit i <-> integer 2i+1,
// set = prime. 2 is special-cased. Immutable after construction.
class PrimeSet {
public:
  PrimeSet() = default;

  std::uint64_t limit() const { return limit_; }
  std::uint64_t count() const { return count_; }

  bool contains(std::uint64_t n) const {
    if (n < 2 || n > limit_) return false;
    if ((n & 1) == 0) return n == 2;
    const std::uint64_t i = (n - 1) >> 1;
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }

  // Ascending primes in [lo, hi] (clamped to the sieved range).
  std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) const {
    std::vector<std::uint64_t> out;
    hi = std::min(hi, limit_);
    if (lo <= 2 && 2 <= hi) out.push_back(2);
    std::uint64_t p = std::max<std::uint64_t>(lo | 1, 3);
    for (; p <= hi; p += 2)
      if (contains(p)) out.push_back(p);
    return out;
  }

  // Smallest prime > n within the sieved range, or 0 when exhausted.
  std::uint64_t next_prime_after(std::uint64_t n) const {
    if (n < 2) return limit_ >= 2 ? 2 : 0;
    if (n == 2) return limit_ >= 3 ? 3 : 0;
    std::uint64_t p = (n % 2 == 0) ? n + 1 : n + 2;  // smallest odd > n
    for (; p <= limit_; p += 2)
      if (contains(p)) return p;
    return 0;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

  // Number of odd-bitmap bits for a limit (bit i <-> 2i+1 <= limit).
  static std::uint64_t bit_count_for(std::uint64_t limit) {
    return (limit + 1) / 2;
  }

private:
  friend PrimeSet build_prime_set(std::uint64_t, std::uint64_t);
  friend std::optional<PrimeSet> load_prime_set(const std::filesystem::path&);

  void finish_count() {
    count_ = 1;  // the prime 2
    for (const std::uint64_t w : words_) count_ += std::popcount(w);
  }

  std::uint64_t limit_ = 0;
  std::uint64_t count_ = 0;
  std::vector<std::uint64_t> words_;
};

// Segmented sieve of Eratosthenes over the odd bitmap.
inline PrimeSet build_prime_set(std::uint64_t limit,
                                std::uint64_t segment_numbers = kDefaultSegmentNumbers) {
  if (limit < 2 || limit > kMaxSieveLimit)
    throw std::out_of_range("sieve limit out of range [2, 1e9]");
  if (segment_numbers < 64) segment_numbers = 64;

  PrimeSet ps;
  ps.limit_ = limit;
  const std::uint64_t nbits = PrimeSet::bit_count_for(limit);
  ps.words_.assign((nbits + 63) / 64, ~0ULL);

  auto clear_bit = [&](std::uint64_t i) { ps.words_[i >> 6] &= ~(1ULL << (i & 63)); };
  clear_bit(0);  // n = 1

  // Base primes up to sqrt(limit) by a plain odd sieve.
  std::uint64_t root = 1;
  while ((root + 1) * (root + 1) <= limit) ++root;
  std::vector<std::uint32_t> base;
  {
    std::vector<bool> comp(root + 1, false);
    for (std::uint64_t p = 3; p <= root; p += 2) {
      if (comp[p]) continue;
      base.push_back(static_cast<std::uint32_t>(p));
      for (std::uint64_t m = p * p; m <= root; m += 2 * p) comp[m] = true;
    }
  }

  // Mark composites segment by segment for cache locality.
  for (std::uint64_t seg_lo = 3; seg_lo <= limit; seg_lo += segment_numbers) {
    const std::uint64_t seg_hi = std::min(limit, seg_lo + segment_numbers - 1);
    for (const std::uint64_t p : base) {
      std::uint64_t start = p * p;
      if (start > seg_hi) break;
      if (start < seg_lo) {
        const std::uint64_t k = (seg_lo + p - 1) / p;
        start = k * p;
        if ((start & 1) == 0) start += p;  // odd multiples only
      }
      for (std::uint64_t m = start; m <= seg_hi; m += 2 * p)
        clear_bit((m - 1) >> 1);
    }
  }

  // Zero padding bits past nbits so popcount is exact.
  const std::uint64_t tail = nbits & 63;
  if (tail != 0) ps.words_.back() &= (1ULL << tail) - 1;

  ps.finish_count();
  return ps;
}

// ---- optional on-disk cache -------------------------------------------------
// Format: magic "ADQ1", 8-byte little-endian limit, then the odd bitmap
// (byte k holds bits 8k..8k+7, LSB first; bit i <-> integer 2i+1).

inline std::filesystem::path sieve_cache_path(const std::filesystem::path& dir,
                                              std::uint64_t limit) {
  return dir / ("sieve_" + std::to_string(limit) + ".adq");
}

inline void save_prime_set(const PrimeSet& ps, const std::filesystem::path& file) {
  const std::filesystem::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write("ADQ1", 4);
    const std::uint64_t limit = ps.limit();
    for (int b = 0; b < 8; ++b) {
      const char byte = static_cast<char>((limit >> (8 * b)) & 0xFF);
      out.write(&byte, 1);
    }
    const std::uint64_t nbytes = (PrimeSet::bit_count_for(limit) + 7) / 8;
    for (std::uint64_t k = 0; k < nbytes; ++k) {
      const std::uint64_t w = ps.words()[k >> 3];
      const char byte = static_cast<char>((w >> (8 * (k & 7))) & 0xFF);
      out.write(&byte, 1);
    }
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, file);  // atomic publish
}

inline std::optional<PrimeSet> load_prime_set(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "ADQ1") return std::nullopt;
  std::uint64_t limit = 0;
  for (int b = 0; b < 8; ++b) {
    char byte;
    in.read(&byte, 1);
    if (!in) return std::nullopt;
    limit |= std::uint64_t(static_cast<unsigned char>(byte)) << (8 * b);
  }
  if (limit < 2 || limit > kMaxSieveLimit) return std::nullopt;
  const std::uint64_t nbits = PrimeSet::bit_count_for(limit);
  const std::uint64_t nbytes = (nbits + 7) / 8;
  PrimeSet ps;
  ps.limit_ = limit;
  ps.words_.assign((nbits + 63) / 64, 0);
  for (std::uint64_t k = 0; k < nbytes; ++k) {
    char byte;
    in.read(&byte, 1);
    if (!in) return std::nullopt;
    ps.words_[k >> 3] |= std::uint64_t(static_cast<unsigned char>(byte))
                         << (8 * (k & 7));
  }
  in.peek();
  if (!in.eof()) return std::nullopt;  // trailing junk: treat as corrupt
  const std::uint64_t tail = nbits & 63;
  if (tail != 0 && (ps.words_.back() & ~((1ULL << tail) - 1)) != 0)
    return std::nullopt;
  if (ps.words_[0] & 1u) return std::nullopt;  // bit for n=1 must be clear
  ps.finish_count();
  return ps;
}

// ---- factorization ----------------------------------------------------------

// Smallest-prime-factor table for bulk factorization of small integers.
struct SpfTable {
  std::uint32_t limit = 0;
  std::vector<std::uint32_t> spf;  // spf[n] for n >= 2; spf[0] = spf[1] = 0
};

inline SpfTable build_spf_table(std::uint32_t limit) {
  SpfTable t;
  t.limit = limit;
  t.spf.assign(std::size_t(limit) + 1, 0);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (t.spf[i] != 0) continue;
    for (std::uint64_t j = i; j <= limit; j += i)
      if (t.spf[j] == 0) t.spf[j] = static_cast<std::uint32_t>(i);
  }
  return t;
}

struct Factorization {
  std::uint64_t n = 1;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> factors;  // ascending p

  bool single_prime() const {
    return factors.size() == 1 && factors[0].second == 1 && factors[0].first == n;
  }
};

inline Factorization factorize(std::uint64_t n, const SpfTable* spf = nullptr) {
  if (n == 0) throw std::domain_error("factorize(0)");
  Factorization f;
  f.n = n;
  std::uint64_t last_p = 0;
  auto take = [&](std::uint64_t p) {
    std::uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.factors.emplace_back(p, e);
    last_p = p;
  };
  while (n > 1) {
    if (spf != nullptr && n <= spf->limit) {
      take(spf->spf[n]);
      continue;
    }
    std::uint64_t p = 0;
    std::uint64_t d = (last_p < 2) ? 2 : (last_p | 1);
    if (d == 2) {
      if (n % 2 == 0) p = 2;
      d = 3;
    }
    while (p == 0 && d * d <= n) {
      if (n % d == 0) p = d;
      d += 2;
    }
    if (p == 0) p = n;  // n itself prime
    take(p);
  }
  return f;
}

inline bool is_prime(std::uint64_t n, const PrimeSet* ps = nullptr) {
  if (ps != nullptr && n <= ps->limit()) return ps->contains(n);
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0 || n % 3 == 0) return false;
  for (std::uint64_t d = 5; d * d <= n; d += 6)
    if (n % d == 0 || n % (d + 2) == 0) return false;
  return true;
}

}  // namespace adq
