#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <stdexcept>

#include "adq/goldbach.hpp"
#include "adq/sieve.hpp"

using namespace adq;

namespace {
const PrimeSet& million_primes() {
  static const PrimeSet ps = build_prime_set(1'000'000);
  return ps;
}
}  // namespace

TEST_CASE("pair picks the minimal prime p", "[goldbach]") {
  const PrimeSet& ps = million_primes();
  const auto p48 = goldbach_pair(48, ps);
  REQUIRE(p48.has_value());
  CHECK(p48->p == 5);
  CHECK(p48->q == 43);

  const auto p4 = goldbach_pair(4, ps);
  REQUIRE(p4.has_value());
  CHECK(p4->p == 2);
  CHECK(p4->q == 2);

  const auto p6 = goldbach_pair(6, ps);
  REQUIRE(p6.has_value());
  CHECK(p6->p == 3);
  CHECK(p6->q == 3);
}

TEST_CASE("pair satisfies sum, primality, and minimality", "[goldbach]") {
  const PrimeSet& ps = million_primes();
  for (std::uint64_t n = 4; n <= 10'000; n += 2) {
    const auto pair = goldbach_pair(n, ps);
    REQUIRE(pair.has_value());
    REQUIRE(pair->p + pair->q == n);
    REQUIRE(pair->p <= pair->q);
    REQUIRE(ps.contains(pair->p));
    REQUIRE(ps.contains(pair->q));
    for (std::uint64_t p = 2; p < pair->p; ++p)  // nothing smaller works
      if (ps.contains(p)) REQUIRE_FALSE(ps.contains(n - p));
  }
}

TEST_CASE("pair rejects bad inputs", "[goldbach]") {
  const PrimeSet ps = build_prime_set(100);
  CHECK_THROWS_AS(goldbach_pair(7, ps), std::domain_error);
  CHECK_THROWS_AS(goldbach_pair(2, ps), std::domain_error);
  CHECK_THROWS_AS(goldbach_pair(102, ps), std::out_of_range);
}

TEST_CASE("scan of the first million is exception-free", "[goldbach]") {
  const ExceptionReport rep = scan_goldbach(4, 1'000'000, million_primes());
  CHECK(rep.lo == 4);
  CHECK(rep.hi == 1'000'000);
  CHECK(rep.exceptions.empty());
  CHECK(rep.scanned == 499'999);
}

TEST_CASE("scan counts a single-point range", "[goldbach]") {
  const ExceptionReport rep = scan_goldbach(4, 4, million_primes());
  CHECK(rep.scanned == 1);
  CHECK(rep.exceptions.empty());
}

TEST_CASE("scan result is independent of the partition count", "[goldbach]") {
  const PrimeSet& ps = million_primes();
  const ExceptionReport one = scan_goldbach(4, 1'000'000, ps, 1);
  const ExceptionReport three = scan_goldbach(4, 1'000'000, ps, 3);
  const ExceptionReport seven = scan_goldbach(4, 1'000'000, ps, 7);
  CHECK(one == three);
  CHECK(one == seven);
}

TEST_CASE("scan rejects odd or misordered bounds", "[goldbach]") {
  const PrimeSet& ps = million_primes();
  CHECK_THROWS_AS(scan_goldbach(4, 9, ps), std::domain_error);
  CHECK_THROWS_AS(scan_goldbach(3, 10, ps), std::domain_error);
  CHECK_THROWS_AS(scan_goldbach(10, 4, ps), std::domain_error);
  CHECK_THROWS_AS(scan_goldbach(2, 10, ps), std::domain_error);
}

TEST_CASE("mod-4 residue table picks 3 or 5", "[goldbach]") {
  CHECK(choose_q_mod4(29) == 3);   // 29 = 1 (mod 4)
  CHECK(choose_q_mod4(19) == 5);   // 19 = 3 (mod 4)
  CHECK(choose_q_mod4(101) == 3);
  CHECK(choose_q_mod4(103) == 5);
  CHECK_THROWS_AS(choose_q_mod4(10), std::domain_error);
  // The chosen q makes (m + q - 2) / 2 odd: m + q = 0 (mod 4).
  for (std::uint64_t m = 5; m < 1'000'000; m += 2)
    REQUIRE((m + choose_q_mod4(m)) % 4 == 0);
}

TEST_CASE("mod-8 residue table covers every odd class", "[goldbach]") {
  CHECK(choose_r_mod8(17) == 5);   // 17 = 1 (mod 8)
  CHECK(choose_r_mod8(3) == 3);    // 3 = 3 (mod 8)
  CHECK(choose_r_mod8(13) == 17);  // 13 = 5 (mod 8)
  CHECK(choose_r_mod8(7) == 7);    // 7 = 7 (mod 8)
  CHECK_THROWS_AS(choose_r_mod8(8), std::domain_error);
  // The chosen r makes (q + r - 2) / 4 an odd integer: q + r = 6 (mod 8).
  for (std::uint64_t q = 3; q < 1'000'000; q += 2)
    REQUIRE((q + choose_r_mod8(q)) % 8 == 6);
}

TEST_CASE("unbalanced split straddles the midpoint", "[goldbach]") {
  const PrimeSet& ps = million_primes();
  const auto s27 = unbalanced_split(27, ps);
  REQUIRE(s27.has_value());
  CHECK(s27->first == 3);
  CHECK(s27->second == 53);

  const auto s9 = unbalanced_split(9, ps);
  REQUIRE(s9.has_value());
  CHECK(s9->first == 3);
  CHECK(s9->second == 17);

  // 2m + 2 = 6 only splits as 3 + 3, which is not unbalanced.
  CHECK_FALSE(unbalanced_split(2, ps).has_value());

  CHECK_THROWS_AS(unbalanced_split(1, ps), std::domain_error);
  const PrimeSet tiny = build_prime_set(10);
  CHECK_THROWS_AS(unbalanced_split(10, tiny), std::out_of_range);
}

TEST_CASE("unbalanced split is minimal in p", "[goldbach]") {
  const PrimeSet& ps = million_primes();
  for (std::uint64_t m = 4; m <= 2'000; ++m) {
    const auto s = unbalanced_split(m, ps);
    REQUIRE(s.has_value());
    REQUIRE(s->first + s->second == 2 * m + 2);
    REQUIRE(s->first < m + 1);
    REQUIRE(s->second > m + 1);
    REQUIRE(ps.contains(s->first));
    REQUIRE(ps.contains(s->second));
    for (std::uint64_t p = 2; p < s->first; ++p)
      if (ps.contains(p)) REQUIRE_FALSE(ps.contains(2 * m + 2 - p));
  }
}
