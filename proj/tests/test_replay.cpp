#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "adq/goldbach.hpp"
#include "adq/rational.hpp"
#include "adq/replay.hpp"
#include "adq/sieve.hpp"
#include "adq/spiro.hpp"

using namespace adq;

namespace {

const ReplayOutcome& outcome_for(const ReplayReport& rep, std::uint64_t n) {
  for (const auto& o : rep.outcomes)
    if (o.n == n) return o;
  FAIL("no outcome for n=" << n);
  return rep.outcomes.front();  // unreachable
}

}  // namespace

TEST_CASE("identity induction replays cleanly at desk scale", "[replay]") {
  const PrimeSet ps = build_prime_set(2000);
  const SpfTable spf = build_spf_table(1000);
  const ExceptionReport evidence = scan_goldbach(4, 2000, ps);
  REQUIRE(evidence.exceptions.empty());

  const ReplayReport rep = lemma4_replay(1000, evidence, ps, &spf);
  CHECK(rep.lo == 1);
  CHECK(rep.hi == 998);
  CHECK(rep.failures.empty());
  REQUIRE(rep.outcomes.size() == 998);
  for (const auto& o : rep.outcomes) {
    REQUIRE(o.established);
    REQUIRE(o.value == Rational(static_cast<std::int64_t>(o.n)));
  }

  // All four cases fire, and their counts account for every outcome.
  std::uint64_t total = 0;
  for (const char* name : {"base-table", "even-goldbach", "odd-prime-q35",
                           "coprime-split", "prime-power-split"}) {
    REQUIRE(rep.case_counts.count(name) == 1);
    REQUIRE(rep.case_counts.at(name) > 0);
    total += rep.case_counts.at(name);
  }
  CHECK(total == rep.outcomes.size());
  CHECK(rep.case_counts.at("base-table") == 18);

  // Case routing: prime powers take the unbalanced split, not the coprime one.
  CHECK(outcome_for(rep, 27).rcase == ReplayCase::prime_power_split);
  CHECK(outcome_for(rep, 25).rcase == ReplayCase::prime_power_split);
  CHECK(outcome_for(rep, 21).rcase == ReplayCase::coprime_split);
  CHECK(outcome_for(rep, 19).rcase == ReplayCase::odd_prime_q35);
  CHECK(outcome_for(rep, 20).rcase == ReplayCase::even_goldbach);
  CHECK(outcome_for(rep, 18).rcase == ReplayCase::base_table);

  // Witness shapes: 27 splits as 3 + 53 with the mod-8 residue of 53.
  const auto& o27 = outcome_for(rep, 27);
  REQUIRE(o27.witnesses.size() == 4);
  CHECK(o27.witnesses[0] == 3);
  CHECK(o27.witnesses[1] == 53);
  CHECK(o27.witnesses[2] == choose_r_mod8(53));
}

TEST_CASE("identity induction refuses weak evidence", "[replay]") {
  const PrimeSet ps = build_prime_set(2000);
  const ExceptionReport clean = scan_goldbach(4, 2000, ps);

  ExceptionReport short_scan = clean;
  short_scan.hi = 1998;  // needs [4, 2N] = [4, 2000]
  CHECK_THROWS_AS(lemma4_replay(1000, short_scan, ps), PreconditionError);

  ExceptionReport late_start = clean;
  late_start.lo = 6;
  CHECK_THROWS_AS(lemma4_replay(1000, late_start, ps), PreconditionError);

  ExceptionReport dirty = clean;
  dirty.exceptions.push_back(778);
  CHECK_THROWS_AS(lemma4_replay(1000, dirty, ps), PreconditionError);

  CHECK_THROWS_AS(lemma4_replay(20, clean, ps), std::domain_error);
  // Prime set must reach 2N - 2 for the unbalanced splits.
  const PrimeSet tiny = build_prime_set(100);
  CHECK_THROWS_AS(lemma4_replay(1000, clean, tiny), std::out_of_range);
}

TEST_CASE("constant branch one replays the same machine", "[replay]") {
  const PrimeSet ps = build_prime_set(2004);
  const SpfTable spf = build_spf_table(1002);
  const ReplayReport rep = branch_replay(1, 1000, ps, &spf);
  CHECK(rep.lo == 1);
  CHECK(rep.hi == 1000);
  CHECK(rep.failures.empty());
  REQUIRE(rep.outcomes.size() == 1000);
  for (const auto& o : rep.outcomes) REQUIRE(o.value == Rational(1));
  CHECK(rep.params.at("branch") == "1");
  CHECK(rep.case_counts.at("prime-power-split") > 0);
}

TEST_CASE("constant branch zero chains zeros and leaves prime powers free",
          "[replay]") {
  const PrimeSet ps = build_prime_set(10'002);
  const SpfTable spf = build_spf_table(10'002);
  const ReplayReport rep = branch_replay(0, 10'000, ps, &spf);
  CHECK(rep.failures.empty());
  CHECK(rep.outcomes.size() == 1247);
  // 16 base entries (2..18 minus the free 9), 1222 odd primes, 9 powers of 2.
  CHECK(rep.case_counts.at("base-table") == 16);
  CHECK(rep.case_counts.at("odd-prime-q35") == 1222);
  CHECK(rep.case_counts.at("even-goldbach") == 9);
  for (const auto& o : rep.outcomes) REQUIRE(o.value == Rational(0));

  // Every prime in range is zeroed.
  std::vector<bool> zeroed(10'001, false);
  for (const auto& o : rep.outcomes) zeroed[o.n] = true;
  for (const std::uint64_t p : ps.primes_in(2, 10'000)) REQUIRE(zeroed[p]);

  // The free values are exactly the odd prime powers with exponent >= 2.
  REQUIRE(rep.free_values.size() == 39);
  const std::vector<std::uint64_t> head(rep.free_values.begin(),
                                        rep.free_values.begin() + 8);
  CHECK(head == std::vector<std::uint64_t>{9, 25, 27, 49, 81, 121, 125, 169});
  for (const std::uint64_t v : rep.free_values) {
    const Factorization fac = factorize(v, &spf);
    REQUIRE(fac.factors.size() == 1);
    REQUIRE(fac.factors.front().first % 2 == 1);
    REQUIRE(fac.factors.front().second >= 2);
  }
}

TEST_CASE("branch zero at the smallest limit frees only nine", "[replay]") {
  const PrimeSet ps = build_prime_set(40);
  const ReplayReport rep = branch_replay(0, 19, ps);
  CHECK(rep.failures.empty());
  CHECK(rep.outcomes.size() == 17);  // 16 base values plus the prime 19
  CHECK(rep.free_values == std::vector<std::uint64_t>{9});
}

TEST_CASE("branch replay validates its inputs", "[replay]") {
  const PrimeSet ps = build_prime_set(100);
  CHECK_THROWS_AS(branch_replay(2, 100, ps), std::domain_error);
  CHECK_THROWS_AS(branch_replay(-1, 100, ps), std::domain_error);
  CHECK_THROWS_AS(branch_replay(0, 18, ps), std::domain_error);
  CHECK_THROWS_AS(branch_replay(0, 1000, ps), std::out_of_range);
  CHECK_THROWS_AS(branch_replay(1, 1000, ps), std::out_of_range);
}

TEST_CASE("capped-set induction replays cleanly", "[replay]") {
  const PrimeSet ps = build_prime_set(10'000);
  const SpfTable spf = build_spf_table(20'000);
  const ReplayReport rep = h_induction_replay(1000, 10'000, ps, &spf);
  CHECK(rep.lo == 1001);
  CHECK(rep.hi == 10'000);
  CHECK(rep.failures.empty());
  CHECK(rep.outcomes.size() > 0);
  CHECK(rep.case_counts.at("h-composite") > 0);
  CHECK(rep.case_counts.at("h-prime-q") > 0);

  const HParams hp{1000, 1000, false};
  std::uint64_t expected = 0;
  for (std::uint64_t n = 1001; n <= 10'000; ++n)
    if (in_h(n, hp, &spf)) ++expected;
  CHECK(rep.outcomes.size() == expected);
  for (const auto& o : rep.outcomes) {
    REQUIRE(o.established);
    REQUIRE(o.value == Rational(static_cast<std::int64_t>(o.n)));
    REQUIRE(in_h(o.n, hp, &spf));
  }
}

TEST_CASE("capped-set induction validates its inputs", "[replay]") {
  const PrimeSet ps = build_prime_set(1000);
  CHECK_THROWS_AS(h_induction_replay(1, 100, ps), std::domain_error);
  CHECK_THROWS_AS(h_induction_replay(100, 100, ps), std::domain_error);
  CHECK_THROWS_AS(h_induction_replay(200, 100, ps), std::domain_error);
  CHECK_THROWS_AS(h_induction_replay(100, 2000, ps), std::out_of_range);
}

TEST_CASE("coprime-multiple witnesses", "[replay]") {
  const PrimeSet ps = build_prime_set(10'002);
  const SpfTable spf = build_spf_table(10'002);
  CHECK(hn_witness(31, 10'000, ps, {}, &spf) == 62);
  CHECK(hn_witness(9, 10'000, ps, {}, &spf) == 18);
  CHECK(hn_witness(2, 2, ps) == 2);
  CHECK_FALSE(hn_witness(2, 1, ps).has_value());

  // The witness really is minimal and really works.
  for (const std::uint64_t n : {2ULL, 9ULL, 31ULL, 100ULL}) {
    const auto w = hn_witness(n, 10'000, ps, {}, &spf);
    REQUIRE(w.has_value());
    REQUIRE(hn_member(*w, n, {}, &spf));
    REQUIRE(goldbach_pair(*w + 2, ps).has_value());
    for (const std::uint64_t k : hn_stream(n, *w - 1, {}, &spf))
      REQUIRE_FALSE(goldbach_pair(k + 2, ps).has_value());
  }

  CHECK_THROWS_AS(hn_witness(1, 100, ps), std::domain_error);
  CHECK_THROWS_AS(hn_witness(9, 20'000, ps), std::out_of_range);
}
