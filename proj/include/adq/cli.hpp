#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "adq/form.hpp"
#include "adq/goldbach.hpp"
#include "adq/multfunc.hpp"
#include "adq/replay.hpp"
#include "adq/report.hpp"
#include "adq/sieve.hpp"
#include "adq/solver.hpp"
#include "adq/spiro.hpp"

namespace adq::cli {

namespace detail {

// Strict unsigned decimal parse; rejects signs, spaces, and trailing junk.
inline std::uint64_t parse_u64(const std::string& s, const char* what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument(std::string(what) + ": bad number '" + s + "'");
  try {
    return std::stoull(s);
  } catch (...) {
    throw std::invalid_argument(std::string(what) + ": bad number '" + s +
                                "'");
  }
}

// "--assign p,e,num/den" -> ((p, e), value).
inline std::pair<std::pair<std::uint64_t, std::uint32_t>, Rational>
parse_assign(const std::string& s) {
  const auto c1 = s.find(',');
  const auto c2 = c1 == std::string::npos ? c1 : s.find(',', c1 + 1);
  if (c2 == std::string::npos)
    throw std::invalid_argument("--assign needs p,e,num/den: '" + s + "'");
  const std::uint64_t p = parse_u64(s.substr(0, c1), "--assign prime");
  const std::uint64_t e = parse_u64(s.substr(c1 + 1, c2 - c1 - 1),
                                    "--assign exponent");
  if (e == 0 || e > 0xffffffffULL)
    throw std::invalid_argument("--assign exponent out of range: '" + s + "'");
  return {{p, static_cast<std::uint32_t>(e)},
          Rational::parse(s.substr(c2 + 1))};
}

inline ordered_json violation_json(const ViolationRecord& v) {
  ordered_json j;
  j["x"] = v.x;
  j["y"] = v.y;
  j["lhs"] = rational_str(v.lhs);
  j["rhs"] = rational_str(v.rhs);
  return j;
}

inline ordered_json replay_result(const ReplayReport& rep) {
  ordered_json r;
  r["lo"] = rep.lo;
  r["hi"] = rep.hi;
  r["established"] = std::count_if(
      rep.outcomes.begin(), rep.outcomes.end(),
      [](const ReplayOutcome& o) { return o.established; });
  r["case_counts"] = rep.case_counts;
  r["free_values"] = rep.free_values;
  r["params"] = rep.params;
  return r;
}

inline void fill_replay_failures(const ReplayReport& rep, RunReport& out) {
  for (const ReplayFailure& f : rep.failures) {
    ordered_json j;
    j["n"] = f.n;
    j["reason"] = f.reason;
    out.failures.push_back(std::move(j));
  }
}

// Report sink: deterministic text on the stream, or JSON/CSV picked by the
// --out extension.
inline void emit(const RunReport& rep, const std::string& path,
                 std::ostream& out) {
  if (path.empty()) {
    out << to_text(rep);
    return;
  }
  std::string text;
  if (path.ends_with(".csv")) text = to_csv_text(rep);
  else if (path.ends_with(".json")) text = to_json_text(rep);
  else throw std::invalid_argument("--out must end in .json or .csv");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file: " + path);
  f << text;
  if (!f) throw std::runtime_error("failed writing output file: " + path);
}

inline FamilyKind parse_family_name(const std::string& name) {
  const auto kind = parse_family_kind(name);
  if (!kind)
    throw std::invalid_argument(
        "unknown family name (want identity|one|odd-squareful): " + name);
  return *kind;
}

inline Form parse_form_name(const std::string& name) {
  const auto form = parse_form(name);
  if (!form)
    throw std::invalid_argument("unknown form (want shifted|primesm1): " +
                                name);
  return *form;
}

// Shared single-prime-factor table builder; skipped above the size cutoff
// (factorization then falls back to trial division).
inline std::optional<SpfTable> spf_up_to(std::uint64_t limit) {
  std::optional<SpfTable> spf;
  if (limit >= 2 && limit <= 4'000'000ULL)
    spf = build_spf_table(static_cast<std::uint32_t>(limit));
  return spf;
}

}  // namespace detail

// Parses one subcommand invocation (program name excluded), runs it, writes
// the report, and returns the exit status: 0 clean, 1 when violations or
// failures are present, 2 on usage/config/domain errors.
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"exact-arithmetic workbench: prime sieves, Goldbach scans, "
               "multiplicative-function classification, and proof replays",
               "adq"};
  app.require_subcommand(1);

  // --- sieve ---------------------------------------------------------------
  auto* sieve_cmd =
      app.add_subcommand("sieve", "build (or load from cache) a prime sieve");
  std::uint64_t sv_limit = 0;
  std::string sv_cache, sv_out;
  sieve_cmd->add_option("--limit", sv_limit, "sieve bound, inclusive")
      ->required();
  sieve_cmd->add_option("--cache", sv_cache, "sieve cache directory");
  sieve_cmd->add_option("--out", sv_out, "report file (.json or .csv)");

  // --- goldbach ------------------------------------------------------------
  auto* gold = app.add_subcommand("goldbach",
                                  "prime-pair decompositions of even numbers");
  gold->require_subcommand(1);
  auto* gpair = gold->add_subcommand("pair", "minimal prime pair p + q = N");
  std::uint64_t gp_n = 0;
  std::string gp_out;
  gpair->add_option("N", gp_n, "even number >= 4")->required();
  gpair->add_option("--out", gp_out, "report file (.json or .csv)");
  auto* gscan =
      gold->add_subcommand("scan", "scan an even range for missing pairs");
  std::uint64_t gs_from = 0, gs_to = 0;
  unsigned gs_jobs = 0;
  std::string gs_out;
  gscan->add_option("--from", gs_from, "even lower bound >= 4")->required();
  gscan->add_option("--to", gs_to, "even upper bound")->required();
  gscan->add_option("--jobs", gs_jobs,
                    "worker partitions (default: hardware parallelism)");
  gscan->add_option("--out", gs_out, "report file (.json or .csv)");

  // --- classify ------------------------------------------------------------
  auto* classify_cmd = app.add_subcommand(
      "classify", "solve the functional-equation constraints exactly");
  std::string cf_form;
  std::uint64_t cf_limit = 0;
  int cf_maxdeg = 2;
  std::string cf_out;
  classify_cmd->add_option("--form", cf_form, "equation form: shifted|primesm1")
      ->required();
  classify_cmd
      ->add_option("--prime-limit", cf_limit, "enumerate prime pairs up to L")
      ->required();
  classify_cmd->add_option("--max-degree", cf_maxdeg,
                           "degree cap for base-residue constraints");
  classify_cmd->add_option("--out", cf_out, "report file (.json or .csv)");

  // --- forced --------------------------------------------------------------
  auto* forced_cmd = app.add_subcommand(
      "forced", "tabulate the values each solution family forces");
  std::string fc_file, fc_out;
  std::uint64_t fc_upto = 0;
  forced_cmd
      ->add_option("--family-file", fc_file,
                   "families as JSON (classify report, array, or one family)")
      ->required();
  forced_cmd->add_option("--up-to", fc_upto, "tabulate f(n) for n <= N")
      ->required();
  forced_cmd->add_option("--out", fc_out, "report file (.json or .csv)");

  // --- verify --------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "check families analytically");
  verify->require_subcommand(1);
  auto* vfam = verify->add_subcommand(
      "family", "test a built-in family against an equation form");
  std::string vf_name, vf_form = "shifted", vf_out;
  std::vector<std::string> vf_assigns;
  std::uint64_t vf_limit = 0;
  vfam->add_option("--name", vf_name, "identity|one|odd-squareful")
      ->required();
  vfam->add_option("--assign", vf_assigns,
                   "indicator override p,e,num/den (repeatable)");
  vfam->add_option("--prime-limit", vf_limit, "prime pairs up to L")
      ->required();
  vfam->add_option("--form", vf_form, "shifted|primesm1 (default shifted)");
  vfam->add_option("--out", vf_out, "report file (.json or .csv)");
  auto* vshift = verify->add_subcommand(
      "shift-implication",
      "additivity on the shifted-prime set implies the prime rule");
  std::string vs_name, vs_out;
  std::uint64_t vs_limit = 0;
  vshift->add_option("--name", vs_name, "identity|one|odd-squareful")
      ->required();
  vshift->add_option("--limit", vs_limit, "check pairs and primes up to L")
      ->required();
  vshift->add_option("--out", vs_out, "report file (.json or .csv)");

  // --- replay --------------------------------------------------------------
  auto* replay_cmd =
      app.add_subcommand("replay", "rerun the constructive induction proofs");
  replay_cmd->require_subcommand(1);
  auto* rlemma = replay_cmd->add_subcommand(
      "lemma4", "identity induction over a clean Goldbach scan");
  std::uint64_t rl_n = 0;
  std::string rl_out;
  rlemma->add_option("--N", rl_n, "establish f(n) = n for n <= N - 2")
      ->required();
  rlemma->add_option("--out", rl_out, "report file (.json or .csv)");
  auto* rhind = replay_cmd->add_subcommand(
      "h-induction", "induction over the cap-bounded member set");
  std::uint64_t rh_base = 0, rh_limit = 0;
  std::string rh_out;
  rhind->add_option("--base", rh_base, "values up to B seeded as established")
      ->required();
  rhind->add_option("--limit", rh_limit, "induct over members up to L")
      ->required();
  rhind->add_option("--out", rh_out, "report file (.json or .csv)");
  auto* rbranch = replay_cmd->add_subcommand(
      "branch", "zero-forcing (value 0) or constant-one (value 1) replay");
  int rb_value = -1;
  std::uint64_t rb_limit = 0;
  std::string rb_out;
  rbranch->add_option("--value", rb_value, "branch value: 0 or 1")->required();
  rbranch->add_option("--limit", rb_limit, "replay values up to L")
      ->required();
  rbranch->add_option("--out", rb_out, "report file (.json or .csv)");
  auto* rwitness = replay_cmd->add_subcommand(
      "hn-witness", "smallest coprime-multiple member k with k+2 a prime sum");
  std::uint64_t rw_n = 0, rw_search = 0;
  std::string rw_out;
  rwitness->add_option("--n", rw_n, "multiplier n >= 2")->required();
  rwitness->add_option("--search", rw_search, "search members up to S")
      ->required();
  rwitness->add_option("--out", rw_out, "report file (.json or .csv)");

  // --- spiro ---------------------------------------------------------------
  auto* spiro_cmd =
      app.add_subcommand("spiro", "cap-bounded member set queries");
  spiro_cmd->require_subcommand(1);
  auto* smember = spiro_cmd->add_subcommand("member", "is N a member?");
  std::uint64_t sm_n = 0;
  std::string sm_out;
  smember->add_option("N", sm_n, "candidate member")->required();
  smember->add_option("--out", sm_out, "report file (.json or .csv)");
  auto* scap = spiro_cmd->add_subcommand("cap", "exponent cap of a prime");
  std::uint64_t sc_p = 0;
  std::string sc_out;
  scap->add_option("P", sc_p, "prime")->required();
  scap->add_option("--out", sc_out, "report file (.json or .csv)");
  auto* snon = spiro_cmd->add_subcommand("smallest-nonmember",
                                         "first integer outside the set");
  std::uint64_t sn_limit = 0;
  std::string sn_out;
  snon->add_option("--limit", sn_limit, "scan 2..L")->required();
  snon->add_option("--out", sn_out, "report file (.json or .csv)");
  auto* shn = spiro_cmd->add_subcommand(
      "hn", "coprime multiples of n by members (even stream)");
  std::uint64_t sh_n = 0, sh_limit = 0;
  bool sh_density = false;
  std::string sh_out;
  shn->add_option("--n", sh_n, "multiplier n >= 1")->required();
  shn->add_option("--limit", sh_limit, "stream members up to L")->required();
  shn->add_flag("--density", sh_density, "report the count/limit ratio only");
  shn->add_option("--out", sh_out, "report file (.json or .csv)");
  auto* sfindq = spiro_cmd->add_subcommand(
      "find-q", "smallest odd prime q <= m-1 with m+q a member");
  std::uint64_t sf_m = 0;
  std::string sf_out;
  sfindq->add_option("--m", sf_m, "target m >= 4")->required();
  sfindq->add_option("--out", sf_out, "report file (.json or .csv)");

  // --- parse ---------------------------------------------------------------
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("adq");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }

  RunReport rep;
  rep.started_at = iso8601_utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  std::string out_path;

  try {
    if (sieve_cmd->parsed()) {
      rep.command = "sieve";
      out_path = sv_out;
      rep.params["limit"] = std::to_string(sv_limit);
      if (!sv_cache.empty()) rep.params["cache"] = sv_cache;
      std::optional<PrimeSet> ps;
      std::string cache_file;
      bool cache_hit = false;
      if (!sv_cache.empty()) {
        const std::filesystem::path path = sieve_cache_path(sv_cache, sv_limit);
        cache_file = path.string();
        std::filesystem::create_directories(sv_cache);
        if (auto loaded = load_prime_set(path)) {
          ps = std::move(*loaded);
          cache_hit = true;
        } else {
          ps = build_prime_set(sv_limit);
          save_prime_set(*ps, path);
        }
      } else {
        ps = build_prime_set(sv_limit);
      }
      rep.result["limit"] = ps->limit();
      rep.result["count"] = ps->count();
      rep.result["cache_file"] =
          cache_file.empty() ? ordered_json() : ordered_json(cache_file);
      rep.result["cache_hit"] = cache_hit;

    } else if (gpair->parsed()) {
      rep.command = "goldbach pair";
      out_path = gp_out;
      rep.params["N"] = std::to_string(gp_n);
      if (gp_n < 4 || gp_n % 2 != 0)
        throw std::domain_error("goldbach pair: N must be even and >= 4");
      const PrimeSet ps = build_prime_set(gp_n);
      const auto pr = goldbach_pair(gp_n, ps);
      rep.result["n"] = gp_n;
      rep.result["p"] = pr ? ordered_json(pr->p) : ordered_json();
      rep.result["q"] = pr ? ordered_json(pr->q) : ordered_json();
      if (!pr) {
        ordered_json j;
        j["n"] = gp_n;
        j["reason"] = "no prime pair found";
        rep.violations.push_back(std::move(j));
      }

    } else if (gscan->parsed()) {
      rep.command = "goldbach scan";
      out_path = gs_out;
      rep.params["from"] = std::to_string(gs_from);
      rep.params["to"] = std::to_string(gs_to);
      rep.params["jobs"] = std::to_string(gs_jobs);
      if (gs_from < 4 || gs_from > gs_to || gs_from % 2 != 0 ||
          gs_to % 2 != 0)
        throw std::domain_error(
            "goldbach scan: bounds must be even with 4 <= from <= to");
      const PrimeSet ps = build_prime_set(gs_to);
      const ExceptionReport scan = scan_goldbach(gs_from, gs_to, ps, gs_jobs);
      rep.result["from"] = scan.lo;
      rep.result["to"] = scan.hi;
      rep.result["scanned"] = scan.scanned;
      rep.result["exception_count"] = scan.exceptions.size();
      for (const std::uint64_t n : scan.exceptions) {
        ordered_json j;
        j["n"] = n;
        j["reason"] = "no prime pair found";
        rep.violations.push_back(std::move(j));
      }

    } else if (classify_cmd->parsed()) {
      rep.command = "classify";
      out_path = cf_out;
      rep.params["form"] = cf_form;
      rep.params["prime_limit"] = std::to_string(cf_limit);
      rep.params["max_degree"] = std::to_string(cf_maxdeg);
      const Form form = detail::parse_form_name(cf_form);
      const Classification cls = classify_full(form, cf_limit, 2, cf_maxdeg);
      rep.result["form"] = cf_form;
      rep.result["prime_limit"] = cf_limit;
      rep.result["max_degree"] = cf_maxdeg;
      rep.result["family_count"] = cls.families.size();
      ordered_json fams = ordered_json::array();
      for (const SolutionFamily& f : cls.families)
        fams.push_back(family_to_json(f));
      rep.result["families"] = std::move(fams);
      rep.result["warnings"] = cls.warnings;

    } else if (forced_cmd->parsed()) {
      rep.command = "forced";
      out_path = fc_out;
      rep.params["family_file"] = fc_file;
      rep.params["up_to"] = std::to_string(fc_upto);
      const std::vector<SolutionFamily> fams =
          families_from_json_file(fc_file);
      if (fams.empty())
        throw std::invalid_argument("family file holds no families: " +
                                    fc_file);
      const std::optional<SpfTable> spf = detail::spf_up_to(fc_upto);
      rep.result["up_to"] = fc_upto;
      ordered_json tables = ordered_json::array();
      for (const SolutionFamily& fam : fams) {
        ordered_json table;
        const auto f2 = fam.assignments.find(Sym{2, 1});
        table["f2"] = f2 == fam.assignments.end()
                          ? ordered_json()
                          : ordered_json(rational_str(f2->second));
        ordered_json values = ordered_json::array();
        for (const ForcedValue& v :
             forced_values(fam, fc_upto, spf ? &*spf : nullptr)) {
          ordered_json entry;
          entry["n"] = v.n;
          entry["kind"] = to_string(v.kind);
          if (v.kind == ForcedKind::value)
            entry["value"] = rational_str(v.value);
          values.push_back(std::move(entry));
        }
        table["values"] = std::move(values);
        tables.push_back(std::move(table));
      }
      rep.result["tables"] = std::move(tables);

    } else if (vfam->parsed()) {
      rep.command = "verify family";
      out_path = vf_out;
      rep.params["name"] = vf_name;
      rep.params["form"] = vf_form;
      rep.params["prime_limit"] = std::to_string(vf_limit);
      rep.params["assign_count"] = std::to_string(vf_assigns.size());
      std::map<std::pair<std::uint64_t, std::uint32_t>, Rational> assigns;
      for (const std::string& s : vf_assigns) {
        auto [key, value] = detail::parse_assign(s);
        assigns[key] = value;
      }
      const MultiplicativeFn f =
          family(detail::parse_family_name(vf_name), std::move(assigns));
      const Form form = detail::parse_form_name(vf_form);
      const PrimeSet ps = build_prime_set(std::max<std::uint64_t>(vf_limit, 2));
      const std::vector<ViolationRecord> viol =
          check_equation(f, form, vf_limit, ps);
      rep.result["name"] = vf_name;
      rep.result["form"] = vf_form;
      rep.result["prime_limit"] = vf_limit;
      rep.result["violation_count"] = viol.size();
      ordered_json assigns_json = ordered_json::array();
      for (const auto& [pe, value] : f.assignments)
        assigns_json.push_back(
            {Sym{pe.first, pe.second}.to_string(), rational_str(value)});
      rep.result["assignments"] = std::move(assigns_json);
      for (const ViolationRecord& v : viol)
        rep.violations.push_back(detail::violation_json(v));

    } else if (vshift->parsed()) {
      rep.command = "verify shift-implication";
      out_path = vs_out;
      rep.params["name"] = vs_name;
      rep.params["limit"] = std::to_string(vs_limit);
      const MultiplicativeFn f = family(detail::parse_family_name(vs_name));
      const PrimeSet ps = build_prime_set(std::max<std::uint64_t>(vs_limit, 2));
      const ShiftImplicationReport r =
          check_shift_implication(f, vs_limit, ps);
      rep.result["name"] = vs_name;
      rep.result["limit"] = r.limit;
      rep.result["premise_holds"] = r.premise_holds;
      rep.result["premise_witness"] =
          r.premise_witness ? detail::violation_json(*r.premise_witness)
                            : ordered_json();
      if (r.premise_holds) {
        rep.result["f2_equals_2"] = r.f2_equals_2;
        rep.result["prime_rule_holds"] = r.prime_rule_holds;
        rep.result["first_prime_rule_failure"] =
            r.first_prime_rule_failure
                ? ordered_json(*r.first_prime_rule_failure)
                : ordered_json();
        if (!r.f2_equals_2) {
          ordered_json j;
          j["check"] = "f2-equals-2";
          rep.failures.push_back(std::move(j));
        }
        if (!r.prime_rule_holds) {
          ordered_json j;
          j["check"] = "prime-rule";
          if (r.first_prime_rule_failure) j["n"] = *r.first_prime_rule_failure;
          rep.failures.push_back(std::move(j));
        }
      } else {
        // Vacuous: the premise already fails, so the implication holds.
        rep.result["f2_equals_2"] = ordered_json();
        rep.result["prime_rule_holds"] = ordered_json();
        rep.result["first_prime_rule_failure"] = ordered_json();
      }
      rep.result["shifted_violation_count"] = r.shifted_violations.size();
      for (const ViolationRecord& v : r.shifted_violations)
        rep.violations.push_back(detail::violation_json(v));

    } else if (rlemma->parsed()) {
      rep.command = "replay lemma4";
      out_path = rl_out;
      rep.params["N"] = std::to_string(rl_n);
      if (rl_n < 21)
        throw std::domain_error("replay lemma4: --N must be >= 21");
      const PrimeSet ps = build_prime_set(2 * rl_n);
      const ExceptionReport evidence = scan_goldbach(4, 2 * rl_n, ps);
      const std::optional<SpfTable> spf = detail::spf_up_to(rl_n);
      const ReplayReport r =
          lemma4_replay(rl_n, evidence, ps, spf ? &*spf : nullptr);
      rep.result = detail::replay_result(r);
      rep.result["evidence_scanned"] = evidence.scanned;
      detail::fill_replay_failures(r, rep);

    } else if (rhind->parsed()) {
      rep.command = "replay h-induction";
      out_path = rh_out;
      rep.params["base"] = std::to_string(rh_base);
      rep.params["limit"] = std::to_string(rh_limit);
      const PrimeSet ps =
          build_prime_set(std::max<std::uint64_t>(rh_limit, 2));
      const std::optional<SpfTable> spf = detail::spf_up_to(2 * rh_limit);
      const ReplayReport r =
          h_induction_replay(rh_base, rh_limit, ps, spf ? &*spf : nullptr);
      rep.result = detail::replay_result(r);
      detail::fill_replay_failures(r, rep);

    } else if (rbranch->parsed()) {
      rep.command = "replay branch";
      out_path = rb_out;
      rep.params["value"] = std::to_string(rb_value);
      rep.params["limit"] = std::to_string(rb_limit);
      if (rb_value != 0 && rb_value != 1)
        throw std::domain_error("replay branch: --value must be 0 or 1");
      if (rb_limit < 19)
        throw std::domain_error("replay branch: --limit must be >= 19");
      const std::uint64_t ps_limit =
          rb_value == 1 ? 2 * (rb_limit + 2) : rb_limit + 2;
      const PrimeSet ps = build_prime_set(ps_limit);
      const std::optional<SpfTable> spf = detail::spf_up_to(rb_limit + 2);
      const ReplayReport r =
          branch_replay(rb_value, rb_limit, ps, spf ? &*spf : nullptr);
      rep.result = detail::replay_result(r);
      detail::fill_replay_failures(r, rep);

    } else if (rwitness->parsed()) {
      rep.command = "replay hn-witness";
      out_path = rw_out;
      rep.params["n"] = std::to_string(rw_n);
      rep.params["search"] = std::to_string(rw_search);
      const PrimeSet ps =
          build_prime_set(std::max<std::uint64_t>(rw_search + 2, 4));
      const std::optional<SpfTable> spf = detail::spf_up_to(rw_search);
      const std::optional<std::uint64_t> w =
          hn_witness(rw_n, rw_search, ps, {}, spf ? &*spf : nullptr);
      rep.result["n"] = rw_n;
      rep.result["search"] = rw_search;
      rep.result["witness"] = w ? ordered_json(*w) : ordered_json();
      if (!w) {
        ordered_json j;
        j["n"] = rw_n;
        j["reason"] = "no witness within search limit";
        rep.failures.push_back(std::move(j));
      }

    } else if (smember->parsed()) {
      rep.command = "spiro member";
      out_path = sm_out;
      rep.params["N"] = std::to_string(sm_n);
      rep.result["n"] = sm_n;
      rep.result["member"] = in_h(sm_n);

    } else if (scap->parsed()) {
      rep.command = "spiro cap";
      out_path = sc_out;
      rep.params["P"] = std::to_string(sc_p);
      rep.result["p"] = sc_p;
      rep.result["cap"] = h_cap(sc_p);

    } else if (snon->parsed()) {
      rep.command = "spiro smallest-nonmember";
      out_path = sn_out;
      rep.params["limit"] = std::to_string(sn_limit);
      const auto s = smallest_non_member(sn_limit);
      rep.result["limit"] = sn_limit;
      rep.result["smallest"] = s ? ordered_json(*s) : ordered_json();

    } else if (shn->parsed()) {
      rep.command = "spiro hn";
      out_path = sh_out;
      rep.params["n"] = std::to_string(sh_n);
      rep.params["limit"] = std::to_string(sh_limit);
      rep.params["density"] = sh_density ? "true" : "false";
      const std::optional<SpfTable> spf = detail::spf_up_to(sh_limit);
      rep.result["n"] = sh_n;
      rep.result["limit"] = sh_limit;
      if (sh_density) {
        const HnDensity d =
            hn_density(sh_n, sh_limit, {}, spf ? &*spf : nullptr);
        rep.result["count"] = d.count;
        rep.result["density"] =
            std::to_string(d.count) + "/" + std::to_string(d.limit);
        rep.result["density_reduced"] = rational_str(d.density);
        rep.result["approx"] = d.density.to_double();
      } else {
        const std::vector<std::uint64_t> members =
            hn_stream(sh_n, sh_limit, {}, spf ? &*spf : nullptr);
        rep.result["count"] = members.size();
        rep.result["members"] = members;
      }

    } else if (sfindq->parsed()) {
      rep.command = "spiro find-q";
      out_path = sf_out;
      rep.params["m"] = std::to_string(sf_m);
      const auto q = find_q_for_m(sf_m);
      rep.result["m"] = sf_m;
      rep.result["q"] = q ? ordered_json(*q) : ordered_json();
      if (!q) {
        ordered_json j;
        j["m"] = sf_m;
        j["reason"] = "no odd prime q <= m-1 with m+q a member";
        rep.failures.push_back(std::move(j));
      }
    }

    rep.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    detail::emit(rep, out_path, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return has_problems(rep) ? 1 : 0;
}

}  // namespace adq::cli
