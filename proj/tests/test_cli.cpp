#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "adq/cli.hpp"
#include "adq/report.hpp"

using namespace adq;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

std::filesystem::path work_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "adq-cli-tests";
  std::filesystem::create_directories(dir);
  return dir;
}

ordered_json load_json(const std::filesystem::path& path) {
  std::ifstream f(path);
  REQUIRE(f.is_open());
  return ordered_json::parse(f);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  REQUIRE(f.is_open());
  f << text;
}

}  // namespace

TEST_CASE("classification run emits the three families", "[cli]") {
  const auto file = work_dir() / "classify17.json";
  const auto r = run_cli({"classify", "--form", "shifted", "--prime-limit",
                          "17", "--out", file.string()});
  CHECK(r.code == 0);
  CHECK(r.err.empty());

  const ordered_json j = load_json(file);
  CHECK(j["command"] == "classify");
  CHECK(j["result"]["family_count"] == 3);
  REQUIRE(j["result"]["families"].size() == 3);
  CHECK(j["violations"].empty());
  CHECK(j["failures"].empty());

  // Families arrive sorted by the value at 2: vanishing, constant, identity.
  CHECK(j["result"]["families"][0]["f2"] == "0/1");
  CHECK(j["result"]["families"][1]["f2"] == "1/1");
  CHECK(j["result"]["families"][2]["f2"] == "2/1");
  CHECK(j["result"]["families"][0]["free"] ==
        ordered_json::array({"3^2"}));
  CHECK(j["result"]["families"][2]["free"].empty());

  // Envelope keys appear in a fixed order.
  std::vector<std::string> keys;
  for (const auto& item : j.items()) keys.push_back(item.key());
  CHECK(keys == std::vector<std::string>{"command", "params", "started_at",
                                         "duration_ms", "result", "violations",
                                         "failures"});
}

TEST_CASE("reports are reproducible modulo timestamps", "[cli]") {
  const auto a_file = work_dir() / "repro_a.json";
  const auto b_file = work_dir() / "repro_b.json";
  const std::vector<std::string> base{"classify", "--form", "shifted",
                                      "--prime-limit", "17"};
  auto with_out = [&](const std::filesystem::path& p) {
    std::vector<std::string> args = base;
    args.push_back("--out");
    args.push_back(p.string());
    return args;
  };
  REQUIRE(run_cli(with_out(a_file)).code == 0);
  REQUIRE(run_cli(with_out(b_file)).code == 0);

  ordered_json a = load_json(a_file);
  ordered_json b = load_json(b_file);
  a["started_at"] = "";
  b["started_at"] = "";
  a["duration_ms"] = 0;
  b["duration_ms"] = 0;
  CHECK(a.dump() == b.dump());

  // The plain-text rendering skips the timestamps, so it is byte-identical.
  const auto t1 = run_cli(base);
  const auto t2 = run_cli(base);
  CHECK(t1.code == 0);
  CHECK(t1.out == t2.out);
  CHECK(contains(t1.out, "result.family_count = 3"));
  CHECK_FALSE(contains(t1.out, "started_at"));
}

TEST_CASE("family files round-trip into forced tables", "[cli]") {
  const auto cls = work_dir() / "roundtrip.json";
  REQUIRE(run_cli({"classify", "--form", "shifted", "--prime-limit", "17",
                   "--out", cls.string()})
              .code == 0);

  // The emitted families parse back to the same JSON.
  const ordered_json report = load_json(cls);
  const std::vector<SolutionFamily> fams = families_from_json_file(cls.string());
  REQUIRE(fams.size() == 3);
  for (std::size_t i = 0; i < fams.size(); ++i)
    CHECK(family_to_json(fams[i]).dump() ==
          report["result"]["families"][i].dump());

  const auto forced = work_dir() / "forced.json";
  const auto r = run_cli({"forced", "--family-file", cls.string(), "--up-to",
                          "18", "--out", forced.string()});
  CHECK(r.code == 0);
  const ordered_json j = load_json(forced);
  REQUIRE(j["result"]["tables"].size() == 3);

  // Vanishing family: f(9) stays free, but f(18) = f(2) f(9) = 0 anyway.
  const auto& zero_vals = j["result"]["tables"][0]["values"];
  REQUIRE(zero_vals.size() == 18);
  CHECK(zero_vals[8]["n"] == 9);
  CHECK(zero_vals[8]["kind"] == "free");
  CHECK(zero_vals[17]["n"] == 18);
  CHECK(zero_vals[17]["kind"] == "value");
  CHECK(zero_vals[17]["value"] == "0/1");

  // Identity family: every value is forced to n.
  const auto& id_vals = j["result"]["tables"][2]["values"];
  for (std::size_t n = 1; n <= 18; ++n) {
    CHECK(id_vals[n - 1]["kind"] == "value");
    CHECK(id_vals[n - 1]["value"] == std::to_string(n) + "/1");
  }
}

TEST_CASE("family files accept report, array, and single-object shapes",
          "[cli]") {
  const auto cls = work_dir() / "shapes.json";
  REQUIRE(run_cli({"classify", "--form", "shifted", "--prime-limit", "17",
                   "--out", cls.string()})
              .code == 0);
  const ordered_json report = load_json(cls);

  const auto arr_file = work_dir() / "shapes_array.json";
  write_text(arr_file, report["result"]["families"].dump(2));
  const auto one_file = work_dir() / "shapes_single.json";
  write_text(one_file, report["result"]["families"][2].dump(2));

  const std::vector<std::pair<std::filesystem::path, std::size_t>> cases{
      {cls, 3}, {arr_file, 3}, {one_file, 1}};
  for (const auto& [file, tables] : cases) {
    const auto out = work_dir() / "shapes_out.json";
    const auto r = run_cli({"forced", "--family-file", file.string(),
                            "--up-to", "10", "--out", out.string()});
    REQUIRE(r.code == 0);
    CHECK(load_json(out)["result"]["tables"].size() == tables);
  }
}

TEST_CASE("usage and domain errors exit 2", "[cli]") {
  CHECK(run_cli({}).code == 2);

  const auto bad_flag = run_cli({"classify", "--bogus"});
  CHECK(bad_flag.code == 2);
  CHECK(contains(bad_flag.err, "usage error:"));

  const auto odd_scan = run_cli({"goldbach", "scan", "--from", "4", "--to", "9"});
  CHECK(odd_scan.code == 2);
  CHECK(contains(odd_scan.err, "error: "));

  const auto odd_pair = run_cli({"goldbach", "pair", "9"});
  CHECK(odd_pair.code == 2);
  CHECK(contains(odd_pair.err, "even"));

  const auto bad_form =
      run_cli({"classify", "--form", "nope", "--prime-limit", "17"});
  CHECK(bad_form.code == 2);
  CHECK(contains(bad_form.err, "unknown form"));

  const auto bad_out = run_cli({"verify", "family", "--name", "identity",
                                "--prime-limit", "100", "--out", "bad.txt"});
  CHECK(bad_out.code == 2);
  CHECK(contains(bad_out.err, "--out must end in .json or .csv"));

  const auto bad_assign =
      run_cli({"verify", "family", "--name", "odd-squareful", "--prime-limit",
               "100", "--assign", "3,2"});
  CHECK(bad_assign.code == 2);

  const auto bad_branch =
      run_cli({"replay", "branch", "--value", "2", "--limit", "100"});
  CHECK(bad_branch.code == 2);

  const auto help = run_cli({"--help"});
  CHECK(help.code == 0);
  CHECK(contains(help.out, "sieve"));
  CHECK(contains(help.out, "classify"));
}

TEST_CASE("family verification exit codes track violations", "[cli]") {
  const auto clean = run_cli(
      {"verify", "family", "--name", "odd-squareful", "--prime-limit", "1000"});
  CHECK(clean.code == 0);
  CHECK(contains(clean.out, "result.violation_count = 0"));
  CHECK(contains(clean.out, "result.form = shifted"));  // the default form

  const auto assigned =
      run_cli({"verify", "family", "--name", "odd-squareful", "--prime-limit",
               "500", "--assign", "3,2,5/1", "--assign", "5,2,-7/2"});
  CHECK(assigned.code == 0);
  CHECK(contains(assigned.out, "result.violation_count = 0"));
  CHECK(contains(assigned.out, "3^2"));

  // The constant family is additive on shifted pairs but not on p-1 sums.
  const auto dirty = run_cli({"verify", "family", "--name", "one", "--form",
                              "primesm1", "--prime-limit", "100"});
  CHECK(dirty.code == 1);
  CHECK(contains(dirty.out, "violations.0.x = 1"));
  CHECK(contains(dirty.out, "violations.0.lhs = 1/1"));
  CHECK(contains(dirty.out, "violations.0.rhs = 2/1"));
}

TEST_CASE("shift implication reports premise and conclusions", "[cli]") {
  const auto id = run_cli(
      {"verify", "shift-implication", "--name", "identity", "--limit", "100"});
  CHECK(id.code == 0);
  CHECK(contains(id.out, "result.premise_holds = true"));
  CHECK(contains(id.out, "result.f2_equals_2 = true"));
  CHECK(contains(id.out, "result.prime_rule_holds = true"));
  CHECK(contains(id.out, "result.shifted_violation_count = 0"));

  // Premise fails for the constant family, so the implication is vacuous.
  const auto one = run_cli(
      {"verify", "shift-implication", "--name", "one", "--limit", "100"});
  CHECK(one.code == 0);
  CHECK(contains(one.out, "result.premise_holds = false"));
  CHECK(contains(one.out, "result.premise_witness.x = 1"));
  CHECK(contains(one.out, "result.premise_witness.lhs = 1/1"));
  CHECK(contains(one.out, "result.premise_witness.rhs = 2/1"));
  CHECK(contains(one.out, "result.f2_equals_2 = \n"));  // null: undecided
}

TEST_CASE("sieve cache misses then hits", "[cli]") {
  const auto cache = work_dir() / "sieve-cache";
  std::filesystem::remove_all(cache);
  const auto first_file = work_dir() / "sieve1.json";
  const auto second_file = work_dir() / "sieve2.json";

  const auto first = run_cli({"sieve", "--limit", "1000", "--cache",
                              cache.string(), "--out", first_file.string()});
  REQUIRE(first.code == 0);
  const ordered_json f = load_json(first_file);
  CHECK(f["result"]["count"] == 168);
  CHECK(f["result"]["cache_hit"] == false);
  const std::string cache_file = f["result"]["cache_file"].get<std::string>();
  CHECK(cache_file.ends_with("sieve_1000.adq"));
  CHECK(std::filesystem::exists(cache_file));

  const auto second = run_cli({"sieve", "--limit", "1000", "--cache",
                               cache.string(), "--out", second_file.string()});
  REQUIRE(second.code == 0);
  const ordered_json s = load_json(second_file);
  CHECK(s["result"]["count"] == 168);
  CHECK(s["result"]["cache_hit"] == true);
}

TEST_CASE("scan subcommand reports clean ranges", "[cli]") {
  const auto plain = run_cli({"goldbach", "scan", "--from", "4", "--to", "100"});
  CHECK(plain.code == 0);
  CHECK(contains(plain.out, "result.scanned = 49"));
  CHECK(contains(plain.out, "result.exception_count = 0"));

  const auto jobs = run_cli(
      {"goldbach", "scan", "--from", "4", "--to", "100", "--jobs", "3"});
  CHECK(jobs.code == 0);
  CHECK(contains(jobs.out, "result.scanned = 49"));
}

TEST_CASE("identity replay through the command line", "[cli]") {
  const auto file = work_dir() / "lemma4_50.json";
  const auto r = run_cli({"replay", "lemma4", "--N", "50", "--out",
                          file.string()});
  CHECK(r.code == 0);
  const ordered_json j = load_json(file);
  CHECK(j["result"]["established"] == 48);
  CHECK(j["result"]["evidence_scanned"] == 49);
  CHECK(j["result"]["case_counts"]["base-table"] == 18);
  CHECK(j["result"]["case_counts"]["even-goldbach"] == 15);
  CHECK(j["result"]["case_counts"]["odd-prime-q35"] == 8);
  CHECK(j["result"]["case_counts"]["coprime-split"] == 5);
  CHECK(j["result"]["case_counts"]["prime-power-split"] == 2);
  CHECK(j["failures"].empty());
}

TEST_CASE("branch and witness replays through the command line", "[cli]") {
  const auto zero = run_cli({"replay", "branch", "--value", "0", "--limit",
                             "19"});
  CHECK(zero.code == 0);
  CHECK(contains(zero.out, "result.established = 17"));
  CHECK(contains(zero.out, "result.free_values.0 = 9"));

  const auto one = run_cli({"replay", "branch", "--value", "1", "--limit",
                            "100"});
  CHECK(one.code == 0);
  CHECK(contains(one.out, "result.established = 100"));

  const auto hind = run_cli({"replay", "h-induction", "--base", "100",
                             "--limit", "1000"});
  CHECK(hind.code == 0);
  CHECK(contains(hind.out, "result.params.max_s ="));

  const auto witness = run_cli({"replay", "hn-witness", "--n", "31",
                                "--search", "10000"});
  CHECK(witness.code == 0);
  CHECK(contains(witness.out, "result.witness = 62"));

  const auto missing = run_cli({"replay", "hn-witness", "--n", "31",
                                "--search", "30"});
  CHECK(missing.code == 1);
  CHECK(contains(missing.out,
                 "failures.0.reason = no witness within search limit"));
}

TEST_CASE("member-set queries through the command line", "[cli]") {
  const auto member = run_cli({"spiro", "member", "675"});
  CHECK(member.code == 0);
  CHECK(contains(member.out, "result.member = true"));

  const auto nonmember = run_cli({"spiro", "member", "1018081"});
  CHECK(nonmember.code == 0);
  CHECK(contains(nonmember.out, "result.member = false"));

  const auto cap = run_cli({"spiro", "cap", "997"});
  CHECK(cap.code == 0);
  CHECK(contains(cap.out, "result.cap = 3"));

  const auto none = run_cli({"spiro", "smallest-nonmember", "--limit", "1000"});
  CHECK(none.code == 0);
  CHECK(contains(none.out, "result.smallest = \n"));

  const auto hn = run_cli({"spiro", "hn", "--n", "9", "--limit", "40"});
  CHECK(hn.code == 0);
  CHECK(contains(hn.out, "result.count = 2"));
  CHECK(contains(hn.out, "result.members.0 = 18"));
  CHECK(contains(hn.out, "result.members.1 = 36"));

  const auto dens =
      run_cli({"spiro", "hn", "--n", "1", "--limit", "10", "--density"});
  CHECK(dens.code == 0);
  CHECK(contains(dens.out, "result.count = 5"));
  CHECK(contains(dens.out, "result.density = 5/10"));
  CHECK(contains(dens.out, "result.density_reduced = 1/2"));
  CHECK(contains(dens.out, "result.approx = 0.5"));

  const auto findq = run_cli({"spiro", "find-q", "--m", "20"});
  CHECK(findq.code == 0);
  CHECK(contains(findq.out, "result.q = 3"));
}

TEST_CASE("CSV output flattens dotted key paths", "[cli]") {
  const auto file = work_dir() / "pair48.csv";
  const auto r =
      run_cli({"goldbach", "pair", "48", "--out", file.string()});
  CHECK(r.code == 0);

  std::ifstream f(file);
  REQUIRE(f.is_open());
  std::string line;
  REQUIRE(std::getline(f, line));
  CHECK(line == "key,value");
  std::string rest((std::istreambuf_iterator<char>(f)),
                   std::istreambuf_iterator<char>());
  CHECK(contains(rest, "command,goldbach pair\n"));
  CHECK(contains(rest, "result.p,5\n"));
  CHECK(contains(rest, "result.q,43\n"));
}
