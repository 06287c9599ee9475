#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const char* cli_path() { return UHSEC_CLI_PATH; }

struct RunResult {
  int exit_code = 0;
  std::string out;
};

fs::path work_dir() {
  const auto d = fs::temp_directory_path() / "uhsec_cli_test";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args, const std::string& tag) {
  const auto out = work_dir() / (tag + ".json");
  const std::string cmd = std::string(cli_path()) + " " + args + " > " + out.string() +
                          " 2> " + (work_dir() / (tag + ".err")).string();
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(rc);
  r.out = slurp(out);
  return r;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream(p) << content;
}

}  // namespace

TEST_CASE("usage errors exit nonzero") {
  CHECK(run_cli("", "noargs").exit_code != 0);
  CHECK(run_cli("frobnicate", "badcmd").exit_code != 0);
  CHECK(run_cli("uhf eval --kind field --l 4 --k 2", "missing").exit_code != 0);
}

TEST_CASE("verify report schema and exit-code contract") {
  const auto r = run_cli("uhf verify --kind field --l 4 --k 2", "verify42");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("tool") == "uhsec 0.1.0");
  CHECK(j.at("command") == "uhf verify");
  CHECK(j.at("all_pass") == true);
  REQUIRE(j.at("checks").size() >= 1);
  CHECK(j.at("checks")[0].at("name") == "collision_fraction_le_2^-k");
  CHECK(j.at("checks")[0].at("value").get<double>() <= 0.25);
  CHECK(j.at("values").at("balanced") == true);
}

TEST_CASE("frozen bound through the CLI") {
  const auto r = run_cli("bounds channel --b 10 --imax 4 --eps 0 --k 2", "bch");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(std::abs(j.at("values").at("bound_bits").get<double>() - 0.0225421100139) < 1e-12);
}

TEST_CASE("eval and invert round trip through hex") {
  const auto e = run_cli("uhf eval --kind field --l 4 --k 2 --seed-hex 2 --input-hex 8", "ev");
  REQUIRE(e.exit_code == 0);
  CHECK(json::parse(e.out).at("values").at("output_hex") == "3");
  const auto i =
      run_cli("uhf invert --kind field --l 4 --k 2 --seed-hex 2 --m-hex 3 --r-hex 3", "inv");
  REQUIRE(i.exit_code == 0);
  const json ji = json::parse(i.out);
  CHECK(ji.at("values").at("input_hex") == "8");
  CHECK(ji.at("values").at("check_m_hex") == "3");
}

TEST_CASE("budget violations are reported errors") {
  const auto r = run_cli("uhf verify --kind field --l 4 --k 2 --budget 10", "budget");
  CHECK(r.exit_code == 2);
  const auto err = slurp(work_dir() / "budget.err");
  CHECK(err.find("budget exceeded") != std::string::npos);
  CHECK(err.find("enumeration") != std::string::npos);
}

TEST_CASE("malformed configs name the problem") {
  const auto dir = work_dir();
  write_file(dir / "bad.json", "{\"n\": 7,");
  const auto r1 = run_cli("ska eval --config " + (dir / "bad.json").string(), "badjson");
  CHECK(r1.exit_code == 2);
  write_file(dir / "missing.json", "{\"n\": 7}");
  const auto r2 = run_cli("ska eval --config " + (dir / "missing.json").string(), "missingf");
  CHECK(r2.exit_code == 2);
  const auto err = slurp(dir / "missingf.err");
  CHECK(err.find("eps_src") != std::string::npos);
}

TEST_CASE("reports are byte-identical across reruns") {
  const auto dir = work_dir();
  write_file(dir / "ska.json",
             R"({"n": 7, "eps_src": 0.05, "code": {"name": "hamming74"},
                 "uhf": {"l": 4, "k": 1}, "delta": 0.25,
                 "eve": {"kind": "constant"}})");
  write_file(dir / "wt.json",
             R"({"code": {"name": "hamming74"}, "l": 4, "k": 2,
                 "T": {"kind": "bsc", "p": 0.05}, "W": {"kind": "bsc", "p": 0.3},
                 "eps_list": [0, 0.01], "p_e": 0.05})");
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"uhf verify --kind field --l 4 --k 3", "r1"},
      {"fields --max-l 64", "r2"},
      {"bounds awgn --n 100 --delta 0.1 --power 1 --sigma2 1", "r3"},
      {"ska simulate --config " + (dir / "ska.json").string() + " --trials 500 --seed 11", "r4"},
      {"ska eval --config " + (dir / "ska.json").string() + " --select-k", "r5"},
      {"wiretap eval --config " + (dir / "wt.json").string(), "r6"},
      {"wiretap simulate --config " + (dir / "wt.json").string() + " --trials 300 --seed 5",
       "r7"},
  };
  for (const auto& [args, tag] : cases) {
    const auto a = run_cli(args, tag + "a");
    const auto b = run_cli(args, tag + "b");
    INFO(args);
    REQUIRE(a.exit_code == b.exit_code);
    REQUIRE_FALSE(a.out.empty());
    REQUIRE(a.out == b.out);
  }
  SECTION("different seeds give different stochastic reports") {
    const auto a = run_cli(
        "ska simulate --config " + (dir / "ska.json").string() + " --trials 500 --seed 11",
        "s11");
    const auto b = run_cli(
        "ska simulate --config " + (dir / "ska.json").string() + " --trials 500 --seed 12",
        "s12");
    CHECK(a.out != b.out);
  }
}

TEST_CASE("ecc subcommands") {
  const auto e = run_cli("ecc encode --code hamming74 --in 1000", "ecc1");
  REQUIRE(e.exit_code == 0);
  CHECK(json::parse(e.out).at("values").at("out") == "1000110");
  const auto d = run_cli("ecc decode --code hamming74 --in 1000100", "ecc2");
  CHECK(json::parse(d.out).at("values").at("out") == "1000110");
  const auto s = run_cli("ecc syndrome --code hamming74 --in 1000110", "ecc3");
  CHECK(json::parse(s.out).at("values").at("out") == "000");
  const auto l = run_cli("ecc leader --code hamming74 --in 1000100", "ecc4");
  CHECK(json::parse(l.out).at("values").at("out") == "0000010");
}

TEST_CASE("channel and measure subcommands") {
  const auto c = run_cli("channel capacity --kind bsc --p 0.11", "cap");
  REQUIRE(c.exit_code == 0);
  CHECK(std::abs(json::parse(c.out).at("values").at("capacity_bits").get<double>() - 0.500084) <
        1e-5);
  const auto m = run_cli("channel maxinfo --kind bsc --p 0.1", "mi");
  CHECK(std::abs(json::parse(m.out).at("values").at("imax_bits").get<double>() -
                 std::log2(1.8)) < 1e-12);
  const auto t = run_cli("measure tv --p 0.5,0.5 --q 1,0", "tv");
  CHECK(json::parse(t.out).at("values").at("bits").get<double>() == 0.5);
  const auto h = run_cli("measure smoothminent --p 0.5,0.25,0.25 --eps 0.25", "sme");
  CHECK(json::parse(h.out).at("values").at("bits").get<double>() == 2.0);
}

TEST_CASE("bench schema and input determinism") {
  const auto a = run_cli("bench --kind field --l 12 --megabytes 0.25 --seed 3", "bench1");
  REQUIRE(a.exit_code == 0);
  const json ja = json::parse(a.out);
  CHECK(ja.at("values").contains("bytes"));
  CHECK(ja.at("values").contains("seconds"));
  CHECK(ja.at("values").contains("mbps"));
  CHECK(ja.at("values").contains("schoolbook_mbps"));
  const auto b = run_cli("bench --kind field --l 12 --megabytes 0.25 --seed 3", "bench2");
  const json jb = json::parse(b.out);
  // timing varies; the hashed inputs must not
  CHECK(ja.at("values").at("input_digest") == jb.at("values").at("input_digest"));
}
