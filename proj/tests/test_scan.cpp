#include "oracle.hpp"
#include "weilsum/scan.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <sys/wait.h>

using namespace weilsum;
namespace fs = std::filesystem;
using scan::json;

namespace {

std::string strip_timing(const std::string& body) {
  static const std::regex timing(R"("elapsed_ms":[-+0-9.eE]+,?)");
  return std::regex_replace(body, timing, "");
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<json> parse_lines(const std::string& body) {
  std::vector<json> out;
  std::istringstream in(body);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(json::parse(line));
  return out;
}

fs::path temp_path(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("weilscan_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

std::string run_to_string(const scan::ScanConfig& c) {
  std::ostringstream out, log;
  scan::run_scan(c, out, log);
  return out.str();
}

struct Cmd {
  int code;
  std::string out;
};

Cmd run_cli(const std::string& args) {
  const std::string cmd = std::string(WEILSCAN_BINARY) + " " + args + " 2>/dev/null";
  Cmd r{0, {}};
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return {-1, {}};
  char buf[4096];
  std::size_t k;
  while ((k = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, k);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST(ScanConfig, FileAndFieldList) {
  const auto path = temp_path("cfg.txt");
  std::ofstream(path) << "# comment\np = 3,2\nn.2 = 2,4,8\nn.3 = 2\nqmax = 300\nfilter = nondegenerate\nworkers = 3\n";
  scan::ScanConfig c;
  scan::load_config_file(c, path.string());
  EXPECT_EQ(c.workers, 3u);
  EXPECT_EQ(c.filter, scan::Filter::nondegenerate);
  std::ostringstream log;
  const auto fields = scan::field_list(c, &log);
  EXPECT_EQ(fields, (std::vector<std::pair<std::uint32_t, unsigned>>{{2, 2}, {2, 4}, {2, 8}, {3, 2}}));
  for (auto [p, n] : fields) EXPECT_LE(*checked_power(p, n, 1u << 30), c.qmax);

  std::ofstream(path) << "bogus = 1\n";
  EXPECT_THROW(scan::load_config_file(c, path.string()), std::invalid_argument);
  c.qmax = 16;
  c.per_prime.clear();
  c.degrees = {2, 4, 8};
  c.primes = {2};
  EXPECT_EQ(scan::field_list(c, &log).size(), 2u);
  EXPECT_NE(log.str().find("exceeds qmax"), std::string::npos);
  c.primes = {4};
  EXPECT_THROW(scan::field_list(c), std::invalid_argument);
}

TEST(Scan, RecordsAndSummaries) {
  scan::ScanConfig c;
  c.primes = {2};
  c.degrees = {2, 4, 5, 8};
  c.qmax = 256;
  const auto lines = parse_lines(run_to_string(c));
  std::map<unsigned, json> summaries;
  std::vector<std::tuple<unsigned, unsigned, unsigned>> keys;
  for (const auto& j : lines) {
    if (j["type"] == "summary") summaries[j["n"].get<unsigned>()] = j;
    else keys.emplace_back(j["p"], j["n"], j["d"]);
  }
  EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
  ASSERT_EQ(summaries.size(), 4u);
  for (unsigned n : {2u, 4u, 8u}) {
    EXPECT_EQ(summaries[n]["three_valued"], 0) << n;
    EXPECT_EQ(summaries[n]["dorothy"], "no instances found");
  }
  const auto tv = summaries[5]["three_valued_d"].get<std::vector<unsigned>>();
  EXPECT_NE(std::find(tv.begin(), tv.end(), 11u), tv.end());  // class of 13 is {11, 13, 21, 22, 26}
  for (const auto& j : lines)
    if (j["type"] == "record") {
      EXPECT_TRUE(j["pass"].get<bool>()) << j.dump();
    }
}

TEST(Scan, RecordContents) {
  auto f = build_field(2, 5);
  const auto rec = scan::build_record(f, 13, {});
  EXPECT_EQ(rec["modulus"], (std::vector<unsigned>{1, 0, 0, 1, 0, 1}));
  EXPECT_EQ(rec["class_orbit"], (std::vector<unsigned>{11, 13, 21, 22, 26}));
  EXPECT_EQ(rec["entries"], json::parse(R"([["-8",6],["0",15],["8",10]])"));
  EXPECT_EQ(rec["min_valuation"], "3/1");
  EXPECT_EQ(rec["celine_case"], "case_i");
  EXPECT_EQ(rec["v1"], 2);
  for (const char* k : {"gloria", "barbara", "orestes", "imogene", "theresa", "victor", "wilbur", "zachary", "alexandra",
                        "celine"})
    EXPECT_TRUE(rec["checks"][k]["pass"].get<bool>()) << k;
  // Self-describing: recomputing from the metadata reproduces the record.
  auto again = scan::build_record(build_field(rec["p"], rec["n"]), rec["d"], {});
  auto a = rec, b = again;
  a.erase("elapsed_ms");
  b.erase("elapsed_ms");
  EXPECT_EQ(a, b);
}

TEST(Scan, AuditedFastRecords) {
  auto f = build_field(2, 10);
  scan::RecordOptions opt{Method::fast, 25, 7};
  const auto rec = scan::build_record(f, 5, opt);
  EXPECT_EQ(rec["method"], "fast");
  EXPECT_TRUE(rec["checks"]["audit"]["pass"].get<bool>());
}

TEST(Scan, DeterministicAndWorkerIndependent) {
  scan::ScanConfig c;
  c.primes = {2, 3};
  c.qmax = 243;
  const auto one = strip_timing(run_to_string(c));
  EXPECT_EQ(one, strip_timing(run_to_string(c)));
  c.workers = 4;
  EXPECT_EQ(one, strip_timing(run_to_string(c)));
}

TEST(Scan, Filters) {
  scan::ScanConfig c;
  c.primes = {2};
  c.qmax = 128;
  c.filter = scan::Filter::three_valued;
  for (const auto& j : parse_lines(run_to_string(c)))
    if (j["type"] == "record") {
      EXPECT_TRUE(j["three_valued"].get<bool>());
    }
  c.filter = scan::Filter::nondegenerate;
  for (const auto& j : parse_lines(run_to_string(c)))
    if (j["type"] == "record") {
      EXPECT_FALSE(j["degenerate"].get<bool>());
    }
}

TEST(Scan, ResumeAfterInterruption) {
  scan::ScanConfig c;
  c.primes = {2, 3};
  c.qmax = 243;
  c.output_path = temp_path("full.jsonl").string();
  fs::remove(c.output_path);
  std::ostringstream sink, log;
  scan::run_scan(c, sink, log);
  const auto full = read_file(c.output_path);
  EXPECT_TRUE(sink.str().empty());

  auto rng = oracle::make_rng(50);
  for (int trial = 0; trial < 5; ++trial) {
    const auto partial = temp_path("partial.jsonl");
    const std::size_t cut = rng() % full.size();
    std::ofstream(partial, std::ios::binary) << full.substr(0, cut);  // may end mid-line
    c.output_path = partial.string();
    scan::run_scan(c, sink, log);
    EXPECT_EQ(strip_timing(read_file(partial)), strip_timing(full)) << "cut at " << cut;
    // A second resume is a no-op.
    const auto r = scan::run_scan(c, sink, log);
    EXPECT_EQ(r.records_written, 0u);
    EXPECT_EQ(strip_timing(read_file(partial)), strip_timing(full));
  }
}

TEST(Scan, CsvExport) {
  scan::ScanConfig c;
  c.primes = {2};
  c.qmax = 32;
  c.csv_path = temp_path("summary.csv").string();
  run_to_string(c);
  const auto csv = read_file(c.csv_path);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "p,n,q,d,degenerate,value_count,three_valued,min_valuation,celine_case,pass");
  EXPECT_NE(csv.find("2,5,32,11,false,3,true,3/1,case_i,true"), std::string::npos);
}

TEST(Verify, SuitesPass) {
  scan::VerifyOptions o;
  o.qmax = 32;
  for (const auto& s : scan::verify_suites()) {
    o.suite = s;
    std::ostringstream out;
    EXPECT_TRUE(scan::run_verify(o, out)) << s << "\n" << out.str();
  }
  o.suite = "nope";
  std::ostringstream out;
  EXPECT_THROW(scan::run_verify(o, out), std::invalid_argument);
}

TEST(Cli, Spectrum) {
  auto r = run_cli("spectrum --p 2 --n 5 --d 13");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j["three_valued"].get<bool>());
  EXPECT_EQ(j["entries"], json::parse(R"([["-8",6],["0",15],["8",10]])"));
  r = run_cli("spectrum --p 3 --n 2 --d 1");
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(json::parse(r.out)["degenerate"].get<bool>());
  EXPECT_EQ(run_cli("spectrum --p 3 --n 2 --d 2").code, 2);
  EXPECT_EQ(run_cli("spectrum --p 4 --n 2 --d 1").code, 2);
  EXPECT_EQ(run_cli("spectrum --p 2 --n 5").code, 2);
  EXPECT_EQ(run_cli("").code, 2);
  EXPECT_EQ(run_cli("spectrum --p 2 --n 10 --d 5 --method fast --audit 10").code, 0);
}

TEST(Cli, VerifyAndTower) {
  EXPECT_EQ(run_cli("verify --suite algebra --qmax 27").code, 0);
  EXPECT_EQ(run_cli("verify --suite congruence --qmax 128").code, 0);
  EXPECT_EQ(run_cli("verify --suite bogus").code, 2);
  auto r = run_cli("verify --suite towers --p 3 --n 4");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("[towers] henry: PASS"), std::string::npos);
  r = run_cli("tower --p 2 --n 4 --d 7");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["type"], "tower");
  EXPECT_TRUE(j["pass"].get<bool>());
  r = run_cli("tower --p 2 --n 3");
  ASSERT_EQ(r.code, 0);
  for (const auto& t : parse_lines(r.out)) {
    ASSERT_EQ(t["pairs"].size(), 1u);
    EXPECT_EQ(t["pairs"][0]["k"], 1);
    EXPECT_EQ(t["pairs"][0]["l"], 3);
  }
}

TEST(Cli, ScanConfigOverriddenByFlags) {
  const auto cfg = temp_path("scan.cfg");
  const auto out = temp_path("cli.jsonl");
  fs::remove(out);
  std::ofstream(cfg) << "p = 3\nqmax = 9\nfilter = three_valued\n";
  auto r = run_cli("scan --config " + cfg.string() + " --p 2 --qmax 32 --out " + out.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  const auto lines = parse_lines(read_file(out));
  ASSERT_FALSE(lines.empty());
  for (const auto& j : lines) {
    EXPECT_EQ(j["p"], 2);
    if (j["type"] == "record") {
      EXPECT_TRUE(j["three_valued"].get<bool>());
    }
  }
  EXPECT_EQ(run_cli("scan --p 2 --qmax 8 --filter nope").code, 2);
}
