#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include "wtc/claims.hpp"
#include "wtc/config.hpp"
#include "wtc/error.hpp"
#include "wtc/measure_io.hpp"
#include "wtc/report.hpp"

using namespace wtc;

namespace {

template <class F>
ErrorCode codeOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Usage;
}

const ReportRow* findRow(const ClaimReport& rep, const std::string& param, const std::string& stat) {
  for (const auto& r : rep.rows)
    if (r.param == param && r.statistic == stat) return &r;
  return nullptr;
}

std::string tmpPath(const std::string& name) {
  return std::string(WTC_TEST_TMP) + "/" + name;
}

int runCli(const std::string& args) {
  std::string cmd = std::string(WTC_CLI) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
  Config c = parseConfig("# scan\nminLevel = -3\nshifts=4\nslack = 1.1\nseed=5\n");
  CHECK(c.minLevel == -3);
  CHECK(c.shifts == 4);
  CHECK(c.slack == doctest::Approx(1.1));
  CHECK(c.seed == 5);
  CHECK(c.maxLevel == Config{}.maxLevel);
  CHECK((codeOf([] { parseConfig("nope=1\n"); }) == ErrorCode::ParseError));
  CHECK((codeOf([] { parseConfig("shifts\n"); }) == ErrorCode::ParseError));
  CHECK((codeOf([] { parseConfig("shifts=x\n"); }) == ErrorCode::ParseError));
}

TEST_CASE("csv round trip") {
  std::vector<ReportRow> rows{{"c", "1", "s", 0.1, 2.5, "HOLDS"},
                              {"c", "2", "s", 1.0 / 3, std::nullopt, "FAIL"}};
  auto text = toCsv(rows);
  CHECK(text.rfind(std::string(kCsvHeader), 0) == 0);
  auto back = parseCsv(text);
  REQUIRE(back.size() == 2);
  CHECK(back[1].value == 1.0 / 3);
  CHECK(!back[1].bound);
  CHECK(*back[0].bound == 2.5);
  CHECK(toCsv({}) == std::string(kCsvHeader) + "\n");
  CHECK((codeOf([] { parseCsv("a,b\n"); }) == ErrorCode::ParseError));
  CHECK((codeOf([] { parseCsv(std::string(kCsvHeader) + "\nx,1,s,notanumber,,OK\n"); }) ==
        ErrorCode::ParseError));
  CHECK((codeOf([] { parseCsv(std::string(kCsvHeader) + "\nx,1,s\n"); }) == ErrorCode::ParseError));
}

TEST_CASE("svg output is deterministic") {
  std::vector<ReportRow> one{{"c", "1", "s", 2, std::nullopt, "HOLDS"}};
  auto a = plotSvg(one);
  CHECK(a == plotSvg(one));
  CHECK(a.find("<svg") != std::string::npos);
  CHECK(a.find("<circle") != std::string::npos);
  std::vector<ReportRow> two{{"c", "1", "a", 1, std::nullopt, ""}, {"c", "2", "a", 2, std::nullopt, ""},
                             {"c", "1", "b", 3, std::nullopt, ""}, {"c", "2", "b", 9, std::nullopt, ""}};
  auto s = plotSvg(two, {true});
  CHECK(s.find("c:a") != std::string::npos);
  CHECK(s.find("c:b") != std::string::npos);
}

TEST_CASE("claim registry covers the manifest") {
  const std::set<std::string> manifest{
      "ap-not-t1",         "t1-not-t2",          "t2-equiv-t1",           "doubling-ap-equiv",
      "cp-not-ainfty",     "cp-smalldoubling-ainfty", "sawyer-ainfty",    "ainfty-pivotal",
      "pivotal-not-t1",    "energy-le-pivotal",  "smalldoubling-pivotal", "gks-afrac-doubling",
      "doubling-energy-floor", "powerweight-ap", "dual-pivotal-probe"};
  std::set<std::string> ids;
  for (const auto& c : claimRegistry()) {
    CHECK(ids.insert(c.id).second);
    CHECK(!c.stats.empty());
  }
  CHECK(ids == manifest);
  CHECK(claimInfo("dual-pivotal-probe").inconclusive);
  CHECK((codeOf([] { claimInfo("nope"); }) == ErrorCode::UnknownClaim));
  CHECK((codeOf([] { runClaim("nope", std::nullopt, Config{}); }) == ErrorCode::UnknownClaim));
  CHECK((codeOf([] { claimSizes("t1-not-t2", "40"); }) == ErrorCode::CapExceeded));
  CHECK(claimSizes("pivotal-not-t1", "50") == std::vector<std::string>{"50", "200"});
}

TEST_CASE("energy claim passes") {
  auto rep = runClaim("energy-le-pivotal", std::string("1"), Config{});
  CHECK(rep.pass);
  for (const auto& r : rep.rows)
    if (r.statistic == "energyOverPivotal") CHECK(r.value <= 0.5);
}

TEST_CASE("pivotal claim at 50 and 200") {
  auto rep = runClaim("pivotal-not-t1", std::nullopt, Config{});
  CHECK(rep.pass);
  auto a = findRow(rep, "50", "t1"), b = findRow(rep, "200", "t1");
  REQUIRE(a);
  REQUIRE(b);
  double h50 = 0, h200 = 0;
  for (int n = 2; n <= 200; ++n) (n <= 50 ? h50 : h200) += 1.0 / n;
  h200 += h50;
  CHECK(b->value / a->value == doctest::Approx(h200 / h50));
  CHECK(b->value / a->value >= 1.3);
  CHECK(findRow(rep, "200", "pivotalSup")->verdict == "BOUNDED");
}

TEST_CASE("sweeps") {
  auto empty = sweepClaim("pivotal-not-t1", {}, Config{});
  CHECK(toCsv(empty.rows) == std::string(kCsvHeader) + "\n");

  auto pw = sweepClaim("powerweight-ap", {"-1/2", "0", "1/2", "1"}, Config{});
  CHECK(pw.pass);
  CHECK(findRow(pw, "-1/2", "analyticFinite")->value == 1);
  CHECK(findRow(pw, "0", "analyticFinite")->value == 1);
  CHECK(findRow(pw, "1/2", "analyticFinite")->value == 1);
  CHECK(findRow(pw, "1", "analyticFinite")->value == 0);

  auto cp = sweepClaim("cp-not-ainfty", {"1", "2"}, Config{});
  auto w1 = findRow(cp, "1", "aInftyWitness"), w2 = findRow(cp, "2", "aInftyWitness");
  REQUIRE(w1);
  REQUIRE(w2);
  CHECK(w2->value / w1->value >= 1.4);
  CHECK(w1->verdict == "BASE");
}

TEST_CASE("dual pivotal probe is inconclusive") {
  auto rep = runClaim("dual-pivotal-probe", std::string("10"), Config{});
  CHECK(rep.pass);
  for (const auto& r : rep.rows) CHECK(r.verdict == "INCONCLUSIVE");
}

TEST_CASE("cli exit codes and outputs") {
  CHECK(runCli("list") == 0);
  CHECK(runCli("") == 2);
  CHECK(runCli("verify no-such-claim") == 2);
  CHECK(runCli("frobnicate") == 2);

  const auto csv1 = tmpPath("energy1.csv"), csv2 = tmpPath("energy2.csv");
  CHECK(runCli("verify energy-le-pivotal --scale 1 --out " + csv1) == 0);
  CHECK(runCli("verify energy-le-pivotal --scale 1 --out " + csv2) == 0);
  CHECK(slurp(csv1) == slurp(csv2));
  CHECK(!slurp(csv1).empty());

  const auto svg1 = tmpPath("energy1.svg"), svg2 = tmpPath("energy2.svg");
  CHECK(runCli("plot " + csv1 + " --out " + svg1) == 0);
  CHECK(runCli("plot " + csv1 + " --out " + svg2 + "") == 0);
  CHECK(slurp(svg1) == slurp(svg2));
  {
    std::ofstream bad(tmpPath("bad.csv"));
    bad << "not,a,report\n";
  }
  CHECK(runCli("plot " + tmpPath("bad.csv") + " --out " + tmpPath("bad.svg")) == 2);

  const auto m = tmpPath("pair.wtc");
  CHECK(runCli("construct pivotalExamplePair --param N=10 --out " + m) == 0);
  auto omega = loadMeasure(m);
  auto sigma = loadMeasure(m + ".sigma");
  CHECK(omega == Measure::atom(0, 1));
  CHECK(sigma.totalMass() == 54);
  CHECK((runCli("eval oneTailed --omega " + m + " --sigma " + m + ".sigma --interval 0,1") == 0));
  CHECK((runCli("eval nonsense --omega " + m + " --interval 0,1") == 2));
  CHECK(runCli("sup classical --omega " + m + " --sigma " + m + ".sigma --window -1,11 --levels -2..2") == 0);
  CHECK(runCli("construct lebesgue --param bogus=1 --out " + tmpPath("x.wtc")) == 2);

  const auto sweepCsv = tmpPath("sweep.csv");
  CHECK(runCli("sweep pivotal-not-t1 --param N=50..200:150 --out " + sweepCsv) == 0);
  auto rows = parseCsv(slurp(sweepCsv));
  CHECK(rows.size() == 4);
  CHECK(runCli("sweep pivotal-not-t1 --param N=5..4 --out " + sweepCsv) == 0);
  CHECK(slurp(sweepCsv) == std::string(kCsvHeader) + "\n");
}
