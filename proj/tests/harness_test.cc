#include <gtest/gtest.h>

#include "json.hpp"

#include "conjtm/composer.h"
#include "conjtm/harness.h"

namespace conjtm {
namespace {

const std::string kData = CONJTM_DATA_DIR;

std::vector<Scenario> pick(const std::vector<Scenario>& all, const std::vector<std::string>& names) {
  std::vector<Scenario> out;
  for (const auto& n : names) {
    for (const auto& s : all) {
      if (s.name == n) out.push_back(s);
    }
  }
  return out;
}

Scenario one(std::string_view text) {
  auto v = parse_scenarios(text, kData);
  EXPECT_EQ(v.size(), 1u);
  return v.at(0);
}

TEST(ScenarioParseTest, AllDirectives) {
  auto v = parse_scenarios(
      "# leading comment\n"
      "scenario a\nmachine x.manifest#square  # section only\nentry square.0\n"
      "tape unary 3 4\nhead right 1\nlimit steps=99 cells=1000\nstop prime.1\n"
      "expect oracle square 9 prefix 8\n"
      "scenario b\nmachine t.tbl\ntape window 0 1 1\nexpect snapshot -1..1 0 1 0\n",
      "/base");
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].machine_ref, "x.manifest#square");
  EXPECT_EQ(v[0].base_dir, "/base");
  EXPECT_EQ(v[0].tape.blocks, (std::vector<Natural>{3, 4}));
  EXPECT_EQ(v[0].head->kind, HeadRule::Kind::BlockRight);
  EXPECT_EQ(v[0].limits.max_steps, 99u);
  EXPECT_EQ(v[0].limits.max_support_cells, 1000u);
  EXPECT_EQ(v[0].stops, std::vector<std::string>{"prime.1"});
  auto& o = std::get<ExpectOracle>(v[0].expect);
  EXPECT_EQ(o.name, "square");
  EXPECT_EQ(o.prefix, std::vector<Natural>{8});
  auto& s = std::get<ExpectSnapshot>(v[1].expect);
  EXPECT_EQ(s.first, -1);
  EXPECT_EQ(s.symbols.size(), 3u);
}

TEST(ScenarioParseTest, Errors) {
  EXPECT_THROW(parse_scenarios("machine x\n"), ParseError);
  EXPECT_THROW(parse_scenarios("scenario a\nexpect halted\n"), ParseError);
  EXPECT_THROW(parse_scenarios("scenario a\nmachine m\n"), ParseError);
  EXPECT_THROW(parse_scenarios("scenario a\nmachine m\nexpect oracle nope 3\n"), ParseError);
  EXPECT_THROW(parse_scenarios("scenario a\nmachine m\nexpect snapshot 0..3 0 1\n"), ParseError);
  EXPECT_THROW(parse_scenarios("scenario a\nmachine m\ntape unary 0\nexpect halted\n"), ParseError);
  EXPECT_THROW(parse_scenarios("scenario a\nmachine m\nexpect halted\nexpect nothalt\n"), ParseError);
}

TEST(RunScenarioTest, SquareOfTwo) {
  MachineResolver r;
  Report rep = run_scenario(one("scenario s\nmachine fermat.manifest\nentry square.0\n"
                                "tape unary 2\nstop prime.1\nexpect transfer prime.1 values 5\n"),
                            r);
  EXPECT_TRUE(rep.passed) << format_report(rep);
}

TEST(RunScenarioTest, StandaloneSquareSectionExitsAtNM) {
  MachineResolver r;
  Report rep = run_scenario(
      one("scenario s\nmachine fermat.manifest#square\ntape unary 2\nexpect oracle square_plus_one 2\n"), r);
  EXPECT_TRUE(rep.passed) << format_report(rep);
  EXPECT_EQ(rep.final_state, "NM");
}

TEST(RunScenarioTest, NineTransfersEight) {
  MachineResolver r;
  Report rep = run_scenario(one("scenario s\nmachine fermat.manifest\nentry prime.1\n"
                                "tape unary 9\nexpect transfer square.0 values 8\n"),
                            r);
  EXPECT_TRUE(rep.passed) << format_report(rep);
}

TEST(RunScenarioTest, FailureCarriesObservedAndExpected) {
  MachineResolver r;
  Report rep = run_scenario(one("scenario s\nmachine fermat.manifest\nentry prime.1\n"
                                "tape unary 9\nexpect transfer square.0 values 7\n"),
                            r);
  EXPECT_FALSE(rep.passed);
  EXPECT_EQ(rep.observed, "entered(square.0)[8]");
  EXPECT_EQ(rep.expected, "entered(square.0)[7]");
  EXPECT_EQ(format_report(rep).rfind("FAIL s steps=", 0), 0u);
}

TEST(RunScenarioTest, UnknownEntryThrows) {
  MachineResolver r;
  EXPECT_THROW(run_scenario(one("scenario s\nmachine fermat.manifest\nentry nope\nexpect halted\n"), r),
               std::invalid_argument);
}

TEST(RunSuiteTest, Empty) {
  SuiteResult r = run_suite({});
  EXPECT_TRUE(r.reports.empty());
  EXPECT_TRUE(r.ok());
}

TEST(RunSuiteTest, PrimesHalt) {
  auto all = load_scenarios(kData + "/scenarios/fermat.scn");
  SuiteResult r = run_suite(pick(all, {"prime_5", "prime_7", "prime_11", "prime_13"}));
  ASSERT_EQ(r.reports.size(), 4u);
  for (const auto& rep : r.reports) {
    EXPECT_TRUE(rep.passed) << format_report(rep);
    EXPECT_EQ(rep.outcome, OutcomeKind::Halted);
  }
}

TEST(RunSuiteTest, BrocardSquareCheck) {
  auto all = load_scenarios(kData + "/scenarios/brocard.scn");
  SuiteResult r = run_suite(pick(all, {"square_check_25", "square_check_26"}));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.reports[0].outcome, OutcomeKind::Halted);
  EXPECT_EQ(r.reports[1].outcome, OutcomeKind::EnteredStopState);
  EXPECT_EQ(r.reports[1].final_state, "brocard.Kf");
}

TEST(RunSuiteTest, OrderAndDeterminismAcrossJobs) {
  auto all = load_scenarios(kData + "/scenarios/brocard.scn");
  std::vector<Scenario> quick;
  for (const auto& s : all) {
    if (s.name != "composed_no_halt") quick.push_back(s);
  }
  SuiteResult one_job = run_suite(quick, 1);
  SuiteResult four_jobs = run_suite(quick, 4);
  EXPECT_TRUE(one_job.ok());
  EXPECT_EQ(summary_json(one_job, true), summary_json(four_jobs, true));
  for (std::size_t i = 0; i < quick.size(); ++i) EXPECT_EQ(four_jobs.reports[i].name, quick[i].name);
}

TEST(RunSuiteTest, LoadErrorsBecomeFailures) {
  auto v = parse_scenarios("scenario s\nmachine missing.manifest\nexpect halted\n", kData);
  SuiteResult r = run_suite(v);
  EXPECT_EQ(r.failed, 1u);
  EXPECT_EQ(r.reports[0].observed.rfind("error:", 0), 0u);
}

TEST(DiffTapeTest, Cases) {
  Tape t;
  t.write(1, Symbol::One);
  EXPECT_EQ(diff_tape(t, parse_symbols("0 1 0"), 0), std::nullopt);
  EXPECT_EQ(diff_tape(t, parse_symbols("0 1 1"), 0), Cell{2});
  EXPECT_EQ(diff_tape(t, parse_symbols("1 1"), 0), Cell{0});
}

TEST(DiffTapeTest, BrocardFiveSteps) {
  Machine m = load_machine(kData + "/brocard.manifest");
  RunLimits limits;
  limits.max_steps = 5;
  RunOutcome r = run(m, initial_configuration(m), limits);
  EXPECT_EQ(diff_tape(r.final.tape, parse_symbols("0 1 1 0 1 1"), -5), std::nullopt);
}

TEST(SummaryTest, JsonShape) {
  SuiteResult r;
  Report a;
  a.name = "a";
  a.passed = true;
  a.steps = 3;
  Report b;
  b.name = "b";
  b.observed = "x";
  b.expected = "y";
  r.reports = {a, b};
  r.passed = 1;
  r.failed = 1;
  auto j = nlohmann::json::parse(summary_json(r, true));
  EXPECT_EQ(j["passed"], 1);
  EXPECT_EQ(j["ok"], false);
  EXPECT_FALSE(j.contains("wall_seconds"));
  EXPECT_EQ(j["reports"][1]["observed"], "x");
  EXPECT_TRUE(nlohmann::json::parse(summary_json(r, false)).contains("wall_seconds"));
  EXPECT_EQ(format_report(a), "PASS a steps=3");
}

}  // namespace
}  // namespace conjtm
