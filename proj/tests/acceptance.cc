// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "conjtm/bb.h"
#include "conjtm/composer.h"
#include "conjtm/engine.h"
#include "conjtm/harness.h"
#include "conjtm/optimizer.h"
#include "conjtm/oracles.h"
#include "conjtm/table.h"

namespace {

using namespace conjtm;

const std::string kData = CONJTM_DATA_DIR;

struct Check {
  bool ok = true;
  std::ostringstream detail;
  void fail(const std::string& what) {
    if (!ok) detail << "; ";
    else detail.str("");
    ok = false;
    detail << what;
  }
};

// Independent of the library oracles.
bool trial_division_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint64_t factorial(unsigned n) {
  std::uint64_t f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

std::vector<Natural> nat(std::initializer_list<std::uint64_t> v) {
  return std::vector<Natural>(v.begin(), v.end());
}

std::vector<Scenario> pick(const std::vector<Scenario>& all, const std::string& prefix) {
  std::vector<Scenario> out;
  for (const auto& s : all) {
    if (s.name.rfind(prefix, 0) == 0) out.push_back(s);
  }
  return out;
}

void suite_into(Check& c, const std::vector<Scenario>& scenarios) {
  SuiteResult r = run_suite(scenarios);
  for (const auto& rep : r.reports) {
    if (!rep.passed) c.fail(format_report(rep));
  }
}

Check snapshots() {
  Check c;
  auto all = load_scenarios(kData + "/scenarios/brocard.scn");
  suite_into(c, pick(all, "five_step_window"));
  suite_into(c, pick(all, "three_factorial_milestone"));
  if (c.ok) c.detail << "window -5..0 after 5 steps = 0 1 1 0 1 1; 3!+1 row at first Xf entry";
  return c;
}

Check fermat_init() {
  Check c;
  Machine m = load_machine(kData + "/fermat.manifest#init");
  RunLimits limits;
  limits.max_steps = 20'000'000'000ULL;
  RunOutcome r = run(m, initial_configuration(m), limits);
  std::string state = r.state ? m.name(*r.state) : "-";
  auto blocks = decode_tape(r.final.tape);
  if (r.kind != OutcomeKind::Halted || state != "NM") {
    c.fail("ended " + to_string(r.kind) + " in " + state);
  }
  if (blocks != nat({65536})) c.fail("tape decodes to [" + format_naturals(blocks) + "]");
  if (c.ok) c.detail << "NM exit with [65536] after " << r.steps() << " steps";
  return c;
}

Check square_section() {
  Check c;
  Machine m = load_machine(kData + "/fermat.manifest#square");
  for (std::uint64_t x = 1; x <= 12; ++x) {
    Configuration start{m.start(), encode_tape(UnaryLayout{{x}, {}}), 0};
    RunOutcome r = run(m, start);
    bool at_nm = r.kind == OutcomeKind::Halted && m.name(*r.state) == "NM";
    auto blocks = decode_tape(r.final.tape);
    if (!at_nm || blocks != nat({x * x + 1})) {
      c.fail("x=" + std::to_string(x) + " gave [" + format_naturals(blocks) + "]");
    }
  }
  if (c.ok) c.detail << "x=1..12 exit at NM with [x^2+1]";
  return c;
}

Check prime_section() {
  Check c;
  Machine m = load_machine(kData + "/fermat.manifest");
  RunOptions stop;
  stop.stop_states = {m.id("square.0")};
  int primes = 0;
  for (std::uint64_t n = 5; n <= 40; ++n) {
    Configuration start{m.id("prime.1"), encode_tape(UnaryLayout{{n}, {}}), 0};
    RunOutcome r = run(m, start, {}, stop);
    auto blocks = decode_tape(r.final.tape);
    if (trial_division_prime(n)) {
      ++primes;
      if (r.kind != OutcomeKind::Halted) c.fail("n=" + std::to_string(n) + " did not halt");
    } else if (r.kind != OutcomeKind::EnteredStopState || blocks != nat({n - 1})) {
      c.fail("n=" + std::to_string(n) + " ended " + to_string(r.kind) + " with [" +
             format_naturals(blocks) + "]");
    }
  }
  if (c.ok) c.detail << primes << " primes halt; composites reach square.0 with [n-1]";
  return c;
}

Check brocard_stages() {
  Check c;
  Machine m = load_machine(kData + "/brocard.manifest");
  RunOptions to_xf;
  to_xf.stop_states = {m.id("brocard.Xf")};
  for (unsigned n = 3; n <= 7; ++n) {
    Configuration start{m.id("brocard.Af"),
                        encode_tape(UnaryLayout{{n - 1, factorial(n - 1)}, {HeadRule::Kind::Offset, -1}}),
                        0};
    RunOutcome r = run(m, start, {}, to_xf);
    auto blocks = decode_tape(r.final.tape);
    if (r.kind != OutcomeKind::EnteredStopState || blocks != nat({n, factorial(n) + 1})) {
      c.fail("factorial n=" + std::to_string(n) + " gave [" + format_naturals(blocks) + "]");
    }
  }
  auto all = load_scenarios(kData + "/scenarios/brocard.scn");
  suite_into(c, pick(all, "square_check"));
  suite_into(c, pick(all, "composed_no_halt"));
  if (c.ok) c.detail << "n!+1 for n=3..7; square checks 25/49/121 halt, 26/50/122 return; no halt in 1e8";
  return c;
}

struct OptimizeResult {
  std::size_t before = 0;
  std::size_t after = 0;
  bool equivalent = false;
  std::vector<std::string> residual;
  std::string finding;
};

OptimizeResult optimize(const std::string& manifest, const std::string& scenarios) {
  Machine m = load_machine(kData + "/" + manifest);
  auto suite = load_scenarios(kData + "/scenarios/" + scenarios);
  Machine merged = apply_merges(m, propose_merges(m, profile_reads(m, suite)));
  MergeVerdict v = verify_merge(m, merged, suite);
  OptimizeResult r{state_count(m), state_count(merged), v.equivalent, residual_one_sided(merged), ""};
  if (!v.findings.empty()) r.finding = v.findings[0].scenario + ": " + v.findings[0].detail;
  return r;
}

Check optimizer() {
  Check c;
  struct Target {
    const char* name;
    const char* manifest;
    const char* scenarios;
    std::size_t limit;
  };
  std::ostringstream summary;
  for (const Target& t : {Target{"Fermat", "fermat.manifest", "fermat.scn", 72},
                          Target{"Brocard", "brocard.manifest", "brocard.scn", 43}}) {
    OptimizeResult r = optimize(t.manifest, t.scenarios);
    summary << t.name << " " << r.before << "->" << r.after << " (target " << t.limit << ")"
            << (r.equivalent ? " equivalent" : " NOT equivalent") << "; ";
    if (!r.equivalent) c.fail(std::string(t.name) + " merge diverges: " + r.finding);
    if (r.after > t.limit) {
      std::string residual;
      for (const auto& s : r.residual) residual += " " + s;
      c.fail(std::string(t.name) + " " + std::to_string(r.after) + " > " + std::to_string(t.limit) +
             ", residual one-sided:" + residual);
    }
  }
  if (c.ok) {
    c.detail << summary.str();
  } else {
    std::string failures = c.detail.str();
    c.detail.str("");
    c.detail << summary.str() << failures;
  }
  return c;
}

Check busy_beaver() {
  Check c;
  BruteForceResult one = brute_force_bb(1, 100);
  BruteForceResult two = brute_force_bb(2, 200);
  if (one.value != std::optional<std::uint64_t>(1) || one.inconclusive) c.fail("BB(1) not 1");
  if (two.value != std::optional<std::uint64_t>(6) || two.inconclusive) {
    c.fail("BB(2) " + (two.value ? std::to_string(*two.value) : std::string("unset")) + " with " +
           std::to_string(two.inconclusive) + " inconclusive");
  }
  auto four = bb_lookup(4);
  if (!four || four->value != 107) c.fail("lookup(4) not 107");

  MachineBuilder b("loop4");
  const char* names[] = {"A", "B", "C", "D"};
  for (int i = 0; i < 4; ++i) b.add(names[i], Symbol::Zero, {Symbol::One, Move::Right, names[(i + 1) % 4]});
  Machine loop = b.build("A");
  RunLimits limits;
  limits.max_steps = 108;
  auto cert = certify_nonhalt(loop, run(loop, initial_configuration(loop), limits));
  if (!cert || !std::holds_alternative<BBBoundBasis>(cert->basis) || !replay_certificate(loop, *cert)) {
    c.fail("no replayable BBBound certificate at 108 steps");
  }
  if (c.ok) {
    c.detail << "BB(1)=1 over " << one.machines << " machines, BB(2)=6 over " << two.machines
             << ", 0 inconclusive; lookup(4)=107; BBBound certificate at 108 steps";
  }
  return c;
}

Check validator() {
  Check c;
  RawTable raw = load_table(kData + "/brocard.tbl");
  auto defects = validate(raw);
  for (const char* state : {"As", "Pf", "Ss"}) {
    bool found = false;
    for (const auto& d : defects) {
      found |= d.kind == DefectKind::ConflictingTransition && d.state == state && d.read == Symbol::Zero;
    }
    if (!found) c.fail(std::string("no read-0 conflict for ") + state);
  }
  auto fixed = validate(apply_overlay(raw, load_overlay(kData + "/brocard.ovl")));
  if (has_errors(fixed)) c.fail("errors remain with the overlay");
  if (c.ok) c.detail << "As/Pf/Ss read-0 conflicts reported; overlay leaves 0 errors";
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    double budget_seconds;
    std::function<Check()> body;
  };
  const std::vector<Criterion> criteria = {
      {1, 1, snapshots},         {2, 300, fermat_init},   {3, 10, square_section},
      {4, 60, prime_section},  {5, 300, brocard_stages}, {6, 1e9, optimizer},
      {7, 60, busy_beaver},    {8, 1e9, validator},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
      c = cr.body();
    } catch (const std::exception& e) {
      c.fail(std::string("error: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > cr.budget_seconds) {
      std::ostringstream msg;
      msg << "took " << secs << " s, budget " << cr.budget_seconds << " s";
      c.fail(msg.str());
    }
    if (!c.ok) ++failed;
    std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << cr.number << ": " << c.detail.str()
              << " [" << secs << " s]" << std::endl;
  }
  std::cout << "SKIP criterion 9: full Fermat verdict on F5 and open-ended searches are not "
               "reproducible here; covered by the property suites"
            << std::endl;
  return failed ? 1 : 0;
}
