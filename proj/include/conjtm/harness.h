// Scenario files, scenario runs, and reports.
//
// Scenario file format, one stanza per scenario:
//
//   scenario <name>
//   machine <ref>          manifest (composed), manifest#label (one section),
//                          or a table file; relative to the scenario file
//   entry <state>          default: the machine's start state
//   tape blank | unary <n...> | window <symbols>
//   head left <block> | right <block> | offset <cell>
//   limit steps=<n> cells=<n>
//   stop <state>           may repeat
//   expect halted
//   expect nothalt
//   expect transfer <state> values <n...>
//   expect snapshot <first>..<last> <symbols>
//   expect oracle <name> <arg> [prefix <n...>]
//
// Unary blocks start at cell 0; windows are written from cell 0. The head
// defaults to the left end of the first block, or cell 0.
//
// An oracle expectation passes when the run ends by halting or by entering a
// stop state (or an unresolved NM exit) and the tape decodes to
// prefix ++ [value]. Verdict oracles must halt when the verdict holds and
// otherwise exit with prefix ++ [arg - 1].

#ifndef CONJTM_HARNESS_H_
#define CONJTM_HARNESS_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "conjtm/engine.h"
#include "conjtm/machine.h"
#include "conjtm/oracles.h"

namespace conjtm {

struct TapeSpec {
  enum class Kind { Blank, Unary, Window };
  Kind kind = Kind::Blank;
  std::vector<Natural> blocks;
  std::vector<Symbol> window;
};

struct ExpectHalted {};
struct ExpectNotHalted {};
struct ExpectTransfer {
  std::string state;
  std::vector<Natural> values;
};
struct ExpectSnapshot {
  Cell first = 0;
  Cell last = 0;
  std::vector<Symbol> symbols;
};
struct ExpectOracle {
  std::string name;
  Natural arg;
  std::vector<Natural> prefix;
};

using Expectation =
    std::variant<ExpectHalted, ExpectNotHalted, ExpectTransfer, ExpectSnapshot, ExpectOracle>;

struct Scenario {
  std::string name;
  std::string machine_ref;  // resolved against base_dir
  std::string base_dir;
  std::string entry;        // empty: machine start
  TapeSpec tape;
  std::optional<HeadRule> head;
  RunLimits limits;
  std::vector<std::string> stops;
  Expectation expect;
};

std::vector<Scenario> parse_scenarios(std::string_view text, const std::string& base_dir = ".");
std::vector<Scenario> load_scenarios(const std::string& path);

std::string describe(const Expectation& expectation);

// Loads and caches machines by reference. Thread safe.
class MachineResolver {
 public:
  std::shared_ptr<const Machine> resolve(const Scenario& scenario);
  std::shared_ptr<const Machine> resolve(const std::string& path);

 private:
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<const Machine>> cache_;
};

// Loads a manifest (composed), manifest#label, or table file.
Machine load_machine(const std::string& ref);

// The scenario's starting configuration and stop states on a given machine.
// Names resolve through merge aliases. Throws std::invalid_argument for an
// unknown state.
Configuration scenario_start(const Scenario& scenario, const Machine& machine);
std::vector<StateId> scenario_stops(const Scenario& scenario, const Machine& machine);

struct Report {
  std::string name;
  bool passed = false;
  OutcomeKind outcome = OutcomeKind::Halted;
  std::string final_state;
  std::uint64_t steps = 0;
  std::string observed;  // set on failure
  std::string expected;  // set on failure
  std::optional<Cell> first_divergence;
  double wall_seconds = 0;
};

Report run_scenario(const Scenario& scenario, const Machine& machine);
Report run_scenario(const Scenario& scenario, MachineResolver& resolver);

struct SuiteResult {
  std::vector<Report> reports;  // in scenario order
  std::size_t passed = 0;
  std::size_t failed = 0;
  double wall_seconds = 0;
  bool ok() const { return failed == 0; }
};

SuiteResult run_suite(const std::vector<Scenario>& suite, unsigned jobs = 1);

// First cell in [first, first + expected.size()) whose symbol differs.
std::optional<Cell> diff_tape(const Tape& observed, const std::vector<Symbol>& expected,
                              Cell first);

// `PASS|FAIL <name> steps=<n> [observed=... expected=...]`
std::string format_report(const Report& report);
// Machine-readable summary; wall times are omitted when deterministic.
std::string summary_json(const SuiteResult& result, bool deterministic);

}  // namespace conjtm

#endif  // CONJTM_HARNESS_H_
