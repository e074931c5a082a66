// Execution engine: single steps, bounded runs, cycle detection and traces.

#ifndef CONJTM_ENGINE_H_
#define CONJTM_ENGINE_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "conjtm/machine.h"
#include "conjtm/tape.h"

namespace conjtm {

struct Configuration {
  StateId state = 0;
  Tape tape;
  std::uint64_t steps = 0;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

// Blank tape, head at cell 0, machine start state.
Configuration initial_configuration(const Machine& machine);

struct HaltEvent {
  Configuration config;
};

// Pure single step. A HaltEvent carries the configuration unchanged.
std::variant<Configuration, HaltEvent> step(const Machine& machine, const Configuration& config);

// In-place single step; false when the machine halts instead.
bool advance(const Machine& machine, Configuration& config);

struct RunLimits {
  std::uint64_t max_steps = 100'000'000;
  std::uint64_t max_support_cells = std::uint64_t{1} << 22;
  bool cycle_check = false;
};

enum class OutcomeKind {
  Halted,
  StepLimitExceeded,
  CycleDetected,
  MemoryLimitExceeded,
  // A run given stop states ended because one of them was entered.
  EnteredStopState,
};

std::string to_string(OutcomeKind kind);

struct RunOutcome {
  OutcomeKind kind = OutcomeKind::Halted;
  Configuration final;
  // Halted: the state whose lookup failed. EnteredStopState: the state entered.
  std::optional<StateId> state;
  // CycleDetected: the configuration at first_visit recurs every period steps.
  std::uint64_t first_visit = 0;
  std::uint64_t period = 0;

  std::uint64_t steps() const { return final.steps; }
};

using TraceSink = std::function<void(const Configuration&)>;

struct RunOptions {
  std::vector<StateId> stop_states;
  // Called with the starting configuration and after every transition.
  TraceSink trace;
  // When set, must hold 2 * num_names() entries; entry 2 * state + read is set
  // to 1 for every lookup, including the one that halts.
  std::vector<std::uint8_t>* observed = nullptr;
};

// Runs until halt, stop state, or a limit. Throws MachineError when the
// configuration's state does not belong to the machine.
RunOutcome run(const Machine& machine, Configuration initial, const RunLimits& limits = {},
               const RunOptions& options = {});

// State plus the One cells relative to the head. Equality is exact; digest()
// is a 64-bit hash of the same data.
struct Fingerprint {
  StateId state = 0;
  Cell offset = 0;  // first One cell minus head
  std::vector<std::uint8_t> cells;

  std::uint64_t digest() const;
  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

Fingerprint fingerprint(const Configuration& config);

std::vector<Symbol> snapshot(const Tape& tape, Cell first, Cell last);
std::string format_symbols(const std::vector<Symbol>& symbols);
// Parses "0 1 1 0" or "0110".
std::vector<Symbol> parse_symbols(std::string_view text);

// Writes `step<TAB>state<TAB>head<TAB>window` lines.
TraceSink make_trace_printer(std::ostream& out, const Machine& machine, Cell first, Cell last);

}  // namespace conjtm

#endif  // CONJTM_ENGINE_H_
