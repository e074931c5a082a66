// Busy beaver registry, non-halting certificates, and brute force for n <= 2.
//
// BB(n) here counts every transition executed from a blank tape, including
// the one into the halt state, so the 1-state champion scores 1.
//
// Registry file: lines `bb <n> <value> <source>`, source one of paper,
// computed, configured.
//
// Certificate file:
//
//   certificate
//   machine <ref>
//   steps <n>
//   basis bbbound <n> <value> | basis cycle <firstVisit> <period>
//   end

#ifndef CONJTM_BB_H_
#define CONJTM_BB_H_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "conjtm/engine.h"
#include "conjtm/machine.h"

namespace conjtm {

enum class BBSource { Paper, Computed, Configured };
std::string to_string(BBSource source);

struct BBEntry {
  unsigned n = 0;
  std::uint64_t value = 0;
  BBSource source = BBSource::Configured;
  friend bool operator==(const BBEntry&, const BBEntry&) = default;
};

class RegistryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BBRegistry {
 public:
  // Throws RegistryError when values would not strictly increase with n, or
  // when n is already present with a different value.
  void add(const BBEntry& entry);
  std::optional<BBEntry> lookup(unsigned n) const;
  const std::map<unsigned, BBEntry>& entries() const { return entries_; }

 private:
  std::map<unsigned, BBEntry> entries_;
};

BBRegistry parse_registry(std::string_view text);
BBRegistry load_registry(const std::string& path);
std::string serialize(const BBRegistry& registry);

// The published BB(4) = 107 plus BB(1) and BB(2) computed by brute_force_bb
// on first use.
const BBRegistry& standard_registry();
std::optional<BBEntry> bb_lookup(unsigned n);

struct BBBoundBasis {
  unsigned n = 0;
  std::uint64_t bb_value = 0;
  friend bool operator==(const BBBoundBasis&, const BBBoundBasis&) = default;
};

struct CycleBasis {
  std::uint64_t first_visit = 0;
  std::uint64_t period = 0;
  friend bool operator==(const CycleBasis&, const CycleBasis&) = default;
};

struct NonHaltCertificate {
  std::string machine_ref;
  std::uint64_t steps_observed = 0;
  std::variant<BBBoundBasis, CycleBasis> basis;
  friend bool operator==(const NonHaltCertificate&, const NonHaltCertificate&) = default;
};

// The outcome must come from a run started at initial_configuration(machine).
std::optional<NonHaltCertificate> certify_nonhalt(const Machine& machine, const RunOutcome& outcome,
                                                  const BBRegistry& registry = standard_registry(),
                                                  const std::string& machine_ref = "");

// Replays from a blank tape: a BBBound certificate must survive bb_value + 1
// steps on a machine with n states; a Cycle certificate must reproduce the
// fingerprint after period more steps.
bool replay_certificate(const Machine& machine, const NonHaltCertificate& certificate);

std::string serialize(const NonHaltCertificate& certificate);
NonHaltCertificate parse_certificate(std::string_view text);

struct BruteForceOptions {
  bool mirror_reduction = false;
  unsigned jobs = 1;
};

struct BruteForceResult {
  unsigned n = 0;
  std::uint64_t step_cap = 0;
  std::uint64_t machines = 0;  // enumerated after any reduction
  std::uint64_t halted = 0;
  std::uint64_t cycled = 0;      // exact configuration repeat
  std::uint64_t translated = 0;  // repeats shifted along the tape
  std::uint64_t no_halt_reachable = 0;
  std::uint64_t inconclusive = 0;
  std::uint64_t max_halting_steps = 0;
  // Set only when no machine is inconclusive.
  std::optional<std::uint64_t> value;
  std::optional<Machine> champion;
};

// Enumerates every n-state machine (each (state, read) gets a write, a move
// and a target among the states or HALT) and runs it from a blank tape.
// Throws std::invalid_argument unless n is 1 or 2.
BruteForceResult brute_force_bb(unsigned n, std::uint64_t step_cap,
                                const BruteForceOptions& options = {});

// True when no state reachable from the start in the transition graph has a
// missing action, so no lookup can ever fail.
bool halt_unreachable(const Machine& machine);

// True when the run from a blank tape provably repeats a tape pattern shifted
// along the tape within `steps` steps.
bool detect_translated_cycle(const Machine& machine, std::uint64_t steps);

}  // namespace conjtm

#endif  // CONJTM_BB_H_
