// State merging: a state that only ever reads 0 and a state that only ever
// reads 1 become one state carrying both behaviours.
//
// Plan file format, one pair per line:
//
//   merge <zeroState> <oneState> as <mergedName> [profile]
//
// "profile" marks a pair found from observed reads rather than missing rows;
// applying it drops the action the scenarios never exercised.

#ifndef CONJTM_OPTIMIZER_H_
#define CONJTM_OPTIMIZER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "conjtm/engine.h"
#include "conjtm/harness.h"
#include "conjtm/machine.h"

namespace conjtm {

struct ReadProfile {
  // Every defined state has an entry; never-entered states map to {}.
  // Includes the lookup that halts a run.
  std::map<std::string, std::set<Symbol>> observed;
  std::vector<std::pair<std::string, std::uint64_t>> coverage;  // scenario, steps
  // Stop states of the suite. Merging one would move a section boundary.
  std::set<std::string> pinned;
};

inline constexpr std::uint64_t kNoStepCap = ~std::uint64_t{0};

// Each scenario runs under its own limits, capped by step_cap.
ReadProfile profile_reads(const Machine& machine, const std::vector<Scenario>& scenarios,
                          std::uint64_t step_cap = kNoStepCap);

// Structurally one-sided: exactly one of the two actions defined.
bool is_zero_only(const Machine& machine, StateId state);
bool is_one_only(const Machine& machine, StateId state);

enum class MergeBasis { Structural, Profile };

struct MergePair {
  std::string zero_state;
  std::string one_state;
  std::string merged_name;
  MergeBasis basis = MergeBasis::Structural;
  friend bool operator==(const MergePair&, const MergePair&) = default;
};

struct MergePlan {
  std::vector<MergePair> pairs;
  friend bool operator==(const MergePlan&, const MergePlan&) = default;
};

std::string serialize(const MergePlan& plan);
MergePlan parse_plan(std::string_view text);

struct MergeOptions {
  bool use_profile = true;  // also pair states whose profile shows one read
};

// Greedy in table order: structural pairs first, then profile candidates.
MergePlan propose_merges(const Machine& machine, const ReadProfile& profile,
                         const MergeOptions& options = {});

// Old names stay resolvable as aliases of the merged state. Throws
// std::invalid_argument for an invalid pair.
Machine apply_merges(const Machine& machine, const MergePlan& plan);

struct MergeFinding {
  std::string scenario;
  std::string detail;
  std::optional<std::uint64_t> first_differing_step;
};

struct MergeVerdict {
  bool equivalent = true;
  std::size_t scenarios = 0;
  std::vector<MergeFinding> findings;
};

// Runs every scenario on both machines and compares outcome kind, step count,
// final state and final tape. On a mismatch the two runs are replayed in
// lockstep to find the first step that differs.
MergeVerdict verify_merge(const Machine& original, const Machine& merged,
                          const std::vector<Scenario>& scenarios,
                          std::uint64_t step_cap = kNoStepCap);

// One-sided states left after merging, for reports.
std::vector<std::string> residual_one_sided(const Machine& machine);

}  // namespace conjtm

#endif  // CONJTM_OPTIMIZER_H_
