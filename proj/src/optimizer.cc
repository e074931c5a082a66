#include "conjtm/optimizer.h"

#include <sstream>
#include <stdexcept>

#include "conjtm/table.h"

namespace conjtm {
namespace {

std::vector<std::string> tokens(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

const std::set<Symbol>& observed_at(const ReadProfile& profile, const std::string& name) {
  static const std::set<Symbol> kEmpty;
  auto it = profile.observed.find(name);
  return it == profile.observed.end() ? kEmpty : it->second;
}

// Replays both runs step by step; returns the first step count at which the
// configurations differ, or the step at which one run stops and the other
// does not.
std::optional<std::uint64_t> lockstep(const Machine& a, const Machine& b,
                                      const std::vector<StateId>& a_to_b, Configuration ca,
                                      Configuration cb, const std::vector<StateId>& stops_a,
                                      const std::vector<StateId>& stops_b, std::uint64_t limit) {
  auto is_stop = [](const std::vector<StateId>& stops, StateId s) {
    for (StateId x : stops) {
      if (x == s) return true;
    }
    return false;
  };
  for (std::uint64_t i = 0;; ++i) {
    if (a_to_b[ca.state] != cb.state || !(ca.tape == cb.tape)) return ca.steps;
    if (i > 0 && (is_stop(stops_a, ca.state) || is_stop(stops_b, cb.state))) {
      if (is_stop(stops_a, ca.state) != is_stop(stops_b, cb.state)) return ca.steps;
      return std::nullopt;
    }
    if (i == limit) return std::nullopt;
    bool ma = advance(a, ca);
    bool mb = advance(b, cb);
    if (ma != mb) return ca.steps + (ma ? 0 : 1);
    if (!ma) return std::nullopt;
  }
}

}  // namespace

bool is_zero_only(const Machine& machine, StateId state) {
  return machine.transition(state, Symbol::Zero) && !machine.transition(state, Symbol::One);
}

bool is_one_only(const Machine& machine, StateId state) {
  return machine.transition(state, Symbol::One) && !machine.transition(state, Symbol::Zero);
}

ReadProfile profile_reads(const Machine& machine, const std::vector<Scenario>& scenarios,
                          std::uint64_t step_cap) {
  ReadProfile profile;
  std::vector<std::uint8_t> seen(2 * machine.num_names(), 0);
  for (const auto& s : scenarios) {
    RunLimits l = s.limits;
    l.max_steps = std::min(l.max_steps, step_cap);
    RunOptions options;
    options.stop_states = scenario_stops(s, machine);
    options.observed = &seen;
    RunOutcome out = run(machine, scenario_start(s, machine), l, options);
    profile.coverage.emplace_back(s.name, out.steps());
    for (StateId id : options.stop_states) profile.pinned.insert(machine.name(id));
  }
  for (StateId id : machine.defined_states()) {
    auto& set = profile.observed[machine.name(id)];
    if (seen[2 * id]) set.insert(Symbol::Zero);
    if (seen[2 * id + 1]) set.insert(Symbol::One);
  }
  return profile;
}

std::string serialize(const MergePlan& plan) {
  std::string out;
  for (const auto& p : plan.pairs) {
    out += "merge " + p.zero_state + " " + p.one_state + " as " + p.merged_name;
    if (p.basis == MergeBasis::Profile) out += " profile";
    out += '\n';
  }
  return out;
}

MergePlan parse_plan(std::string_view text) {
  MergePlan plan;
  std::istringstream in{std::string(text)};
  int number = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos && (hash == 0 || raw[hash - 1] == ' '))
      raw.resize(hash);
    auto w = tokens(raw);
    if (w.empty()) continue;
    if (w[0] != "merge" || (w.size() != 5 && w.size() != 6) || w[3] != "as" ||
        (w.size() == 6 && w[5] != "profile")) {
      throw ParseError(number, "merge <zeroState> <oneState> as <name> [profile]");
    }
    plan.pairs.push_back(MergePair{w[1], w[2], w[4],
                                   w.size() == 6 ? MergeBasis::Profile : MergeBasis::Structural});
  }
  return plan;
}

MergePlan propose_merges(const Machine& machine, const ReadProfile& profile,
                         const MergeOptions& options) {
  const StateId start = machine.start();
  // Only candidates whose profile never shows the read they lack a row for.
  auto usable = [&](StateId s, Symbol missing) {
    const std::string& name = machine.name(s);
    if (profile.pinned.count(name)) return false;
    const auto& seen = observed_at(profile, name);
    if (seen.count(missing)) return false;
    // The start state is entered without a transition, so a scenario-free
    // pairing could hide its first read.
    if (s == start && seen.empty()) return false;
    return true;
  };
  std::vector<StateId> zero_structural, one_structural, zero_profile, one_profile;
  for (StateId s : machine.defined_states()) {
    if (is_zero_only(machine, s)) {
      if (usable(s, Symbol::One)) zero_structural.push_back(s);
    } else if (is_one_only(machine, s)) {
      if (usable(s, Symbol::Zero)) one_structural.push_back(s);
    } else if (options.use_profile && !profile.pinned.count(machine.name(s))) {
      const auto& seen = observed_at(profile, machine.name(s));
      if (seen.size() == 1) {
        (seen.count(Symbol::Zero) ? zero_profile : one_profile).push_back(s);
      }
    }
  }

  MergePlan plan;
  auto pair_up = [&](std::vector<StateId>& zeros, std::vector<StateId>& ones, MergeBasis basis) {
    std::size_t n = std::min(zeros.size(), ones.size());
    for (std::size_t i = 0; i < n; ++i) {
      const std::string& z = machine.name(zeros[i]);
      const std::string& o = machine.name(ones[i]);
      plan.pairs.push_back(MergePair{z, o, z + "+" + o, basis});
    }
    zeros.erase(zeros.begin(), zeros.begin() + static_cast<std::ptrdiff_t>(n));
    ones.erase(ones.begin(), ones.begin() + static_cast<std::ptrdiff_t>(n));
  };
  pair_up(zero_structural, one_structural, MergeBasis::Structural);
  if (options.use_profile) {
    // Leftover structural states pair with profile candidates, then profile
    // candidates with each other.
    pair_up(zero_structural, one_profile, MergeBasis::Profile);
    pair_up(zero_profile, one_structural, MergeBasis::Profile);
    pair_up(zero_profile, one_profile, MergeBasis::Profile);
  }
  return plan;
}

Machine apply_merges(const Machine& machine, const MergePlan& plan) {
  std::vector<std::string> rename(machine.num_names());
  for (StateId s = 0; s < machine.num_names(); ++s) rename[s] = machine.name(s);
  std::vector<int> role(machine.num_names(), -1);  // 0: zero side, 1: one side
  std::vector<StateId> partner(machine.num_names(), 0);

  for (const auto& p : plan.pairs) {
    auto z = machine.find(p.zero_state);
    auto o = machine.find(p.one_state);
    if (!z || !o) {
      throw std::invalid_argument("merge names an unknown state: " + p.zero_state + ", " +
                                  p.one_state);
    }
    if (*z == *o || role[*z] != -1 || role[*o] != -1) {
      throw std::invalid_argument("state appears in more than one merge: " + p.merged_name);
    }
    bool ok = p.basis == MergeBasis::Structural
                  ? is_zero_only(machine, *z) && is_one_only(machine, *o)
                  : machine.transition(*z, Symbol::Zero) && machine.transition(*o, Symbol::One);
    if (!ok) {
      throw std::invalid_argument("merge " + p.zero_state + " + " + p.one_state +
                                  " violates the one-sided definition condition");
    }
    if (p.merged_name != machine.name(*z) && p.merged_name != machine.name(*o) &&
        machine.find(p.merged_name)) {
      throw std::invalid_argument("merged name '" + p.merged_name + "' is already a state");
    }
    role[*z] = 0;
    role[*o] = 1;
    partner[*z] = *o;
    partner[*o] = *z;
    rename[*z] = rename[*o] = p.merged_name;
  }

  MachineBuilder builder(machine.label());
  for (StateId s = 0; s < machine.num_names(); ++s) builder.declare(rename[s]);
  for (StateId s = 0; s < machine.num_names(); ++s) {
    for (Symbol r : {Symbol::Zero, Symbol::One}) {
      // A merged state takes read 0 from its zero side and read 1 from its
      // one side.
      if (role[s] == 0 && r == Symbol::One) continue;
      if (role[s] == 1 && r == Symbol::Zero) continue;
      if (const Transition* t = machine.transition(s, r)) {
        builder.add(rename[s], r, Action{t->write, t->move, rename[t->target]});
      }
    }
  }
  for (const auto& [old_name, id] : machine.aliases()) builder.alias(old_name, rename[id]);
  for (StateId s = 0; s < machine.num_names(); ++s) {
    if (role[s] != -1 && rename[s] != machine.name(s)) builder.alias(machine.name(s), rename[s]);
  }
  return builder.build(rename[machine.start()]);
}

MergeVerdict verify_merge(const Machine& original, const Machine& merged,
                          const std::vector<Scenario>& scenarios, std::uint64_t step_cap) {
  MergeVerdict verdict;
  verdict.scenarios = scenarios.size();
  std::vector<StateId> to_merged(original.num_names());
  for (StateId s = 0; s < original.num_names(); ++s) {
    auto id = merged.find(original.name(s));
    if (!id) {
      verdict.equivalent = false;
      verdict.findings.push_back({"", "state '" + original.name(s) + "' has no counterpart", {}});
      return verdict;
    }
    to_merged[s] = *id;
  }
  for (const auto& s : scenarios) {
    RunLimits l = s.limits;
    l.max_steps = std::min(l.max_steps, step_cap);
    Configuration ca = scenario_start(s, original);
    Configuration cb = scenario_start(s, merged);
    RunOptions oa, ob;
    oa.stop_states = scenario_stops(s, original);
    ob.stop_states = scenario_stops(s, merged);
    RunOutcome a = run(original, ca, l, oa);
    RunOutcome b = run(merged, cb, l, ob);
    std::string detail;
    if (a.kind != b.kind) {
      detail = "outcome " + to_string(a.kind) + " vs " + to_string(b.kind);
    } else if (a.steps() != b.steps()) {
      detail = "steps " + std::to_string(a.steps()) + " vs " + std::to_string(b.steps());
    } else if (to_merged[a.final.state] != b.final.state) {
      detail = "final state " + original.name(a.final.state) + " vs " + merged.name(b.final.state);
    } else if (!(a.final.tape == b.final.tape)) {
      detail = "final tape differs";
    }
    if (detail.empty()) continue;
    verdict.equivalent = false;
    std::uint64_t horizon = std::max(a.steps(), b.steps());
    verdict.findings.push_back(MergeFinding{
        s.name, detail,
        lockstep(original, merged, to_merged, ca, cb, oa.stop_states, ob.stop_states, horizon)});
  }
  return verdict;
}

std::vector<std::string> residual_one_sided(const Machine& machine) {
  std::vector<std::string> out;
  for (StateId s : machine.defined_states()) {
    if (is_zero_only(machine, s) || is_one_only(machine, s)) out.push_back(machine.name(s));
  }
  return out;
}

}  // namespace conjtm
