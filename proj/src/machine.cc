#include "conjtm/machine.h"

#include <set>
#include <tuple>

namespace conjtm {

StateId MachineBuilder::intern(std::string_view name) {
  if (name.empty()) throw MachineError("empty state name");
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  auto id = static_cast<StateId>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(std::string(name), id);
  actions_.emplace_back();
  return id;
}

MachineBuilder& MachineBuilder::declare(std::string_view state) {
  intern(state);
  return *this;
}

MachineBuilder& MachineBuilder::add(std::string_view state, Symbol read, Action action) {
  StateId id = intern(state);
  intern(action.target);
  auto& slot = actions_[id][static_cast<int>(read)];
  if (slot && *slot != action) {
    throw MachineError("conflicting transition for (" + std::string(state) + ", " +
                       symbol_char(read) + ")");
  }
  slot = std::move(action);
  return *this;
}

MachineBuilder& MachineBuilder::alias(std::string_view old_name, std::string_view new_name) {
  aliases_.emplace_back(old_name, new_name);
  return *this;
}

Machine MachineBuilder::build(std::string_view start) const {
  Machine m;
  m.label_ = label_;
  m.names_ = names_;
  m.ids_ = ids_;
  m.table_.resize(2 * names_.size());
  for (StateId s = 0; s < names_.size(); ++s) {
    for (int r = 0; r < 2; ++r) {
      if (const auto& a = actions_[s][r]) {
        m.table_[2 * s + r] = Transition{a->write, a->move, ids_.at(a->target)};
      }
    }
  }
  // The start may be a name no row mentions (a degenerate machine).
  if (!m.ids_.count(std::string(start))) {
    if (start.empty()) throw MachineError("machine has no start state");
    auto id = static_cast<StateId>(m.names_.size());
    m.names_.emplace_back(start);
    m.ids_.emplace(std::string(start), id);
    m.table_.resize(2 * m.names_.size());
  }
  m.start_ = m.ids_.at(std::string(start));
  for (const auto& [old_name, new_name] : aliases_) {
    auto it = m.ids_.find(new_name);
    if (it == m.ids_.end()) throw MachineError("alias target '" + new_name + "' is not a state");
    m.aliases_[old_name] = it->second;
  }
  return m;
}

std::optional<StateId> Machine::find(std::string_view name) const {
  if (auto it = ids_.find(std::string(name)); it != ids_.end()) return it->second;
  if (auto it = aliases_.find(name); it != aliases_.end()) return it->second;
  return std::nullopt;
}

StateId Machine::id(std::string_view name) const {
  if (auto found = find(name)) return *found;
  throw MachineError("unknown state '" + std::string(name) + "' in machine '" + label_ + "'");
}

std::optional<Action> Machine::action(StateId state, Symbol read) const {
  const Transition* t = transition(state, read);
  if (!t) return std::nullopt;
  return Action{t->write, t->move, names_[t->target]};
}

std::vector<StateId> Machine::defined_states() const {
  std::vector<StateId> out;
  for (StateId s = 0; s < names_.size(); ++s) {
    if (is_defined(s)) out.push_back(s);
  }
  return out;
}

bool operator==(const Machine& a, const Machine& b) {
  using Row = std::tuple<std::string, int, int, int, std::string>;
  auto rows = [](const Machine& m) {
    std::set<Row> out;
    for (StateId s : m.defined_states()) {
      for (Symbol r : {Symbol::Zero, Symbol::One}) {
        if (auto act = m.action(s, r)) {
          out.emplace(m.name(s), static_cast<int>(r), static_cast<int>(act->write),
                      static_cast<int>(act->move), act->target);
        }
      }
    }
    return out;
  };
  return a.name(a.start()) == b.name(b.start()) && rows(a) == rows(b);
}

std::size_t state_count(const Machine& machine) { return machine.defined_states().size(); }

}  // namespace conjtm
