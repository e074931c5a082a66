// Binary-alphabet Turing machine values.
//
// A Machine is an immutable transition table over named states. Every name a
// transition can target is interned, including names that carry no rows
// (the reserved "HALT" marker, the unresolved "NM" section exit, and
// diagram-only accepting nodes). Entering a state with no Action for the symbol
// under the head halts the machine.

#ifndef CONJTM_MACHINE_H_
#define CONJTM_MACHINE_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace conjtm {

enum class Symbol : std::uint8_t { Zero = 0, One = 1 };
enum class Move : std::int8_t { Left = -1, Right = 1 };

inline constexpr std::string_view kHaltName = "HALT";
inline constexpr std::string_view kExternalName = "NM";

inline bool is_halt_marker(std::string_view name) { return name == kHaltName; }
inline bool is_external_marker(std::string_view name) { return name == kExternalName; }
inline bool is_reserved(std::string_view name) {
  return is_halt_marker(name) || is_external_marker(name);
}

inline char symbol_char(Symbol s) { return s == Symbol::One ? '1' : '0'; }
inline char move_char(Move m) { return m == Move::Left ? 'L' : 'R'; }

using StateId = std::uint32_t;

struct Action {
  Symbol write = Symbol::Zero;
  Move move = Move::Right;
  std::string target;

  friend bool operator==(const Action&, const Action&) = default;
};

// Interned form used by the engine.
struct Transition {
  Symbol write = Symbol::Zero;
  Move move = Move::Right;
  StateId target = 0;
};

class MachineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Machine;

// Accumulates rows in table order. Insertion order of state names is kept and
// determines state ids, so greedy passes over a machine follow table order.
class MachineBuilder {
 public:
  explicit MachineBuilder(std::string label = {}) : label_(std::move(label)) {}

  // Throws MachineError if (state, read) already has a different Action.
  MachineBuilder& add(std::string_view state, Symbol read, Action action);
  // Interns a name without giving it rows.
  MachineBuilder& declare(std::string_view state);
  MachineBuilder& alias(std::string_view old_name, std::string_view new_name);

  Machine build(std::string_view start) const;

 private:
  StateId intern(std::string_view name);

  std::string label_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, StateId> ids_;
  std::vector<std::array<std::optional<Action>, 2>> actions_;
  std::vector<std::pair<std::string, std::string>> aliases_;
};

class Machine {
 public:
  Machine() = default;

  const std::string& label() const { return label_; }
  StateId start() const { return start_; }
  const std::string& name(StateId id) const { return names_.at(id); }
  std::size_t num_names() const { return names_.size(); }

  // Resolves a state name, consulting aliases left behind by state merging.
  std::optional<StateId> find(std::string_view name) const;
  StateId id(std::string_view name) const;

  const Transition* transition(StateId state, Symbol read) const {
    const auto& slot = table_[2 * state + static_cast<int>(read)];
    return slot ? &*slot : nullptr;
  }
  std::optional<Action> action(StateId state, Symbol read) const;

  // A state is defined when it has at least one Action.
  bool is_defined(StateId state) const {
    return transition(state, Symbol::Zero) || transition(state, Symbol::One);
  }
  std::vector<StateId> defined_states() const;
  const std::map<std::string, StateId, std::less<>>& aliases() const { return aliases_; }

  friend bool operator==(const Machine& a, const Machine& b);

 private:
  friend class MachineBuilder;

  std::string label_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, StateId> ids_;
  std::vector<std::optional<Transition>> table_;
  std::map<std::string, StateId, std::less<>> aliases_;
  StateId start_ = 0;
};

// Number of defined states; markers and row-less names do not count.
std::size_t state_count(const Machine& machine);

}  // namespace conjtm

#endif  // CONJTM_MACHINE_H_
