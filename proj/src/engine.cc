#include "conjtm/engine.h"

#include <cctype>
#include <ostream>

namespace conjtm {

struct TapeAccess {
  static std::vector<std::uint8_t>& cells(Tape& t) { return t.cells_; }
  static Cell& base(Tape& t) { return t.base_; }
  static Cell& head(Tape& t) { return t.head_; }
  static Cell& lo(Tape& t) { return t.lo_; }
  static Cell& hi(Tape& t) { return t.hi_; }
  static std::uint64_t& ones(Tape& t) { return t.ones_; }
  static void reserve(Tape& t, Cell index) { t.reserve_cell(index); }
  static void touch(Tape& t, Cell index) { t.touch(index); }
};

namespace {

struct Entry {
  std::uint8_t write;
  std::int8_t move;  // 0: no action, the machine halts
  StateId target;
};

std::vector<Entry> compile(const Machine& m) {
  std::vector<Entry> table(2 * m.num_names(), Entry{0, 0, 0});
  for (StateId s = 0; s < m.num_names(); ++s) {
    for (int r = 0; r < 2; ++r) {
      if (const Transition* t = m.transition(s, static_cast<Symbol>(r))) {
        table[2 * s + r] = Entry{static_cast<std::uint8_t>(t->write),
                                 static_cast<std::int8_t>(t->move), t->target};
      }
    }
  }
  return table;
}

void check_state(const Machine& m, StateId state) {
  if (state >= m.num_names()) {
    throw MachineError("configuration state " + std::to_string(state) +
                       " does not belong to machine '" + m.label() + "'");
  }
}

// Tight loop for runs without cycle detection or tracing.
template <bool kHasStops, bool kProfile>
RunOutcome run_fast(const Machine& machine, Configuration cfg, const RunLimits& limits,
                    const std::vector<std::uint8_t>& stops, std::uint8_t* seen) {
  const std::vector<Entry> table = compile(machine);
  const Entry* entries = table.data();
  Tape& tape = cfg.tape;
  TapeAccess::touch(tape, TapeAccess::head(tape));
  TapeAccess::reserve(tape, TapeAccess::head(tape));

  auto& cells = TapeAccess::cells(tape);
  std::uint8_t* data = cells.data();
  Cell base = TapeAccess::base(tape);
  Cell size = static_cast<Cell>(cells.size());
  Cell pos = TapeAccess::head(tape) - base;
  Cell lo = TapeAccess::lo(tape);
  Cell hi = TapeAccess::hi(tape);
  std::uint64_t ones = TapeAccess::ones(tape);
  StateId state = cfg.state;
  const std::uint64_t budget = limits.max_steps;
  std::uint64_t done = 0;

  RunOutcome out;
  for (;;) {
    const std::size_t slot = 2 * state + data[pos];
    if constexpr (kProfile) seen[slot] = 1;
    const Entry& e = entries[slot];
    if (e.move == 0) {
      out.kind = OutcomeKind::Halted;
      out.state = state;
      break;
    }
    if (done == budget) {
      out.kind = OutcomeKind::StepLimitExceeded;
      break;
    }
    ones += static_cast<std::uint64_t>(e.write) - data[pos];
    data[pos] = e.write;
    pos += e.move;
    state = e.target;
    ++done;
    if (pos < 0 || pos >= size) {
      Cell head = base + pos;
      TapeAccess::reserve(tape, head);
      data = cells.data();
      base = TapeAccess::base(tape);
      size = static_cast<Cell>(cells.size());
      pos = head - base;
    }
    Cell head = base + pos;
    if (head < lo || head > hi) {
      if (head < lo) lo = head;
      if (head > hi) hi = head;
      if (static_cast<std::uint64_t>(hi - lo + 1) > limits.max_support_cells) {
        out.kind = OutcomeKind::MemoryLimitExceeded;
        break;
      }
    }
    if constexpr (kHasStops) {
      if (stops[state]) {
        out.kind = OutcomeKind::EnteredStopState;
        out.state = state;
        break;
      }
    }
  }
  TapeAccess::head(tape) = base + pos;
  TapeAccess::lo(tape) = lo;
  TapeAccess::hi(tape) = hi;
  TapeAccess::ones(tape) = ones;
  cfg.state = state;
  cfg.steps += done;
  out.final = std::move(cfg);
  return out;
}

// Finds the first step at which the configuration recurs with the given
// period, by replaying from the start with a lagging copy.
std::uint64_t first_visit(const Machine& machine, const Configuration& initial,
                          std::uint64_t period) {
  Configuration slow = initial;
  Configuration fast = initial;
  for (std::uint64_t i = 0; i < period; ++i) advance(machine, fast);
  while (fingerprint(slow) != fingerprint(fast)) {
    advance(machine, slow);
    advance(machine, fast);
  }
  return slow.steps;
}

RunOutcome run_checked(const Machine& machine, Configuration cfg, const RunLimits& limits,
                       const RunOptions& options, const std::vector<std::uint8_t>& stops) {
  const Configuration initial = limits.cycle_check ? cfg : Configuration{};
  cfg.tape.set_head(cfg.tape.head());
  if (options.trace) options.trace(cfg);

  // Brent's cycle finding over fingerprints.
  std::uint64_t power = 1;
  std::uint64_t lambda = 0;
  Fingerprint saved;
  if (limits.cycle_check) saved = fingerprint(cfg);

  RunOutcome out;
  std::uint64_t done = 0;
  for (;;) {
    const Symbol read = cfg.tape.read_head();
    if (options.observed) (*options.observed)[2 * cfg.state + static_cast<int>(read)] = 1;
    if (!machine.transition(cfg.state, read)) {
      out.kind = OutcomeKind::Halted;
      out.state = cfg.state;
      break;
    }
    if (done == limits.max_steps) {
      out.kind = OutcomeKind::StepLimitExceeded;
      break;
    }
    advance(machine, cfg);
    ++done;
    if (options.trace) options.trace(cfg);
    if (cfg.tape.extent_size() > limits.max_support_cells) {
      out.kind = OutcomeKind::MemoryLimitExceeded;
      break;
    }
    if (!stops.empty() && stops[cfg.state]) {
      out.kind = OutcomeKind::EnteredStopState;
      out.state = cfg.state;
      break;
    }
    if (limits.cycle_check) {
      ++lambda;
      Fingerprint current = fingerprint(cfg);
      if (current == saved) {
        out.kind = OutcomeKind::CycleDetected;
        out.period = lambda;
        out.first_visit = first_visit(machine, initial, lambda);
        break;
      }
      if (lambda == power) {
        saved = std::move(current);
        power *= 2;
        lambda = 0;
      }
    }
  }
  out.final = std::move(cfg);
  return out;
}

}  // namespace

std::string to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::Halted: return "halted";
    case OutcomeKind::StepLimitExceeded: return "step-limit";
    case OutcomeKind::CycleDetected: return "cycle";
    case OutcomeKind::MemoryLimitExceeded: return "memory-limit";
    case OutcomeKind::EnteredStopState: return "entered";
  }
  return "?";
}

Configuration initial_configuration(const Machine& machine) {
  Configuration c;
  c.state = machine.start();
  return c;
}

bool advance(const Machine& machine, Configuration& config) {
  check_state(machine, config.state);
  Tape& tape = config.tape;
  const Transition* t = machine.transition(config.state, tape.read_head());
  if (!t) return false;
  tape.write(tape.head(), t->write);
  tape.set_head(tape.head() + static_cast<Cell>(t->move));
  config.state = t->target;
  ++config.steps;
  return true;
}

std::variant<Configuration, HaltEvent> step(const Machine& machine, const Configuration& config) {
  Configuration next = config;
  if (!advance(machine, next)) return HaltEvent{config};
  return next;
}

RunOutcome run(const Machine& machine, Configuration initial, const RunLimits& limits,
               const RunOptions& options) {
  check_state(machine, initial.state);
  std::vector<std::uint8_t> stops;
  if (!options.stop_states.empty()) {
    stops.assign(machine.num_names(), 0);
    for (StateId s : options.stop_states) {
      check_state(machine, s);
      stops[s] = 1;
    }
  }
  if (options.observed && options.observed->size() != 2 * machine.num_names()) {
    throw MachineError("read profile buffer has the wrong size");
  }
  if (limits.cycle_check || options.trace) {
    return run_checked(machine, std::move(initial), limits, options, stops);
  }
  std::uint8_t* seen = options.observed ? options.observed->data() : nullptr;
  if (stops.empty()) {
    if (seen) return run_fast<false, true>(machine, std::move(initial), limits, stops, seen);
    return run_fast<false, false>(machine, std::move(initial), limits, stops, seen);
  }
  if (seen) return run_fast<true, true>(machine, std::move(initial), limits, stops, seen);
  return run_fast<true, false>(machine, std::move(initial), limits, stops, seen);
}

std::uint64_t Fingerprint::digest() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  mix(state);
  mix(static_cast<std::uint64_t>(offset));
  for (std::uint8_t c : cells) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Fingerprint fingerprint(const Configuration& config) {
  Fingerprint fp;
  fp.state = config.state;
  if (auto support = config.tape.support()) {
    auto [lo, hi] = *support;
    fp.offset = lo - config.tape.head();
    fp.cells.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (Cell c = lo; c <= hi; ++c) {
      fp.cells.push_back(static_cast<std::uint8_t>(config.tape.read(c)));
    }
  }
  return fp;
}

std::vector<Symbol> snapshot(const Tape& tape, Cell first, Cell last) {
  std::vector<Symbol> out;
  for (Cell c = first; c <= last; ++c) out.push_back(tape.read(c));
  return out;
}

std::string format_symbols(const std::vector<Symbol>& symbols) {
  std::string out;
  for (Symbol s : symbols) {
    if (!out.empty()) out += ' ';
    out += symbol_char(s);
  }
  return out;
}

std::vector<Symbol> parse_symbols(std::string_view text) {
  std::vector<Symbol> out;
  for (char c : text) {
    if (c == '0') {
      out.push_back(Symbol::Zero);
    } else if (c == '1') {
      out.push_back(Symbol::One);
    } else if (!std::isspace(static_cast<unsigned char>(c)) && c != ',') {
      throw std::invalid_argument(std::string("invalid tape symbol '") + c + "'");
    }
  }
  return out;
}

TraceSink make_trace_printer(std::ostream& out, const Machine& machine, Cell first, Cell last) {
  return [&out, &machine, first, last](const Configuration& c) {
    out << c.steps << '\t' << machine.name(c.state) << '\t' << c.tape.head() << '\t'
        << format_symbols(snapshot(c.tape, first, last)) << '\n';
  };
}

}  // namespace conjtm
