#include "conjtm/bb.h"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <thread>

#include "conjtm/table.h"

namespace conjtm {
namespace {

std::vector<std::string> tokens(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string strip_comment(std::string line) {
  if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
  return line;
}

std::uint64_t parse_u64(const std::string& s, int line) {
  if (s.empty() || s.size() > 19 || s.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseError(line, "expected a count, got '" + s + "'");
  }
  return std::stoull(s);
}

BBSource parse_source(const std::string& s, int line) {
  if (s == "paper") return BBSource::Paper;
  if (s == "computed") return BBSource::Computed;
  if (s == "configured") return BBSource::Configured;
  throw ParseError(line, "unknown registry source '" + s + "'");
}

const char* kStateNames[] = {"A", "B"};

// Slot option: bit 0 write, bit 1 move right, the rest the target (n = HALT).
Machine decode_machine(unsigned n, std::uint64_t index) {
  const unsigned options = 4 * (n + 1);
  MachineBuilder b("bb" + std::to_string(n) + "-" + std::to_string(index));
  for (unsigned s = 0; s < n; ++s) b.declare(kStateNames[s]);
  for (unsigned slot = 0; slot < 2 * n; ++slot) {
    unsigned opt = static_cast<unsigned>(index % options);
    index /= options;
    unsigned target = opt >> 2;
    Action a{(opt & 1) ? Symbol::One : Symbol::Zero, (opt & 2) ? Move::Right : Move::Left,
             target == n ? std::string(kHaltName) : std::string(kStateNames[target])};
    b.add(kStateNames[slot / 2], static_cast<Symbol>(slot % 2), a);
  }
  return b.build(kStateNames[0]);
}

struct Record {
  std::uint64_t step;
  StateId state;
  Cell head;
  Tape tape;
};

// Cells [from, from + len) of a and [from + shift, ...) of b agree.
bool same_segment(const Tape& a, const Tape& b, Cell from, Cell len, Cell shift) {
  for (Cell i = 0; i < len; ++i) {
    if (a.read(from + i) != b.read(from + shift + i)) return false;
  }
  return true;
}

}  // namespace

std::string to_string(BBSource source) {
  switch (source) {
    case BBSource::Paper: return "paper";
    case BBSource::Computed: return "computed";
    case BBSource::Configured: return "configured";
  }
  return "?";
}

void BBRegistry::add(const BBEntry& entry) {
  if (auto it = entries_.find(entry.n); it != entries_.end()) {
    if (it->second.value != entry.value) {
      throw RegistryError("conflicting values for BB(" + std::to_string(entry.n) + ")");
    }
    return;
  }
  auto next = entries_.upper_bound(entry.n);
  if (next != entries_.end() && next->second.value <= entry.value) {
    throw RegistryError("BB(" + std::to_string(entry.n) + ") = " + std::to_string(entry.value) +
                        " is not below BB(" + std::to_string(next->first) + ")");
  }
  if (next != entries_.begin()) {
    auto prev = std::prev(next);
    if (prev->second.value >= entry.value) {
      throw RegistryError("BB(" + std::to_string(entry.n) + ") = " +
                          std::to_string(entry.value) + " is not above BB(" +
                          std::to_string(prev->first) + ")");
    }
  }
  entries_.emplace(entry.n, entry);
}

std::optional<BBEntry> BBRegistry::lookup(unsigned n) const {
  auto it = entries_.find(n);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

BBRegistry parse_registry(std::string_view text) {
  BBRegistry r;
  std::istringstream in{std::string(text)};
  int number = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++number;
    auto w = tokens(strip_comment(raw));
    if (w.empty()) continue;
    if (w.size() != 4 || w[0] != "bb") throw ParseError(number, "bb <n> <value> <source>");
    std::uint64_t n = parse_u64(w[1], number);
    if (n == 0 || n > 1000) throw ParseError(number, "state count out of range");
    try {
      r.add(BBEntry{static_cast<unsigned>(n), parse_u64(w[2], number), parse_source(w[3], number)});
    } catch (const RegistryError& e) {
      throw RegistryError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return r;
}

BBRegistry load_registry(const std::string& path) {
  try {
    return parse_registry(read_file(path));
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::string serialize(const BBRegistry& registry) {
  std::string out;
  for (const auto& [n, e] : registry.entries()) {
    out += "bb " + std::to_string(n) + " " + std::to_string(e.value) + " " + to_string(e.source) +
           "\n";
  }
  return out;
}

const BBRegistry& standard_registry() {
  static const BBRegistry registry = [] {
    BBRegistry r;
    r.add(BBEntry{4, 107, BBSource::Paper});
    for (unsigned n : {1u, 2u}) {
      BruteForceResult b = brute_force_bb(n, 200);
      if (b.value) r.add(BBEntry{n, *b.value, BBSource::Computed});
    }
    return r;
  }();
  return registry;
}

std::optional<BBEntry> bb_lookup(unsigned n) { return standard_registry().lookup(n); }

std::optional<NonHaltCertificate> certify_nonhalt(const Machine& machine, const RunOutcome& outcome,
                                                  const BBRegistry& registry,
                                                  const std::string& machine_ref) {
  if (outcome.kind == OutcomeKind::Halted) return std::nullopt;
  NonHaltCertificate c;
  c.machine_ref = machine_ref.empty() ? machine.label() : machine_ref;
  c.steps_observed = outcome.steps();
  if (outcome.kind == OutcomeKind::CycleDetected) {
    c.basis = CycleBasis{outcome.first_visit, outcome.period};
    return c;
  }
  auto n = static_cast<unsigned>(state_count(machine));
  auto entry = registry.lookup(n);
  if (!entry || outcome.steps() <= entry->value) return std::nullopt;
  c.basis = BBBoundBasis{n, entry->value};
  return c;
}

bool replay_certificate(const Machine& machine, const NonHaltCertificate& certificate) {
  if (auto* b = std::get_if<BBBoundBasis>(&certificate.basis)) {
    if (state_count(machine) != b->n || certificate.steps_observed <= b->bb_value) return false;
    RunLimits limits;
    limits.max_steps = b->bb_value + 1;
    limits.max_support_cells = ~std::uint64_t{0};
    RunOutcome out = run(machine, initial_configuration(machine), limits);
    return out.kind == OutcomeKind::StepLimitExceeded;
  }
  const auto& cyc = std::get<CycleBasis>(certificate.basis);
  if (cyc.period == 0) return false;
  Configuration c = initial_configuration(machine);
  for (std::uint64_t i = 0; i < cyc.first_visit; ++i) {
    if (!advance(machine, c)) return false;
  }
  Fingerprint at = fingerprint(c);
  for (std::uint64_t i = 0; i < cyc.period; ++i) {
    if (!advance(machine, c)) return false;
  }
  return fingerprint(c) == at;
}

std::string serialize(const NonHaltCertificate& certificate) {
  std::ostringstream out;
  out << "certificate\n"
      << "machine " << certificate.machine_ref << "\n"
      << "steps " << certificate.steps_observed << "\n";
  if (auto* b = std::get_if<BBBoundBasis>(&certificate.basis)) {
    out << "basis bbbound " << b->n << " " << b->bb_value << "\n";
  } else {
    const auto& c = std::get<CycleBasis>(certificate.basis);
    out << "basis cycle " << c.first_visit << " " << c.period << "\n";
  }
  out << "end\n";
  return out.str();
}

NonHaltCertificate parse_certificate(std::string_view text) {
  NonHaltCertificate c;
  std::istringstream in{std::string(text)};
  int number = 0;
  bool open = false, closed = false, has_basis = false, has_steps = false;
  for (std::string raw; std::getline(in, raw);) {
    ++number;
    auto w = tokens(strip_comment(raw));
    if (w.empty()) continue;
    if (closed) throw ParseError(number, "text after 'end'");
    if (!open) {
      if (w.size() != 1 || w[0] != "certificate") throw ParseError(number, "expected 'certificate'");
      open = true;
    } else if (w[0] == "machine" && w.size() == 2) {
      c.machine_ref = w[1];
    } else if (w[0] == "steps" && w.size() == 2) {
      c.steps_observed = parse_u64(w[1], number);
      has_steps = true;
    } else if (w[0] == "basis" && w.size() == 4 && w[1] == "bbbound") {
      c.basis = BBBoundBasis{static_cast<unsigned>(parse_u64(w[2], number)), parse_u64(w[3], number)};
      has_basis = true;
    } else if (w[0] == "basis" && w.size() == 4 && w[1] == "cycle") {
      c.basis = CycleBasis{parse_u64(w[2], number), parse_u64(w[3], number)};
      has_basis = true;
    } else if (w[0] == "end" && w.size() == 1) {
      closed = true;
    } else {
      throw ParseError(number, "unexpected certificate line");
    }
  }
  if (!closed || !has_basis || !has_steps) throw ParseError(number, "incomplete certificate");
  return c;
}

bool halt_unreachable(const Machine& machine) {
  std::vector<bool> seen(machine.num_names(), false);
  std::vector<StateId> todo{machine.start()};
  seen[machine.start()] = true;
  while (!todo.empty()) {
    StateId s = todo.back();
    todo.pop_back();
    for (Symbol r : {Symbol::Zero, Symbol::One}) {
      const Transition* t = machine.transition(s, r);
      if (!t) return false;
      if (!seen[t->target]) {
        seen[t->target] = true;
        todo.push_back(t->target);
      }
    }
  }
  return true;
}

bool detect_translated_cycle(const Machine& machine, std::uint64_t steps) {
  Configuration c = initial_configuration(machine);
  std::vector<Cell> heads{0};
  std::vector<Record> right{{0, c.state, 0, c.tape}};
  std::vector<Record> left{{0, c.state, 0, c.tape}};
  Cell lo = 0, hi = 0;
  for (std::uint64_t t = 1; t <= steps; ++t) {
    if (!advance(machine, c)) return false;
    const Cell h = c.tape.head();
    heads.push_back(h);
    if (h > hi) {
      hi = h;
      // Cells right of a new record are blank. If the segment the head
      // revisited since an earlier record in the same state repeats here, the
      // machine repeats the excursion forever.
      for (const Record& r : right) {
        if (r.state != c.state) continue;
        Cell low = *std::min_element(heads.begin() + static_cast<std::ptrdiff_t>(r.step),
                                     heads.end());
        Cell depth = r.head - low;
        if (same_segment(r.tape, c.tape, low, depth + 1, h - r.head)) return true;
      }
      right.push_back({t, c.state, h, c.tape});
    } else if (h < lo) {
      lo = h;
      for (const Record& r : left) {
        if (r.state != c.state) continue;
        Cell high = *std::max_element(heads.begin() + static_cast<std::ptrdiff_t>(r.step),
                                      heads.end());
        Cell depth = high - r.head;
        if (same_segment(r.tape, c.tape, r.head, depth + 1, h - r.head)) return true;
      }
      left.push_back({t, c.state, h, c.tape});
    }
  }
  return false;
}

BruteForceResult brute_force_bb(unsigned n, std::uint64_t step_cap,
                                const BruteForceOptions& options) {
  if (n < 1 || n > 2) throw std::invalid_argument("brute force supports n = 1 or 2 only");
  const std::uint64_t per_slot = 4 * (n + 1);
  std::uint64_t total = 1;
  for (unsigned i = 0; i < 2 * n; ++i) total *= per_slot;

  struct Partial {
    BruteForceResult r;
    std::optional<std::uint64_t> champion_index;
  };
  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    Partial p;
    RunLimits limits;
    limits.max_steps = step_cap;
    limits.cycle_check = true;
    for (std::uint64_t i = begin; i < end; ++i) {
      // Slot (A, 0) comes first; its move bit is option bit 1.
      if (options.mirror_reduction && ((i % per_slot) & 2) == 0) continue;
      Machine m = decode_machine(n, i);
      ++p.r.machines;
      RunOutcome out = run(m, initial_configuration(m), limits);
      switch (out.kind) {
        case OutcomeKind::Halted:
          ++p.r.halted;
          if (!p.champion_index || out.steps() > p.r.max_halting_steps) {
            p.r.max_halting_steps = out.steps();
            p.champion_index = i;
          }
          break;
        case OutcomeKind::CycleDetected:
          ++p.r.cycled;
          break;
        default:
          if (halt_unreachable(m)) {
            ++p.r.no_halt_reachable;
          } else if (detect_translated_cycle(m, step_cap)) {
            ++p.r.translated;
          } else {
            ++p.r.inconclusive;
          }
      }
    }
    return p;
  };

  unsigned jobs = std::max(1u, options.jobs);
  std::vector<Partial> parts(jobs);
  std::vector<std::thread> threads;
  std::uint64_t chunk = (total + jobs - 1) / jobs;
  for (unsigned j = 0; j < jobs; ++j) {
    std::uint64_t b = std::min(total, j * chunk), e = std::min(total, b + chunk);
    if (j + 1 == jobs) {
      parts[j] = work(b, e);
    } else {
      threads.emplace_back([&, j, b, e] { parts[j] = work(b, e); });
    }
  }
  for (auto& t : threads) t.join();

  BruteForceResult result;
  result.n = n;
  result.step_cap = step_cap;
  std::optional<std::uint64_t> champion;
  for (const Partial& p : parts) {
    result.machines += p.r.machines;
    result.halted += p.r.halted;
    result.cycled += p.r.cycled;
    result.translated += p.r.translated;
    result.no_halt_reachable += p.r.no_halt_reachable;
    result.inconclusive += p.r.inconclusive;
    // Parts are in index order, so a strict comparison keeps the lowest index.
    if (p.champion_index && (!champion || p.r.max_halting_steps > result.max_halting_steps)) {
      result.max_halting_steps = p.r.max_halting_steps;
      champion = p.champion_index;
    }
  }
  if (champion) result.champion = decode_machine(n, *champion);
  if (result.inconclusive == 0) result.value = result.max_halting_steps;
  return result;
}

}  // namespace conjtm
