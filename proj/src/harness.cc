#include "conjtm/harness.h"

#include <atomic>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "conjtm/composer.h"
#include "conjtm/table.h"

namespace conjtm {
namespace {

namespace fs = std::filesystem;

std::vector<std::string> tokens(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool all_digits(const std::string& s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

Natural parse_natural(const std::string& s, int line) {
  if (!all_digits(s)) throw ParseError(line, "expected a natural number, got '" + s + "'");
  return Natural(s);
}

std::uint64_t parse_count(const std::string& s, int line) {
  if (!all_digits(s) || s.size() > 19) throw ParseError(line, "bad count '" + s + "'");
  return std::stoull(s);
}

Cell parse_cell(const std::string& s, int line) {
  std::size_t used = 0;
  Cell v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw ParseError(line, "bad cell index '" + s + "'");
  return v;
}

std::vector<Natural> parse_naturals(const std::vector<std::string>& w, std::size_t from,
                                    std::size_t to, int line) {
  std::vector<Natural> out;
  for (std::size_t i = from; i < to; ++i) out.push_back(parse_natural(w[i], line));
  return out;
}

std::string join_from(const std::vector<std::string>& w, std::size_t from) {
  std::string out;
  for (std::size_t i = from; i < w.size(); ++i) {
    if (i > from) out += ' ';
    out += w[i];
  }
  return out;
}

std::string compact(const std::vector<Symbol>& symbols) {
  std::string out;
  for (Symbol s : symbols) out += symbol_char(s);
  return out;
}

Expectation parse_expect(const std::vector<std::string>& w, int line) {
  if (w.size() < 2) throw ParseError(line, "expect needs a kind");
  const std::string& kind = w[1];
  if (kind == "halted" && w.size() == 2) return ExpectHalted{};
  if (kind == "nothalt" && w.size() == 2) return ExpectNotHalted{};
  if (kind == "transfer") {
    if (w.size() < 4 || w[3] != "values") {
      throw ParseError(line, "expect transfer <state> values <n...>");
    }
    return ExpectTransfer{w[2], parse_naturals(w, 4, w.size(), line)};
  }
  if (kind == "snapshot") {
    if (w.size() < 4) throw ParseError(line, "expect snapshot <a>..<b> <symbols>");
    auto dots = w[2].find("..");
    if (dots == std::string::npos) throw ParseError(line, "window must be <a>..<b>");
    ExpectSnapshot s;
    s.first = parse_cell(w[2].substr(0, dots), line);
    s.last = parse_cell(w[2].substr(dots + 2), line);
    try {
      s.symbols = parse_symbols(join_from(w, 3));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line, e.what());
    }
    if (s.last < s.first || static_cast<Cell>(s.symbols.size()) != s.last - s.first + 1) {
      throw ParseError(line, "snapshot window and symbol count disagree");
    }
    return s;
  }
  if (kind == "oracle") {
    if (w.size() < 4) throw ParseError(line, "expect oracle <name> <arg> [prefix <n...>]");
    if (!is_known_oracle(w[2])) throw ParseError(line, "unknown oracle '" + w[2] + "'");
    ExpectOracle o{w[2], parse_natural(w[3], line), {}};
    if (w.size() > 4) {
      if (w[4] != "prefix") throw ParseError(line, "expected 'prefix'");
      o.prefix = parse_naturals(w, 5, w.size(), line);
    }
    return o;
  }
  throw ParseError(line, "unknown expectation '" + join_from(w, 1) + "'");
}

std::string outcome_text(const RunOutcome& out, const Machine& m) {
  std::string s = to_string(out.kind);
  if (out.state) s += "(" + m.name(*out.state) + ")";
  return s;
}

bool is_exit(const RunOutcome& out, const Machine& m) {
  if (out.kind == OutcomeKind::EnteredStopState) return true;
  return out.kind == OutcomeKind::Halted && out.state &&
         is_external_marker(m.name(*out.state));
}

std::string blocks_text(const std::vector<Natural>& v) { return "[" + format_naturals(v) + "]"; }

}  // namespace

std::vector<Scenario> parse_scenarios(std::string_view text, const std::string& base_dir) {
  std::vector<Scenario> out;
  std::vector<bool> has_machine, has_expect;
  std::istringstream in{std::string(text)};
  int number = 0;
  int stanza_line = 0;
  auto finish = [&] {
    if (out.empty()) return;
    if (!has_machine.back()) throw ParseError(stanza_line, "scenario has no machine line");
    if (!has_expect.back()) throw ParseError(stanza_line, "scenario has no expect line");
  };
  for (std::string raw; std::getline(in, raw);) {
    ++number;
    // A comment starts at a '#' that begins a word; inside a word it
    // separates a manifest from a section label.
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '#' && (i == 0 || std::isspace(static_cast<unsigned char>(raw[i - 1])))) {
        raw.resize(i);
        break;
      }
    }
    auto w = tokens(raw);
    if (w.empty()) continue;
    if (w[0] == "scenario") {
      if (w.size() != 2) throw ParseError(number, "scenario <name>");
      finish();
      Scenario s;
      s.name = w[1];
      s.base_dir = base_dir;
      out.push_back(std::move(s));
      has_machine.push_back(false);
      has_expect.push_back(false);
      stanza_line = number;
      continue;
    }
    if (out.empty()) throw ParseError(number, "'" + w[0] + "' before any scenario line");
    Scenario& s = out.back();
    if (w[0] == "machine") {
      if (w.size() != 2) throw ParseError(number, "machine <ref>");
      s.machine_ref = w[1];
      has_machine.back() = true;
    } else if (w[0] == "entry") {
      if (w.size() != 2) throw ParseError(number, "entry <state>");
      s.entry = w[1];
    } else if (w[0] == "tape") {
      if (w.size() < 2) throw ParseError(number, "tape blank|unary|window");
      if (w[1] == "blank" && w.size() == 2) {
        s.tape = TapeSpec{};
      } else if (w[1] == "unary") {
        s.tape.kind = TapeSpec::Kind::Unary;
        s.tape.blocks = parse_naturals(w, 2, w.size(), number);
        for (const auto& b : s.tape.blocks) {
          if (b == 0) throw ParseError(number, "unary blocks must be at least 1");
        }
      } else if (w[1] == "window") {
        s.tape.kind = TapeSpec::Kind::Window;
        try {
          s.tape.window = parse_symbols(join_from(w, 2));
        } catch (const std::invalid_argument& e) {
          throw ParseError(number, e.what());
        }
      } else {
        throw ParseError(number, "unknown tape kind '" + w[1] + "'");
      }
    } else if (w[0] == "head") {
      if (w.size() != 3) throw ParseError(number, "head left|right|offset <n>");
      HeadRule h;
      if (w[1] == "left") {
        h.kind = HeadRule::Kind::BlockLeft;
      } else if (w[1] == "right") {
        h.kind = HeadRule::Kind::BlockRight;
      } else if (w[1] == "offset") {
        h.kind = HeadRule::Kind::Offset;
      } else {
        throw ParseError(number, "unknown head rule '" + w[1] + "'");
      }
      h.value = parse_cell(w[2], number);
      s.head = h;
    } else if (w[0] == "limit") {
      for (std::size_t i = 1; i < w.size(); ++i) {
        auto eq = w[i].find('=');
        std::string key = w[i].substr(0, eq);
        if (eq == std::string::npos) throw ParseError(number, "limit key=value");
        std::uint64_t v = parse_count(w[i].substr(eq + 1), number);
        if (key == "steps") {
          s.limits.max_steps = v;
        } else if (key == "cells") {
          s.limits.max_support_cells = v;
        } else {
          throw ParseError(number, "unknown limit '" + key + "'");
        }
      }
    } else if (w[0] == "stop") {
      if (w.size() != 2) throw ParseError(number, "stop <state>");
      s.stops.push_back(w[1]);
    } else if (w[0] == "expect") {
      if (has_expect.back()) throw ParseError(number, "scenario already has an expectation");
      s.expect = parse_expect(w, number);
      has_expect.back() = true;
    } else {
      throw ParseError(number, "unknown scenario directive '" + w[0] + "'");
    }
  }
  finish();
  return out;
}

std::vector<Scenario> load_scenarios(const std::string& path) {
  std::string dir = fs::path(path).parent_path().string();
  if (dir.empty()) dir = ".";
  try {
    return parse_scenarios(read_file(path), dir);
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::string describe(const Expectation& expectation) {
  struct Visitor {
    std::string operator()(const ExpectHalted&) const { return "halted"; }
    std::string operator()(const ExpectNotHalted&) const { return "nothalt"; }
    std::string operator()(const ExpectTransfer& t) const {
      return "entered(" + t.state + ")" + blocks_text(t.values);
    }
    std::string operator()(const ExpectSnapshot& s) const {
      return std::to_string(s.first) + ".." + std::to_string(s.last) + ":" + compact(s.symbols);
    }
    std::string operator()(const ExpectOracle& o) const {
      return o.name + "(" + o.arg.str() + ")";
    }
  };
  return std::visit(Visitor{}, expectation);
}

Machine load_machine(const std::string& ref) {
  auto hash = ref.find('#');
  std::string path = ref.substr(0, hash);
  if (hash != std::string::npos) {
    return section_machine(load_manifest(path), ref.substr(hash + 1));
  }
  if (fs::path(path).extension() == ".tbl") {
    RawTable raw = load_table(path);
    return build_machine(raw);
  }
  return compose(load_manifest(path)).machine;
}

std::shared_ptr<const Machine> MachineResolver::resolve(const std::string& ref) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(ref);
  if (it != cache_.end()) return it->second;
  auto m = std::make_shared<const Machine>(load_machine(ref));
  cache_.emplace(ref, m);
  return m;
}

std::shared_ptr<const Machine> MachineResolver::resolve(const Scenario& scenario) {
  fs::path p(scenario.machine_ref);
  if (p.is_relative()) p = fs::path(scenario.base_dir) / p;
  return resolve(p.lexically_normal().string());
}

Configuration scenario_start(const Scenario& scenario, const Machine& machine) {
  Configuration cfg;
  if (scenario.entry.empty()) {
    cfg.state = machine.start();
  } else if (auto id = machine.find(scenario.entry)) {
    cfg.state = *id;
  } else {
    throw std::invalid_argument("unknown entry state '" + scenario.entry + "'");
  }
  switch (scenario.tape.kind) {
    case TapeSpec::Kind::Unary: {
      UnaryLayout layout{scenario.tape.blocks, scenario.head.value_or(HeadRule{})};
      cfg.tape = encode_tape(layout);
      return cfg;
    }
    case TapeSpec::Kind::Window:
      for (std::size_t i = 0; i < scenario.tape.window.size(); ++i) {
        if (scenario.tape.window[i] == Symbol::One) cfg.tape.write(static_cast<Cell>(i), Symbol::One);
      }
      break;
    case TapeSpec::Kind::Blank:
      break;
  }
  if (scenario.head) {
    if (scenario.head->kind != HeadRule::Kind::Offset) {
      throw std::invalid_argument("block head rules need a unary tape");
    }
    cfg.tape.set_head(scenario.head->value);
  } else {
    cfg.tape.set_head(0);
  }
  return cfg;
}

std::vector<StateId> scenario_stops(const Scenario& scenario, const Machine& machine) {
  std::vector<std::string> names = scenario.stops;
  if (auto* t = std::get_if<ExpectTransfer>(&scenario.expect)) names.push_back(t->state);
  std::vector<StateId> out;
  for (const auto& n : names) {
    auto id = machine.find(n);
    if (!id) throw std::invalid_argument("unknown stop state '" + n + "'");
    out.push_back(*id);
  }
  return out;
}

Report run_scenario(const Scenario& scenario, const Machine& machine) {
  auto t0 = std::chrono::steady_clock::now();
  Report r;
  r.name = scenario.name;
  RunOptions options;
  options.stop_states = scenario_stops(scenario, machine);
  RunOutcome out = run(machine, scenario_start(scenario, machine), scenario.limits, options);
  r.outcome = out.kind;
  r.steps = out.steps();
  if (out.state) r.final_state = machine.name(*out.state);
  const Tape& tape = out.final.tape;
  std::string observed = outcome_text(out, machine);

  struct Verdict {
    bool pass;
    std::string observed;
    std::string expected;
  };
  auto check_exit_values = [&](const std::vector<Natural>& want, bool want_halt) -> Verdict {
    auto got = decode_tape(tape);
    bool ended = want_halt ? (out.kind == OutcomeKind::Halted && !is_exit(out, machine))
                           : (out.kind == OutcomeKind::Halted || is_exit(out, machine));
    return {ended && got == want, observed + blocks_text(got),
            (want_halt ? "halted" : "exit") + blocks_text(want)};
  };

  Verdict v{false, observed, describe(scenario.expect)};
  if (std::holds_alternative<ExpectHalted>(scenario.expect)) {
    v.pass = out.kind == OutcomeKind::Halted;
  } else if (std::holds_alternative<ExpectNotHalted>(scenario.expect)) {
    v.pass = out.kind == OutcomeKind::StepLimitExceeded || out.kind == OutcomeKind::CycleDetected;
  } else if (auto* t = std::get_if<ExpectTransfer>(&scenario.expect)) {
    auto got = decode_tape(tape);
    v.observed = observed + blocks_text(got);
    v.pass = out.kind == OutcomeKind::EnteredStopState && *out.state == *machine.find(t->state) &&
             got == t->values;
  } else if (auto* s = std::get_if<ExpectSnapshot>(&scenario.expect)) {
    r.first_divergence = diff_tape(tape, s->symbols, s->first);
    v.observed = observed + ":" + compact(snapshot(tape, s->first, s->last));
    v.pass = !r.first_divergence;
  } else if (auto* o = std::get_if<ExpectOracle>(&scenario.expect)) {
    OracleAnswer a = ask_oracle(o->name, o->arg);
    std::vector<Natural> want = o->prefix;
    if (!a.has_verdict) {
      want.push_back(a.value);
      v = check_exit_values(want, false);
    } else if (a.verdict) {
      v = check_exit_values(decode_tape(tape), true);
      v.expected = "halted";
    } else {
      if (o->arg >= 2) want.push_back(o->arg - 1);
      v = check_exit_values(want, false);
    }
  }
  r.passed = v.pass;
  if (!r.passed) {
    r.observed = v.observed;
    r.expected = v.expected;
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

Report run_scenario(const Scenario& scenario, MachineResolver& resolver) {
  return run_scenario(scenario, *resolver.resolve(scenario));
}

SuiteResult run_suite(const std::vector<Scenario>& suite, unsigned jobs) {
  auto t0 = std::chrono::steady_clock::now();
  SuiteResult result;
  result.reports.resize(suite.size());
  MachineResolver resolver;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < suite.size();) {
      try {
        result.reports[i] = run_scenario(suite[i], resolver);
      } catch (const std::exception& e) {
        Report& r = result.reports[i];
        r.name = suite[i].name;
        r.passed = false;
        r.observed = std::string("error: ") + e.what();
        r.expected = describe(suite[i].expect);
      }
    }
  };
  unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(suite.size())));
  std::vector<std::thread> threads;
  for (unsigned i = 1; i < n; ++i) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  for (const auto& r : result.reports) (r.passed ? result.passed : result.failed)++;
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

std::optional<Cell> diff_tape(const Tape& observed, const std::vector<Symbol>& expected,
                              Cell first) {
  for (std::size_t i = 0; i < expected.size(); ++i) {
    Cell c = first + static_cast<Cell>(i);
    if (observed.read(c) != expected[i]) return c;
  }
  return std::nullopt;
}

std::string format_report(const Report& report) {
  std::string line = (report.passed ? "PASS " : "FAIL ") + report.name +
                     " steps=" + std::to_string(report.steps);
  if (!report.passed) line += " observed=" + report.observed + " expected=" + report.expected;
  if (report.first_divergence) line += " divergence=" + std::to_string(*report.first_divergence);
  return line;
}

std::string summary_json(const SuiteResult& result, bool deterministic) {
  nlohmann::ordered_json j;
  j["scenarios"] = result.reports.size();
  j["passed"] = result.passed;
  j["failed"] = result.failed;
  j["ok"] = result.ok();
  if (!deterministic) j["wall_seconds"] = result.wall_seconds;
  auto& list = j["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : result.reports) {
    nlohmann::ordered_json e;
    e["name"] = r.name;
    e["result"] = r.passed ? "pass" : "fail";
    e["outcome"] = to_string(r.outcome);
    e["state"] = r.final_state;
    e["steps"] = r.steps;
    if (!r.passed) {
      e["observed"] = r.observed;
      e["expected"] = r.expected;
    }
    if (r.first_divergence) e["first_divergence"] = *r.first_divergence;
    if (!deterministic) e["wall_seconds"] = r.wall_seconds;
    list.push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

}  // namespace conjtm
