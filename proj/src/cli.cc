#include "conjtm/cli.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"

#include "conjtm/bb.h"
#include "conjtm/composer.h"
#include "conjtm/engine.h"
#include "conjtm/harness.h"
#include "conjtm/optimizer.h"
#include "conjtm/table.h"

namespace conjtm {
namespace {

// Usage or I/O problem; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::pair<Cell, Cell> parse_window(const std::string& text) {
  auto dots = text.find("..");
  if (dots == std::string::npos) throw UsageError("window must be <a>..<b>, got '" + text + "'");
  try {
    std::size_t used_a = 0, used_b = 0;
    std::string a = text.substr(0, dots), b = text.substr(dots + 2);
    Cell first = std::stoll(a, &used_a);
    Cell last = std::stoll(b, &used_b);
    if (used_a != a.size() || used_b != b.size() || last < first) throw std::invalid_argument("");
    return {first, last};
  } catch (const std::exception&) {
    throw UsageError("bad window '" + text + "'");
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw UsageError("cannot write '" + path + "'");
}

struct Options {
  bool deterministic = false;

  std::string table, overlay;

  std::string machine, entry, window;
  std::uint64_t steps = RunLimits{}.max_steps;
  std::uint64_t cells = RunLimits{}.max_support_cells;
  bool trace = false, cycle = false;

  std::string manifest, output, scenarios;
  std::string summary;
  unsigned jobs = 1;

  unsigned n = 0;
  std::uint64_t cap = 200;
  bool mirror = false;
  std::string registry;
};

int cmd_validate(const Options& o, std::ostream& out) {
  RawTable raw = load_table(o.table);
  if (!o.overlay.empty()) raw = apply_overlay(raw, load_overlay(o.overlay));
  auto defects = validate(raw);
  std::size_t errors = 0;
  for (const auto& d : defects) {
    out << d.describe() << "\n";
    if (d.severity == Severity::Error) ++errors;
  }
  out << raw.rows.size() << " rows, " << errors << " errors, " << defects.size() - errors
      << " warnings\n";
  return errors ? 1 : 0;
}

int cmd_run(const Options& o, std::ostream& out) {
  Machine m = load_machine(o.machine);
  Configuration c = initial_configuration(m);
  if (!o.entry.empty()) {
    auto id = m.find(o.entry);
    if (!id) throw UsageError("unknown entry state '" + o.entry + "'");
    c.state = *id;
  }
  RunLimits limits;
  limits.max_steps = o.steps;
  limits.max_support_cells = o.cells;
  limits.cycle_check = o.cycle;
  std::optional<std::pair<Cell, Cell>> window;
  if (!o.window.empty()) window = parse_window(o.window);
  RunOptions options;
  if (o.trace) {
    auto [a, b] = window.value_or(std::make_pair(Cell{-10}, Cell{10}));
    options.trace = make_trace_printer(out, m, a, b);
  }
  auto t0 = std::chrono::steady_clock::now();
  RunOutcome r = run(m, std::move(c), limits, options);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out << "outcome=" << to_string(r.kind) << " steps=" << r.steps()
      << " state=" << m.name(r.final.state);
  if (r.kind == OutcomeKind::CycleDetected) {
    out << " first_visit=" << r.first_visit << " period=" << r.period;
  }
  if (!o.deterministic) out << " seconds=" << secs;
  out << "\n";
  if (window) {
    out << "window " << window->first << ".." << window->second << ": "
        << format_symbols(snapshot(r.final.tape, window->first, window->second)) << "\n";
  }
  out << "blocks [" << format_naturals(decode_tape(r.final.tape)) << "]\n";
  return 0;
}

int cmd_compose(const Options& o, std::ostream& out) {
  ComposedMachine c = compose(load_manifest(o.manifest));
  write_file(o.output, serialize(c.machine));
  out << "composed " << state_count(c.machine) << " states into " << o.output << "\n";
  return 0;
}

int cmd_optimize(const Options& o, std::ostream& out) {
  Machine m = load_machine(o.manifest);
  std::vector<Scenario> suite;
  if (o.scenarios.empty()) {
    out << "no scenarios given: structural candidates only\n";
  } else {
    suite = load_scenarios(o.scenarios);
  }
  ReadProfile profile = profile_reads(m, suite);
  MergeOptions options;
  options.use_profile = !suite.empty();
  MergePlan plan = propose_merges(m, profile, options);
  Machine merged = apply_merges(m, plan);
  write_file(o.output, serialize(plan));
  out << "states before " << state_count(m) << " after " << state_count(merged) << " ("
      << plan.pairs.size() << " merges)\n";
  auto residual = residual_one_sided(merged);
  if (!residual.empty()) {
    out << "residual one-sided:";
    for (const auto& r : residual) out << ' ' << r;
    out << "\n";
  }
  if (suite.empty()) return 0;
  MergeVerdict v = verify_merge(m, merged, suite);
  for (const auto& f : v.findings) {
    out << "divergence " << f.scenario << ": " << f.detail;
    if (f.first_differing_step) out << " at step " << *f.first_differing_step;
    out << "\n";
  }
  out << (v.equivalent ? "equivalent" : "not equivalent") << " on " << v.scenarios
      << " scenarios\n";
  return v.equivalent ? 0 : 1;
}

int cmd_verify(const Options& o, std::ostream& out) {
  SuiteResult r = run_suite(load_scenarios(o.scenarios), o.jobs);
  for (const auto& rep : r.reports) out << format_report(rep) << "\n";
  out << r.passed << " passed, " << r.failed << " failed\n";
  if (!o.summary.empty()) write_file(o.summary, summary_json(r, o.deterministic));
  return r.ok() ? 0 : 1;
}

int cmd_bb_lookup(const Options& o, std::ostream& out) {
  std::optional<BBEntry> e;
  if (o.registry.empty()) {
    e = bb_lookup(o.n);
  } else {
    BBRegistry r = standard_registry();
    for (const auto& [n, entry] : load_registry(o.registry).entries()) r.add(entry);
    e = r.lookup(o.n);
  }
  if (!e) {
    out << "BB(" << o.n << ") unknown\n";
    return 1;
  }
  out << e->value << "\n";
  return 0;
}

int cmd_bb_brute(const Options& o, std::ostream& out) {
  BruteForceOptions options;
  options.mirror_reduction = o.mirror;
  options.jobs = o.jobs;
  BruteForceResult r = brute_force_bb(o.n, o.cap, options);
  out << "n=" << r.n << " cap=" << r.step_cap << " machines=" << r.machines
      << " halted=" << r.halted << " cycled=" << r.cycled << " translated=" << r.translated
      << " no_halt_reachable=" << r.no_halt_reachable << " inconclusive=" << r.inconclusive
      << "\n";
  if (!r.value) {
    out << "inconclusive: raise --cap (max halting steps so far " << r.max_halting_steps << ")\n";
    return 1;
  }
  out << "BB(" << r.n << ") = " << *r.value << "\n";
  if (r.champion) out << serialize(*r.champion);
  return 0;
}

int cmd_bb_certify(const Options& o, std::ostream& out) {
  Machine m = load_machine(o.manifest);
  RunLimits limits;
  limits.max_steps = o.steps;
  limits.max_support_cells = o.cells;
  limits.cycle_check = o.cycle;
  RunOutcome r = run(m, initial_configuration(m), limits);
  BBRegistry registry = standard_registry();
  if (!o.registry.empty()) {
    for (const auto& [n, entry] : load_registry(o.registry).entries()) registry.add(entry);
  }
  auto cert = certify_nonhalt(m, r, registry, o.manifest);
  if (!cert) {
    out << "no certificate: outcome=" << to_string(r.kind) << " steps=" << r.steps()
        << " states=" << state_count(m) << "\n";
    return 1;
  }
  std::string text = serialize(*cert);
  if (o.output.empty()) {
    out << text;
  } else {
    write_file(o.output, text);
    out << "certificate written to " << o.output << "\n";
  }
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Conjecture Turing machine toolkit", "conjtm"};
  app.require_subcommand(1);
  app.add_flag("--deterministic", o.deterministic, "Omit timing fields");

  auto* validate_cmd = app.add_subcommand("validate", "Report table defects");
  validate_cmd->add_option("table", o.table, "Table file")->required();
  validate_cmd->add_option("--overlay", o.overlay, "Overlay file");

  auto* run_cmd = app.add_subcommand("run", "Run a machine from a blank tape");
  run_cmd->add_option("machine", o.machine, "Manifest, manifest#section, or table")->required();
  run_cmd->add_option("--entry", o.entry, "Entry state");
  run_cmd->add_option("--steps", o.steps, "Step budget");
  run_cmd->add_option("--cells", o.cells, "Tape extent cap");
  run_cmd->add_flag("--trace", o.trace, "Print one line per step");
  run_cmd->add_flag("--cycle", o.cycle, "Detect configuration cycles");
  run_cmd->add_option("--window", o.window, "Snapshot window a..b");

  auto* compose_cmd = app.add_subcommand("compose", "Link a manifest into one table");
  compose_cmd->add_option("manifest", o.manifest)->required();
  compose_cmd->add_option("-o", o.output, "Output table")->required();

  auto* optimize_cmd = app.add_subcommand("optimize", "Propose and check state merges");
  optimize_cmd->add_option("manifest", o.manifest, "Manifest or table")->required();
  optimize_cmd->add_option("--scenarios", o.scenarios, "Scenario file for read profiles");
  optimize_cmd->add_option("-o", o.output, "Output plan")->required();

  auto* verify_cmd = app.add_subcommand("verify", "Run a scenario suite");
  verify_cmd->add_option("scenarios", o.scenarios)->required();
  verify_cmd->add_option("--jobs", o.jobs, "Concurrent scenarios")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--summary", o.summary, "Write a JSON summary");

  auto* bb_cmd = app.add_subcommand("bb", "Busy beaver tools");
  bb_cmd->require_subcommand(1);
  auto* lookup_cmd = bb_cmd->add_subcommand("lookup", "Registry value");
  lookup_cmd->add_option("n", o.n)->required();
  lookup_cmd->add_option("--registry", o.registry, "Extra registry file");
  auto* brute_cmd = bb_cmd->add_subcommand("brute", "Exhaustive search for n <= 2");
  brute_cmd->add_option("n", o.n)->required();
  brute_cmd->add_option("--cap", o.cap, "Step cap per machine");
  brute_cmd->add_flag("--mirror", o.mirror, "Skip left/right mirror images");
  brute_cmd->add_option("--jobs", o.jobs)->check(CLI::PositiveNumber);
  auto* certify_cmd = bb_cmd->add_subcommand("certify", "Non-halting certificate");
  certify_cmd->add_option("machine", o.manifest)->required();
  certify_cmd->add_option("--steps", o.steps)->required();
  certify_cmd->add_option("--cells", o.cells, "Tape extent cap");
  certify_cmd->add_flag("--cycle", o.cycle, "Detect configuration cycles");
  certify_cmd->add_option("--registry", o.registry, "Extra registry file");
  certify_cmd->add_option("-o", o.output, "Output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate_cmd) return cmd_validate(o, out);
    if (*run_cmd) return cmd_run(o, out);
    if (*compose_cmd) return cmd_compose(o, out);
    if (*optimize_cmd) return cmd_optimize(o, out);
    if (*verify_cmd) return cmd_verify(o, out);
    if (*lookup_cmd) return cmd_bb_lookup(o, out);
    if (*brute_cmd) return cmd_bb_brute(o, out);
    if (*certify_cmd) return cmd_bb_certify(o, out);
  } catch (const BuildError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << app.help();
  return 2;
}

}  // namespace conjtm
