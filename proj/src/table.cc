#include "conjtm/table.h"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace conjtm {
namespace {

std::string_view trim(std::string_view s) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(begin, i - begin)));
      begin = i + 1;
    }
  }
  return out;
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  for (auto w : split(s, ' ')) {
    for (auto v : split(w, '\t')) {
      if (!v.empty()) out.push_back(v);
    }
  }
  return out;
}

// Strips a trailing comment and surrounding whitespace.
std::string_view content(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  return trim(line);
}

template <typename Fn>
void for_each_line(std::string_view text, Fn fn) {
  int number = 0;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    fn(number, content(text.substr(begin, end - begin)));
    begin = end + 1;
  }
}

std::optional<Symbol> to_symbol(std::string_view s) {
  if (s == "0") return Symbol::Zero;
  if (s == "1") return Symbol::One;
  return std::nullopt;
}

std::optional<Move> to_move(std::string_view s) {
  if (s == "L") return Move::Left;
  if (s == "R") return Move::Right;
  return std::nullopt;
}

bool is_header(const std::vector<std::string_view>& fields) {
  std::string first(fields[0]);
  std::transform(first.begin(), first.end(), first.begin(), ::tolower);
  return first == "state";
}

std::string field_text(const TableRow& row, RowField field) {
  switch (field) {
    case RowField::State: return row.state;
    case RowField::Reads: return std::string(1, symbol_char(row.reads));
    case RowField::Writes: return std::string(1, symbol_char(row.writes));
    case RowField::Moves: return std::string(1, move_char(row.moves));
    case RowField::Calls: return row.calls;
  }
  return {};
}

const char* field_name(RowField field) {
  switch (field) {
    case RowField::State: return "state";
    case RowField::Reads: return "reads";
    case RowField::Writes: return "writes";
    case RowField::Moves: return "moves";
    case RowField::Calls: return "calls";
  }
  return "?";
}

std::string row_text(const TableRow& r) {
  std::string out = r.state;
  out += '|';
  out += symbol_char(r.reads);
  out += '|';
  out += symbol_char(r.writes);
  out += '|';
  out += move_char(r.moves);
  out += '|';
  out += r.calls;
  return out;
}

}  // namespace

RawTable parse_table(std::string_view text) {
  RawTable table;
  for_each_line(text, [&](int line, std::string_view s) {
    if (s.empty()) return;
    if (s.front() == '!') {
      auto w = words(s.substr(1));
      if (w.size() != 2) throw ParseError(line, "directive takes exactly one argument");
      if (w[0] == "name") {
        table.name = std::string(w[1]);
      } else if (w[0] == "start") {
        table.declared_start = std::string(w[1]);
      } else {
        throw ParseError(line, "unknown directive '!" + std::string(w[0]) + "'");
      }
      return;
    }
    auto fields = split(s, '|');
    if (fields.size() != 5) {
      throw ParseError(line, "expected 5 '|'-separated fields, found " +
                                 std::to_string(fields.size()));
    }
    if (is_header(fields)) return;
    TableRow row;
    row.state = std::string(fields[0]);
    auto reads = to_symbol(fields[1]);
    if (!reads) throw ParseError(line, "invalid read symbol '" + std::string(fields[1]) + "'");
    auto writes = to_symbol(fields[2]);
    if (!writes) throw ParseError(line, "invalid write symbol '" + std::string(fields[2]) + "'");
    auto moves = to_move(fields[3]);
    if (!moves) throw ParseError(line, "invalid move '" + std::string(fields[3]) + "'");
    row.reads = *reads;
    row.writes = *writes;
    row.moves = *moves;
    row.calls = std::string(fields[4]);
    if (row.state.empty() || row.calls.empty()) throw ParseError(line, "empty state name");
    table.rows.push_back(std::move(row));
  });
  return table;
}

Overlay parse_overlay(std::string_view text) {
  Overlay overlay;
  for_each_line(text, [&](int line, std::string_view s) {
    if (s.empty()) return;
    auto w = words(s);
    if (w[0] == "start") {
      if (w.size() != 2) throw ParseError(line, "start takes one state name");
      overlay.start_override = std::string(w[1]);
      return;
    }
    if (w[0] != "rename" && w[0] != "patch") {
      throw ParseError(line, "unknown overlay directive '" + std::string(w[0]) + "'");
    }
    if (w.size() != 5) throw ParseError(line, std::string(w[0]) + " takes 4 arguments");
    OverlayEdit edit;
    try {
      edit.row = std::stoul(std::string(w[1]));
    } catch (const std::exception&) {
      throw ParseError(line, "invalid row index '" + std::string(w[1]) + "'");
    }
    static const std::map<std::string_view, RowField> kFields = {
        {"state", RowField::State}, {"reads", RowField::Reads}, {"writes", RowField::Writes},
        {"moves", RowField::Moves}, {"calls", RowField::Calls}};
    auto f = kFields.find(w[2]);
    if (f == kFields.end()) throw ParseError(line, "unknown field '" + std::string(w[2]) + "'");
    bool is_name = f->second == RowField::State || f->second == RowField::Calls;
    if (is_name != (w[0] == "rename")) {
      throw ParseError(line, "use 'rename' for state/calls and 'patch' for reads/writes/moves");
    }
    edit.field = f->second;
    edit.old_value = std::string(w[3]);
    edit.new_value = std::string(w[4]);
    overlay.edits.push_back(std::move(edit));
  });
  return overlay;
}

std::string to_string(DefectKind kind) {
  switch (kind) {
    case DefectKind::ConflictingTransition: return "conflicting-transition";
    case DefectKind::DuplicateRow: return "duplicate-row";
    case DefectKind::UndefinedCallTarget: return "undefined-call-target";
    case DefectKind::MissingRead: return "missing-read";
    case DefectKind::UnreachableState: return "unreachable-state";
  }
  return "?";
}

std::string Defect::describe() const {
  std::ostringstream out;
  out << (severity == Severity::Error ? "error" : "warning") << ' ' << to_string(kind) << ": ";
  switch (kind) {
    case DefectKind::ConflictingTransition:
      out << "state " << state << " on read " << symbol_char(*read) << " (rows " << row_a
          << " and " << row_b << ")";
      break;
    case DefectKind::DuplicateRow:
      out << "rows " << row_a << " and " << row_b << " are identical";
      break;
    case DefectKind::UndefinedCallTarget:
      out << "row " << row_a << " calls '" << target << "', which has no rows";
      break;
    case DefectKind::MissingRead:
      out << "state " << state << " has no row for read " << symbol_char(*read);
      break;
    case DefectKind::UnreachableState:
      out << "state " << state << " is unreachable from the start state";
      break;
  }
  return out.str();
}

std::vector<Defect> validate(const RawTable& raw) {
  std::vector<Defect> out;
  const auto& rows = raw.rows;

  std::map<std::pair<std::string, Symbol>, std::size_t> first_row;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto key = std::make_pair(rows[i].state, rows[i].reads);
    auto [it, inserted] = first_row.emplace(key, i);
    if (inserted) continue;
    std::size_t j = it->second;
    if (rows[j] == rows[i]) {
      out.push_back({DefectKind::DuplicateRow, Severity::Error, rows[i].state, rows[i].reads, j, i, {}});
    } else {
      out.push_back(
          {DefectKind::ConflictingTransition, Severity::Error, rows[i].state, rows[i].reads, j, i, {}});
    }
  }

  std::vector<std::string> states;
  std::set<std::string> defined;
  for (const auto& r : rows) {
    if (defined.insert(r.state).second) states.push_back(r.state);
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& target = rows[i].calls;
    if (!defined.count(target) && !is_reserved(target)) {
      out.push_back({DefectKind::UndefinedCallTarget, Severity::Warning, {}, {}, i, 0, target});
    }
  }
  for (const auto& s : states) {
    for (Symbol r : {Symbol::Zero, Symbol::One}) {
      if (!first_row.count({s, r})) {
        out.push_back({DefectKind::MissingRead, Severity::Warning, s, r, 0, 0, {}});
      }
    }
  }
  if (raw.declared_start) {
    std::set<std::string> seen{*raw.declared_start};
    std::deque<std::string> queue{*raw.declared_start};
    while (!queue.empty()) {
      std::string s = queue.front();
      queue.pop_front();
      for (const auto& r : rows) {
        if (r.state == s && seen.insert(r.calls).second) queue.push_back(r.calls);
      }
    }
    for (const auto& s : states) {
      if (!seen.count(s)) {
        out.push_back({DefectKind::UnreachableState, Severity::Warning, s, {}, 0, 0, {}});
      }
    }
  }
  return out;
}

bool has_errors(const std::vector<Defect>& defects) {
  return std::any_of(defects.begin(), defects.end(),
                     [](const Defect& d) { return d.severity == Severity::Error; });
}

RawTable apply_overlay(const RawTable& raw, const Overlay& overlay) {
  RawTable out = raw;
  for (const auto& edit : overlay.edits) {
    if (edit.row >= out.rows.size()) {
      throw std::out_of_range("overlay row " + std::to_string(edit.row) + " out of range (table has " +
                              std::to_string(out.rows.size()) + " rows)");
    }
    TableRow& row = out.rows[edit.row];
    std::string current = field_text(row, edit.field);
    if (current != edit.old_value) {
      throw std::invalid_argument("overlay row " + std::to_string(edit.row) + " " +
                                  field_name(edit.field) + ": expected '" + edit.old_value +
                                  "', found '" + current + "'");
    }
    auto bad_value = [&] {
      return std::invalid_argument("overlay row " + std::to_string(edit.row) + ": invalid " +
                                   field_name(edit.field) + " value '" + edit.new_value + "'");
    };
    switch (edit.field) {
      case RowField::State: row.state = edit.new_value; break;
      case RowField::Calls: row.calls = edit.new_value; break;
      case RowField::Reads:
      case RowField::Writes: {
        auto s = to_symbol(edit.new_value);
        if (!s) throw bad_value();
        (edit.field == RowField::Reads ? row.reads : row.writes) = *s;
        break;
      }
      case RowField::Moves: {
        auto m = to_move(edit.new_value);
        if (!m) throw bad_value();
        row.moves = *m;
        break;
      }
    }
  }
  if (overlay.start_override) out.declared_start = overlay.start_override;
  return out;
}

BuildError::BuildError(const std::string& table, std::vector<Defect> defects)
    : std::runtime_error([&] {
        std::string msg = "refusing to build '" + table + "':";
        for (const auto& d : defects) msg += "\n  " + d.describe();
        return msg;
      }()),
      defects_(std::move(defects)) {}

Machine build_machine(const RawTable& raw, std::string_view start) {
  std::vector<Defect> errors;
  for (auto& d : validate(raw)) {
    if (d.severity == Severity::Error) errors.push_back(std::move(d));
  }
  if (!errors.empty()) throw BuildError(raw.name, std::move(errors));
  std::string chosen(start);
  if (chosen.empty()) {
    if (!raw.declared_start) throw MachineError("table '" + raw.name + "' has no start state");
    chosen = *raw.declared_start;
  }
  MachineBuilder builder(raw.name);
  for (const auto& r : raw.rows) builder.declare(r.state);
  for (const auto& r : raw.rows) builder.add(r.state, r.reads, r.action());
  return builder.build(chosen);
}

std::string serialize(const RawTable& raw) {
  std::string out;
  if (!raw.name.empty()) out += "!name " + raw.name + "\n";
  if (raw.declared_start) out += "!start " + *raw.declared_start + "\n";
  for (const auto& r : raw.rows) out += row_text(r) + "\n";
  return out;
}

RawTable to_raw_table(const Machine& machine) {
  RawTable raw;
  raw.name = machine.label();
  raw.declared_start = machine.name(machine.start());
  for (StateId s : machine.defined_states()) {
    for (Symbol r : {Symbol::Zero, Symbol::One}) {
      if (auto a = machine.action(s, r)) {
        raw.rows.push_back(TableRow{machine.name(s), r, a->write, a->move, a->target});
      }
    }
  }
  return raw;
}

std::string serialize(const Machine& machine) { return serialize(to_raw_table(machine)); }

std::string serialize(const Overlay& overlay) {
  std::string out;
  for (const auto& e : overlay.edits) {
    bool is_name = e.field == RowField::State || e.field == RowField::Calls;
    out += std::string(is_name ? "rename " : "patch ") + std::to_string(e.row) + " " +
           field_name(e.field) + " " + e.old_value + " " + e.new_value + "\n";
  }
  if (overlay.start_override) out += "start " + *overlay.start_override + "\n";
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RawTable load_table(const std::string& path) {
  try {
    return parse_table(read_file(path));
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

Overlay load_overlay(const std::string& path) {
  try {
    return parse_overlay(read_file(path));
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace conjtm
