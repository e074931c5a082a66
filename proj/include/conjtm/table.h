// Pipe-delimited transition tables: parsing, validation, overlays, and
// conversion to Machine values.
//
// Table file format, one row per line:
//
//   # comment
//   !name <label>
//   !start <state>
//   <state>|<reads>|<writes>|<moves>|<calls>
//
// reads/writes are 0 or 1, moves is L or R, calls is a state name, "NM"
// (unresolved section exit) or "HALT". Whitespace around fields is ignored and
// a header row spelled "State|Reads|Writes|Moves|Calls" is skipped.
//
// Overlay file format:
//
//   rename <row> <state|calls> <old> <new>
//   patch <row> <reads|writes|moves> <old> <new>
//   start <state>
//
// Row indices are zero-based positions among the data rows of the table.

#ifndef CONJTM_TABLE_H_
#define CONJTM_TABLE_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "conjtm/machine.h"

namespace conjtm {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct TableRow {
  std::string state;
  Symbol reads = Symbol::Zero;
  Symbol writes = Symbol::Zero;
  Move moves = Move::Right;
  std::string calls;

  Action action() const { return Action{writes, moves, calls}; }
  friend bool operator==(const TableRow&, const TableRow&) = default;
};

struct RawTable {
  std::string name;
  std::vector<TableRow> rows;
  std::optional<std::string> declared_start;

  friend bool operator==(const RawTable&, const RawTable&) = default;
};

enum class Severity { Error, Warning };

enum class DefectKind {
  ConflictingTransition,
  DuplicateRow,
  UndefinedCallTarget,
  MissingRead,
  UnreachableState,
};

struct Defect {
  DefectKind kind;
  Severity severity;
  std::string state;            // conflicting, missing-read, unreachable
  std::optional<Symbol> read;   // conflicting, missing-read
  std::size_t row_a = 0;        // conflicting, duplicate, undefined target
  std::size_t row_b = 0;        // conflicting, duplicate
  std::string target;           // undefined target

  std::string describe() const;
};

std::string to_string(DefectKind kind);

enum class RowField { State, Reads, Writes, Moves, Calls };

struct OverlayEdit {
  std::size_t row = 0;
  RowField field = RowField::State;
  std::string old_value;
  std::string new_value;
};

struct Overlay {
  std::vector<OverlayEdit> edits;
  std::optional<std::string> start_override;
};

RawTable parse_table(std::string_view text);
Overlay parse_overlay(std::string_view text);

std::vector<Defect> validate(const RawTable& raw);
bool has_errors(const std::vector<Defect>& defects);

// Throws std::out_of_range for a bad row index and std::invalid_argument when
// an edit's old value does not match the row.
RawTable apply_overlay(const RawTable& raw, const Overlay& overlay);

class BuildError : public std::runtime_error {
 public:
  BuildError(const std::string& table, std::vector<Defect> defects);
  const std::vector<Defect>& defects() const { return defects_; }

 private:
  std::vector<Defect> defects_;
};

// Refuses tables with error-severity defects. An empty start falls back to the
// declared start.
Machine build_machine(const RawTable& raw, std::string_view start = {});

std::string serialize(const RawTable& raw);
// Rows grouped by state in state order, read 0 before read 1.
std::string serialize(const Machine& machine);
RawTable to_raw_table(const Machine& machine);

std::string serialize(const Overlay& overlay);

// File helpers; throw std::runtime_error when the file cannot be read.
std::string read_file(const std::string& path);
RawTable load_table(const std::string& path);
Overlay load_overlay(const std::string& path);

}  // namespace conjtm

#endif  // CONJTM_TABLE_H_
