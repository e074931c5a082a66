// Two-way-infinite binary tape.
//
// Cells live in a contiguous buffer that grows in either direction on demand;
// cell indices are signed and every cell outside the buffer reads Zero.

#ifndef CONJTM_TAPE_H_
#define CONJTM_TAPE_H_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "conjtm/machine.h"

namespace conjtm {

using Cell = std::int64_t;

class Tape {
 public:
  Tape() = default;

  Symbol read(Cell index) const {
    Cell i = index - base_;
    if (i < 0 || i >= static_cast<Cell>(cells_.size())) return Symbol::Zero;
    return static_cast<Symbol>(cells_[i]);
  }
  void write(Cell index, Symbol value);

  Cell head() const { return head_; }
  void set_head(Cell index) {
    head_ = index;
    touch(index);
  }
  Symbol read_head() const { return read(head_); }

  // Number of One cells.
  std::uint64_t ones() const { return ones_; }

  // Leftmost and rightmost One cells, if any.
  std::optional<std::pair<Cell, Cell>> support() const;

  // Smallest cell range covering every cell the head visited plus the initial
  // contents. This is what the engine's memory cap is measured against.
  std::pair<Cell, Cell> extent() const {
    return touched_ ? std::make_pair(std::min(lo_, head_), std::max(hi_, head_))
                    : std::make_pair(head_, head_);
  }
  std::uint64_t extent_size() const {
    auto [lo, hi] = extent();
    return static_cast<std::uint64_t>(hi - lo + 1);
  }

  friend bool operator==(const Tape& a, const Tape& b);

 private:
  friend struct TapeAccess;

  void touch(Cell index) {
    if (!touched_) {
      lo_ = hi_ = index;
      touched_ = true;
    }
    if (index < lo_) lo_ = index;
    if (index > hi_) hi_ = index;
  }
  // Makes index addressable in the buffer.
  void reserve_cell(Cell index);

  std::vector<std::uint8_t> cells_;
  Cell base_ = 0;
  Cell head_ = 0;
  Cell lo_ = 0;
  Cell hi_ = 0;
  std::uint64_t ones_ = 0;
  bool touched_ = false;
};

}  // namespace conjtm

#endif  // CONJTM_TAPE_H_
