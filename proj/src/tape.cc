#include "conjtm/tape.h"

#include <algorithm>

namespace conjtm {

void Tape::reserve_cell(Cell index) {
  if (cells_.empty()) {
    cells_.assign(64, 0);
    base_ = index - 32;
    return;
  }
  Cell size = static_cast<Cell>(cells_.size());
  Cell i = index - base_;
  if (i >= 0 && i < size) return;
  Cell grow = std::max(size, i < 0 ? -i : i - size + 1);
  if (i < 0) {
    cells_.insert(cells_.begin(), static_cast<std::size_t>(grow), 0);
    base_ -= grow;
  } else {
    cells_.resize(static_cast<std::size_t>(size + grow), 0);
  }
}

void Tape::write(Cell index, Symbol value) {
  touch(index);
  if (value == Symbol::Zero && read(index) == Symbol::Zero) return;
  reserve_cell(index);
  auto& cell = cells_[static_cast<std::size_t>(index - base_)];
  ones_ += static_cast<std::uint64_t>(value) - cell;
  cell = static_cast<std::uint8_t>(value);
}

std::optional<std::pair<Cell, Cell>> Tape::support() const {
  if (ones_ == 0) return std::nullopt;
  auto first = std::find(cells_.begin(), cells_.end(), 1);
  auto last = std::find(cells_.rbegin(), cells_.rend(), 1);
  Cell lo = base_ + (first - cells_.begin());
  Cell hi = base_ + static_cast<Cell>(cells_.size()) - 1 - (last - cells_.rbegin());
  return std::make_pair(lo, hi);
}

bool operator==(const Tape& a, const Tape& b) {
  if (a.head_ != b.head_ || a.ones_ != b.ones_) return false;
  auto sa = a.support();
  if (sa != b.support()) return false;
  if (!sa) return true;
  for (Cell c = sa->first; c <= sa->second; ++c) {
    if (a.read(c) != b.read(c)) return false;
  }
  return true;
}

}  // namespace conjtm
