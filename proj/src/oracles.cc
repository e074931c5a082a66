#include "conjtm/oracles.h"

#include <limits>
#include <sstream>

namespace conjtm {
namespace {

bool fits_u64(const Natural& n) { return n <= std::numeric_limits<std::uint64_t>::max(); }

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d <= n / d; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::optional<Natural> root_by_odd_subtraction(Natural n) {
  if (fits_u64(n)) {
    auto r = n.convert_to<std::uint64_t>();
    std::uint64_t odd = 1, k = 0;
    while (r >= odd) {
      r -= odd;
      odd += 2;
      ++k;
    }
    if (r == 0) return Natural(k);
    return std::nullopt;
  }
  Natural odd = 1, k = 0;
  while (n >= odd) {
    n -= odd;
    odd += 2;
    ++k;
  }
  if (n == 0) return k;
  return std::nullopt;
}

}  // namespace

bool is_prime(const Natural& n) {
  if (fits_u64(n)) return is_prime_u64(n.convert_to<std::uint64_t>());
  if (n % 2 == 0) return false;
  for (Natural d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

Natural fermat_number(unsigned n) {
  Natural f = 3;
  for (unsigned i = 0; i < n; ++i) f = (f - 1) * (f - 1) + 1;
  return f;
}

Natural factorial_plus_one(unsigned n) {
  Natural f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f + 1;
}

std::optional<Natural> perfect_square_root(const Natural& n) {
  Natural r = boost::multiprecision::sqrt(n);
  std::optional<Natural> by_sqrt;
  if (r * r == n) by_sqrt = r;
  std::optional<Natural> by_odd = root_by_odd_subtraction(n);
  if (by_sqrt != by_odd) {
    throw std::logic_error("square oracles disagree on " + n.str());
  }
  return by_sqrt;
}

std::vector<Cell> block_starts(const std::vector<Natural>& blocks) {
  std::vector<Cell> starts;
  Cell at = 0;
  for (const auto& b : blocks) {
    starts.push_back(at);
    at += b.convert_to<Cell>() + 1;
  }
  return starts;
}

Tape encode_tape(const UnaryLayout& layout) {
  constexpr Cell kMaxBlock = Cell{1} << 40;
  for (const auto& b : layout.blocks) {
    if (b < 1) throw std::invalid_argument("unary blocks must be at least 1");
    if (b > kMaxBlock) throw std::invalid_argument("unary block too large: " + b.str());
  }
  Tape tape;
  auto starts = block_starts(layout.blocks);
  for (std::size_t i = 0; i < layout.blocks.size(); ++i) {
    Cell len = layout.blocks[i].convert_to<Cell>();
    // Right to left keeps buffer growth to a single allocation per block.
    for (Cell c = starts[i] + len - 1; c >= starts[i]; --c) tape.write(c, Symbol::One);
  }
  const HeadRule& h = layout.head;
  if (h.kind == HeadRule::Kind::Offset) {
    tape.set_head(h.value);
  } else {
    if (h.value < 0 || static_cast<std::size_t>(h.value) >= layout.blocks.size()) {
      throw std::invalid_argument("head rule names block " + std::to_string(h.value) +
                                  " of " + std::to_string(layout.blocks.size()));
    }
    Cell start = starts[h.value];
    tape.set_head(h.kind == HeadRule::Kind::BlockLeft
                      ? start
                      : start + layout.blocks[h.value].convert_to<Cell>() - 1);
  }
  return tape;
}

std::vector<Natural> decode_tape(const Tape& tape, const DecodeSpec& spec) {
  std::vector<Natural> out;
  auto support = tape.support();
  Cell first = spec.first.value_or(support ? support->first : 0);
  Cell last = spec.last.value_or(support ? support->second : -1);
  std::uint64_t run = 0;
  for (Cell c = first; c <= last; ++c) {
    if (tape.read(c) == Symbol::One) {
      ++run;
    } else if (run) {
      out.emplace_back(run);
      run = 0;
    }
  }
  if (run) out.emplace_back(run);
  if (spec.expected_blocks && *spec.expected_blocks != out.size()) {
    throw DecodeError("expected " + std::to_string(*spec.expected_blocks) + " blocks, found " +
                      std::to_string(out.size()) + " [" + format_naturals(out) + "]");
  }
  return out;
}

std::string format_naturals(const std::vector<Natural>& values) {
  std::ostringstream out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ',';
    out << values[i];
  }
  return out.str();
}

bool is_verdict_oracle(const std::string& name) {
  return name == "prime" || name == "square" || name == "brocard";
}

bool is_known_oracle(const std::string& name) {
  return is_verdict_oracle(name) || name == "fermat" || name == "square_plus_one" ||
         name == "power_of_two" || name == "factorial_plus_one";
}

OracleAnswer ask_oracle(const std::string& name, const Natural& arg) {
  OracleAnswer a;
  auto small = [&] {
    if (arg > 1'000'000) throw std::invalid_argument(name + " argument too large");
    return arg.convert_to<unsigned>();
  };
  if (name == "prime") {
    a.has_verdict = true;
    a.verdict = is_prime(arg);
  } else if (name == "square") {
    a.has_verdict = true;
    a.verdict = is_perfect_square(arg);
  } else if (name == "brocard") {
    a.has_verdict = true;
    a.verdict = is_perfect_square(factorial_plus_one(small()));
  } else if (name == "fermat") {
    a.value = fermat_number(small());
  } else if (name == "square_plus_one") {
    a.value = arg * arg + 1;
  } else if (name == "power_of_two") {
    a.value = Natural(1) << small();
  } else if (name == "factorial_plus_one") {
    a.value = factorial_plus_one(small());
  } else {
    throw std::invalid_argument("unknown oracle '" + name + "'");
  }
  return a;
}

}  // namespace conjtm
