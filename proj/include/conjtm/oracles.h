// Exact-integer ground truth and unary tape codecs.

#ifndef CONJTM_ORACLES_H_
#define CONJTM_ORACLES_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "conjtm/tape.h"

namespace conjtm {

using Natural = boost::multiprecision::cpp_int;

// Trial division up to the square root.
bool is_prime(const Natural& n);

// F_0 = 3, F_n = (F_{n-1} - 1)^2 + 1.
Natural fermat_number(unsigned n);

Natural factorial_plus_one(unsigned n);

// Root when n is a perfect square. Computed by integer square root and by
// subtracting 1, 3, 5, ... in turn; a disagreement throws std::logic_error.
// The subtraction pass is O(sqrt n).
std::optional<Natural> perfect_square_root(const Natural& n);
inline bool is_perfect_square(const Natural& n) { return perfect_square_root(n).has_value(); }

struct HeadRule {
  enum class Kind { BlockLeft, BlockRight, Offset };
  Kind kind = Kind::BlockLeft;
  std::int64_t value = 0;  // block index, or absolute cell for Offset
};

// Blocks are laid out from cell 0 with one Zero between neighbours.
struct UnaryLayout {
  std::vector<Natural> blocks;
  HeadRule head;
};

// Throws std::invalid_argument for a zero block, a block too large to write,
// or a head rule naming a missing block.
Tape encode_tape(const UnaryLayout& layout);

// Start cell of each block in encode_tape's layout.
std::vector<Cell> block_starts(const std::vector<Natural>& blocks);

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DecodeSpec {
  // Scan window; unset means the tape's One support.
  std::optional<Cell> first;
  std::optional<Cell> last;
  std::optional<std::size_t> expected_blocks;
};

// Maximal One runs in the window, left to right. Throws DecodeError when
// expected_blocks is set and does not match.
std::vector<Natural> decode_tape(const Tape& tape, const DecodeSpec& spec = {});

std::string format_naturals(const std::vector<Natural>& values);

// Oracles referenced by name from scenario files.
//
// Value oracles (fermat, square_plus_one, power_of_two, factorial_plus_one)
// map an argument to the block the machine must leave. Verdict oracles
// (prime, square, brocard) say whether the machine must halt; on a negative
// verdict the machine hands the argument back decremented by one.
struct OracleAnswer {
  bool verdict = false;
  bool has_verdict = false;
  Natural value;  // value oracles only
};

bool is_known_oracle(const std::string& name);
bool is_verdict_oracle(const std::string& name);
// Throws std::invalid_argument for an unknown name.
OracleAnswer ask_oracle(const std::string& name, const Natural& arg);

}  // namespace conjtm

#endif  // CONJTM_ORACLES_H_
