#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ulab/bytes.hpp"

namespace ulab {

// Dialect A is the eight-instruction tape language; dialect B adds a
// single-step "zero the current cell" instruction.
enum class Dialect : std::uint8_t { kA, kB };

// Numeric codes follow the listed order; text form uses "+-<>[],.z".
enum class Op : std::uint8_t {
  kInc = 0,
  kDec = 1,
  kLeft = 2,
  kRight = 3,
  kOpen = 4,
  kClose = 5,
  kRead = 6,
  kWrite = 7,
  kZero = 8,
};

inline constexpr std::string_view kSymbols = "+-<>[],.z";

char dialect_char(Dialect dialect);
Dialect parse_dialect(std::string_view name);

// Number of instructions available in a dialect (8 or 9).
std::size_t alphabet_size(Dialect dialect);

char op_symbol(Op op);

// Immutable, well-formed instruction sequence with precomputed bracket
// matches. Always satisfies: balanced brackets, every op in the dialect.
class Program {
 public:
  Program() = default;

  static Program parse(std::string_view text, Dialect dialect);
  // Symbol codes 0..7 (A) or 0..8 (B).
  static Program from_codes(std::span<const std::uint8_t> codes,
                            Dialect dialect);
  static Program from_ops(std::vector<Op> ops, Dialect dialect);

  Dialect dialect() const { return dialect_; }
  std::size_t size() const { return ops_.size(); }
  bool empty() const { return ops_.empty(); }
  std::span<const Op> ops() const { return ops_; }
  Op op(std::size_t i) const { return ops_[i]; }
  // Index of the bracket matching the one at i.
  std::uint32_t match(std::size_t i) const { return match_[i]; }

  std::string text() const;
  Bytes codes() const;
  bool contains(Op op) const;

  friend bool operator==(const Program& a, const Program& b) {
    return a.dialect_ == b.dialect_ && a.ops_ == b.ops_;
  }

 private:
  Program(std::vector<Op> ops, Dialect dialect);

  Dialect dialect_ = Dialect::kA;
  std::vector<Op> ops_;
  std::vector<std::uint32_t> match_;
};

inline Program parse(std::string_view text, Dialect dialect = Dialect::kA) {
  return Program::parse(text, dialect);
}

struct Halted {
  Bytes output;
  std::uint64_t steps = 0;
  friend bool operator==(const Halted&, const Halted&) = default;
};

struct FuelExhausted {
  std::uint64_t steps = 0;
  std::size_t ip = 0;
  Bytes output_so_far;
  friend bool operator==(const FuelExhausted&, const FuelExhausted&) = default;
};

using ExecutionOutcome = std::variant<Halted, FuelExhausted>;

inline bool halted(const ExecutionOutcome& o) {
  return std::holds_alternative<Halted>(o);
}
const Bytes& output_of(const ExecutionOutcome& o);
std::uint64_t steps_of(const ExecutionOutcome& o);

// Cells are 8-bit wrapping, the tape is unbounded in both directions and
// a read past the end of input stores 0. Only the step budget varies.
struct MachineConfig {
  std::uint64_t fuel = 1'000'000;
};

// Sparse-looking but dense-backed tape addressed by signed position.
class Tape {
 public:
  Tape();

  std::uint8_t get(std::int64_t pos) const;
  void set(std::int64_t pos, std::uint8_t value);
  void clear();

  // Inclusive range of positions that may hold nonzero cells.
  std::int64_t lowest() const;
  std::int64_t highest() const;
  // Cells [from, from + n).
  Bytes window(std::int64_t from, std::size_t n) const;
  // Nonzero cells as (position, value) pairs, ascending.
  std::vector<std::pair<std::int64_t, std::uint8_t>> nonzero() const;

 private:
  friend class Machine;
  void ensure(std::int64_t pos);

  std::vector<std::uint8_t> cells_;
  std::int64_t origin_;  // index of position 0 in cells_
};

// Reusable interpreter state. Reusing one Machine across many short runs
// avoids reallocating the tape.
class Machine {
 public:
  explicit Machine(MachineConfig cfg = {}) : cfg_(cfg) {}

  const MachineConfig& config() const { return cfg_; }

  // Runs from a blank tape with the head at position 0.
  ExecutionOutcome run(const Program& p, std::span<const std::uint8_t> input);
  // Runs on the current tape from the current head position without
  // resetting either.
  ExecutionOutcome resume(const Program& p,
                          std::span<const std::uint8_t> input);

  // Plain instruction-at-a-time interpretation from a blank tape. Same
  // outcome as run(); kept as the reference the compiled path is checked
  // against.
  ExecutionOutcome run_stepwise(const Program& p,
                                std::span<const std::uint8_t> input);

  Tape& tape() { return tape_; }
  const Tape& tape() const { return tape_; }
  std::int64_t head() const { return head_; }
  void set_head(std::int64_t pos) { head_ = pos; }
  void reset();

 private:
  // Instruction-at-a-time from a given state; used where a compiled step
  // would overrun the budget.
  ExecutionOutcome interpret(const Program& p,
                             std::span<const std::uint8_t> input,
                             std::size_t ip, std::uint64_t steps, Bytes output,
                             std::size_t in_pos);

  MachineConfig cfg_;
  Tape tape_;
  std::int64_t head_ = 0;
};

ExecutionOutcome execute(const Program& p, std::span<const std::uint8_t> input,
                         const MachineConfig& cfg);

// Input-free program that prints s; for each byte the cell moves from its
// previous value by the shorter of +delta or -delta, then writes.
Program literal_printer(std::span<const std::uint8_t> s);
std::size_t literal_printer_length(std::span<const std::uint8_t> s);

// Rewrites dialect B into dialect A by replacing each zero instruction
// with "[-]". Dialect A input is returned unchanged (as dialect A).
Program expand_macros(const Program& p);

// Dialect-A program viewed as a dialect-B program.
Program embed_in_b(const Program& p);

}  // namespace ulab
