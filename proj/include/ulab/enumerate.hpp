#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ulab/vm.hpp"

namespace ulab {

// Instruction codes available to the enumerator, in canonical order.
std::vector<Op> enumeration_alphabet(Dialect dialect, bool input_free);

// Number of well-formed programs of exactly length n. Computed from the
// closed form sum_j C(n,2j) * Catalan(j) * k^(n-2j) with k neutral
// (non-bracket) symbols. Throws Error(kInvalidInput) if n > 21.
std::uint64_t count_valid(std::size_t n, Dialect dialect, bool input_free);

// Position in the canonical (length, lexicographic) order of well-formed
// programs. Serializes as "A:3:17".
struct EnumerationCursor {
  Dialect dialect = Dialect::kA;
  std::size_t length = 0;
  std::uint64_t index = 0;

  std::string serialize() const;
  static EnumerationCursor parse(std::string_view line);

  friend bool operator==(const EnumerationCursor&,
                         const EnumerationCursor&) = default;
};

// Generates well-formed programs in canonical order: by length, then
// lexicographically over the alphabet order. Extension is pruned by a
// completion-count table, so no ill-formed string is ever materialized.
class ProgramEnumerator {
 public:
  ProgramEnumerator(Dialect dialect, bool input_free, std::size_t max_len);
  ProgramEnumerator(Dialect dialect, bool input_free, std::size_t max_len,
                    const EnumerationCursor& start);

  // Writes the next program's ops into `ops`; false once exhausted.
  bool next(std::vector<Op>& ops);
  std::optional<Program> next();

  // Cursor of the program that the next call will produce.
  EnumerationCursor cursor() const;

  Dialect dialect() const { return dialect_; }
  bool input_free() const { return input_free_; }

  // Number of valid completions of `remaining` symbols starting at bracket
  // depth `depth`.
  std::uint64_t completions(std::size_t remaining, std::size_t depth) const;

  // Program at a given rank within its length.
  std::vector<Op> unrank(std::size_t length, std::uint64_t index) const;
  // Rank of a well-formed program within its length.
  std::uint64_t rank(std::span<const Op> ops) const;

 private:
  void seek(std::size_t length, std::uint64_t index);

  Dialect dialect_;
  bool input_free_;
  std::size_t max_len_;
  std::vector<Op> alphabet_;
  std::vector<int> alpha_pos_;  // op code -> position in alphabet_, or -1
  std::size_t neutral_;
  // completions_[r][d]
  std::vector<std::vector<std::uint64_t>> completions_;

  std::vector<Op> current_;
  std::size_t length_ = 0;
  std::uint64_t index_ = 0;
  bool started_ = false;
  bool done_ = false;
};

// Every well-formed program of length <= max_len, in canonical order.
std::vector<Program> enumerate_programs(std::size_t max_len, Dialect dialect,
                                        bool input_free);

struct GoldbachPair {
  std::uint64_t p = 0;
  std::uint64_t q = 0;
  friend bool operator==(const GoldbachPair&, const GoldbachPair&) = default;
};

// Deterministic Miller-Rabin over the full 64-bit range.
bool is_prime(std::uint64_t n);

// Smallest-p decomposition n = p + q with p <= q both prime. Requires n
// even and greater than 2; throws Error(kInvalidInput) otherwise.
GoldbachPair goldbach_witness(std::uint64_t n);

}  // namespace ulab
