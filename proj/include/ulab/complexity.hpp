#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ulab/bytes.hpp"
#include "ulab/vm.hpp"

namespace ulab {

// Complexity here is always the bounded quantity K_{L,f}(s): length in
// instructions of the first input-free program (canonical order) of length
// <= L that halts within f steps printing exactly s.

enum class KStatus : std::uint8_t { kExact, kUpperBoundOnly };

struct KEntry {
  Program program;
  KStatus status = KStatus::kExact;

  std::size_t length() const { return program.size(); }
};

struct ComplexityTable {
  Dialect dialect = Dialect::kA;
  std::size_t max_len = 0;
  std::uint64_t fuel = 1;
  bool partial = false;
  // Longest length searched completely; equals max_len unless partial.
  std::size_t complete_len = 0;
  std::map<Bytes, KEntry> entries;

  const KEntry* find(const Bytes& s) const;
  // Exact complexity if known.
  std::optional<std::size_t> exact_k(const Bytes& s) const;
  // Largest n such that every program of length <= n has been searched.
  std::size_t horizon() const;

  friend bool operator==(const ComplexityTable& a, const ComplexityTable& b);
};

struct KSearchOptions {
  std::size_t max_len = 0;
  std::uint64_t fuel = 1;
  Dialect dialect = Dialect::kA;
  unsigned workers = 1;
  // Programs per work unit; results do not depend on it.
  std::uint64_t chunk = 1 << 15;
  // Caps; zero means unlimited.
  double max_seconds = 0;
  std::size_t max_entries = 0;
};

struct KSearchResult {
  ComplexityTable table;
  // True when a cap was hit; the table is then marked partial and only
  // entries found inside the fully searched prefix are kExact.
  bool budget_exceeded = false;
  std::uint64_t programs_run = 0;
};

KSearchResult exhaustive_k(const KSearchOptions& opts);

// Length of literal_printer(s).
std::size_t k_upper_bound(const Bytes& s);

// Record file: header line then one line per entry sorted by (K, out hex).
void write_table(std::ostream& out, const ComplexityTable& table);
std::string table_to_string(const ComplexityTable& table);
ComplexityTable read_table(std::istream& in);

struct InvarianceRow {
  Bytes s;
  std::size_t k_a = 0;
  std::size_t k_b = 0;
};

struct MacroWitness {
  Bytes s;
  Program b_program;   // best dialect-B program, uses the zero instruction
  Program expanded;    // expand_macros(b_program)
  bool reproduces = false;  // expanded prints s under ample fuel
};

struct InvarianceReport {
  std::vector<InvarianceRow> rows;
  std::vector<InvarianceRow> violations;
  std::vector<MacroWitness> macro_witnesses;
  long max_gap = 0;  // max over rows of K_A - K_B

  bool passed() const;
};

// Checks K_B <= K_A and K_A <= 3 K_B on every string exact in both. Throws
// Error(kIncompatibleTables) on differing fuel or mismatched dialects.
InvarianceReport invariance_report(const ComplexityTable& table_a,
                                   const ComplexityTable& table_b);

struct CountingCheck {
  std::size_t n = 0;
  std::uint64_t strings = 0;   // #{s : K(s) <= n, exact}
  std::uint64_t programs = 0;  // sum_{k<=n} count_valid(k)
  bool passed() const { return strings <= programs; }
};

CountingCheck counting_bound_check(const ComplexityTable& table, std::size_t n);

struct FuelCheck {
  std::size_t shared = 0;
  std::vector<Bytes> violations;      // K_high > K_low
  std::vector<Bytes> missing_in_high;  // present at low fuel only
  std::vector<Bytes> improved;        // K_high < K_low
  std::vector<Bytes> new_in_high;     // present at high fuel only
  bool passed() const { return violations.empty() && missing_in_high.empty(); }
};

FuelCheck fuel_monotonicity_check(const ComplexityTable& low,
                                  const ComplexityTable& high);

// A string is fully resolved when every program up to its literal-printer
// length was searched.
bool fully_resolved(const ComplexityTable& table, const Bytes& s);

// Bits needed to name "the first fully resolved string of complexity above
// B" relative to a fixed decoder: one query byte plus B in binary.
inline constexpr std::size_t kBerryQueryBits = 8;

struct BerryResult {
  Bytes witness;
  std::size_t k = 0;                  // instructions
  std::size_t k_bits = 0;             // k * bits per instruction
  std::size_t description_bits = 0;   // kBerryQueryBits + ceil(log2(B+1))
  bool description_shorter() const { return description_bits < k_bits; }
};

std::size_t bits_per_instruction(Dialect dialect);
std::size_t berry_description_bits(std::uint64_t threshold);

// Throws Error(kNoWitness) when no fully resolved string exceeds B.
BerryResult berry_demo(std::uint64_t threshold, const ComplexityTable& table);

}  // namespace ulab
