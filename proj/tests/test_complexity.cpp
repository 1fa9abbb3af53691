#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "oracle.hpp"
#include "ulab/complexity.hpp"
#include "ulab/enumerate.hpp"
#include "ulab/error.hpp"

using namespace ulab;

namespace {

ComplexityTable build(std::size_t max_len, std::uint64_t fuel, Dialect d = Dialect::kA,
                      unsigned workers = 1, std::uint64_t chunk = 1 << 15) {
  KSearchOptions o;
  o.max_len = max_len;
  o.fuel = fuel;
  o.dialect = d;
  o.workers = workers;
  o.chunk = chunk;
  return exhaustive_k(o).table;
}

// First producer per output by direct brute force in canonical order.
std::map<Bytes, std::string> brute_k(std::size_t max_len, std::uint64_t fuel,
                                     const std::string& alphabet) {
  std::map<Bytes, std::string> best;
  for (std::size_t n = 0; n <= max_len; ++n) {
    for (const std::string& s : oracle::brute_force(alphabet, n)) {
      const auto r = oracle::interpret(s, {}, fuel);
      if (r.halted) best.emplace(r.output, s);
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("complexity") {
  TEST_CASE("small K values") {
    const ComplexityTable t = build(3, 100);
    CHECK(t.exact_k(Bytes{}) == 0u);
    CHECK(t.exact_k(Bytes{0x00}) == 1u);
    CHECK(t.exact_k(Bytes{0x01}) == 2u);
    CHECK(t.exact_k(Bytes{0xFF}) == 2u);
    CHECK(t.exact_k(Bytes{0x00, 0x00}) == 2u);
    CHECK(t.find(Bytes{0x01})->program.text() == "+.");
    CHECK(t.find(Bytes{0xFF})->program.text() == "-.");
  }

  TEST_CASE("table equals an independent brute-force search") {
    for (Dialect d : {Dialect::kA, Dialect::kB}) {
      const std::string alphabet = d == Dialect::kA ? "+-<>[]." : "+-<>[].z";
      for (std::uint64_t fuel : {5u, 40u, 300u}) {
        const std::size_t max_len = d == Dialect::kA ? 6 : 5;
        const ComplexityTable t = build(max_len, fuel, d);
        const auto want = brute_k(max_len, fuel, alphabet);
        REQUIRE(t.entries.size() == want.size());
        for (const auto& [out, prog] : want) {
          const KEntry* e = t.find(out);
          REQUIRE(e != nullptr);
          CHECK(e->program.text() == prog);
          CHECK(e->status == KStatus::kExact);
        }
      }
    }
  }

  TEST_CASE("partition independence") {
    const ComplexityTable base = build(7, 200);
    for (unsigned workers : {2u, 3u, 8u}) {
      for (std::uint64_t chunk : {1u, 97u, 4096u}) {
        CHECK(build(7, 200, Dialect::kA, workers, chunk) == base);
      }
    }
    CHECK(table_to_string(build(7, 200, Dialect::kA, 5, 333)) == table_to_string(base));
  }

  TEST_CASE("entries reproduce their keys and respect the literal bound") {
    const ComplexityTable t = build(7, 300);
    for (const auto& [out, e] : t.entries) {
      const auto o = execute(e.program, {}, MachineConfig{t.fuel});
      REQUIRE(halted(o));
      CHECK(output_of(o) == out);
      CHECK(e.length() <= t.max_len);
      CHECK_FALSE(e.program.contains(Op::kRead));
      if (k_upper_bound(out) <= t.max_len) CHECK(e.length() <= k_upper_bound(out));
    }
  }

  TEST_CASE("literal upper bound") {
    CHECK(k_upper_bound(Bytes{}) == 0);
    CHECK(k_upper_bound(Bytes{0x00}) == 1);
    CHECK(k_upper_bound(Bytes{0x03, 0x03}) == 5);
  }

  TEST_CASE("file format round trip and layout") {
    const ComplexityTable t = build(2, 100);
    const std::string text = table_to_string(t);
    std::istringstream in(text);
    CHECK(read_table(in) == t);
    CHECK(text.rfind("ulab-ktable v1 dialect=A max_len=2 fuel=100 input_free=1\n", 0) == 0);
    CHECK(text.find("K=1 out=00 prog=. status=exact\n") != std::string::npos);
    CHECK(text.find("K=2 out=0000 prog=.. status=exact\nK=2 out=01 prog=+. status=exact\n") !=
          std::string::npos);

    std::istringstream bad("ulab-ktable v1 dialect=A max_len=2 fuel=100 input_free=1\n"
                           "K=3 out=00 prog=. status=exact\n");
    CHECK_THROWS_AS(read_table(bad), Error);
    std::istringstream nohdr("K=1 out=00 prog=. status=exact\n");
    CHECK_THROWS_AS(read_table(nohdr), Error);
  }

  TEST_CASE("budget caps yield a partial table whose complete prefix is exact") {
    KSearchOptions o;
    o.max_len = 7;
    o.fuel = 200;
    o.max_entries = 60;
    const KSearchResult r = exhaustive_k(o);
    CHECK(r.budget_exceeded);
    CHECK(r.table.partial);
    CHECK(r.table.complete_len < 7);
    const ComplexityTable full = build(7, 200);
    for (const auto& [out, e] : r.table.entries) {
      const KEntry* f = full.find(out);
      REQUIRE(f != nullptr);
      if (e.status == KStatus::kExact) {
        CHECK(f->program == e.program);
      } else {
        CHECK(f->length() <= e.length());
      }
    }
    for (const auto& [out, f] : full.entries) {
      if (f.length() <= r.table.complete_len) CHECK(r.table.exact_k(out) == f.length());
    }
    std::istringstream in(table_to_string(r.table));
    CHECK(read_table(in) == r.table);
  }

  TEST_CASE("counting bound") {
    const ComplexityTable t = build(6, 200);
    const CountingCheck c0 = counting_bound_check(t, 0);
    CHECK(c0.strings == 1);
    CHECK(c0.programs == 1);
    const CountingCheck c1 = counting_bound_check(t, 1);
    CHECK(c1.strings == 2);
    CHECK(c1.programs == 6);
    const CountingCheck c2 = counting_bound_check(t, 2);
    CHECK(c2.programs == 1 + 5 + 26);
    for (std::size_t n = 0; n <= 6; ++n) CHECK(counting_bound_check(t, n).passed());
    CHECK_THROWS_AS(counting_bound_check(t, 7), Error);
  }

  TEST_CASE("fuel monotonicity") {
    const ComplexityTable low = build(6, 10);
    const ComplexityTable high = build(6, 2000);
    const FuelCheck f = fuel_monotonicity_check(low, high);
    CHECK(f.passed());
    CHECK(f.violations.empty());
    CHECK(f.missing_in_high.empty());
    CHECK(fuel_monotonicity_check(high, high).passed());
    CHECK(build(6, 2000) == high);

    // Counts down from 255, printing each value: over a thousand steps.
    const Program slow = parse("-[.-]");
    REQUIRE(halted(execute(slow, {}, MachineConfig{2000})));
    const Bytes s = output_of(execute(slow, {}, MachineConfig{2000}));
    CHECK(s.size() == 255);
    CHECK_FALSE(halted(execute(slow, {}, MachineConfig{10})));
    CHECK(low.find(s) == nullptr);
    REQUIRE(high.find(s) != nullptr);
    CHECK(std::find(f.new_in_high.begin(), f.new_in_high.end(), s) != f.new_in_high.end());
  }

  TEST_CASE("invariance between dialects") {
    const ComplexityTable a = build(6, 300, Dialect::kA);
    const ComplexityTable b = build(6, 300, Dialect::kB);
    const InvarianceReport r = invariance_report(a, b);
    CHECK(r.passed());
    CHECK(r.violations.empty());
    for (const InvarianceRow& row : r.rows) {
      CHECK(row.k_b <= row.k_a);
      CHECK(row.k_a <= 3 * row.k_b);
    }
    const auto zero = std::find_if(r.rows.begin(), r.rows.end(),
                                   [](const InvarianceRow& x) { return x.s == Bytes{0}; });
    REQUIRE(zero != r.rows.end());
    CHECK(zero->k_a == 1);
    CHECK(zero->k_b == 1);
    CHECK_THROWS_AS(invariance_report(a, build(6, 301, Dialect::kB)), Error);
    CHECK_THROWS_AS(invariance_report(a, a), Error);
  }

  TEST_CASE("macro witnesses expand into reproducing A programs") {
    // A B table whose best program for [0xfe, 0x00] uses the zero instruction.
    ComplexityTable b;
    b.dialect = Dialect::kB;
    b.max_len = 6;
    b.fuel = 300;
    b.entries.emplace(Bytes{0xFE, 0x00}, KEntry{Program::parse("--.z.", Dialect::kB)});
    ComplexityTable a = b;
    a.dialect = Dialect::kA;
    a.entries.clear();
    a.entries.emplace(Bytes{0xFE, 0x00}, KEntry{parse("--.++.")});
    const InvarianceReport r = invariance_report(a, b);
    REQUIRE(r.macro_witnesses.size() == 1);
    const MacroWitness& w = r.macro_witnesses.front();
    CHECK(w.expanded.text() == "--.[-].");
    CHECK(w.reproduces);
    CHECK(w.expanded.size() <= 3 * w.b_program.size());
    CHECK(r.passed());
  }

  TEST_CASE("berry demo") {
    const ComplexityTable t = build(7, 300);
    const BerryResult b0 = berry_demo(0, t);
    CHECK(b0.witness == Bytes{0x00});
    CHECK(b0.k == 1);
    const BerryResult b1 = berry_demo(1, t);
    CHECK(b1.witness == Bytes{0x01});
    CHECK(b1.k == 2);
    CHECK(b1.k_bits == 6);
    CHECK(b1.description_bits == kBerryQueryBits + 1);
    CHECK(berry_description_bits(0) == kBerryQueryBits);
    CHECK(berry_description_bits(8) == kBerryQueryBits + 4);
    CHECK(bits_per_instruction(Dialect::kA) == 3);
    CHECK(bits_per_instruction(Dialect::kB) == 4);
    CHECK_THROWS_AS(berry_demo(7, t), Error);

    // Independent reading of the table: first string in length-lex order
    // that is exact, fully resolved and above the threshold.
    for (std::uint64_t thr : {2u, 3u, 5u}) {
      Bytes want;
      bool found = false;
      std::vector<Bytes> keys;
      for (const auto& [s, e] : t.entries) keys.push_back(s);
      std::sort(keys.begin(), keys.end(), length_lex_less);
      for (const Bytes& s : keys) {
        const KEntry& e = t.entries.at(s);
        if (e.status == KStatus::kExact && k_upper_bound(s) <= t.max_len && e.length() > thr) {
          want = s;
          found = true;
          break;
        }
      }
      REQUIRE(found);
      CHECK(berry_demo(thr, t).witness == want);
    }
  }
}
