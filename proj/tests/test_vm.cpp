#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "ulab/error.hpp"
#include "ulab/vm.hpp"

using namespace ulab;

namespace {

std::string random_program(std::mt19937_64& rng, std::size_t len, bool dialect_b) {
  const std::string atoms[] = {"+", "-", "<", ">", ".", ",", "[-]", "[->+<]", "[-<<+>>]",
                               "[+]", "+[<+]", "[>]", "[+-]", "[]", "z"};
  const std::size_t n_atoms = dialect_b ? 15 : 14;
  std::string s;
  int depth = 0;
  for (std::size_t i = 0; i < len; ++i) {
    const std::uint64_t pick = rng() % (n_atoms + 2);
    if (pick == n_atoms) {
      s += '[';
      ++depth;
    } else if (pick == n_atoms + 1) {
      if (depth > 0) {
        s += ']';
        --depth;
      }
    } else {
      s += atoms[pick];
    }
  }
  s.append(static_cast<std::size_t>(depth), ']');
  return s;
}

void check_same(const ExecutionOutcome& got, const oracle::Result& want) {
  REQUIRE(halted(got) == want.halted);
  CHECK(steps_of(got) == want.steps);
  CHECK(output_of(got) == want.output);
  if (!want.halted) CHECK(std::get<FuelExhausted>(got).ip == want.ip);
}

}  // namespace

TEST_SUITE("vm") {
  TEST_CASE("parse accepts well formed text") {
    CHECK(parse("+[-].").size() == 5);
    CHECK(parse("").empty());
    CHECK(Program::parse("z.", Dialect::kB).size() == 2);
  }

  TEST_CASE("parse reports the first offending position") {
    try {
      (void)parse("][");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.code() == Errc::kUnbalancedBracket);
      CHECK(e.position() == 0);
    }
    try {
      (void)parse("+[[]");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.code() == Errc::kUnbalancedBracket);
      CHECK(e.position() == 1);
    }
    try {
      (void)parse("++ .");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.code() == Errc::kUnknownSymbol);
      CHECK(e.position() == 2);
    }
    CHECK_THROWS_AS((void)parse("z"), ParseError);
  }

  TEST_CASE("text, codes and ops round trip") {
    const Program p = Program::parse("+-<>[],.z", Dialect::kB);
    CHECK(p.codes() == Bytes{0, 1, 2, 3, 4, 5, 6, 7, 8});
    CHECK(Program::from_codes(p.codes(), Dialect::kB) == p);
    CHECK(Program::parse(p.text(), Dialect::kB) == p);
    CHECK_THROWS_AS(Program::from_codes(Bytes{8}, Dialect::kA), ParseError);
  }

  TEST_CASE("execute examples") {
    const MachineConfig cfg{1000};
    auto o = execute(parse("."), {}, cfg);
    REQUIRE(halted(o));
    CHECK(output_of(o) == Bytes{0x00});
    CHECK(steps_of(o) == 1);

    o = execute(parse(",."), Bytes{0x41}, cfg);
    CHECK(output_of(o) == Bytes{0x41});

    o = execute(parse("+[]"), {}, cfg);
    REQUIRE_FALSE(halted(o));
    const auto& fe = std::get<FuelExhausted>(o);
    CHECK(fe.steps == 1000);
    CHECK((fe.ip == 1 || fe.ip == 2));

    o = execute(parse("[]"), {}, cfg);
    REQUIRE(halted(o));
    CHECK(output_of(o).empty());
    CHECK(steps_of(o) == 1);
  }

  TEST_CASE("cells wrap, tape extends left, reads past end give zero") {
    const MachineConfig cfg{100000};
    CHECK(output_of(execute(parse("-."), {}, cfg)) == Bytes{0xFF});
    CHECK(output_of(execute(parse("<<<<<+.>>>>>."), {}, cfg)) == Bytes{0x01, 0x00});
    CHECK(output_of(execute(parse(",.,.,."), Bytes{7}, cfg)) == Bytes{7, 0, 0});
    // Walks well past the initial allocation on both sides.
    const std::string far = std::string(300, '<') + "+." + std::string(600, '>') + "++.";
    const auto o = execute(parse(far), {}, cfg);
    CHECK(output_of(o) == Bytes{1, 2});
    CHECK(steps_of(o) == far.size());
  }

  TEST_CASE("zero costs one step") {
    const auto o = execute(Program::parse("+++z.", Dialect::kB), {}, MachineConfig{100});
    CHECK(output_of(o) == Bytes{0});
    CHECK(steps_of(o) == 5);
  }

  TEST_CASE("compiled runs match the reference interpreter step for step") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20000; ++t) {
      const bool b = t % 2 == 1;
      const std::string text = random_program(rng, 1 + rng() % 24, b);
      const Program p = Program::parse(text, b ? Dialect::kB : Dialect::kA);
      Bytes input(rng() % 4);
      for (auto& c : input) c = static_cast<std::uint8_t>(rng());
      const std::uint64_t fuel = t % 3 == 0 ? rng() % 4000 : rng() % 300;
      Machine m(MachineConfig{fuel});
      CAPTURE(text);
      CAPTURE(fuel);
      check_same(m.run(p, input), oracle::interpret(text, input, fuel));
      check_same(m.run_stepwise(p, input), oracle::interpret(text, input, fuel));
    }
  }

  TEST_CASE("determinism, fuel monotonicity and prefix stability") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 2000; ++t) {
      const Program p = parse(random_program(rng, 1 + rng() % 16, false));
      const std::uint64_t f = rng() % 600;
      const auto a = execute(p, {}, MachineConfig{f});
      const auto b = execute(p, {}, MachineConfig{f});
      CHECK(output_of(a) == output_of(b));
      CHECK(steps_of(a) == steps_of(b));
      CHECK(steps_of(a) <= f);
      const auto more = execute(p, {}, MachineConfig{f * 3 + 7});
      const Bytes& small = output_of(a);
      const Bytes& big = output_of(more);
      REQUIRE(small.size() <= big.size());
      CHECK(std::equal(small.begin(), small.end(), big.begin()));
      if (halted(a)) {
        CHECK(halted(more));
        CHECK(steps_of(more) == steps_of(a));
        CHECK(execute(p, {}, MachineConfig{steps_of(a)}).index() == 0);
      } else {
        CHECK(std::get<FuelExhausted>(a).ip < p.size());
      }
    }
  }

  TEST_CASE("resume continues from the current tape and head") {
    Machine m(MachineConfig{1000});
    m.tape().set(0, 3);
    m.tape().set(1, 4);
    const auto o = m.resume(parse("[->+<]>."), {});
    CHECK(output_of(o) == Bytes{7});
    CHECK(m.head() == 1);
    CHECK(m.tape().get(0) == 0);
  }

  TEST_CASE("literal printer") {
    CHECK(literal_printer(Bytes{0x00}).text() == ".");
    CHECK(literal_printer(Bytes{0x02}).text() == "++.");
    CHECK(literal_printer(Bytes{0x00, 0x00}).text() == "..");
    CHECK(literal_printer(Bytes{0xFE}).text() == "--.");
    CHECK(literal_printer(Bytes{}).empty());
    std::mt19937_64 rng(3);
    for (int t = 0; t < 500; ++t) {
      Bytes s(rng() % 17);
      for (auto& c : s) c = static_cast<std::uint8_t>(rng());
      const Program p = literal_printer(s);
      std::size_t want = 0;
      std::uint8_t cur = 0;
      for (std::uint8_t c : s) {
        const int up = static_cast<std::uint8_t>(c - cur);
        want += static_cast<std::size_t>(std::min(up, 256 - up)) + 1;
        cur = c;
      }
      CHECK(p.size() == want);
      CHECK(literal_printer_length(s) == want);
      CHECK(output_of(execute(p, {}, MachineConfig{want})) == s);
    }
  }

  TEST_CASE("macro expansion") {
    CHECK(expand_macros(Program::parse("z.", Dialect::kB)).text() == "[-].");
    CHECK(expand_macros(Program::parse("+.", Dialect::kB)).text() == "+.");
    const Program zz = expand_macros(Program::parse("zz", Dialect::kB));
    CHECK(zz.text() == "[-][-]");
    CHECK(zz.dialect() == Dialect::kA);
    CHECK(embed_in_b(parse("+.")).dialect() == Dialect::kB);

    std::mt19937_64 rng(9);
    for (int t = 0; t < 3000; ++t) {
      const Program p = Program::parse(random_program(rng, 1 + rng() % 14, true), Dialect::kB);
      const Program a = expand_macros(p);
      CHECK(a.size() <= 3 * p.size());
      Bytes input{static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng())};
      const auto ob = execute(p, input, MachineConfig{5000});
      if (!halted(ob)) continue;
      // Each zero instruction costs at most 511 steps once expanded.
      const auto oa = execute(a, input, MachineConfig{steps_of(ob) * 512});
      REQUIRE(halted(oa));
      CHECK(output_of(ob) == output_of(oa));
    }
  }
}
