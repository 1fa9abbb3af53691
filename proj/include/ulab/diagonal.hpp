#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ulab/bytes.hpp"
#include "ulab/vm.hpp"

namespace ulab {

// Tape layout handed to an analyzer, from the head position onward:
//   [lenP hi][lenP lo][P codes...][lenI hi][lenI lo][I bytes...]
// Lengths are big-endian and at most 65535.
inline constexpr std::size_t kMaxPairPart = 65535;

Bytes encode_pair(std::span<const std::uint8_t> p_codes,
                  std::span<const std::uint8_t> input);
std::pair<Bytes, Bytes> decode_pair(std::span<const std::uint8_t> tape);

// 2-byte big-endian length followed by the bytes; the input format R reads.
Bytes length_prefixed(std::span<const std::uint8_t> bytes);

// A claimed decider: a dialect-A fragment that, started on a pair tape
// with the head on the first length byte, halts with its verdict in the
// cell under the head (nonzero = "has the property"). The convention puts
// that cell at the pair origin.
struct Analyzer {
  std::string name;
  Program body;
  std::string property_name;
};

// Throws Error(kInvalidInput) if body reads input.
Analyzer make_analyzer(std::string name, std::string_view body_text,
                       std::string property_name = {});

// Reads a length-prefixed input and lays out encode_pair(input, input)
// starting under the head, every other cell zero. The head's absolute
// position depends on the input length; the tape is only defined relative
// to it.
const Program& pair_preamble();

// Branches on the verdict cell: nonzero enters a loop with no exit,
// zero prints O and halts.
Program postlude(std::span<const std::uint8_t> target);

struct DiagonalProgram {
  Program program;
  // Half-open instruction spans inside program.
  std::size_t body_begin = 0;
  std::size_t body_end = 0;
  std::size_t loop_begin = 0;
  std::size_t loop_end = 0;
};

// R = preamble ++ analyzer body ++ postlude(O). Throws
// Error(kConstructionTooLarge) past 65535 instructions and
// Error(kInvalidInput) for an empty O.
DiagonalProgram build_diagonal(const Analyzer& analyzer,
                               std::span<const std::uint8_t> target);

enum class Verdict : std::uint8_t { kNo, kYes, kDiverged };
enum class Behavior : std::uint8_t {
  kEmittedO,
  kProvablyLoops,
  kAnalyzerDiverged,
  kInconclusive,
};

const char* verdict_name(Verdict v);
const char* behavior_name(Behavior b);

struct DiagonalWitness {
  DiagonalProgram r;
  Verdict verdict = Verdict::kDiverged;
  Behavior behavior = Behavior::kInconclusive;
  bool refuted = false;
  std::uint64_t verdict_steps = 0;
  std::uint64_t r_steps = 0;
};

// Runs the analyzer directly on the pair tape for (R, R), then runs R on
// its own length-prefixed text, and compares the two.
DiagonalWitness self_apply(const Analyzer& analyzer,
                           std::span<const std::uint8_t> target,
                           std::uint64_t fuel);

// Property framings. All share one construction; they differ in what a
// verdict of 1 claims and in the designated output O.
struct Preset {
  std::string name;
  std::string property;  // what verdict 1 asserts about (P, I)
  Bytes target;
};

const std::vector<Preset>& presets();

// Total on every pair tape they are given, with a definite verdict.
std::vector<Analyzer> bundled_total_analyzers();
// Never halt.
std::vector<Analyzer> bundled_diverging_analyzers();

// Random head-balanced fragment over +-<> and "[-]" followed by "[-]" or
// "[-]+", so it always halts with a definite verdict.
Analyzer random_total_analyzer(std::uint64_t seed);

struct SuiteRow {
  std::string preset;
  std::string analyzer;
  bool expected_total = true;
  DiagonalWitness witness;

  // preset=<name> analyzer=<name> verdict=<0|1|diverged>
  // behavior=<emittedO|loops|diverged|inconclusive> refuted=<bool>
  std::string record() const;
};

struct SuiteReport {
  std::vector<SuiteRow> rows;
  // Every total analyzer refuted and every diverging one diverged.
  bool passed() const;
};

SuiteReport refutation_suite(std::uint64_t fuel, unsigned workers = 1);
SuiteReport run_suite(const std::vector<Preset>& presets,
                      const std::vector<Analyzer>& total,
                      const std::vector<Analyzer>& diverging,
                      std::uint64_t fuel, unsigned workers = 1);

inline constexpr std::uint64_t kDefaultDiagonalFuel = 1'000'000'000;

}  // namespace ulab
