#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ulab/bytes.hpp"
#include "ulab/noise.hpp"
#include "ulab/vm.hpp"

namespace ulab {

using Genome = Bytes;

enum class Task : std::uint8_t { kComplement, kAntenna };

struct Environment {
  Task task = Task::kComplement;
  // Complement: source bits whose complement is the target.
  // Antenna: (theta byte, phi byte, reserved byte) of the polarization.
  Bytes e;
};

enum class NonviableReason : std::uint8_t { kFuelExhausted, kDecodeError };

struct Viable {
  Bytes bytes;
};
struct Nonviable {
  NonviableReason reason;
};
using Phenome = std::variant<Viable, Nonviable>;

inline bool viable(const Phenome& p) { return std::holds_alternative<Viable>(p); }

struct DirectDecoder {};
struct DevelopmentalDecoder {
  std::uint64_t fuel = 2000;
  std::size_t output_cap = 64;  // longer output is a DecodeError
};
using Decoder = std::variant<DirectDecoder, DevelopmentalDecoder>;

// b mod 8 per byte, then one pass dropping unmatched closers and any opener
// still unclosed at the end.
Program developmental_program(std::span<const std::uint8_t> genome);

// Direct: whole 4-byte chunks (L, theta, phi, phase), partial tail dropped.
// Developmental: runs developmental_program input-free under the fuel.
Phenome decode(const Decoder& decoder, std::span<const std::uint8_t> genome);

// Matching bits over the common prefix minus 8 per byte of length
// difference. Nonviable gives -inf.
double complement_fitness(const Phenome& ph, const Environment& env);
Bytes complement_target(const Environment& env);

struct Segment {
  std::uint8_t length;
  std::uint8_t theta;
  std::uint8_t phi;
  std::uint8_t phase;
};
// Throws Error(kMalformedPhenome) unless the size is a multiple of 4.
std::vector<Segment> segments(std::span<const std::uint8_t> phenome);

// |sum L (u . p) cos(2 pi phase / 255)| with u and p the unit vectors for
// theta = b / 255 * pi and phi = b / 255 * 2 pi. Nonviable gives -inf.
double antenna_fitness(const Phenome& ph, const Environment& env);
// Best objective over genomes of at most max_genome_len bytes.
double antenna_optimum(std::size_t max_genome_len);

double fitness(const Phenome& ph, const Environment& env);
// Objective of an exact solution: 8|E| for Complement, the antenna optimum
// for Antenna.
double perfect_objective(const Environment& env, std::size_t max_genome_len);

struct FitnessRecord {
  Genome genome;
  Phenome phenome;
  double obj = 0;
  std::size_t generation = 0;
};

struct HgtEvent {
  std::size_t generation;
  std::vector<Bytes> fragments;
};

struct EvolutionConfig {
  std::size_t population = 200;
  std::size_t max_generations = 500;
  std::string selection = "tournament2";
  double mutation_rate = 1.0;    // expected bit flips per offspring
  double indel_probability = 0.1;
  double crossover_probability = 0.7;
  std::optional<double> acceptance_threshold;  // defaults to perfect
  std::size_t max_genome_len = 32;
  std::size_t initial_genome_len = 8;  // initial lengths uniform in 1..this
  std::uint64_t seed = 1;
  std::optional<std::string> noise_file;
  Decoder decoder = DevelopmentalDecoder{};
  std::vector<HgtEvent> hgt;
};

// Throws Error(kInvalidInput) for inconsistent settings.
void validate(const EvolutionConfig& cfg);

// Draw order: per individual, a length then its bytes.
std::vector<Genome> initial_population(const EvolutionConfig& cfg,
                                       NoiseSource& noise);

std::vector<FitnessRecord> evaluate(const std::vector<Genome>& genomes,
                                    const Environment& env,
                                    const EvolutionConfig& cfg,
                                    std::size_t generation);

// Index of the best record, earliest on ties.
std::size_t best_index(const std::vector<FitnessRecord>& pop);

// Next generation's genomes. Slot 0 is the elite, copied unchanged. Noise
// order: all tournament draws (two per parent, two parents per offspring),
// then per offspring: crossover coin [cut in A, cut in B], flip count coin,
// flip positions, indel coin [insert-or-delete bit, locus, byte].
std::vector<Genome> breed(const std::vector<FitnessRecord>& pop,
                          const EvolutionConfig& cfg, NoiseSource& noise);

// breed followed by evaluate.
std::vector<FitnessRecord> step_generation(const std::vector<FitnessRecord>& pop,
                                           const Environment& env,
                                           const EvolutionConfig& cfg,
                                           NoiseSource& noise,
                                           std::size_t generation);

// Splices each fragment into a random individual at a random locus,
// truncating to max_len. Slot 0 is skipped when others exist so the elite
// is untouched. An empty population is left as is.
void hgt_inject(std::vector<Genome>& pop, const std::vector<Bytes>& fragments,
                std::size_t max_len, NoiseSource& noise);

struct GenerationSummary {
  std::size_t generation = 0;
  FitnessRecord best;
  double viable_fraction = 0;

  // gen=<n> best_obj=<val> best_len=<n> viable_frac=<0..1> genome=<hex>
  std::string record() const;
};

struct EvolutionResult {
  std::vector<GenerationSummary> history;
  // First encounter of each distinct genome at or above the threshold.
  std::vector<FitnessRecord> accepted;
  bool reached_perfect = false;
  double perfect = 0;
};

EvolutionResult run_evolution(const Environment& env, const EvolutionConfig& cfg);
void write_history(std::ostream& out, const EvolutionResult& result);

struct MinimalGenome {
  Genome genome;  // symbol codes 0..7
  std::size_t length = 0;
};

// Shortest code string whose developmental phenome is the complement
// target, searching lengths 1..max_len in canonical order. Throws
// Error(kNotFound) if none exists within max_len.
MinimalGenome minimal_genome_oracle(const Environment& env,
                                    const DevelopmentalDecoder& decoder,
                                    std::size_t max_len);

struct SpaceSize {
  std::string decimal;
  std::size_t digits = 0;
};
SpaceSize search_space_size(std::uint64_t bits);

}  // namespace ulab
