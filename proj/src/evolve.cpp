#include "ulab/evolve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "ulab/error.hpp"

namespace ulab {

namespace {

constexpr double kWorst = -std::numeric_limits<double>::infinity();

struct Vec3 {
  double x, y, z;
};

Vec3 direction(std::uint8_t theta_byte, std::uint8_t phi_byte) {
  const double theta = theta_byte / 255.0 * std::numbers::pi;
  const double phi = phi_byte / 255.0 * 2.0 * std::numbers::pi;
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

std::string format_obj(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

bool at_least(double obj, double bound) { return obj >= bound - 1e-9; }

std::size_t tournament(const std::vector<FitnessRecord>& pop, NoiseSource& noise) {
  const std::size_t i = noise.uniform_below(pop.size());
  const std::size_t j = noise.uniform_below(pop.size());
  if (pop[i].obj > pop[j].obj) return i;
  if (pop[j].obj > pop[i].obj) return j;
  return std::min(i, j);
}

NoiseSource make_noise(const EvolutionConfig& cfg) {
  return cfg.noise_file ? NoiseSource::from_file(*cfg.noise_file)
                        : NoiseSource::seeded(cfg.seed);
}

}  // namespace

Program developmental_program(std::span<const std::uint8_t> genome) {
  std::vector<Op> ops;
  std::vector<bool> keep(genome.size(), true);
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < genome.size(); ++i) {
    const Op op = static_cast<Op>(genome[i] % 8);
    if (op == Op::kOpen) {
      open.push_back(i);
    } else if (op == Op::kClose) {
      if (open.empty()) {
        keep[i] = false;
      } else {
        open.pop_back();
      }
    }
  }
  for (std::size_t i : open) keep[i] = false;
  ops.reserve(genome.size());
  for (std::size_t i = 0; i < genome.size(); ++i) {
    if (keep[i]) ops.push_back(static_cast<Op>(genome[i] % 8));
  }
  return Program::from_ops(std::move(ops), Dialect::kA);
}

Phenome decode(const Decoder& decoder, std::span<const std::uint8_t> genome) {
  if (std::holds_alternative<DirectDecoder>(decoder)) {
    const std::size_t whole = genome.size() / 4 * 4;
    return Viable{Bytes(genome.begin(), genome.begin() + static_cast<std::ptrdiff_t>(whole))};
  }
  const auto& dev = std::get<DevelopmentalDecoder>(decoder);
  thread_local Machine machine;
  machine = Machine(MachineConfig{dev.fuel});
  ExecutionOutcome out = machine.run(developmental_program(genome), {});
  if (!halted(out)) return Nonviable{NonviableReason::kFuelExhausted};
  Bytes bytes = std::move(std::get<Halted>(out).output);
  if (bytes.size() > dev.output_cap) return Nonviable{NonviableReason::kDecodeError};
  return Viable{std::move(bytes)};
}

Bytes complement_target(const Environment& env) {
  Bytes t(env.e);
  for (auto& b : t) b = static_cast<std::uint8_t>(~b);
  return t;
}

double complement_fitness(const Phenome& ph, const Environment& env) {
  const auto* v = std::get_if<Viable>(&ph);
  if (!v) return kWorst;
  const Bytes target = complement_target(env);
  const std::size_t common = std::min(v->bytes.size(), target.size());
  int matches = 0;
  for (std::size_t i = 0; i < common; ++i) {
    matches += 8 - std::popcount(static_cast<unsigned>(v->bytes[i] ^ target[i]));
  }
  const std::size_t diff = v->bytes.size() > target.size()
                               ? v->bytes.size() - target.size()
                               : target.size() - v->bytes.size();
  return static_cast<double>(matches) - 8.0 * static_cast<double>(diff);
}

std::vector<Segment> segments(std::span<const std::uint8_t> phenome) {
  if (phenome.size() % 4 != 0) {
    throw Error(Errc::kMalformedPhenome,
                "phenome of " + std::to_string(phenome.size()) +
                    " bytes is not a whole number of segments");
  }
  std::vector<Segment> out;
  for (std::size_t i = 0; i < phenome.size(); i += 4) {
    out.push_back({phenome[i], phenome[i + 1], phenome[i + 2], phenome[i + 3]});
  }
  return out;
}

double antenna_fitness(const Phenome& ph, const Environment& env) {
  const auto* v = std::get_if<Viable>(&ph);
  if (!v) return kWorst;
  if (env.e.size() < 2) {
    throw Error(Errc::kInvalidInput, "antenna environment needs 3 bytes");
  }
  const Vec3 p = direction(env.e[0], env.e[1]);
  double sum = 0;
  for (const Segment& s : segments(v->bytes)) {
    const Vec3 u = direction(s.theta, s.phi);
    const double dot = u.x * p.x + u.y * p.y + u.z * p.z;
    sum += s.length * dot * std::cos(2.0 * std::numbers::pi * s.phase / 255.0);
  }
  return std::abs(sum);
}

double antenna_optimum(std::size_t max_genome_len) {
  return static_cast<double>(max_genome_len / 4) * 255.0;
}

double fitness(const Phenome& ph, const Environment& env) {
  return env.task == Task::kComplement ? complement_fitness(ph, env)
                                       : antenna_fitness(ph, env);
}

double perfect_objective(const Environment& env, std::size_t max_genome_len) {
  return env.task == Task::kComplement ? 8.0 * static_cast<double>(env.e.size())
                                       : antenna_optimum(max_genome_len);
}

void validate(const EvolutionConfig& cfg) {
  auto fail = [](const std::string& what) {
    throw Error(Errc::kInvalidInput, what);
  };
  if (cfg.population == 0) fail("population must be positive");
  if (cfg.max_genome_len == 0) fail("max_genome_len must be positive");
  if (cfg.initial_genome_len == 0 || cfg.initial_genome_len > cfg.max_genome_len) {
    fail("initial_genome_len must be in 1..max_genome_len");
  }
  if (cfg.selection != "tournament2") fail("unknown selection '" + cfg.selection + "'");
  if (!(cfg.mutation_rate >= 0)) fail("mutation_rate must be nonnegative");
  for (double p : {cfg.indel_probability, cfg.crossover_probability}) {
    if (!(p >= 0 && p <= 1)) fail("probabilities must lie in [0, 1]");
  }
  for (const HgtEvent& h : cfg.hgt) {
    if (h.fragments.empty()) fail("an HGT event needs at least one fragment");
  }
}

std::vector<Genome> initial_population(const EvolutionConfig& cfg,
                                       NoiseSource& noise) {
  std::vector<Genome> pop(cfg.population);
  for (Genome& g : pop) {
    g.resize(1 + noise.uniform_below(cfg.initial_genome_len));
    for (auto& b : g) b = noise.byte();
  }
  return pop;
}

std::vector<FitnessRecord> evaluate(const std::vector<Genome>& genomes,
                                    const Environment& env,
                                    const EvolutionConfig& cfg,
                                    std::size_t generation) {
  std::vector<FitnessRecord> out;
  out.reserve(genomes.size());
  for (const Genome& g : genomes) {
    FitnessRecord r{g, decode(cfg.decoder, g), 0, generation};
    try {
      r.obj = fitness(r.phenome, env);
    } catch (const Error& e) {
      if (e.code() != Errc::kMalformedPhenome) throw;
      r.phenome = Nonviable{NonviableReason::kDecodeError};
      r.obj = kWorst;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::size_t best_index(const std::vector<FitnessRecord>& pop) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < pop.size(); ++i) {
    if (pop[i].obj > pop[best].obj) best = i;
  }
  return best;
}

std::vector<Genome> breed(const std::vector<FitnessRecord>& pop,
                          const EvolutionConfig& cfg, NoiseSource& noise) {
  if (pop.empty()) throw Error(Errc::kInvalidInput, "population is empty");
  const std::size_t n = pop.size();
  std::vector<Genome> next;
  next.reserve(n);
  next.push_back(pop[best_index(pop)].genome);

  std::vector<std::pair<std::size_t, std::size_t>> parents(n - 1);
  for (auto& [a, b] : parents) {
    a = tournament(pop, noise);
    b = tournament(pop, noise);
  }

  const double whole_flips = std::floor(cfg.mutation_rate);
  const double frac_flips = cfg.mutation_rate - whole_flips;
  const std::size_t max_len = cfg.max_genome_len;
  for (const auto& [a, b] : parents) {
    const Genome& pa = pop[a].genome;
    const Genome& pb = pop[b].genome;
    Genome child = pa;
    if (noise.bernoulli(cfg.crossover_probability)) {
      const std::size_t cut_a = 1 + noise.uniform_below(pa.size());
      const std::size_t cut_b = noise.uniform_below(pb.size());
      child.assign(pa.begin(), pa.begin() + static_cast<std::ptrdiff_t>(cut_a));
      child.insert(child.end(), pb.begin() + static_cast<std::ptrdiff_t>(cut_b), pb.end());
      if (child.size() > max_len) child.resize(max_len);
    }
    const std::size_t flips =
        static_cast<std::size_t>(whole_flips) + (noise.bernoulli(frac_flips) ? 1 : 0);
    for (std::size_t f = 0; f < flips; ++f) {
      const std::uint64_t pos = noise.uniform_below(8 * child.size());
      child[pos / 8] ^= static_cast<std::uint8_t>(0x80U >> (pos % 8));
    }
    if (noise.bernoulli(cfg.indel_probability)) {
      bool insert = noise.bit();
      if (child.size() == 1) insert = true;
      if (child.size() >= max_len) insert = false;
      if (insert) {
        const std::size_t at = noise.uniform_below(child.size() + 1);
        child.insert(child.begin() + static_cast<std::ptrdiff_t>(at), noise.byte());
      } else if (child.size() > 1) {
        const std::size_t at = noise.uniform_below(child.size());
        child.erase(child.begin() + static_cast<std::ptrdiff_t>(at));
      }
    }
    next.push_back(std::move(child));
  }
  return next;
}

std::vector<FitnessRecord> step_generation(const std::vector<FitnessRecord>& pop,
                                           const Environment& env,
                                           const EvolutionConfig& cfg,
                                           NoiseSource& noise,
                                           std::size_t generation) {
  return evaluate(breed(pop, cfg, noise), env, cfg, generation);
}

void hgt_inject(std::vector<Genome>& pop, const std::vector<Bytes>& fragments,
                std::size_t max_len, NoiseSource& noise) {
  if (pop.empty()) return;
  const std::size_t first = pop.size() > 1 ? 1 : 0;
  for (const Bytes& frag : fragments) {
    Genome& g = pop[first + noise.uniform_below(pop.size() - first)];
    const std::size_t at = noise.uniform_below(g.size() + 1);
    g.insert(g.begin() + static_cast<std::ptrdiff_t>(at), frag.begin(), frag.end());
    if (g.size() > max_len) g.resize(max_len);
  }
}

std::string GenerationSummary::record() const {
  std::ostringstream os;
  os.precision(4);
  os << "gen=" << generation << " best_obj=" << format_obj(best.obj)
     << " best_len=" << best.genome.size() << " viable_frac=" << std::fixed
     << viable_fraction << " genome=" << to_hex(best.genome);
  return os.str();
}

EvolutionResult run_evolution(const Environment& env, const EvolutionConfig& cfg) {
  validate(cfg);
  if (env.e.empty()) throw Error(Errc::kInvalidInput, "environment E is empty");
  NoiseSource noise = make_noise(cfg);
  EvolutionResult result;
  result.perfect = perfect_objective(env, cfg.max_genome_len);
  const double threshold = cfg.acceptance_threshold.value_or(result.perfect);
  std::set<Genome> seen;

  auto inject = [&](std::vector<Genome>& genomes, std::size_t gen) {
    for (const HgtEvent& h : cfg.hgt) {
      if (h.generation == gen) hgt_inject(genomes, h.fragments, cfg.max_genome_len, noise);
    }
  };
  auto absorb = [&](const std::vector<FitnessRecord>& pop) {
    GenerationSummary s;
    s.generation = pop.front().generation;
    s.best = pop[best_index(pop)];
    std::size_t alive = 0;
    for (const FitnessRecord& r : pop) {
      if (viable(r.phenome)) ++alive;
      if (at_least(r.obj, threshold) && seen.insert(r.genome).second) {
        result.accepted.push_back(r);
      }
    }
    s.viable_fraction = static_cast<double>(alive) / static_cast<double>(pop.size());
    result.reached_perfect = at_least(s.best.obj, result.perfect);
    result.history.push_back(std::move(s));
  };

  std::vector<Genome> genomes = initial_population(cfg, noise);
  inject(genomes, 0);
  std::vector<FitnessRecord> pop = evaluate(genomes, env, cfg, 0);
  absorb(pop);
  for (std::size_t gen = 1; gen <= cfg.max_generations && !result.reached_perfect; ++gen) {
    genomes = breed(pop, cfg, noise);
    inject(genomes, gen);
    pop = evaluate(genomes, env, cfg, gen);
    absorb(pop);
  }
  return result;
}

void write_history(std::ostream& out, const EvolutionResult& result) {
  for (const GenerationSummary& s : result.history) out << s.record() << '\n';
}

MinimalGenome minimal_genome_oracle(const Environment& env,
                                    const DevelopmentalDecoder& decoder,
                                    std::size_t max_len) {
  if (env.task != Task::kComplement) {
    throw Error(Errc::kInvalidInput, "the oracle covers the complement task");
  }
  const Bytes target = complement_target(env);
  const Decoder dec = decoder;
  for (std::size_t len = 1; len <= max_len; ++len) {
    Genome g(len, 0);
    for (;;) {
      const Phenome ph = decode(dec, g);
      if (const auto* v = std::get_if<Viable>(&ph); v && v->bytes == target) {
        return {g, len};
      }
      std::size_t i = len;
      while (i > 0 && g[i - 1] == 7) g[--i] = 0;
      if (i == 0) break;
      ++g[i - 1];
    }
  }
  throw Error(Errc::kNotFound,
              "no genome of length <= " + std::to_string(max_len) +
                  " decodes to the complement target");
}

SpaceSize search_space_size(std::uint64_t bits) {
  boost::multiprecision::cpp_int v = 1;
  v <<= bits;
  SpaceSize s;
  s.decimal = v.str();
  s.digits = s.decimal.size();
  return s;
}

}  // namespace ulab
