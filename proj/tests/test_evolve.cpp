#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "ulab/error.hpp"
#include "ulab/evolve.hpp"

using namespace ulab;

namespace {

const Environment kComplement{Task::kComplement, Bytes{0xFE, 0xFC}};

EvolutionConfig small_config(std::uint64_t seed) {
  EvolutionConfig c;
  c.population = 40;
  c.max_generations = 30;
  c.seed = seed;
  return c;
}

std::vector<FitnessRecord> records(const std::vector<Genome>& gs, const std::vector<double>& objs) {
  std::vector<FitnessRecord> out;
  for (std::size_t i = 0; i < gs.size(); ++i) out.push_back({gs[i], Viable{gs[i]}, objs[i], 0});
  return out;
}

}  // namespace

TEST_SUITE("evolve") {
  TEST_CASE("direct decoding keeps whole segments") {
    const auto ph = decode(DirectDecoder{}, Bytes{10, 0, 0, 0, 9, 9});
    REQUIRE(viable(ph));
    CHECK(std::get<Viable>(ph).bytes == Bytes{10, 0, 0, 0});
    CHECK(std::get<Viable>(decode(DirectDecoder{}, Bytes{1, 2})).bytes.empty());
  }

  TEST_CASE("developmental decoding") {
    // Bytes reduce mod 8: 8 -> '+', 16 -> '+', 0 -> '+', 15 -> '.'.
    const auto ph = decode(DevelopmentalDecoder{}, Bytes{8, 16, 0, 15});
    REQUIRE(viable(ph));
    CHECK(std::get<Viable>(ph).bytes == Bytes{0x03});
    CHECK(developmental_program(Bytes{5, 0, 4, 7}).text() == "+.");
    CHECK(developmental_program(Bytes{4, 4, 1, 5, 7}).text() == "[-].");

    const auto loop = decode(DevelopmentalDecoder{}, Bytes{0, 4, 5});
    REQUIRE_FALSE(viable(loop));
    CHECK(std::get<Nonviable>(loop).reason == NonviableReason::kFuelExhausted);

    const auto big = decode(DevelopmentalDecoder{2000, 3}, Bytes{7, 7, 7, 7});
    REQUIRE_FALSE(viable(big));
    CHECK(std::get<Nonviable>(big).reason == NonviableReason::kDecodeError);

    std::mt19937_64 rng(1);
    for (int t = 0; t < 2000; ++t) {
      Genome g(rng() % 20);
      for (auto& b : g) b = static_cast<std::uint8_t>(rng());
      const Program p = developmental_program(g);
      CHECK(p.size() <= g.size());
      // Kept codes form a subsequence of the reduced genome.
      std::size_t j = 0;
      for (std::uint8_t b : g) {
        if (j < p.size() && static_cast<std::uint8_t>(p.op(j)) == b % 8) ++j;
      }
      CHECK(j == p.size());
    }
  }

  TEST_CASE("complement fitness") {
    CHECK(complement_target(kComplement) == Bytes{0x01, 0x03});
    CHECK(complement_fitness(Viable{Bytes{0x01, 0x03}}, kComplement) == 16);
    CHECK(complement_fitness(Viable{Bytes{0x00, 0x03}}, kComplement) == 15);
    CHECK(complement_fitness(Viable{Bytes{0x01}}, kComplement) == 0);
    CHECK(complement_fitness(Viable{Bytes{0x01, 0x03, 0x00}}, kComplement) == 8);
    CHECK(std::isinf(complement_fitness(Nonviable{NonviableReason::kFuelExhausted}, kComplement)));
    CHECK(perfect_objective(kComplement, 32) == 16);
  }

  TEST_CASE("complement fitness depends only on agreement with the target") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 500; ++t) {
      Environment env{Task::kComplement, Bytes(1 + rng() % 5)};
      for (auto& b : env.e) b = static_cast<std::uint8_t>(rng());
      Bytes out(env.e.size());
      for (auto& b : out) b = static_cast<std::uint8_t>(rng());
      const Bytes mask(env.e.size(), static_cast<std::uint8_t>(rng()));
      // Flipping the same bits in both E and the output keeps the score.
      Environment env2 = env;
      Bytes out2 = out;
      for (std::size_t i = 0; i < out.size(); ++i) {
        env2.e[i] ^= mask[i];
        out2[i] ^= mask[i];
      }
      CHECK(complement_fitness(Viable{out}, env) == complement_fitness(Viable{out2}, env2));
      CHECK(complement_fitness(Viable{complement_target(env)}, env) == 8.0 * env.e.size());
    }
  }

  TEST_CASE("antenna fitness") {
    const Environment z{Task::kAntenna, Bytes{0, 0, 0}};
    // theta 0 points along z; a full-length aligned in-phase segment scores 255.
    CHECK(antenna_fitness(Viable{Bytes{255, 0, 0, 0}}, z) == doctest::Approx(255.0));
    CHECK(antenna_fitness(Viable{Bytes{10, 0, 0, 0}}, z) == doctest::Approx(10.0));
    // theta 255 is antiparallel; the absolute value hides the sign.
    CHECK(antenna_fitness(Viable{Bytes{10, 255, 0, 0}}, z) == doctest::Approx(10.0));
    CHECK(antenna_fitness(Viable{Bytes{10, 0, 0, 0, 10, 255, 0, 0}}, z) ==
          doctest::Approx(0.0).epsilon(1e-9));
    CHECK(antenna_fitness(Viable{Bytes{}}, z) == 0);
    CHECK_THROWS_AS(segments(Bytes{1, 2, 3}), Error);
    CHECK(antenna_optimum(32) == 8 * 255.0);
    CHECK(antenna_optimum(7) == 255.0);

    // Never above the optimum for genomes within the length bound.
    std::mt19937_64 rng(3);
    for (int t = 0; t < 2000; ++t) {
      const Environment env{Task::kAntenna,
                            Bytes{static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()), 0}};
      Genome g(rng() % 33);
      for (auto& b : g) b = static_cast<std::uint8_t>(rng());
      CHECK(antenna_fitness(decode(DirectDecoder{}, g), env) <= antenna_optimum(32) + 1e-9);
    }
  }

  TEST_CASE("misaligned developmental phenomes are nonviable for the antenna task") {
    EvolutionConfig cfg;
    const Environment env{Task::kAntenna, Bytes{0, 0, 0}};
    const auto r = evaluate({Bytes{7}}, env, cfg, 0);
    REQUIRE_FALSE(viable(r[0].phenome));
    CHECK(std::get<Nonviable>(r[0].phenome).reason == NonviableReason::kDecodeError);
  }

  TEST_CASE("breeding without variation copies winners") {
    EvolutionConfig c;
    c.mutation_rate = 0;
    c.indel_probability = 0;
    c.crossover_probability = 0;
    const std::vector<Genome> gs{{1}, {2, 2}, {3, 3, 3}, {4}};
    const auto pop = records(gs, {1.0, 5.0, 2.0, 0.0});
    NoiseSource noise = NoiseSource::seeded(7);
    const auto next = breed(pop, c, noise);
    REQUIRE(next.size() == gs.size());
    CHECK(next[0] == gs[1]);
    for (const Genome& g : next) CHECK(std::find(gs.begin(), gs.end(), g) != gs.end());
    // Only tournament draws were taken: 2 bits each, 4 per parent.
    CHECK(noise.consumed_bits() == 3 * 2 * 2 * 2);
  }

  TEST_CASE("tournament ties go to the earlier index") {
    EvolutionConfig c;
    c.mutation_rate = 0;
    c.indel_probability = 0;
    c.crossover_probability = 0;
    const std::vector<Genome> gs{{1}, {2}};
    // Streams of pair draws 1,0 pick index 0 under a tie.
    NoiseSource noise = NoiseSource::from_bytes(Bytes{0b10101010});
    const auto next = breed(records(gs, {3.0, 3.0}), c, noise);
    CHECK(next == std::vector<Genome>{{1}, {1}});
  }

  TEST_CASE("breeding is deterministic and bounded") {
    EvolutionConfig c = small_config(1);
    c.max_genome_len = 12;
    std::mt19937_64 rng(4);
    std::vector<Genome> gs(30);
    std::vector<double> objs;
    for (auto& g : gs) {
      g.resize(1 + rng() % 12);
      for (auto& b : g) b = static_cast<std::uint8_t>(rng());
      objs.push_back(static_cast<double>(rng() % 10));
    }
    const auto pop = records(gs, objs);
    NoiseSource a = NoiseSource::seeded(9);
    NoiseSource b = NoiseSource::seeded(9);
    for (int round = 0; round < 20; ++round) {
      const auto x = breed(pop, c, a);
      const auto y = breed(pop, c, b);
      CHECK(x == y);
      CHECK(x[0] == gs[best_index(pop)]);
      for (const Genome& g : x) {
        CHECK(g.size() >= 1);
        CHECK(g.size() <= c.max_genome_len);
      }
    }
    CHECK_THROWS_AS(breed({}, c, a), Error);
  }

  TEST_CASE("horizontal transfer") {
    std::vector<Genome> pop{{9, 9}, {1, 2, 3}};
    // Single-candidate pick consumes nothing; locus 0 from bits 00.
    NoiseSource n = NoiseSource::from_bytes(Bytes{0x00});
    hgt_inject(pop, {Bytes{7, 7}}, 32, n);
    CHECK(pop[0] == Genome{9, 9});
    CHECK(pop[1] == Genome{7, 7, 1, 2, 3});

    std::vector<Genome> one{{5}};
    NoiseSource m = NoiseSource::from_bytes(Bytes{0xFF});
    hgt_inject(one, {Bytes{6, 6, 6}}, 3, m);
    CHECK(one[0] == Genome{5, 6, 6});

    std::vector<Genome> empty;
    NoiseSource e = NoiseSource::from_bytes(Bytes{});
    hgt_inject(empty, {Bytes{1}}, 4, e);
    CHECK(empty.empty());
    CHECK(e.consumed_bits() == 0);
  }

  TEST_CASE("runs are reproducible and the elite never regresses") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const EvolutionResult a = run_evolution(kComplement, small_config(seed));
      const EvolutionResult b = run_evolution(kComplement, small_config(seed));
      REQUIRE(a.history.size() == b.history.size());
      for (std::size_t g = 0; g < a.history.size(); ++g) {
        CHECK(a.history[g].record() == b.history[g].record());
        if (g > 0) CHECK(a.history[g].best.obj >= a.history[g - 1].best.obj);
      }
      CHECK(a.history.front().record().rfind("gen=0 best_obj=", 0) == 0);
    }
  }

  TEST_CASE("a noise file replays the seeded run") {
    const EvolutionConfig seeded = small_config(5);
    const EvolutionResult a = run_evolution(kComplement, seeded);
    const std::string path = std::string(ULAB_TEST_TMP) + "/noise_seed5.bin";
    {
      const Bytes bytes = NoiseSource::seeded_bytes(5, 1 << 20);
      std::ofstream out(path, std::ios::binary);
      out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    }
    EvolutionConfig file = seeded;
    file.noise_file = path;
    const EvolutionResult b = run_evolution(kComplement, file);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t g = 0; g < a.history.size(); ++g) CHECK(a.history[g].record() == b.history[g].record());

    NoiseSource s = NoiseSource::seeded(5);
    NoiseSource f = NoiseSource::from_file(path);
    for (int i = 0; i < 10000; ++i) CHECK(s.bit() == f.bit());

    NoiseSource tiny = NoiseSource::from_bytes(Bytes{0xAB});
    CHECK(tiny.byte() == 0xAB);
    CHECK_THROWS_AS(tiny.bit(), Error);
  }

  TEST_CASE("noise source draws") {
    NoiseSource n = NoiseSource::from_bytes(Bytes{0b10110000, 0xFF});
    CHECK(n.bits(4) == 0b1011);
    CHECK(n.consumed_bits() == 4);
    CHECK(n.uniform_below(1) == 0);
    CHECK(n.consumed_bits() == 4);
    CHECK_FALSE(n.bernoulli(0.0));
    CHECK(n.bernoulli(1.0));
    CHECK(n.consumed_bits() == 4);
    // 3 bits 000 -> 0 < 5.
    CHECK(n.uniform_below(5) == 0);

    std::mt19937_64 rng(6);
    NoiseSource u = NoiseSource::seeded(3);
    std::vector<int> hist(6, 0);
    for (int i = 0; i < 60000; ++i) ++hist[u.uniform_below(6)];
    for (int h : hist) CHECK(std::abs(h - 10000) < 500);
  }

  TEST_CASE("minimal genome oracle") {
    const Environment ff{Task::kComplement, Bytes{0xFF}};
    const MinimalGenome m = minimal_genome_oracle(ff, DevelopmentalDecoder{}, 4);
    CHECK(m.length == 1);
    CHECK(m.genome == Genome{7});
    const MinimalGenome d = minimal_genome_oracle(kComplement, DevelopmentalDecoder{}, 6);
    CHECK(d.length == 5);
    CHECK(developmental_program(d.genome).text() == "+.++.");
    try {
      (void)minimal_genome_oracle(ff, DevelopmentalDecoder{}, 0);
      FAIL("expected NotFound");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::kNotFound);
    }

    // Any genome that hits the target is at least as long as the minimum.
    const Environment env{Task::kComplement, Bytes{0xFD}};
    const std::size_t mstar = minimal_genome_oracle(env, DevelopmentalDecoder{}, 6).length;
    CHECK(mstar == 3);
    std::mt19937_64 rng(8);
    for (int t = 0; t < 50000; ++t) {
      Genome g(1 + rng() % 6);
      for (auto& b : g) b = static_cast<std::uint8_t>(rng());
      const Phenome ph = decode(DevelopmentalDecoder{}, g);
      if (viable(ph) && std::get<Viable>(ph).bytes == complement_target(env)) CHECK(g.size() >= mstar);
    }
  }

  TEST_CASE("search space size") {
    CHECK(search_space_size(0).decimal == "1");
    CHECK(search_space_size(10).decimal == "1024");
    const SpaceSize s = search_space_size(500);
    CHECK(s.digits == 151);
    CHECK(s.decimal.rfind("327", 0) == 0);
  }

  TEST_CASE("configuration validation") {
    EvolutionConfig c;
    CHECK_NOTHROW(validate(c));
    c.population = 0;
    CHECK_THROWS_AS(validate(c), Error);
    c = EvolutionConfig{};
    c.selection = "roulette";
    CHECK_THROWS_AS(validate(c), Error);
    c = EvolutionConfig{};
    c.crossover_probability = 1.5;
    CHECK_THROWS_AS(validate(c), Error);
    c = EvolutionConfig{};
    c.initial_genome_len = 40;
    CHECK_THROWS_AS(validate(c), Error);
    CHECK_THROWS_AS(run_evolution(Environment{Task::kComplement, {}}, EvolutionConfig{}), Error);
  }
}
