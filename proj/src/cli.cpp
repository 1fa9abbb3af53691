#include "ulab/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include "ulab/complexity.hpp"
#include "ulab/diagonal.hpp"
#include "ulab/enumerate.hpp"
#include "ulab/error.hpp"
#include "ulab/evolve.hpp"
#include "ulab/vm.hpp"

namespace ulab {

namespace {

class Header {
 public:
  explicit Header(std::string command) {
    line_ << "# ulab " << kToolVersion << ' ' << command;
  }
  template <typename T>
  Header& add(const std::string& key, const T& value) {
    line_ << ' ' << key << '=' << value;
    return *this;
  }
  std::string str() const { return line_.str(); }

 private:
  std::ostringstream line_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kInvalidInput, "cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Program files hold the text form exactly; a single trailing line break
// is tolerated.
Program load_program(const std::string& path, Dialect dialect) {
  std::string text = read_file(path);
  if (!text.empty() && text.back() == '\n') text.pop_back();
  if (!text.empty() && text.back() == '\r') text.pop_back();
  return Program::parse(text, dialect);
}

unsigned default_workers() {
  return std::max(1u, std::thread::hardware_concurrency());
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

void write_or_throw(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kInvalidInput, "cannot write " + path);
  out << content;
}

ComplexityTable load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kInvalidInput, "cannot read " + path);
  return read_table(in);
}

struct RunArgs {
  std::string program_file;
  std::string code;
  std::string dialect = "A";
  std::string input_hex;
  std::string input_file;
  std::uint64_t fuel = 1'000'000;
};

int do_run(const RunArgs& a, std::ostream& out) {
  const Dialect d = parse_dialect(a.dialect);
  if (a.program_file.empty() == a.code.empty()) {
    throw Error(Errc::kInvalidInput, "give exactly one of --program or --code");
  }
  const Program p = a.code.empty() ? load_program(a.program_file, d)
                                   : Program::parse(a.code, d);
  Bytes input = from_hex(a.input_hex);
  if (!a.input_file.empty()) {
    const std::string raw = read_file(a.input_file);
    input.insert(input.end(), raw.begin(), raw.end());
  }
  Header h("run");
  h.add("program", a.code.empty() ? a.program_file : "<inline>")
      .add("dialect", dialect_char(d))
      .add("fuel", a.fuel)
      .add("input_hex", to_hex(input));
  out << h.str() << '\n';
  const ExecutionOutcome o = execute(p, input, MachineConfig{a.fuel});
  if (const auto* halt = std::get_if<Halted>(&o)) {
    out << "halted output=" << to_hex(halt->output) << " steps=" << halt->steps << '\n';
  } else {
    const auto& fe = std::get<FuelExhausted>(o);
    out << "fuel_exhausted steps=" << fe.steps << " ip=" << fe.ip
        << " output_so_far=" << to_hex(fe.output_so_far) << '\n';
  }
  return kExitOk;
}

struct EnumArgs {
  std::size_t max_len = 3;
  std::string dialect = "A";
  bool with_read = false;
  bool count = false;
  std::string start;
  std::uint64_t limit = 0;
};

int do_enumerate(const EnumArgs& a, std::ostream& out) {
  const Dialect d = parse_dialect(a.dialect);
  const bool input_free = !a.with_read;
  Header h("enumerate");
  h.add("dialect", dialect_char(d))
      .add("max_len", a.max_len)
      .add("input_free", input_free ? 1 : 0);
  if (a.count) {
    out << h.add("mode", "count").str() << '\n';
    std::uint64_t total = 0;
    for (std::size_t n = 0; n <= a.max_len; ++n) {
      const std::uint64_t c = count_valid(n, d, input_free);
      total += c;
      out << "len=" << n << " count=" << c << " cumulative=" << total << '\n';
    }
    return kExitOk;
  }
  std::unique_ptr<ProgramEnumerator> e;
  if (a.start.empty()) {
    e = std::make_unique<ProgramEnumerator>(d, input_free, a.max_len);
  } else {
    const EnumerationCursor c = EnumerationCursor::parse(a.start);
    if (c.dialect != d) throw Error(Errc::kInvalidInput, "cursor dialect mismatch");
    e = std::make_unique<ProgramEnumerator>(d, input_free, a.max_len, c);
  }
  h.add("start", a.start.empty() ? std::string("-") : a.start).add("limit", a.limit);
  out << h.str() << '\n';
  std::uint64_t emitted = 0;
  std::vector<Op> ops;
  for (;;) {
    const EnumerationCursor c = e->cursor();
    if (!e->next(ops)) break;
    std::string text;
    for (Op op : ops) text += op_symbol(op);
    out << c.serialize() << " prog=" << text << '\n';
    if (a.limit != 0 && ++emitted == a.limit) {
      out << "next=" << e->cursor().serialize() << '\n';
      break;
    }
  }
  return kExitOk;
}

struct KArgs {
  std::size_t max_len = 5;
  std::uint64_t fuel = 500;
  std::string dialect = "A";
  unsigned workers = 0;
  std::string out_path;
  std::string in_path;
  std::string check;
  std::uint64_t fuel_high = 0;
  std::string other_table;
  std::vector<std::uint64_t> thresholds;
  double max_seconds = 0;
  std::size_t max_entries = 0;
};

int do_kolmogorov(const KArgs& a, std::ostream& out) {
  const Dialect d = parse_dialect(a.dialect);
  const unsigned workers = a.workers ? a.workers : default_workers();
  auto build = [&](Dialect dialect, std::uint64_t fuel) {
    KSearchOptions o;
    o.max_len = a.max_len;
    o.fuel = fuel;
    o.dialect = dialect;
    o.workers = workers;
    o.max_seconds = a.max_seconds;
    o.max_entries = a.max_entries;
    return exhaustive_k(o);
  };

  Header h("kolmogorov");
  bool partial = false;
  ComplexityTable table;
  std::uint64_t programs_run = 0;
  if (!a.in_path.empty()) {
    table = load_table(a.in_path);
    h.add("in", a.in_path);
  } else {
    KSearchResult r = build(d, a.fuel);
    partial = r.budget_exceeded;
    programs_run = r.programs_run;
    table = std::move(r.table);
  }
  h.add("dialect", dialect_char(table.dialect))
      .add("max_len", table.max_len)
      .add("fuel", table.fuel)
      .add("workers", workers)
      .add("check", a.check.empty() ? std::string("none") : a.check);
  if (partial || table.partial) h.add("partial", "true").add("complete_len", table.complete_len);
  out << h.str() << '\n';
  if (!a.out_path.empty()) write_or_throw(a.out_path, table_to_string(table));
  if (a.in_path.empty()) out << "programs_run=" << programs_run << '\n';
  out << "entries=" << table.entries.size() << '\n';

  bool ok = true;
  if (a.check == "counting") {
    for (std::size_t n = 0; n <= table.horizon(); ++n) {
      const CountingCheck c = counting_bound_check(table, n);
      out << "counting n=" << n << " strings=" << c.strings
          << " programs=" << c.programs << " pass=" << bool_text(c.passed()) << '\n';
      ok = ok && c.passed();
    }
  } else if (a.check == "fuel") {
    ComplexityTable high;
    if (!a.other_table.empty()) {
      high = load_table(a.other_table);
    } else {
      if (a.fuel_high == 0) throw Error(Errc::kInvalidInput, "--fuel-high or --other is required");
      KSearchResult r = build(table.dialect, a.fuel_high);
      partial = partial || r.budget_exceeded;
      high = std::move(r.table);
    }
    const FuelCheck f = fuel_monotonicity_check(table, high);
    out << "fuel low=" << table.fuel << " high=" << high.fuel << " shared=" << f.shared
        << " violations=" << f.violations.size()
        << " missing_in_high=" << f.missing_in_high.size()
        << " improved=" << f.improved.size() << " new_in_high=" << f.new_in_high.size()
        << " pass=" << bool_text(f.passed()) << '\n';
    for (const Bytes& s : f.improved) {
      out << "improved out=" << to_hex(s) << " k_low=" << table.find(s)->length()
          << " k_high=" << high.find(s)->length() << '\n';
    }
    ok = f.passed();
  } else if (a.check == "invariance") {
    ComplexityTable other;
    if (!a.other_table.empty()) {
      other = load_table(a.other_table);
    } else {
      const Dialect od = table.dialect == Dialect::kA ? Dialect::kB : Dialect::kA;
      KSearchResult r = build(od, table.fuel);
      partial = partial || r.budget_exceeded;
      other = std::move(r.table);
    }
    const bool a_first = table.dialect == Dialect::kA;
    const InvarianceReport rep =
        a_first ? invariance_report(table, other) : invariance_report(other, table);
    out << "invariance rows=" << rep.rows.size() << " violations=" << rep.violations.size()
        << " max_gap=" << rep.max_gap << " macro_witnesses=" << rep.macro_witnesses.size()
        << " pass=" << bool_text(rep.passed()) << '\n';
    for (const InvarianceRow& v : rep.violations) {
      out << "violation out=" << to_hex(v.s) << " k_a=" << v.k_a << " k_b=" << v.k_b << '\n';
    }
    ok = rep.passed();
  } else if (a.check == "berry") {
    std::vector<std::uint64_t> thresholds = a.thresholds;
    if (thresholds.empty()) thresholds = {0, 1, 8};
    for (std::uint64_t b : thresholds) {
      try {
        const BerryResult r = berry_demo(b, table);
        out << "berry B=" << b << " witness=" << to_hex(r.witness) << " k=" << r.k
            << " k_bits=" << r.k_bits << " description_bits=" << r.description_bits
            << " description_shorter=" << bool_text(r.description_shorter()) << '\n';
      } catch (const Error& e) {
        if (e.code() != Errc::kNoWitness) throw;
        out << "berry B=" << b << " witness=none\n";
        ok = false;
      }
    }
  } else if (!a.check.empty()) {
    throw Error(Errc::kInvalidInput, "unknown --check '" + a.check + "'");
  }
  if (partial) return kExitResourceCap;
  return ok ? kExitOk : kExitCheckFailed;
}

struct DiagArgs {
  std::string preset = "all";
  std::string analyzer;
  std::string analyzer_file;
  std::string target_hex;
  std::uint64_t fuel = kDefaultDiagonalFuel;
  unsigned workers = 0;
  std::string r_out;
};

int do_diagonalize(const DiagArgs& a, std::ostream& out) {
  const unsigned workers = a.workers ? a.workers : default_workers();
  std::vector<Preset> chosen;
  for (const Preset& p : presets()) {
    if (a.preset == "all" || a.preset == p.name) chosen.push_back(p);
  }
  if (chosen.empty()) throw Error(Errc::kInvalidInput, "unknown preset '" + a.preset + "'");
  if (!a.target_hex.empty()) {
    const Bytes target = from_hex(a.target_hex);
    for (Preset& p : chosen) p.target = target;
  }

  std::vector<Analyzer> total;
  std::vector<Analyzer> diverging;
  std::string source = "bundled";
  if (!a.analyzer_file.empty()) {
    const Program body = load_program(a.analyzer_file, Dialect::kA);
    total.push_back(make_analyzer(a.analyzer_file, body.text(), "user supplied"));
    source = a.analyzer_file;
  } else {
    for (Analyzer& an : bundled_total_analyzers()) {
      if (a.analyzer.empty() || a.analyzer == an.name) total.push_back(std::move(an));
    }
    for (Analyzer& an : bundled_diverging_analyzers()) {
      if (a.analyzer.empty() || a.analyzer == an.name) diverging.push_back(std::move(an));
    }
    if (total.empty() && diverging.empty()) {
      throw Error(Errc::kInvalidInput, "unknown analyzer '" + a.analyzer + "'");
    }
    if (!a.analyzer.empty()) source = a.analyzer;
  }

  Header h("diagonalize");
  h.add("preset", a.preset)
      .add("analyzers", source)
      .add("target_hex", a.target_hex.empty() ? std::string("preset") : a.target_hex)
      .add("fuel", a.fuel)
      .add("workers", workers);
  out << h.str() << '\n';
  const SuiteReport rep = run_suite(chosen, total, diverging, a.fuel, workers);
  std::size_t inconclusive = 0;
  for (const SuiteRow& row : rep.rows) {
    out << row.record() << '\n';
    if (row.witness.behavior == Behavior::kInconclusive) ++inconclusive;
  }
  out << "summary rows=" << rep.rows.size() << " pass=" << bool_text(rep.passed()) << '\n';
  if (!a.r_out.empty() && !rep.rows.empty()) {
    write_or_throw(a.r_out, rep.rows.front().witness.r.program.text() + "\n");
  }
  if (rep.passed()) return kExitOk;
  return inconclusive > 0 ? kExitResourceCap : kExitCheckFailed;
}

struct EvolveArgs {
  std::string task = "complement";
  std::string env_hex;
  std::string decoder = "developmental";
  std::uint64_t decoder_fuel = 2000;
  std::size_t output_cap = 64;
  std::size_t population = 200;
  std::size_t generations = 500;
  double mutation_rate = 1.0;
  double indel = 0.1;
  double crossover = 0.7;
  std::optional<double> threshold;
  std::size_t max_genome_len = 32;
  std::size_t initial_len = 8;
  std::uint64_t seed = 1;
  std::string noise_file;
  std::vector<std::string> hgt;
  std::string out_path;
};

HgtEvent parse_hgt(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw Error(Errc::kInvalidInput, "--hgt expects <generation>:<hex>[,<hex>...]");
  }
  HgtEvent ev{std::stoull(text.substr(0, colon)), {}};
  std::stringstream rest(text.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) ev.fragments.push_back(from_hex(item));
  return ev;
}

int do_evolve(const EvolveArgs& a, std::ostream& out) {
  Environment env;
  if (a.task == "complement") {
    env.task = Task::kComplement;
    env.e = from_hex(a.env_hex.empty() ? "fefc" : a.env_hex);
  } else if (a.task == "antenna") {
    env.task = Task::kAntenna;
    env.e = from_hex(a.env_hex.empty() ? "405a00" : a.env_hex);
  } else {
    throw Error(Errc::kInvalidInput, "unknown --task '" + a.task + "'");
  }
  EvolutionConfig cfg;
  cfg.population = a.population;
  cfg.max_generations = a.generations;
  cfg.mutation_rate = a.mutation_rate;
  cfg.indel_probability = a.indel;
  cfg.crossover_probability = a.crossover;
  cfg.acceptance_threshold = a.threshold;
  cfg.max_genome_len = a.max_genome_len;
  cfg.initial_genome_len = std::min(a.initial_len, a.max_genome_len);
  cfg.seed = a.seed;
  if (!a.noise_file.empty()) cfg.noise_file = a.noise_file;
  if (a.decoder == "direct") {
    cfg.decoder = DirectDecoder{};
  } else if (a.decoder == "developmental") {
    cfg.decoder = DevelopmentalDecoder{a.decoder_fuel, a.output_cap};
  } else {
    throw Error(Errc::kInvalidInput, "unknown --decoder '" + a.decoder + "'");
  }
  for (const std::string& s : a.hgt) cfg.hgt.push_back(parse_hgt(s));

  Header h("evolve");
  h.add("task", a.task)
      .add("env_hex", to_hex(env.e))
      .add("decoder", a.decoder);
  if (a.decoder == "developmental") {
    h.add("decoder_fuel", a.decoder_fuel).add("output_cap", a.output_cap);
  }
  h.add("population", cfg.population)
      .add("generations", cfg.max_generations)
      .add("selection", cfg.selection)
      .add("mutation_rate", cfg.mutation_rate)
      .add("indel", cfg.indel_probability)
      .add("crossover", cfg.crossover_probability)
      .add("threshold", a.threshold ? std::to_string(*a.threshold) : std::string("perfect"))
      .add("max_genome_len", cfg.max_genome_len)
      .add("initial_len", cfg.initial_genome_len)
      .add("noise", cfg.noise_file ? "file:" + *cfg.noise_file
                                   : "seed:" + std::to_string(cfg.seed));
  for (const std::string& s : a.hgt) h.add("hgt", s);

  const EvolutionResult r = run_evolution(env, cfg);
  std::ostringstream body;
  body << h.str() << '\n';
  write_history(body, r);
  for (const FitnessRecord& rec : r.accepted) {
    body << "accepted gen=" << rec.generation << " len=" << rec.genome.size()
         << " genome=" << to_hex(rec.genome) << '\n';
  }
  body << "result generations=" << r.history.size() - 1
       << " reached_perfect=" << bool_text(r.reached_perfect) << " perfect=" << r.perfect
       << '\n';
  if (!a.out_path.empty()) write_or_throw(a.out_path, body.str());
  out << body.str();
  return kExitOk;
}

int do_goldbach(std::optional<std::uint64_t> n, std::optional<std::uint64_t> upto,
                std::ostream& out) {
  Header h("goldbach");
  if (n) {
    out << h.add("n", *n).str() << '\n';
    const GoldbachPair g = goldbach_witness(*n);
    out << "n=" << *n << " p=" << g.p << " q=" << g.q << '\n';
    return kExitOk;
  }
  const std::uint64_t limit = upto.value_or(1'000'000);
  out << h.add("upto", limit).str() << '\n';
  for (std::uint64_t k = 4; k <= limit; k += 2) {
    const GoldbachPair g = goldbach_witness(k);
    if (g.p + g.q != k || !is_prime(g.p) || !is_prime(g.q)) {
      out << "failed n=" << k << '\n';
      return kExitCheckFailed;
    }
  }
  out << "verified even 4.." << limit << " pass=true\n";
  return kExitOk;
}

int do_space(std::uint64_t bits, std::ostream& out) {
  out << Header("space").add("bits", bits).str() << '\n';
  const SpaceSize s = search_space_size(bits);
  out << "bits=" << bits << " digits=" << s.digits << " value=" << s.decimal << '\n';
  return kExitOk;
}

}  // namespace

int execute_cli(int argc, const char* const* argv, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"Desk-scale computability laboratory", "ulab"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  // INI-style; evolve settings go under an [evolve] section.
  app.set_config("--config", "", "Config file; flags given on the command line win");
  app.fallthrough();

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Execute a program on an input");
  run_cmd->add_option("--program", run.program_file, "Program file");
  run_cmd->add_option("--code", run.code, "Program text");
  run_cmd->add_option("--dialect", run.dialect)->capture_default_str();
  run_cmd->add_option("--input-hex", run.input_hex);
  run_cmd->add_option("--input-file", run.input_file);
  run_cmd->add_option("--fuel", run.fuel)->capture_default_str();

  EnumArgs en;
  auto* en_cmd = app.add_subcommand("enumerate", "Stream programs in canonical order");
  en_cmd->add_option("--max-len", en.max_len)->capture_default_str();
  en_cmd->add_option("--dialect", en.dialect)->capture_default_str();
  en_cmd->add_flag("--with-read", en.with_read, "Include the read instruction");
  en_cmd->add_flag("--count", en.count, "Print counts per length only");
  en_cmd->add_option("--start", en.start, "Resume cursor D:len:index");
  en_cmd->add_option("--limit", en.limit, "Stop after this many programs");

  KArgs k;
  auto* k_cmd = app.add_subcommand("kolmogorov", "Build or check bounded complexity tables");
  k_cmd->add_option("--max-len", k.max_len)->capture_default_str();
  k_cmd->add_option("--fuel", k.fuel)->capture_default_str();
  k_cmd->add_option("--dialect", k.dialect)->capture_default_str();
  k_cmd->add_option("--workers", k.workers)->envname("ULAB_WORKERS");
  k_cmd->add_option("--out", k.out_path, "Write the table here");
  k_cmd->add_option("--in", k.in_path, "Load a table instead of searching");
  k_cmd->add_option("--check", k.check)
      ->check(CLI::IsMember({"counting", "fuel", "invariance", "berry"}));
  k_cmd->add_option("--fuel-high", k.fuel_high, "High fuel for --check fuel");
  k_cmd->add_option("--other", k.other_table, "Second table for fuel/invariance checks");
  k_cmd->add_option("--threshold", k.thresholds, "Berry thresholds B");
  k_cmd->add_option("--max-seconds", k.max_seconds, "Wall-clock cap; 0 = none");
  k_cmd->add_option("--max-entries", k.max_entries, "Entry cap; 0 = none");

  DiagArgs dg;
  auto* dg_cmd = app.add_subcommand("diagonalize", "Build self-applying programs and refute analyzers");
  dg_cmd->add_option("--preset", dg.preset)->capture_default_str();
  dg_cmd->add_option("--analyzer", dg.analyzer, "Bundled analyzer name");
  dg_cmd->add_option("--analyzer-file", dg.analyzer_file, "Analyzer body file");
  dg_cmd->add_option("--target-hex", dg.target_hex, "Override O");
  dg_cmd->add_option("--fuel", dg.fuel)->capture_default_str();
  dg_cmd->add_option("--workers", dg.workers)->envname("ULAB_WORKERS");
  dg_cmd->add_option("--r-out", dg.r_out, "Write the first constructed R here");

  EvolveArgs ev;
  auto* ev_cmd = app.add_subcommand("evolve", "Run the genetic algorithm");
  ev_cmd->add_option("--task", ev.task)
      ->check(CLI::IsMember({"complement", "antenna"}))
      ->capture_default_str();
  ev_cmd->add_option("--env-hex", ev.env_hex, "Environment bytes");
  ev_cmd->add_option("--decoder", ev.decoder)
      ->check(CLI::IsMember({"direct", "developmental"}))
      ->capture_default_str();
  ev_cmd->add_option("--decoder-fuel", ev.decoder_fuel)->capture_default_str();
  ev_cmd->add_option("--output-cap", ev.output_cap)->capture_default_str();
  ev_cmd->add_option("--population", ev.population)->capture_default_str();
  ev_cmd->add_option("--generations", ev.generations)->capture_default_str();
  ev_cmd->add_option("--mutation-rate", ev.mutation_rate)->capture_default_str();
  ev_cmd->add_option("--indel", ev.indel)->capture_default_str();
  ev_cmd->add_option("--crossover", ev.crossover)->capture_default_str();
  ev_cmd->add_option("--threshold", ev.threshold);
  ev_cmd->add_option("--max-genome-len", ev.max_genome_len)->capture_default_str();
  ev_cmd->add_option("--initial-len", ev.initial_len)->capture_default_str();
  ev_cmd->add_option("--seed", ev.seed)->capture_default_str();
  ev_cmd->add_option("--noise-file", ev.noise_file, "Raw noise bytes, MSB first");
  ev_cmd->add_option("--hgt", ev.hgt, "<generation>:<hex>[,<hex>...]");
  ev_cmd->add_option("--out", ev.out_path, "Also write the history here");

  std::optional<std::uint64_t> gb_n;
  std::optional<std::uint64_t> gb_upto;
  auto* gb_cmd = app.add_subcommand("goldbach", "Goldbach witnesses");
  gb_cmd->add_option("--n", gb_n, "Single even n");
  gb_cmd->add_option("--upto", gb_upto, "Verify every even 4..N");

  std::uint64_t bits = 500;
  auto* sp_cmd = app.add_subcommand("space", "Exact size of a genome search space");
  sp_cmd->add_option("--bits", bits)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return do_run(run, out);
    if (en_cmd->parsed()) return do_enumerate(en, out);
    if (k_cmd->parsed()) return do_kolmogorov(k, out);
    if (dg_cmd->parsed()) return do_diagonalize(dg, out);
    if (ev_cmd->parsed()) return do_evolve(ev, out);
    if (gb_cmd->parsed()) return do_goldbach(gb_n, gb_upto, out);
    if (sp_cmd->parsed()) return do_space(bits, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
      case Errc::kConstructionTooLarge:
      case Errc::kNoiseExhausted:
        return kExitResourceCap;
      default:
        return kExitUsage;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

int execute_cli(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  std::vector<const char*> argv{"ulab"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return execute_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ulab
