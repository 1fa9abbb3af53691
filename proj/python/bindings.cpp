#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ulab/cli.hpp"
#include "ulab/complexity.hpp"
#include "ulab/diagonal.hpp"
#include "ulab/enumerate.hpp"
#include "ulab/error.hpp"
#include "ulab/evolve.hpp"
#include "ulab/vm.hpp"

namespace py = pybind11;
using namespace ulab;

namespace {

Bytes to_bytes(const py::bytes& b) {
  const std::string s = b;
  return Bytes(s.begin(), s.end());
}

py::bytes from_bytes(const Bytes& b) {
  return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

Dialect dialect_of(const std::string& name) { return parse_dialect(name); }

py::dict outcome_dict(const ExecutionOutcome& o) {
  py::dict d;
  d["halted"] = halted(o);
  d["output"] = from_bytes(output_of(o));
  d["steps"] = steps_of(o);
  if (const auto* f = std::get_if<FuelExhausted>(&o)) {
    d["ip"] = f->ip;
  } else {
    d["ip"] = py::none();
  }
  return d;
}

ComplexityTable table_from_text(const std::string& text) {
  std::istringstream in(text);
  return read_table(in);
}

}  // namespace

PYBIND11_MODULE(_ulab, m) {
  m.doc() = "Bounded computability experiments over a minimal tape language";
  static py::exception<Error> error(m, "UlabError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string(errc_name(e.code())) + ": " + e.what()).c_str());
    }
  });

  m.def(
      "execute",
      [](const std::string& code, const py::bytes& input, std::uint64_t fuel,
         const std::string& dialect) {
        const Program p = Program::parse(code, dialect_of(dialect));
        const Bytes in = to_bytes(input);
        ExecutionOutcome o;
        {
          py::gil_scoped_release release;
          o = execute(p, in, MachineConfig{fuel});
        }
        return outcome_dict(o);
      },
      py::arg("code"), py::arg("input") = py::bytes(), py::arg("fuel") = 1'000'000,
      py::arg("dialect") = "A");

  m.def(
      "literal_printer", [](const py::bytes& s) { return literal_printer(to_bytes(s)).text(); },
      py::arg("s"));

  m.def(
      "count_valid",
      [](std::size_t n, const std::string& dialect, bool input_free) {
        return count_valid(n, dialect_of(dialect), input_free);
      },
      py::arg("n"), py::arg("dialect") = "A", py::arg("input_free") = false);

  m.def(
      "enumerate_programs",
      [](std::size_t max_len, const std::string& dialect, bool input_free) {
        std::vector<std::string> out;
        for (const Program& p : enumerate_programs(max_len, dialect_of(dialect), input_free)) {
          out.push_back(p.text());
        }
        return out;
      },
      py::arg("max_len"), py::arg("dialect") = "A", py::arg("input_free") = true);

  m.def(
      "exhaustive_k",
      [](std::size_t max_len, std::uint64_t fuel, const std::string& dialect, unsigned workers) {
        KSearchOptions o;
        o.max_len = max_len;
        o.fuel = fuel;
        o.dialect = dialect_of(dialect);
        o.workers = workers;
        KSearchResult r;
        {
          py::gil_scoped_release release;
          r = exhaustive_k(o);
        }
        py::dict entries;
        for (const auto& [s, e] : r.table.entries) entries[from_bytes(s)] = e.program.text();
        py::dict d;
        d["entries"] = entries;
        d["text"] = table_to_string(r.table);
        d["programs_run"] = r.programs_run;
        return d;
      },
      py::arg("max_len"), py::arg("fuel"), py::arg("dialect") = "A", py::arg("workers") = 1);

  m.def(
      "berry_demo",
      [](const std::string& table_text, std::uint64_t threshold) {
        const BerryResult b = berry_demo(threshold, table_from_text(table_text));
        py::dict d;
        d["witness"] = from_bytes(b.witness);
        d["k"] = b.k;
        d["k_bits"] = b.k_bits;
        d["description_bits"] = b.description_bits;
        return d;
      },
      py::arg("table_text"), py::arg("threshold"));

  m.def(
      "self_apply",
      [](const std::string& body, const py::bytes& target, std::uint64_t fuel) {
        const Analyzer a = make_analyzer("python", body);
        const Bytes o = to_bytes(target);
        DiagonalWitness w;
        {
          py::gil_scoped_release release;
          w = self_apply(a, o, fuel);
        }
        py::dict d;
        d["verdict"] = verdict_name(w.verdict);
        d["behavior"] = behavior_name(w.behavior);
        d["refuted"] = w.refuted;
        d["r"] = w.r.program.text();
        return d;
      },
      py::arg("body"), py::arg("target"), py::arg("fuel") = kDefaultDiagonalFuel);

  m.def(
      "refutation_suite",
      [](std::uint64_t fuel, unsigned workers) {
        SuiteReport r;
        {
          py::gil_scoped_release release;
          r = refutation_suite(fuel, workers);
        }
        std::vector<std::string> rows;
        for (const SuiteRow& row : r.rows) rows.push_back(row.record());
        return py::make_tuple(r.passed(), rows);
      },
      py::arg("fuel") = kDefaultDiagonalFuel, py::arg("workers") = 1);

  m.def(
      "run_evolution",
      [](const std::string& task, const py::bytes& env, std::uint64_t seed, std::size_t population,
         std::size_t generations, const std::string& decoder, std::size_t max_genome_len) {
        if (task != "antenna" && task != "complement") {
          throw Error(Errc::kInvalidInput, "unknown task '" + task + "'");
        }
        Environment e{task == "antenna" ? Task::kAntenna : Task::kComplement, to_bytes(env)};
        EvolutionConfig c;
        c.seed = seed;
        c.population = population;
        c.max_generations = generations;
        c.max_genome_len = max_genome_len;
        c.initial_genome_len = std::min(c.initial_genome_len, max_genome_len);
        if (decoder == "direct") {
          c.decoder = DirectDecoder{};
        } else if (decoder != "developmental") {
          throw Error(Errc::kInvalidInput, "unknown decoder '" + decoder + "'");
        }
        EvolutionResult r;
        {
          py::gil_scoped_release release;
          r = run_evolution(e, c);
        }
        std::vector<std::string> history;
        for (const GenerationSummary& s : r.history) history.push_back(s.record());
        py::dict d;
        d["history"] = history;
        d["reached_perfect"] = r.reached_perfect;
        d["perfect"] = r.perfect;
        return d;
      },
      py::arg("task"), py::arg("env"), py::arg("seed") = 1, py::arg("population") = 200,
      py::arg("generations") = 500, py::arg("decoder") = "developmental",
      py::arg("max_genome_len") = 32);

  m.def(
      "minimal_genome_oracle",
      [](const py::bytes& env, std::size_t max_len) {
        const MinimalGenome g =
            minimal_genome_oracle(Environment{Task::kComplement, to_bytes(env)}, DevelopmentalDecoder{}, max_len);
        return from_bytes(g.genome);
      },
      py::arg("env"), py::arg("max_len"));

  m.def("is_prime", &is_prime, py::arg("n"));
  m.def(
      "goldbach_witness",
      [](std::uint64_t n) {
        const GoldbachPair g = goldbach_witness(n);
        return py::make_tuple(g.p, g.q);
      },
      py::arg("n"));
  m.def(
      "search_space_size",
      [](std::uint64_t bits) { return py::int_(py::str(search_space_size(bits).decimal)); },
      py::arg("bits"));

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = execute_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));

  m.attr("__version__") = kToolVersion;
}
