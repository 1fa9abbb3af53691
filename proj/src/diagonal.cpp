#include "ulab/diagonal.hpp"

#include <algorithm>
#include <mutex>
#include <random>
#include <thread>

#include "ulab/error.hpp"
#include "ulab/fragment.hpp"

namespace ulab {

namespace {

// Scans left until a cell holding 255, restoring every cell it passes.
constexpr std::string_view kFindSentinelLeft = "+[-<+]-";

Program build_pair_preamble() {
  // Records are (marker, value, carry) triples. Two lists are grown while
  // reading: list A on the left, a zero separator record, list B on the
  // right, then a frame holding the loop flag and the 16-bit count. Each
  // byte grows both lists by one record, so the frame advances two slots.
  FragmentBuilder b;
  // Length prefix into both lists and into the counter.
  b.go(1).read().move_to(1, {10, 22, 24}).move_to(24, {1});
  b.go(4).read().move_to(4, {13, 23, 24}).move_to(24, {4});
  for (std::int64_t marker : {0, 3, 9, 12}) b.go(marker).add(1);
  b.or_into(21, 22, 24, 25).or_into(21, 23, 24, 25);
  b.go(21);

  // One byte per iteration. Frame-relative: flag 0, hi 1, lo 2, temps 3..5;
  // list B ends at -6 and the new record goes to -3.
  b.raw("[");
  b.rebase(0);
  b.add(-1);
  b.go(3).add(1);
  b.copy(2, 4, 5);
  b.loop(4, [](FragmentBuilder& f) { f.clear().go(3).add(-1); });
  b.loop(3, [](FragmentBuilder& f) { f.add(-1).go(1).add(-1); });
  b.go(2).add(-1);
  b.go(-2).read();
  b.go(-3).add(1);
  b.move_to(-2, {-4, -1}).move_to(-1, {-2});
  // Walk a hole leftwards through list B, shifting each record right by one
  // slot and carrying the byte; stops on the separator.
  b.go(-9).raw("[[->>>+<<<]>[->>>+<<<]>>>>[-<<<+>>>]<<<<<<<<]");
  b.rebase(0);
  b.move_to(5, {1});
  b.go(0).add(1);
  b.go(6).raw("[>>>]");
  b.rebase(0);
  b.move_to(2, {8}).move_to(1, {7});
  b.or_into(6, 7, 9, 10).or_into(6, 8, 9, 10);
  b.go(6);
  b.raw("]");

  // Close the separator by shifting list B left one slot.
  b.rebase(0);
  b.go(-9).raw("[<<<]");
  b.rebase(0);
  b.go(3).raw("[[-<<<+>>>]>[-<<<+>>>]>>]");
  b.rebase(0);
  b.go(-6);

  // Compact the merged list from its right end: the last record's value
  // joins the packed block on the right, then the rest shifts right by two.
  b.raw("[");
  b.rebase(0);
  b.move_to(1, {3});
  b.go(0).add(-1);
  b.go(-3).raw("[>[->>+<<]<[->>+<<]<<<]");
  b.rebase(0);
  b.go(5).raw("[>>>]");
  b.rebase(0);
  b.go(-3);
  b.raw("]");
  b.rebase(0);
  b.go(4);
  return b.program();
}

Program build_write_scan() {
  // Frame [flag][acc][hi][lo] slides right over P, consuming one symbol per
  // step; a 255 sentinel at -5 lets the result find its way home.
  FragmentBuilder b;
  b.go(-5).add(-1);
  b.or_into(-2, 0, -3, -4).or_into(-2, 1, -3, -4);
  b.go(-2);
  b.raw("[");
  b.rebase(0);
  b.add(-1);
  b.go(4).add(-static_cast<int>(Op::kWrite));
  b.go(0).add(1);
  b.loop(4, [](FragmentBuilder& f) { f.clear().go(0).add(-1); });
  b.loop(0, [](FragmentBuilder& f) { f.add(-1).go(1).clear().add(1); });
  b.go(0).add(1);
  b.copy(3, 4, -1);
  b.loop(4, [](FragmentBuilder& f) { f.clear().go(0).add(-1); });
  b.loop(0, [](FragmentBuilder& f) { f.add(-1).go(2).add(-1); });
  b.go(3).add(-1);
  b.move_to(3, {4}).move_to(2, {3}).move_to(1, {2});
  b.or_into(1, 3, 0, -1).or_into(1, 4, 0, -1);
  b.go(1);
  b.raw("]");
  b.rebase(0);
  // acc sits one right of the exhausted flag.
  b.go(1).raw("[[-]");
  b.raw(kFindSentinelLeft);
  b.rebase(-5);
  b.go(0).add(1);
  b.go(1).raw("]");
  b.raw(kFindSentinelLeft);
  b.rebase(-5);
  b.add(1);
  b.go(0);
  return b.program();
}

Program build_length_parity() {
  // Two cells at -1/-2 swap once per unit of the low length byte.
  FragmentBuilder b;
  b.go(0).clear();
  b.go(-2).add(1);
  b.loop(1, [](FragmentBuilder& f) {
    f.add(-1);
    f.move_to(-1, {-3}).move_to(-2, {-1}).move_to(-3, {-2});
  });
  b.move_to(-1, {0});
  b.go(-2).clear();
  b.go(0);
  return b.program();
}

std::uint64_t next_random(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;
}

}  // namespace

Bytes encode_pair(std::span<const std::uint8_t> p_codes,
                  std::span<const std::uint8_t> input) {
  if (p_codes.size() > kMaxPairPart || input.size() > kMaxPairPart) {
    throw Error(Errc::kInvalidInput, "pair parts are limited to 65535 bytes");
  }
  Bytes out;
  out.reserve(p_codes.size() + input.size() + 4);
  auto append = [&out](std::span<const std::uint8_t> part) {
    out.push_back(static_cast<std::uint8_t>(part.size() >> 8));
    out.push_back(static_cast<std::uint8_t>(part.size() & 0xFF));
    out.insert(out.end(), part.begin(), part.end());
  };
  append(p_codes);
  append(input);
  return out;
}

std::pair<Bytes, Bytes> decode_pair(std::span<const std::uint8_t> tape) {
  std::size_t at = 0;
  auto take = [&]() {
    if (tape.size() < at + 2) throw Error(Errc::kFormat, "truncated pair length");
    std::size_t n = (std::size_t{tape[at]} << 8) | tape[at + 1];
    at += 2;
    if (tape.size() < at + n) throw Error(Errc::kFormat, "truncated pair body");
    Bytes part(tape.begin() + static_cast<std::ptrdiff_t>(at),
               tape.begin() + static_cast<std::ptrdiff_t>(at + n));
    at += n;
    return part;
  };
  Bytes p = take();
  Bytes i = take();
  if (at != tape.size()) throw Error(Errc::kFormat, "trailing bytes after pair");
  return {std::move(p), std::move(i)};
}

Bytes length_prefixed(std::span<const std::uint8_t> bytes) {
  if (bytes.size() > kMaxPairPart) {
    throw Error(Errc::kInvalidInput, "length prefix is limited to 65535");
  }
  Bytes out(bytes.size() + 2);
  out[0] = static_cast<std::uint8_t>(bytes.size() >> 8);
  out[1] = static_cast<std::uint8_t>(bytes.size() & 0xFF);
  std::copy(bytes.begin(), bytes.end(), out.begin() + 2);
  return out;
}

Analyzer make_analyzer(std::string name, std::string_view body_text,
                       std::string property_name) {
  Program body = Program::parse(body_text, Dialect::kA);
  if (body.contains(Op::kRead)) {
    throw Error(Errc::kInvalidInput,
                "analyzer '" + name + "' reads input; it must use the tape");
  }
  return Analyzer{std::move(name), std::move(body), std::move(property_name)};
}

const Program& pair_preamble() {
  static const Program kPreamble = build_pair_preamble();
  return kPreamble;
}

Program postlude(std::span<const std::uint8_t> target) {
  std::string code = "[[-]+[]]" + literal_printer(target).text();
  return Program::parse(code, Dialect::kA);
}

DiagonalProgram build_diagonal(const Analyzer& analyzer,
                               std::span<const std::uint8_t> target) {
  if (target.empty()) throw Error(Errc::kInvalidInput, "O must be nonempty");
  if (analyzer.body.contains(Op::kRead)) {
    throw Error(Errc::kInvalidInput, "analyzer body must not read input");
  }
  const std::string pre = pair_preamble().text();
  const std::string body = analyzer.body.text();
  const std::string post = postlude(target).text();
  const std::size_t total = pre.size() + body.size() + post.size();
  if (total > kMaxPairPart) {
    throw Error(Errc::kConstructionTooLarge,
                "diagonal program would have " + std::to_string(total) +
                    " instructions");
  }
  DiagonalProgram d;
  d.program = Program::parse(pre + body + post, Dialect::kA);
  d.body_begin = pre.size();
  d.body_end = pre.size() + body.size();
  // Inside "[[-]+[]]" after the outer opener: reached only with a nonzero
  // verdict, and from there the inner loop is entered on a cell holding 1.
  d.loop_begin = d.body_end + 1;
  d.loop_end = d.body_end + 8;
  return d;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kNo: return "0";
    case Verdict::kYes: return "1";
    case Verdict::kDiverged: return "diverged";
  }
  return "?";
}

const char* behavior_name(Behavior b) {
  switch (b) {
    case Behavior::kEmittedO: return "emittedO";
    case Behavior::kProvablyLoops: return "loops";
    case Behavior::kAnalyzerDiverged: return "diverged";
    case Behavior::kInconclusive: return "inconclusive";
  }
  return "?";
}

DiagonalWitness self_apply(const Analyzer& analyzer,
                           std::span<const std::uint8_t> target,
                           std::uint64_t fuel) {
  DiagonalWitness w;
  w.r = build_diagonal(analyzer, target);
  const Bytes r_codes = w.r.program.codes();

  Machine direct(MachineConfig{fuel});
  const Bytes pair = encode_pair(r_codes, r_codes);
  for (std::size_t i = 0; i < pair.size(); ++i) {
    direct.tape().set(static_cast<std::int64_t>(i), pair[i]);
  }
  ExecutionOutcome verdict_run = direct.resume(analyzer.body, {});
  w.verdict_steps = steps_of(verdict_run);
  if (halted(verdict_run)) {
    w.verdict = direct.tape().get(direct.head()) != 0 ? Verdict::kYes : Verdict::kNo;
  }

  Machine self(MachineConfig{fuel});
  ExecutionOutcome r_run = self.run(w.r.program, length_prefixed(r_codes));
  w.r_steps = steps_of(r_run);
  if (const auto* h = std::get_if<Halted>(&r_run)) {
    if (std::equal(h->output.begin(), h->output.end(), target.begin(), target.end())) {
      w.behavior = Behavior::kEmittedO;
    }
  } else {
    const std::size_t ip = std::get<FuelExhausted>(r_run).ip;
    if (ip >= w.r.loop_begin && ip < w.r.loop_end) {
      w.behavior = Behavior::kProvablyLoops;
    } else if (ip >= w.r.body_begin && ip < w.r.body_end) {
      w.behavior = Behavior::kAnalyzerDiverged;
    }
  }
  w.refuted =
      (w.verdict == Verdict::kYes && w.behavior == Behavior::kProvablyLoops) ||
      (w.verdict == Verdict::kNo && w.behavior == Behavior::kEmittedO);
  return w;
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> kPresets = {
      {"rice", "P on input I outputs O", {0x01}},
      {"halting", "P halts on input I", {0x02}},
      {"godel", "the statement P about I is provable", {0x03}},
      {"consciousness", "P on input I exhibits the display O and halts", {0x04}},
  };
  return kPresets;
}

Analyzer random_total_analyzer(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::string body;
  long head = 0;
  const std::uint64_t len = 4 + next_random(rng, 24);
  for (std::uint64_t i = 0; i < len; ++i) {
    switch (next_random(rng, 5)) {
      case 0: body += '+'; break;
      case 1: body += '-'; break;
      case 2: body += '<'; --head; break;
      case 3: body += '>'; ++head; break;
      default: body += "[-]"; break;
    }
  }
  body.append(static_cast<std::size_t>(head < 0 ? -head : head), head < 0 ? '>' : '<');
  body += next_random(rng, 2) == 0 ? "[-]" : "[-]+";
  return make_analyzer("random-forced-" + std::to_string(seed), body,
                       "random fragment forced total");
}

std::vector<Analyzer> bundled_total_analyzers() {
  std::vector<Analyzer> out;
  out.push_back(make_analyzer("constant-no", "[-]", "never"));
  out.push_back(make_analyzer("constant-yes", "[-]+", "always"));
  out.push_back(make_analyzer("empty-body", "", "lenP high byte is nonzero"));
  out.push_back(make_analyzer("write-scan", build_write_scan().text(),
                              "P contains a write instruction"));
  out.push_back(make_analyzer("length-parity", build_length_parity().text(),
                              "lenP is odd"));
  out.push_back(random_total_analyzer(20240601));
  return out;
}

std::vector<Analyzer> bundled_diverging_analyzers() {
  std::vector<Analyzer> out;
  out.push_back(make_analyzer("spin", "+[]", "never answers"));
  out.push_back(make_analyzer("dither", "+[>+-<]", "never answers"));
  return out;
}

std::string SuiteRow::record() const {
  return "preset=" + preset + " analyzer=" + analyzer +
         " verdict=" + verdict_name(witness.verdict) +
         " behavior=" + behavior_name(witness.behavior) +
         " refuted=" + (witness.refuted ? "true" : "false");
}

bool SuiteReport::passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const SuiteRow& r) {
    return r.expected_total
               ? r.witness.refuted
               : r.witness.behavior == Behavior::kAnalyzerDiverged &&
                     r.witness.verdict == Verdict::kDiverged;
  });
}

SuiteReport run_suite(const std::vector<Preset>& preset_list,
                      const std::vector<Analyzer>& total,
                      const std::vector<Analyzer>& diverging,
                      std::uint64_t fuel, unsigned workers) {
  SuiteReport report;
  for (const Preset& p : preset_list) {
    for (const Analyzer& a : total) report.rows.push_back({p.name, a.name, true, {}});
    for (const Analyzer& a : diverging) {
      report.rows.push_back({p.name, a.name, false, {}});
    }
  }
  std::vector<const Analyzer*> analyzers;
  std::vector<const Preset*> row_presets;
  for (const Preset& p : preset_list) {
    for (const Analyzer& a : total) {
      analyzers.push_back(&a);
      row_presets.push_back(&p);
    }
    for (const Analyzer& a : diverging) {
      analyzers.push_back(&a);
      row_presets.push_back(&p);
    }
  }
  std::mutex mu;
  std::size_t next = 0;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= report.rows.size()) return;
        i = next++;
      }
      report.rows[i].witness = self_apply(*analyzers[i], row_presets[i]->target, fuel);
    }
  };
  const unsigned n = std::max(1u, workers);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  std::sort(report.rows.begin(), report.rows.end(),
            [](const SuiteRow& a, const SuiteRow& b) {
              return a.preset != b.preset ? a.preset < b.preset : a.analyzer < b.analyzer;
            });
  return report;
}

SuiteReport refutation_suite(std::uint64_t fuel, unsigned workers) {
  return run_suite(presets(), bundled_total_analyzers(),
                   bundled_diverging_analyzers(), fuel, workers);
}

}  // namespace ulab
