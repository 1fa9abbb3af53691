#include "ulab/complexity.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string_view>
#include <thread>
#include <unordered_map>

#include "ulab/enumerate.hpp"
#include "ulab/error.hpp"

namespace ulab {

namespace {

constexpr std::uint64_t kNoOrdinal = std::numeric_limits<std::uint64_t>::max();

struct Chunk {
  std::size_t length;
  std::uint64_t first_index;
  std::uint64_t count;
  std::uint64_t first_ordinal;
};

std::string as_key(const Bytes& b) { return std::string(b.begin(), b.end()); }

Bytes from_key(const std::string& k) { return Bytes(k.begin(), k.end()); }

const char* status_name(KStatus s) {
  return s == KStatus::kExact ? "exact" : "upper";
}

}  // namespace

const KEntry* ComplexityTable::find(const Bytes& s) const {
  auto it = entries.find(s);
  return it == entries.end() ? nullptr : &it->second;
}

std::optional<std::size_t> ComplexityTable::exact_k(const Bytes& s) const {
  const KEntry* e = find(s);
  if (e == nullptr || e->status != KStatus::kExact) return std::nullopt;
  return e->length();
}

std::size_t ComplexityTable::horizon() const {
  return partial ? complete_len : max_len;
}

bool operator==(const ComplexityTable& a, const ComplexityTable& b) {
  if (a.dialect != b.dialect || a.max_len != b.max_len || a.fuel != b.fuel ||
      a.partial != b.partial || a.horizon() != b.horizon() ||
      a.entries.size() != b.entries.size()) {
    return false;
  }
  auto it = b.entries.begin();
  for (const auto& [key, entry] : a.entries) {
    if (key != it->first || !(entry.program == it->second.program) ||
        entry.status != it->second.status) {
      return false;
    }
    ++it;
  }
  return true;
}

KSearchResult exhaustive_k(const KSearchOptions& opts) {
  if (opts.fuel < 1) throw Error(Errc::kInvalidInput, "fuel must be >= 1");
  const ProgramEnumerator shape(opts.dialect, true, opts.max_len);

  std::vector<Chunk> chunks;
  std::vector<std::uint64_t> length_offset(opts.max_len + 2, 0);
  const std::uint64_t chunk_size = std::max<std::uint64_t>(opts.chunk, 1);
  for (std::size_t len = 0; len <= opts.max_len; ++len) {
    const std::uint64_t total = shape.completions(len, 0);
    length_offset[len + 1] = length_offset[len] + total;
    for (std::uint64_t start = 0; start < total; start += chunk_size) {
      chunks.push_back({len, start, std::min(chunk_size, total - start),
                        length_offset[len] + start});
    }
  }

  using Clock = std::chrono::steady_clock;
  const auto started = Clock::now();
  std::atomic<std::size_t> next_chunk{0};
  std::atomic<bool> stop{false};
  std::atomic<std::uint64_t> programs_run{0};
  // First ordinal not processed per chunk; kNoOrdinal when finished.
  std::vector<std::uint64_t> unfinished(chunks.size());
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    unfinished[i] = chunks[i].first_ordinal;
  }

  std::mutex merge_mu;
  std::unordered_map<std::string, std::uint64_t> merged;

  auto worker = [&] {
    Machine machine(MachineConfig{opts.fuel});
    std::unordered_map<std::string, std::uint64_t> local;
    std::vector<Op> ops;
    std::uint64_t ran = 0;
    while (!stop.load(std::memory_order_relaxed)) {
      const std::size_t ci = next_chunk.fetch_add(1);
      if (ci >= chunks.size()) break;
      const Chunk& c = chunks[ci];
      ProgramEnumerator e(opts.dialect, true, opts.max_len,
                          EnumerationCursor{opts.dialect, c.length, c.first_index});
      std::uint64_t i = 0;
      for (; i < c.count; ++i) {
        if ((i & 4095) == 0 && i > 0) {
          if (stop.load(std::memory_order_relaxed)) break;
          if (opts.max_seconds > 0 &&
              std::chrono::duration<double>(Clock::now() - started).count() >
                  opts.max_seconds) {
            stop = true;
            break;
          }
          if (opts.max_entries > 0 && local.size() > opts.max_entries) {
            stop = true;
            break;
          }
        }
        e.next(ops);
        Program p = Program::from_ops(ops, opts.dialect);
        ExecutionOutcome out = machine.run(p, {});
        ++ran;
        if (const auto* h = std::get_if<Halted>(&out)) {
          const std::uint64_t ordinal = c.first_ordinal + i;
          auto [it, inserted] = local.try_emplace(as_key(h->output), ordinal);
          if (!inserted && ordinal < it->second) it->second = ordinal;
        }
      }
      std::lock_guard<std::mutex> lock(merge_mu);
      unfinished[ci] = i == c.count ? kNoOrdinal : c.first_ordinal + i;
    }
    std::lock_guard<std::mutex> lock(merge_mu);
    for (auto& [key, ordinal] : local) {
      auto [it, inserted] = merged.try_emplace(key, ordinal);
      if (!inserted && ordinal < it->second) it->second = ordinal;
    }
    programs_run += ran;
  };

  const unsigned workers = std::max(1u, opts.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  const std::uint64_t frontier =
      *std::min_element(unfinished.begin(), unfinished.end());

  KSearchResult result;
  result.programs_run = programs_run.load();
  result.budget_exceeded = frontier != kNoOrdinal;
  ComplexityTable& table = result.table;
  table.dialect = opts.dialect;
  table.max_len = opts.max_len;
  table.fuel = opts.fuel;
  table.partial = result.budget_exceeded;
  table.complete_len = opts.max_len;
  if (table.partial) {
    std::size_t len = 0;
    while (length_offset[len + 1] <= frontier) ++len;
    // Length `len` holds the frontier, so only shorter lengths are complete.
    table.complete_len = len == 0 ? 0 : len - 1;
  }
  for (const auto& [key, ordinal] : merged) {
    std::size_t len = 0;
    while (length_offset[len + 1] <= ordinal) ++len;
    KEntry entry;
    entry.program = Program::from_ops(
        shape.unrank(len, ordinal - length_offset[len]), opts.dialect);
    entry.status = ordinal < frontier ? KStatus::kExact : KStatus::kUpperBoundOnly;
    table.entries.emplace(from_key(key), std::move(entry));
  }
  return result;
}

std::size_t k_upper_bound(const Bytes& s) { return literal_printer_length(s); }

void write_table(std::ostream& out, const ComplexityTable& table) {
  out << "ulab-ktable v1 dialect=" << dialect_char(table.dialect)
      << " max_len=" << table.max_len << " fuel=" << table.fuel
      << " input_free=1";
  if (table.partial) {
    out << " partial=true complete_len=" << table.complete_len;
  }
  out << '\n';
  struct Line {
    std::size_t k;
    std::string hex;
    const KEntry* entry;
  };
  std::vector<Line> lines;
  lines.reserve(table.entries.size());
  for (const auto& [key, entry] : table.entries) {
    lines.push_back({entry.length(), to_hex(key), &entry});
  }
  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    return a.k != b.k ? a.k < b.k : a.hex < b.hex;
  });
  for (const Line& l : lines) {
    out << "K=" << l.k << " out=" << l.hex << " prog=" << l.entry->program.text()
        << " status=" << status_name(l.entry->status) << '\n';
  }
}

std::string table_to_string(const ComplexityTable& table) {
  std::ostringstream os;
  write_table(os, table);
  return os.str();
}

namespace {

// Splits "key=value key=value" on single spaces.
std::map<std::string, std::string> parse_fields(std::string_view line) {
  std::map<std::string, std::string> fields;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t end = line.find(' ', pos);
    if (end == std::string_view::npos) end = line.size();
    std::string_view token = line.substr(pos, end - pos);
    if (!token.empty()) {
      auto eq = token.find('=');
      if (eq == std::string_view::npos) {
        throw Error(Errc::kFormat, "malformed field '" + std::string(token) + "'");
      }
      fields.emplace(std::string(token.substr(0, eq)),
                     std::string(token.substr(eq + 1)));
    }
    pos = end + 1;
  }
  return fields;
}

const std::string& field(const std::map<std::string, std::string>& f,
                         const std::string& key) {
  auto it = f.find(key);
  if (it == f.end()) throw Error(Errc::kFormat, "missing field '" + key + "'");
  return it->second;
}

}  // namespace

ComplexityTable read_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::kFormat, "empty table file");
  const std::string_view magic = "ulab-ktable v1 ";
  if (line.rfind(magic, 0) != 0) {
    throw Error(Errc::kFormat, "not a ulab-ktable v1 file");
  }
  auto header = parse_fields(std::string_view(line).substr(magic.size()));
  ComplexityTable table;
  table.dialect = parse_dialect(field(header, "dialect"));
  table.max_len = std::stoull(field(header, "max_len"));
  table.fuel = std::stoull(field(header, "fuel"));
  if (field(header, "input_free") != "1") {
    throw Error(Errc::kFormat, "only input_free=1 tables are supported");
  }
  table.partial = header.count("partial") && header.at("partial") == "true";
  table.complete_len =
      table.partial ? std::stoull(field(header, "complete_len")) : table.max_len;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = parse_fields(line);
    KEntry entry;
    entry.program = Program::parse(field(f, "prog"), table.dialect);
    const std::string& status = field(f, "status");
    if (status == "exact") {
      entry.status = KStatus::kExact;
    } else if (status == "upper") {
      entry.status = KStatus::kUpperBoundOnly;
    } else {
      throw Error(Errc::kFormat, "unknown status '" + status + "'");
    }
    if (std::stoull(field(f, "K")) != entry.length()) {
      throw Error(Errc::kFormat, "K does not match program length");
    }
    table.entries.emplace(from_hex(field(f, "out")), std::move(entry));
  }
  return table;
}

bool InvarianceReport::passed() const {
  if (!violations.empty()) return false;
  return std::all_of(macro_witnesses.begin(), macro_witnesses.end(),
                     [](const MacroWitness& w) { return w.reproduces; });
}

InvarianceReport invariance_report(const ComplexityTable& table_a,
                                   const ComplexityTable& table_b) {
  if (table_a.dialect != Dialect::kA || table_b.dialect != Dialect::kB) {
    throw Error(Errc::kIncompatibleTables,
                "invariance needs a dialect A table and a dialect B table");
  }
  if (table_a.fuel != table_b.fuel) {
    throw Error(Errc::kIncompatibleTables, "tables were built with different fuel");
  }
  InvarianceReport report;
  bool any_row = false;
  for (const auto& [s, entry_a] : table_a.entries) {
    if (entry_a.status != KStatus::kExact) continue;
    auto k_b = table_b.exact_k(s);
    if (!k_b) continue;
    InvarianceRow row{s, entry_a.length(), *k_b};
    long gap = static_cast<long>(row.k_a) - static_cast<long>(row.k_b);
    report.max_gap = any_row ? std::max(report.max_gap, gap) : gap;
    any_row = true;
    if (row.k_b > row.k_a || row.k_a > 3 * row.k_b) report.violations.push_back(row);
    report.rows.push_back(std::move(row));
  }
  // Every zero-using B optimum must expand into a working A program.
  const MachineConfig ample{table_b.fuel * 3 + 1024 * (table_b.max_len + 1)};
  for (const auto& [s, entry_b] : table_b.entries) {
    if (entry_b.status != KStatus::kExact || !entry_b.program.contains(Op::kZero)) {
      continue;
    }
    MacroWitness w{s, entry_b.program, expand_macros(entry_b.program), false};
    ExecutionOutcome out = execute(w.expanded, {}, ample);
    w.reproduces = halted(out) && output_of(out) == s &&
                   w.expanded.size() <= 3 * w.b_program.size();
    report.macro_witnesses.push_back(std::move(w));
  }
  return report;
}

CountingCheck counting_bound_check(const ComplexityTable& table, std::size_t n) {
  if (n > table.max_len) {
    throw Error(Errc::kInvalidInput, "counting check needs n <= max_len");
  }
  CountingCheck check;
  check.n = n;
  for (const auto& [s, entry] : table.entries) {
    if (entry.status == KStatus::kExact && entry.length() <= n) ++check.strings;
  }
  for (std::size_t k = 0; k <= n; ++k) {
    check.programs += count_valid(k, table.dialect, true);
  }
  return check;
}

FuelCheck fuel_monotonicity_check(const ComplexityTable& low,
                                  const ComplexityTable& high) {
  if (low.dialect != high.dialect || low.max_len != high.max_len) {
    throw Error(Errc::kIncompatibleTables,
                "fuel check needs equal dialect and max_len");
  }
  if (low.fuel > high.fuel) {
    throw Error(Errc::kIncompatibleTables, "low-fuel table has more fuel");
  }
  FuelCheck check;
  for (const auto& [s, entry_low] : low.entries) {
    const KEntry* entry_high = high.find(s);
    if (entry_high == nullptr) {
      check.missing_in_high.push_back(s);
      continue;
    }
    if (entry_low.status != KStatus::kExact ||
        entry_high->status != KStatus::kExact) {
      continue;
    }
    ++check.shared;
    if (entry_high->length() > entry_low.length()) check.violations.push_back(s);
    if (entry_high->length() < entry_low.length()) check.improved.push_back(s);
  }
  for (const auto& [s, entry_high] : high.entries) {
    if (low.find(s) == nullptr) check.new_in_high.push_back(s);
  }
  return check;
}

bool fully_resolved(const ComplexityTable& table, const Bytes& s) {
  return k_upper_bound(s) <= table.horizon();
}

std::size_t bits_per_instruction(Dialect dialect) {
  std::size_t symbols = alphabet_size(dialect);
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < symbols) ++bits;
  return bits;
}

std::size_t berry_description_bits(std::uint64_t threshold) {
  // ceil(log2(B + 1)) bits name B.
  std::size_t bits = 0;
  while (bits < 64 && (std::uint64_t{1} << bits) < threshold + 1) ++bits;
  return kBerryQueryBits + bits;
}

BerryResult berry_demo(std::uint64_t threshold, const ComplexityTable& table) {
  const Bytes* best = nullptr;
  std::size_t best_k = 0;
  for (const auto& [s, entry] : table.entries) {
    if (entry.status != KStatus::kExact || entry.length() <= threshold) continue;
    if (!fully_resolved(table, s)) continue;
    if (best == nullptr || length_lex_less(s, *best)) {
      best = &s;
      best_k = entry.length();
    }
  }
  if (best == nullptr) {
    throw Error(Errc::kNoWitness, "no fully resolved string has K > " +
                                      std::to_string(threshold));
  }
  BerryResult r;
  r.witness = *best;
  r.k = best_k;
  r.k_bits = best_k * bits_per_instruction(table.dialect);
  r.description_bits = berry_description_bits(threshold);
  return r;
}

}  // namespace ulab
