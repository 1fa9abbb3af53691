#include "ulab/vm.hpp"

#include <algorithm>
#include <utility>

#include "ulab/error.hpp"

namespace ulab {

namespace {

constexpr std::size_t kInitialTape = 256;

int symbol_code(char c) {
  auto pos = kSymbols.find(c);
  return pos == std::string_view::npos ? -1 : static_cast<int>(pos);
}

}  // namespace

char dialect_char(Dialect dialect) {
  return dialect == Dialect::kA ? 'A' : 'B';
}

Dialect parse_dialect(std::string_view name) {
  if (name == "A" || name == "a") return Dialect::kA;
  if (name == "B" || name == "b") return Dialect::kB;
  throw Error(Errc::kInvalidInput,
              "unknown dialect '" + std::string(name) + "'");
}

std::size_t alphabet_size(Dialect dialect) {
  return dialect == Dialect::kA ? 8 : 9;
}

char op_symbol(Op op) { return kSymbols[static_cast<std::size_t>(op)]; }

Program::Program(std::vector<Op> ops, Dialect dialect)
    : dialect_(dialect), ops_(std::move(ops)), match_(ops_.size(), 0) {
  std::vector<std::uint32_t> stack;
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    if (static_cast<std::size_t>(ops_[i]) >= alphabet_size(dialect)) {
      throw ParseError(Errc::kUnknownSymbol, i);
    }
    if (ops_[i] == Op::kOpen) {
      stack.push_back(static_cast<std::uint32_t>(i));
    } else if (ops_[i] == Op::kClose) {
      if (stack.empty()) throw ParseError(Errc::kUnbalancedBracket, i);
      match_[i] = stack.back();
      match_[stack.back()] = static_cast<std::uint32_t>(i);
      stack.pop_back();
    }
  }
  if (!stack.empty()) {
    // The outermost unclosed opener is the first offending position.
    throw ParseError(Errc::kUnbalancedBracket, stack.front());
  }
}

Program Program::parse(std::string_view text, Dialect dialect) {
  std::vector<Op> ops;
  ops.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    int code = symbol_code(text[i]);
    if (code < 0 || static_cast<std::size_t>(code) >= alphabet_size(dialect)) {
      throw ParseError(Errc::kUnknownSymbol, i);
    }
    ops.push_back(static_cast<Op>(code));
  }
  return Program(std::move(ops), dialect);
}

Program Program::from_codes(std::span<const std::uint8_t> codes,
                            Dialect dialect) {
  std::vector<Op> ops;
  ops.reserve(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (codes[i] >= alphabet_size(dialect)) {
      throw ParseError(Errc::kUnknownSymbol, i);
    }
    ops.push_back(static_cast<Op>(codes[i]));
  }
  return Program(std::move(ops), dialect);
}

Program Program::from_ops(std::vector<Op> ops, Dialect dialect) {
  return Program(std::move(ops), dialect);
}

std::string Program::text() const {
  std::string out;
  out.reserve(ops_.size());
  for (Op op : ops_) out.push_back(op_symbol(op));
  return out;
}

Bytes Program::codes() const {
  Bytes out;
  out.reserve(ops_.size());
  for (Op op : ops_) out.push_back(static_cast<std::uint8_t>(op));
  return out;
}

bool Program::contains(Op op) const {
  return std::find(ops_.begin(), ops_.end(), op) != ops_.end();
}

const Bytes& output_of(const ExecutionOutcome& o) {
  if (const auto* h = std::get_if<Halted>(&o)) return h->output;
  return std::get<FuelExhausted>(o).output_so_far;
}

std::uint64_t steps_of(const ExecutionOutcome& o) {
  if (const auto* h = std::get_if<Halted>(&o)) return h->steps;
  return std::get<FuelExhausted>(o).steps;
}

Tape::Tape() : cells_(kInitialTape, 0), origin_(kInitialTape / 2) {}

std::uint8_t Tape::get(std::int64_t pos) const {
  std::int64_t idx = pos + origin_;
  if (idx < 0 || idx >= static_cast<std::int64_t>(cells_.size())) return 0;
  return cells_[static_cast<std::size_t>(idx)];
}

void Tape::set(std::int64_t pos, std::uint8_t value) {
  ensure(pos);
  cells_[static_cast<std::size_t>(pos + origin_)] = value;
}

void Tape::clear() { std::fill(cells_.begin(), cells_.end(), 0); }

std::int64_t Tape::lowest() const { return -origin_; }

std::int64_t Tape::highest() const {
  return static_cast<std::int64_t>(cells_.size()) - origin_ - 1;
}

Bytes Tape::window(std::int64_t from, std::size_t n) const {
  Bytes out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = get(from + static_cast<std::int64_t>(i));
  }
  return out;
}

std::vector<std::pair<std::int64_t, std::uint8_t>> Tape::nonzero() const {
  std::vector<std::pair<std::int64_t, std::uint8_t>> out;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i] != 0) {
      out.emplace_back(static_cast<std::int64_t>(i) - origin_, cells_[i]);
    }
  }
  return out;
}

void Tape::ensure(std::int64_t pos) {
  std::int64_t idx = pos + origin_;
  if (idx < 0) {
    std::size_t grow = std::max(cells_.size(), static_cast<std::size_t>(-idx));
    cells_.insert(cells_.begin(), grow, 0);
    origin_ += static_cast<std::int64_t>(grow);
  } else if (idx >= static_cast<std::int64_t>(cells_.size())) {
    std::size_t need = static_cast<std::size_t>(idx) + 1;
    cells_.resize(std::max(need, cells_.size() * 2), 0);
  }
}

void Machine::reset() {
  tape_.clear();
  head_ = 0;
}

ExecutionOutcome Machine::run(const Program& p,
                              std::span<const std::uint8_t> input) {
  reset();
  return resume(p, input);
}

namespace {

enum class Kind : std::uint8_t {
  kAdd,
  kMove,
  kOpen,
  kClose,
  kRead,
  kWrite,
  kZero,
  kLinear,
  kSpin,
};

struct Term {
  std::int32_t offset;
  std::uint8_t delta;
};

// One compiled operation stands for a run of source instructions whose
// total step cost is known before it executes.
struct Compiled {
  Kind kind;
  std::int32_t arg = 0;       // unit delta / direction, or loop-cell delta
  std::uint32_t count = 0;    // run length, or body length for loops
  std::uint32_t ip = 0;       // first source instruction
  std::uint32_t jump = 0;     // compiled index past the matching bracket
  std::uint32_t terms = 0;    // first Term of a linear loop
  std::uint32_t nterms = 0;
  std::int32_t lo = 0;        // offset range touched by a linear loop
  std::int32_t hi = 0;
};

struct CompiledProgram {
  std::vector<Compiled> ops;
  std::vector<Term> terms;
};

// A loop whose body only adds and moves with zero net shift; returns false
// otherwise. Fills per-offset deltas in first-touch order.
bool analyze_loop(std::span<const Op> ops, std::size_t open,
                  std::size_t close, std::vector<Term>& out) {
  std::int32_t at = 0;
  out.clear();
  auto bump = [&](std::uint8_t d) {
    for (Term& t : out) {
      if (t.offset == at) {
        t.delta = static_cast<std::uint8_t>(t.delta + d);
        return;
      }
    }
    out.push_back({at, d});
  };
  for (std::size_t i = open + 1; i < close; ++i) {
    switch (ops[i]) {
      case Op::kInc: bump(1); break;
      case Op::kDec: bump(255); break;
      case Op::kLeft: --at; break;
      case Op::kRight: ++at; break;
      default: return false;
    }
  }
  return at == 0;
}

void compile(const Program& p, CompiledProgram& cp) {
  std::span<const Op> ops = p.ops();
  cp.ops.clear();
  cp.terms.clear();
  std::vector<std::uint32_t> open_stack;
  std::vector<Term> body;
  for (std::size_t i = 0; i < ops.size();) {
    const Op op = ops[i];
    Compiled c{};
    c.ip = static_cast<std::uint32_t>(i);
    if (op == Op::kInc || op == Op::kDec || op == Op::kLeft || op == Op::kRight) {
      std::size_t j = i;
      while (j < ops.size() && ops[j] == op) ++j;
      c.kind = (op == Op::kInc || op == Op::kDec) ? Kind::kAdd : Kind::kMove;
      c.arg = (op == Op::kInc || op == Op::kRight) ? 1 : -1;
      c.count = static_cast<std::uint32_t>(j - i);
      cp.ops.push_back(c);
      i = j;
      continue;
    }
    if (op == Op::kOpen) {
      const std::size_t close = p.match(i);
      if (analyze_loop(ops, i, close, body)) {
        std::uint8_t self = 0;
        std::int32_t lo = 0, hi = 0;
        bool still = true;
        for (const Term& t : body) {
          if (t.offset == 0) self = t.delta;
          if (t.delta != 0) still = false;
          lo = std::min(lo, t.offset);
          hi = std::max(hi, t.offset);
        }
        c.count = static_cast<std::uint32_t>(close - i - 1);
        if (still) {
          c.kind = Kind::kSpin;
          cp.ops.push_back(c);
          i = close + 1;
          continue;
        }
        if (self == 1 || self == 255) {
          c.kind = Kind::kLinear;
          c.arg = self == 1 ? 1 : -1;
          c.terms = static_cast<std::uint32_t>(cp.terms.size());
          for (const Term& t : body) {
            if (t.offset != 0 && t.delta != 0) cp.terms.push_back(t);
          }
          c.nterms = static_cast<std::uint32_t>(cp.terms.size()) - c.terms;
          c.lo = lo;
          c.hi = hi;
          cp.ops.push_back(c);
          i = close + 1;
          continue;
        }
      }
      c.kind = Kind::kOpen;
      open_stack.push_back(static_cast<std::uint32_t>(cp.ops.size()));
      cp.ops.push_back(c);
      ++i;
      continue;
    }
    switch (op) {
      case Op::kClose: {
        c.kind = Kind::kClose;
        const std::uint32_t open = open_stack.back();
        open_stack.pop_back();
        c.jump = open + 1;
        cp.ops[open].jump = static_cast<std::uint32_t>(cp.ops.size()) + 1;
        break;
      }
      case Op::kRead: c.kind = Kind::kRead; break;
      case Op::kWrite: c.kind = Kind::kWrite; break;
      default: c.kind = Kind::kZero; break;
    }
    cp.ops.push_back(c);
    ++i;
  }
}

}  // namespace

ExecutionOutcome Machine::resume(const Program& p,
                                 std::span<const std::uint8_t> input) {
  thread_local CompiledProgram cp;
  compile(p, cp);
  const Compiled* code = cp.ops.data();
  const std::size_t n = cp.ops.size();
  const Term* terms = cp.terms.data();
  const std::uint64_t fuel = cfg_.fuel;

  tape_.ensure(head_);
  std::uint8_t* cells = tape_.cells_.data();
  std::int64_t size = static_cast<std::int64_t>(tape_.cells_.size());
  std::int64_t at = head_ + tape_.origin_;

  Bytes output;
  std::size_t in_pos = 0;
  std::size_t pc = 0;
  std::uint64_t steps = 0;

  auto sync_head = [&] { head_ = at - tape_.origin_; };
  auto reach = [&](std::int64_t lo, std::int64_t hi) {
    if (at + lo < 0 || at + hi >= size) {
      sync_head();
      tape_.ensure(head_ + lo);
      tape_.ensure(head_ + hi);
      cells = tape_.cells_.data();
      size = static_cast<std::int64_t>(tape_.cells_.size());
      at = head_ + tape_.origin_;
    }
  };
  auto slow = [&](std::size_t ip) {
    sync_head();
    return interpret(p, input, ip, steps, std::move(output), in_pos);
  };

  while (pc < n) {
    const Compiled& c = code[pc];
    if (steps == fuel) {
      sync_head();
      return FuelExhausted{steps, c.ip, std::move(output)};
    }
    switch (c.kind) {
      case Kind::kAdd: {
        const std::uint64_t k = std::min<std::uint64_t>(c.count, fuel - steps);
        cells[at] = static_cast<std::uint8_t>(cells[at] + c.arg * static_cast<int>(k & 0xFF));
        steps += k;
        if (k < c.count) {
          sync_head();
          return FuelExhausted{steps, c.ip + k, std::move(output)};
        }
        ++pc;
        break;
      }
      case Kind::kMove: {
        const std::uint64_t k = std::min<std::uint64_t>(c.count, fuel - steps);
        const std::int64_t d = c.arg * static_cast<std::int64_t>(k);
        reach(d, d);
        at += d;
        steps += k;
        if (k < c.count) {
          sync_head();
          return FuelExhausted{steps, c.ip + k, std::move(output)};
        }
        ++pc;
        break;
      }
      case Kind::kOpen:
        ++steps;
        pc = cells[at] == 0 ? c.jump : pc + 1;
        break;
      case Kind::kClose:
        ++steps;
        pc = cells[at] != 0 ? c.jump : pc + 1;
        break;
      case Kind::kRead:
        ++steps;
        cells[at] = in_pos < input.size() ? input[in_pos++] : 0;
        ++pc;
        break;
      case Kind::kWrite:
        ++steps;
        output.push_back(cells[at]);
        ++pc;
        break;
      case Kind::kZero:
        ++steps;
        cells[at] = 0;
        ++pc;
        break;
      case Kind::kLinear: {
        const std::uint8_t v = cells[at];
        if (v == 0) {
          ++steps;
          ++pc;
          break;
        }
        const std::uint64_t iters = c.arg < 0 ? v : 256u - v;
        const std::uint64_t cost = 1 + iters * (std::uint64_t{c.count} + 1);
        if (cost > fuel - steps) return slow(c.ip);
        reach(c.lo, c.hi);
        for (std::uint32_t t = c.terms; t < c.terms + c.nterms; ++t) {
          std::uint8_t& cell = cells[at + terms[t].offset];
          cell = static_cast<std::uint8_t>(cell + terms[t].delta * iters);
        }
        cells[at] = 0;
        steps += cost;
        ++pc;
        break;
      }
      case Kind::kSpin: {
        if (cells[at] == 0) {
          ++steps;
          ++pc;
          break;
        }
        // Each pass restores the state, so whole passes can be skipped and
        // the remainder stepped exactly.
        const std::uint64_t period = std::uint64_t{c.count} + 1;
        const std::uint64_t left = fuel - steps - 1;
        steps += 1 + (left / period) * period;
        reach(-static_cast<std::int64_t>(c.count), c.count);
        return slow(c.ip + 1);
      }
    }
  }
  sync_head();
  return Halted{std::move(output), steps};
}

ExecutionOutcome Machine::run_stepwise(const Program& p,
                                       std::span<const std::uint8_t> input) {
  reset();
  return interpret(p, input, 0, 0, {}, 0);
}

ExecutionOutcome Machine::interpret(const Program& p,
                                    std::span<const std::uint8_t> input,
                                    std::size_t ip, std::uint64_t steps,
                                    Bytes output, std::size_t in_pos) {
  const Op* ops = p.ops().data();
  const std::size_t n = p.size();
  const std::uint64_t fuel = cfg_.fuel;

  tape_.ensure(head_);
  std::uint8_t* cells = tape_.cells_.data();
  std::int64_t size = static_cast<std::int64_t>(tape_.cells_.size());
  std::int64_t at = head_ + tape_.origin_;

  auto sync_head = [&] { head_ = at - tape_.origin_; };

  while (ip < n) {
    if (steps == fuel) {
      sync_head();
      return FuelExhausted{steps, ip, std::move(output)};
    }
    ++steps;
    switch (ops[ip]) {
      case Op::kInc: ++cells[at]; ++ip; break;
      case Op::kDec: --cells[at]; ++ip; break;
      case Op::kLeft:
        if (at == 0) {
          sync_head();
          tape_.ensure(head_ - 1);
          cells = tape_.cells_.data();
          size = static_cast<std::int64_t>(tape_.cells_.size());
          at = head_ + tape_.origin_;
        }
        --at;
        ++ip;
        break;
      case Op::kRight:
        if (at + 1 == size) {
          sync_head();
          tape_.ensure(head_ + 1);
          cells = tape_.cells_.data();
          size = static_cast<std::int64_t>(tape_.cells_.size());
          at = head_ + tape_.origin_;
        }
        ++at;
        ++ip;
        break;
      case Op::kOpen:
        ip = cells[at] == 0 ? p.match(ip) + 1 : ip + 1;
        break;
      case Op::kClose:
        ip = cells[at] != 0 ? p.match(ip) + 1 : ip + 1;
        break;
      case Op::kRead:
        cells[at] = in_pos < input.size() ? input[in_pos++] : 0;
        ++ip;
        break;
      case Op::kWrite: output.push_back(cells[at]); ++ip; break;
      case Op::kZero: cells[at] = 0; ++ip; break;
    }
  }
  sync_head();
  return Halted{std::move(output), steps};
}

ExecutionOutcome execute(const Program& p, std::span<const std::uint8_t> input,
                         const MachineConfig& cfg) {
  Machine m(cfg);
  return m.run(p, input);
}

std::size_t literal_printer_length(std::span<const std::uint8_t> s) {
  std::size_t len = 0;
  std::uint8_t cur = 0;
  for (std::uint8_t b : s) {
    unsigned delta = static_cast<std::uint8_t>(b - cur);
    len += std::min(delta, 256 - delta) + 1;
    cur = b;
  }
  return len;
}

Program literal_printer(std::span<const std::uint8_t> s) {
  std::vector<Op> ops;
  ops.reserve(literal_printer_length(s));
  std::uint8_t cur = 0;
  for (std::uint8_t b : s) {
    unsigned up = static_cast<std::uint8_t>(b - cur);
    if (up <= 256 - up) {
      ops.insert(ops.end(), up, Op::kInc);
    } else {
      ops.insert(ops.end(), 256 - up, Op::kDec);
    }
    ops.push_back(Op::kWrite);
    cur = b;
  }
  return Program::from_ops(std::move(ops), Dialect::kA);
}

Program expand_macros(const Program& p) {
  std::vector<Op> ops;
  ops.reserve(p.size());
  for (Op op : p.ops()) {
    if (op == Op::kZero) {
      ops.insert(ops.end(), {Op::kOpen, Op::kDec, Op::kClose});
    } else {
      ops.push_back(op);
    }
  }
  return Program::from_ops(std::move(ops), Dialect::kA);
}

Program embed_in_b(const Program& p) {
  return Program::from_ops(std::vector<Op>(p.ops().begin(), p.ops().end()),
                           Dialect::kB);
}

}  // namespace ulab
