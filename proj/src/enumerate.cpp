#include "ulab/enumerate.hpp"

#include <charconv>
#include <limits>

#include "ulab/error.hpp"

namespace ulab {

namespace {

constexpr std::size_t kMaxCountedLength = 21;

int depth_delta(Op op) {
  if (op == Op::kOpen) return 1;
  if (op == Op::kClose) return -1;
  return 0;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    throw Error(Errc::kInvalidInput, "program count overflows 64 bits");
  }
  return a * b;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

std::uint64_t catalan(std::uint64_t j) { return binomial(2 * j, j) / (j + 1); }

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error(Errc::kFormat, "not a decimal number: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::vector<Op> enumeration_alphabet(Dialect dialect, bool input_free) {
  std::vector<Op> out;
  for (std::size_t c = 0; c < alphabet_size(dialect); ++c) {
    auto op = static_cast<Op>(c);
    if (input_free && op == Op::kRead) continue;
    out.push_back(op);
  }
  return out;
}

std::uint64_t count_valid(std::size_t n, Dialect dialect, bool input_free) {
  if (n > kMaxCountedLength) {
    throw Error(Errc::kInvalidInput, "count_valid supports n <= 21");
  }
  const std::uint64_t k = enumeration_alphabet(dialect, input_free).size() - 2;
  std::uint64_t total = 0;
  for (std::size_t pairs = 0; 2 * pairs <= n; ++pairs) {
    std::uint64_t term = checked_mul(binomial(n, 2 * pairs), catalan(pairs));
    for (std::size_t i = 0; i < n - 2 * pairs; ++i) term = checked_mul(term, k);
    total += term;
  }
  return total;
}

std::string EnumerationCursor::serialize() const {
  return std::string(1, dialect_char(dialect)) + ":" + std::to_string(length) +
         ":" + std::to_string(index);
}

EnumerationCursor EnumerationCursor::parse(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) {
    line.remove_suffix(1);
  }
  auto first = line.find(':');
  auto second = first == std::string_view::npos ? first : line.find(':', first + 1);
  if (second == std::string_view::npos) {
    throw Error(Errc::kFormat, "cursor must be dialect:length:index");
  }
  EnumerationCursor c;
  c.dialect = parse_dialect(line.substr(0, first));
  c.length = parse_u64(line.substr(first + 1, second - first - 1));
  c.index = parse_u64(line.substr(second + 1));
  return c;
}

ProgramEnumerator::ProgramEnumerator(Dialect dialect, bool input_free,
                                     std::size_t max_len)
    : ProgramEnumerator(dialect, input_free, max_len,
                        EnumerationCursor{dialect, 0, 0}) {}

ProgramEnumerator::ProgramEnumerator(Dialect dialect, bool input_free,
                                     std::size_t max_len,
                                     const EnumerationCursor& start)
    : dialect_(dialect),
      input_free_(input_free),
      max_len_(max_len),
      alphabet_(enumeration_alphabet(dialect, input_free)),
      alpha_pos_(9, -1),
      neutral_(alphabet_.size() - 2) {
  if (max_len > kMaxCountedLength) {
    throw Error(Errc::kInvalidInput, "enumeration supports max_len <= 21");
  }
  for (std::size_t i = 0; i < alphabet_.size(); ++i) {
    alpha_pos_[static_cast<std::size_t>(alphabet_[i])] = static_cast<int>(i);
  }
  const std::size_t n = max_len + 1;
  completions_.assign(n, std::vector<std::uint64_t>(n + 1, 0));
  completions_[0][0] = 1;
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t d = 0; d + 1 < n + 1; ++d) {
      std::uint64_t v = neutral_ * completions_[r - 1][d];
      v += completions_[r - 1][d + 1];
      if (d > 0) v += completions_[r - 1][d - 1];
      completions_[r][d] = v;
    }
  }
  seek(start.length, start.index);
}

std::uint64_t ProgramEnumerator::completions(std::size_t remaining,
                                             std::size_t depth) const {
  if (remaining >= completions_.size() || depth > remaining) return 0;
  return completions_[remaining][depth];
}

std::vector<Op> ProgramEnumerator::unrank(std::size_t length,
                                          std::uint64_t index) const {
  std::vector<Op> ops;
  ops.reserve(length);
  std::size_t depth = 0;
  for (std::size_t pos = 0; pos < length; ++pos) {
    bool chosen = false;
    for (Op op : alphabet_) {
      int nd = static_cast<int>(depth) + depth_delta(op);
      if (nd < 0) continue;
      std::uint64_t c = completions(length - pos - 1, static_cast<std::size_t>(nd));
      if (index < c) {
        ops.push_back(op);
        depth = static_cast<std::size_t>(nd);
        chosen = true;
        break;
      }
      index -= c;
    }
    if (!chosen) throw Error(Errc::kInvalidInput, "rank out of range");
  }
  return ops;
}

std::uint64_t ProgramEnumerator::rank(std::span<const Op> ops) const {
  std::uint64_t index = 0;
  std::size_t depth = 0;
  const std::size_t length = ops.size();
  for (std::size_t pos = 0; pos < length; ++pos) {
    int target = alpha_pos_[static_cast<std::size_t>(ops[pos])];
    if (target < 0) throw Error(Errc::kInvalidInput, "op outside alphabet");
    for (int i = 0; i < target; ++i) {
      int nd = static_cast<int>(depth) + depth_delta(alphabet_[i]);
      if (nd < 0) continue;
      index += completions(length - pos - 1, static_cast<std::size_t>(nd));
    }
    int nd = static_cast<int>(depth) + depth_delta(ops[pos]);
    if (nd < 0) throw Error(Errc::kInvalidInput, "ill-formed program");
    depth = static_cast<std::size_t>(nd);
  }
  if (depth != 0) throw Error(Errc::kInvalidInput, "ill-formed program");
  return index;
}

void ProgramEnumerator::seek(std::size_t length, std::uint64_t index) {
  length_ = length;
  index_ = index;
  while (length_ <= max_len_ && index_ >= completions(length_, 0)) {
    ++length_;
    index_ = 0;
  }
  done_ = length_ > max_len_;
  if (!done_) current_ = unrank(length_, index_);
}

EnumerationCursor ProgramEnumerator::cursor() const {
  return EnumerationCursor{dialect_, length_, index_};
}

bool ProgramEnumerator::next(std::vector<Op>& ops) {
  if (done_) return false;
  ops = current_;

  // Successor within the same length: bump the rightmost position that can
  // take a larger symbol and still be completed, then fill the suffix with
  // the smallest completion.
  if (index_ + 1 < completions(length_, 0)) {
    std::vector<std::size_t> depth_before(length_ + 1, 0);
    for (std::size_t i = 0; i < length_; ++i) {
      depth_before[i + 1] = static_cast<std::size_t>(
          static_cast<int>(depth_before[i]) + depth_delta(current_[i]));
    }
    for (std::size_t i = length_; i-- > 0;) {
      const std::size_t d = depth_before[i];
      int from = alpha_pos_[static_cast<std::size_t>(current_[i])] + 1;
      for (std::size_t a = static_cast<std::size_t>(from); a < alphabet_.size(); ++a) {
        int nd = static_cast<int>(d) + depth_delta(alphabet_[a]);
        if (nd < 0) continue;
        if (completions(length_ - i - 1, static_cast<std::size_t>(nd)) == 0) continue;
        current_[i] = alphabet_[a];
        std::size_t depth = static_cast<std::size_t>(nd);
        for (std::size_t j = i + 1; j < length_; ++j) {
          for (Op op : alphabet_) {
            int jd = static_cast<int>(depth) + depth_delta(op);
            if (jd < 0) continue;
            if (completions(length_ - j - 1, static_cast<std::size_t>(jd)) == 0) continue;
            current_[j] = op;
            depth = static_cast<std::size_t>(jd);
            break;
          }
        }
        ++index_;
        return true;
      }
    }
  }
  seek(length_ + 1, 0);
  return true;
}

std::optional<Program> ProgramEnumerator::next() {
  std::vector<Op> ops;
  if (!next(ops)) return std::nullopt;
  return Program::from_ops(std::move(ops), dialect_);
}

std::vector<Program> enumerate_programs(std::size_t max_len, Dialect dialect,
                                        bool input_free) {
  std::vector<Program> out;
  ProgramEnumerator e(dialect, input_free, max_len);
  while (auto p = e.next()) out.push_back(std::move(*p));
  return out;
}

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  static constexpr std::uint64_t kSmall[] = {2,  3,  5,  7,  11, 13,
                                             17, 19, 23, 29, 31, 37};
  if (n < 2) return false;
  for (std::uint64_t p : kSmall) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are sufficient for every n < 2^64.
  for (std::uint64_t a : kSmall) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

GoldbachPair goldbach_witness(std::uint64_t n) {
  if (n <= 2 || n % 2 != 0) {
    throw Error(Errc::kInvalidInput,
                "goldbach_witness needs an even integer greater than 2, got " +
                    std::to_string(n));
  }
  for (std::uint64_t p = 2; p <= n / 2; p = (p == 2 ? 3 : p + 2)) {
    if (is_prime(p) && is_prime(n - p)) return {p, n - p};
  }
  // Unreachable for every n anyone has ever checked.
  throw Error(Errc::kNotFound, "no Goldbach decomposition for " + std::to_string(n));
}

}  // namespace ulab
