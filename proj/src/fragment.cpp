#include "ulab/fragment.hpp"

namespace ulab {

FragmentBuilder& FragmentBuilder::go(std::int64_t cell) {
  while (pos_ < cell) {
    code_ += '>';
    ++pos_;
  }
  while (pos_ > cell) {
    code_ += '<';
    --pos_;
  }
  return *this;
}

FragmentBuilder& FragmentBuilder::add(int delta) {
  code_.append(static_cast<std::size_t>(delta < 0 ? -delta : delta),
               delta < 0 ? '-' : '+');
  return *this;
}

FragmentBuilder& FragmentBuilder::clear() {
  code_ += "[-]";
  return *this;
}

FragmentBuilder& FragmentBuilder::read() {
  code_ += ',';
  return *this;
}

FragmentBuilder& FragmentBuilder::write() {
  code_ += '.';
  return *this;
}

FragmentBuilder& FragmentBuilder::move_to(
    std::int64_t from, std::initializer_list<std::int64_t> targets) {
  return loop(from, [&](FragmentBuilder& b) {
    b.add(-1);
    for (std::int64_t t : targets) b.go(t).add(1);
  });
}

FragmentBuilder& FragmentBuilder::copy(std::int64_t from, std::int64_t to,
                                       std::int64_t tmp) {
  move_to(from, {to, tmp});
  return move_to(tmp, {from});
}

FragmentBuilder& FragmentBuilder::or_into(std::int64_t flag, std::int64_t src,
                                          std::int64_t t, std::int64_t u) {
  copy(src, t, u);
  return loop(t, [&](FragmentBuilder& b) {
    b.clear();
    b.go(flag).clear().add(1);
  });
}

FragmentBuilder& FragmentBuilder::raw(std::string_view code) {
  code_ += code;
  return *this;
}

FragmentBuilder& FragmentBuilder::rebase(std::int64_t now_at) {
  pos_ = now_at;
  return *this;
}

}  // namespace ulab
