#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

#include "ulab/vm.hpp"

namespace ulab {

// Assembles dialect-A fragments while tracking the head position relative
// to an origin chosen by the caller. Cell arguments are positions in that
// frame. After a data-dependent scan the caller re-declares the position
// with rebase().
class FragmentBuilder {
 public:
  std::int64_t pos() const { return pos_; }

  FragmentBuilder& go(std::int64_t cell);
  FragmentBuilder& add(int delta);
  FragmentBuilder& clear();
  FragmentBuilder& read();
  FragmentBuilder& write();

  // Destructively adds the cell at `from` into every target; `from` ends 0.
  FragmentBuilder& move_to(std::int64_t from,
                           std::initializer_list<std::int64_t> targets);
  // to += from, using tmp (must be 0); from is preserved.
  FragmentBuilder& copy(std::int64_t from, std::int64_t to, std::int64_t tmp);
  // flag := 1 if flag is 0 and src != 0 (flag unchanged otherwise); src is
  // preserved; t and u must be 0.
  FragmentBuilder& or_into(std::int64_t flag, std::int64_t src, std::int64_t t,
                           std::int64_t u);

  // Loop on `cell`; body must leave the head where it started.
  template <typename Body>
  FragmentBuilder& loop(std::int64_t cell, Body&& body) {
    go(cell);
    const std::int64_t start = pos_;
    code_ += '[';
    body(*this);
    go(start);
    code_ += ']';
    return *this;
  }

  // Appends code whose effect on the head is unknown statically.
  FragmentBuilder& raw(std::string_view code);
  // Declares the current head position in a new frame.
  FragmentBuilder& rebase(std::int64_t now_at);

  const std::string& text() const { return code_; }
  Program program() const { return Program::parse(code_, Dialect::kA); }

 private:
  std::string code_;
  std::int64_t pos_ = 0;
};

}  // namespace ulab
