#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ulab {

enum class Errc {
  kUnbalancedBracket,
  kUnknownSymbol,
  kInvalidInput,
  kIncompatibleTables,
  kNoWitness,
  kNotFound,
  kConstructionTooLarge,
  kMalformedPhenome,
  kNoiseExhausted,
  kFormat,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Raised by the program parser; position is the index of the first
// offending character.
class ParseError : public Error {
 public:
  ParseError(Errc code, std::size_t position);

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace ulab
