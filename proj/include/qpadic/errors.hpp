#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qpadic {

// Failure categories. Callers that need to distinguish cases (e.g. a missing
// residue root from a non-simple one) switch on the code.
enum class errc {
  division_by_zero,
  context_mismatch,
  precision_exhausted,
  not_prime,
  bad_argument,
  no_residue_root,
  non_simple_root,
  negative_valuation,
  wrong_tower,
  zero_class,
  overflow,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw Error(code, what); }

// Parse failures carry the byte offset of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace qpadic
