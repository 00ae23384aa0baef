#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace indpress {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A constructor or operation precondition was violated (zero transition row,
// incomplete potential table, mismatched alphabets, ...).
struct ValidationError : Error {
  using Error::Error;
};

// The input is well-formed but the requested quantity is not defined for it
// (reducible shift where irreducibility is required, non-mixing shift for a
// Gibbs construction, ...).
struct DomainError : Error {
  using Error::Error;
};

// An enumeration would produce more objects than the configured cap allows.
// `would_be_count` is the size the enumeration would have reached; it is
// saturated at uint64 max when the true count itself overflows.
struct CapExceededError : Error {
  CapExceededError(const std::string& what, std::uint64_t count)
      : Error(what), would_be_count(count) {}
  std::uint64_t would_be_count;
};

// Exact integer arithmetic left the representable range.
struct OverflowError : Error {
  using Error::Error;
};

// An iterative solver failed to reach its tolerance within its budget.
struct ConvergenceError : Error {
  using Error::Error;
};

// Malformed system file.  `line` is 1-based; 0 means "no specific line".
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t line_no = 0)
      : Error(what), line(line_no) {}
  std::size_t line;
};

}  // namespace indpress
