#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "indpress/potential.hpp"
#include "indpress/sft.hpp"

namespace indpress {

// Tunables carried by a system file's [options] section.
struct SystemOptions {
  double tol = 1e-12;           // inner spectral tolerance
  double tol_beta = 1e-10;      // root bisection bracket width
  std::uint64_t enum_cap = kDefaultEnumCap;
  double psi_floor = 1e-9;      // strict positivity floor for psi slots
  std::optional<std::uint64_t> seed;

  friend bool operator==(const SystemOptions& a, const SystemOptions& b) {
    return a.tol == b.tol && a.tol_beta == b.tol_beta &&
           a.enum_cap == b.enum_cap && a.psi_floor == b.psi_floor &&
           a.seed == b.seed;
  }
};

// Parsed system definition: a shift, named potentials in file order, and
// options.
struct SystemFile {
  Sft sft;
  std::vector<std::pair<std::string, Potential>> potentials;
  SystemOptions options;

  const Potential* find(const std::string& name) const;

  friend bool operator==(const SystemFile& a, const SystemFile& b) {
    return a.sft == b.sft && a.potentials == b.potentials &&
           a.options == b.options;
  }
};

// Line-oriented text format:
//
//   # comment (anywhere; rest of line ignored)
//   [shift]
//   alphabet = K
//   <K rows of K space-separated 0/1 entries>
//
//   [potential NAME memory=M]
//   WORD VALUE        # one line per admissible length-M word
//
//   [options]
//   key = value       # tol, tol_beta, enum_cap, psi_floor, seed
//
// WORD is a string of digit symbols for alphabets up to 9, or dot-separated
// symbols (e.g. 10.3) for larger ones.  VALUE is a floating-point literal or
// log(X) with X a positive literal, so log-probability tables can be written
// without rounding.  Errors carry the 1-based offending line.
SystemFile parse_system(const std::string& text);

// Canonical emission: alphabet line, rows, every potential (words in
// enumeration order, values with 17 significant digits), then all options.
// parse_system(emit_system(f)) reproduces f exactly.
std::string emit_system(const SystemFile& file);

}  // namespace indpress
