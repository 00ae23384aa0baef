#pragma once

#include <map>
#include <span>
#include <vector>

#include "indpress/sft.hpp"

namespace indpress {

// Locally constant potential of finite memory m over an Sft: the value at a
// point x depends only on the first m symbols, so the potential is a finite
// table over admissible m-words.  The table must cover every admissible
// m-word and nothing else.
class Potential {
 public:
  Potential(Sft sft, int memory, const std::map<Word, double>& table,
            std::uint64_t enum_cap = kDefaultEnumCap);

  static Potential constant(const Sft& sft, double value);

  const Sft& sft() const { return sft_; }
  int memory() const { return memory_; }

  double min_value() const { return min_value_; }
  double max_value() const { return max_value_; }
  double sup_norm() const { return sup_norm_; }

  // Value of the table at an admissible window of exactly `memory` symbols.
  double value(std::span<const int> window) const;

  // Birkhoff sum S_n = sum_{i=0}^{n-1} value(word[i..i+m-1]) over the sliding
  // windows of the word, evaluated left to right.  The word must have at
  // least n + memory - 1 symbols.
  double birkhoff_sum(const Word& word, int n) const;

  // a*p + b*q as a single potential of memory max(p.memory, q.memory); both
  // inputs must live over the same Sft.  Each combined table entry is
  // a*p(prefix) + b*q(prefix) on the admissible max-memory words.
  static Potential linear_combination(double a, const Potential& p, double b,
                                      const Potential& q);

  // Equality of the defining data; the NaN slots marking inadmissible
  // windows compare equal to each other.
  friend bool operator==(const Potential& x, const Potential& y);
  friend bool operator!=(const Potential& x, const Potential& y) {
    return !(x == y);
  }

 private:
  Potential(Sft sft, int memory, std::vector<double> table);

  std::size_t index_of(std::span<const int> window) const;

  Sft sft_;
  int memory_;
  // Dense table indexed by the base-k digits of the window; entries for
  // inadmissible windows are NaN and never read through the public surface.
  std::vector<double> table_;
  double min_value_, max_value_, sup_norm_;
};

// Result of re-expressing a system over the alphabet of admissible
// (M-1)-blocks so that every potential has memory <= 2.  `symbol_words[i]`
// is the original block spelled by new symbol i+1.  When nothing needed
// recoding, `changed` is false and the inputs are returned as-is.
struct RecodedSystem {
  Sft sft;
  std::vector<Potential> potentials;
  std::vector<Word> symbol_words;
  bool changed = false;
};

// Higher-block recoding.  Words of length n in the recoded shift correspond
// bijectively to words of length n + M - 2 in the original (M = max memory),
// and Birkhoff sums agree exactly under that bijection.
RecodedSystem recode_to_memory2(const Sft& sft,
                                const std::vector<Potential>& potentials,
                                std::uint64_t enum_cap = kDefaultEnumCap);

}  // namespace indpress
