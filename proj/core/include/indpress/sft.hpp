#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "indpress/errors.hpp"

namespace indpress {

// A word is a finite admissible block.  Symbols are 1-based (1..k), matching
// the serialized format; the empty vector is not a valid word.
using Word = std::vector<int>;

// One-sided subshift of finite type over the alphabet {1, ..., k}, given by a
// 0/1 transition matrix.  A point is a sequence x_1 x_2 ... with
// t[x_i][x_i+1] = 1 for all i.  Rows and columns must each contain at least
// one 1 so that every symbol actually occurs in a bi-infinite legal context.
class Sft {
 public:
  // `transitions` is row-major, size k*k, entries 0 or 1.
  Sft(std::size_t alphabet_size, std::vector<std::uint8_t> transitions);

  static Sft full_shift(std::size_t alphabet_size);

  std::size_t alphabet_size() const { return k_; }

  // Symbols are 1-based.
  bool transition(int from, int to) const {
    return transitions_[static_cast<std::size_t>(from - 1) * k_ +
                        static_cast<std::size_t>(to - 1)] != 0;
  }

  const std::vector<std::uint8_t>& transitions() const { return transitions_; }

  friend bool operator==(const Sft& a, const Sft& b) {
    return a.k_ == b.k_ && a.transitions_ == b.transitions_;
  }
  friend bool operator!=(const Sft& a, const Sft& b) { return !(a == b); }

 private:
  std::size_t k_;
  std::vector<std::uint8_t> transitions_;
};

constexpr std::uint64_t kDefaultEnumCap = 10'000'000;

bool is_admissible_word(const Sft& sft, const Word& word);

// Number of admissible words of length n, exactly (sum of the entries of the
// (n-1)-th power of the transition matrix, computed in checked uint64
// arithmetic).  Throws OverflowError if the count exceeds uint64.
std::uint64_t count_words(const Sft& sft, int n);

// All admissible words of length n in lexicographic order.  Throws
// CapExceededError (carrying the would-be count) if there are more than `cap`.
std::vector<Word> enumerate_words(const Sft& sft, int n,
                                  std::uint64_t cap = kDefaultEnumCap);

// Visitor form of enumerate_words for callers that do not want to materialize
// the list.  Words are visited in lexicographic order; the buffer passed to
// the visitor is reused between calls.
void for_each_word(const Sft& sft, int n, std::uint64_t cap,
                   const std::function<void(const Word&)>& visit);

// Every ordered symbol pair (a, b) is joined by some admissible path of
// length >= 1.
bool is_irreducible(const Sft& sft);

// Topological mixing == primitivity of the transition matrix.  Decided
// exactly by checking boolean powers up to the Wielandt bound (k-1)^2 + 1.
bool is_mixing(const Sft& sft);

// gcd of cycle lengths through any symbol; requires is_irreducible.
// 1 for mixing shifts.
int sft_period(const Sft& sft);

}  // namespace indpress
