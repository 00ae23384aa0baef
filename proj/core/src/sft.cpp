#include "indpress/sft.hpp"

#include <limits>
#include <numeric>
#include <queue>
#include <string>

namespace indpress {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_add_overflow(a, b, &r))
    throw OverflowError("word count exceeds 64-bit range");
  return r;
}

}  // namespace

Sft::Sft(std::size_t alphabet_size, std::vector<std::uint8_t> transitions)
    : k_(alphabet_size), transitions_(std::move(transitions)) {
  if (k_ == 0) throw ValidationError("alphabet must be nonempty");
  if (transitions_.size() != k_ * k_)
    throw ValidationError("transition matrix must be alphabet_size^2 entries");
  for (auto v : transitions_)
    if (v > 1) throw ValidationError("transition entries must be 0 or 1");
  for (std::size_t i = 0; i < k_; ++i) {
    bool row = false, col = false;
    for (std::size_t j = 0; j < k_; ++j) {
      row = row || transitions_[i * k_ + j];
      col = col || transitions_[j * k_ + i];
    }
    if (!row)
      throw ValidationError("transition row " + std::to_string(i + 1) +
                            " is all zero");
    if (!col)
      throw ValidationError("transition column " + std::to_string(i + 1) +
                            " is all zero");
  }
}

Sft Sft::full_shift(std::size_t alphabet_size) {
  return Sft(alphabet_size,
             std::vector<std::uint8_t>(alphabet_size * alphabet_size, 1));
}

bool is_admissible_word(const Sft& sft, const Word& word) {
  if (word.empty()) return false;
  const int k = static_cast<int>(sft.alphabet_size());
  for (int s : word)
    if (s < 1 || s > k) return false;
  for (std::size_t i = 0; i + 1 < word.size(); ++i)
    if (!sft.transition(word[i], word[i + 1])) return false;
  return true;
}

std::uint64_t count_words(const Sft& sft, int n) {
  if (n < 1) throw ValidationError("word length must be >= 1");
  const std::size_t k = sft.alphabet_size();
  // v_j = number of admissible words of current length ending in symbol j.
  std::vector<std::uint64_t> v(k, 1);
  for (int step = 1; step < n; ++step) {
    std::vector<std::uint64_t> next(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
      if (v[i] == 0) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (!sft.transitions()[i * k + j]) continue;
        next[j] = checked_add(next[j], v[i]);
      }
    }
    v = std::move(next);
  }
  std::uint64_t total = 0;
  for (auto c : v) total = checked_add(total, c);
  return total;
}

void for_each_word(const Sft& sft, int n, std::uint64_t cap,
                   const std::function<void(const Word&)>& visit) {
  if (n < 1) throw ValidationError("word length must be >= 1");
  std::uint64_t count = 0;
  try {
    count = count_words(sft, n);
  } catch (const OverflowError&) {
    throw CapExceededError("word enumeration exceeds cap",
                           std::numeric_limits<std::uint64_t>::max());
  }
  if (count > cap)
    throw CapExceededError("word enumeration of " + std::to_string(count) +
                               " words exceeds cap " + std::to_string(cap),
                           count);

  const int k = static_cast<int>(sft.alphabet_size());
  Word word;
  word.reserve(static_cast<std::size_t>(n));
  // Iterative lexicographic DFS.
  std::function<void()> descend = [&]() {
    if (static_cast<int>(word.size()) == n) {
      visit(word);
      return;
    }
    for (int s = 1; s <= k; ++s) {
      if (!word.empty() && !sft.transition(word.back(), s)) continue;
      word.push_back(s);
      descend();
      word.pop_back();
    }
  };
  descend();
}

std::vector<Word> enumerate_words(const Sft& sft, int n, std::uint64_t cap) {
  std::vector<Word> out;
  for_each_word(sft, n, cap, [&](const Word& w) { out.push_back(w); });
  return out;
}

bool is_irreducible(const Sft& sft) {
  const std::size_t k = sft.alphabet_size();
  // reach[i][j] = exists admissible path of length >= 1 from i to j.
  std::vector<std::uint8_t> reach(sft.transitions());
  for (std::size_t m = 0; m < k; ++m)
    for (std::size_t i = 0; i < k; ++i) {
      if (!reach[i * k + m]) continue;
      for (std::size_t j = 0; j < k; ++j)
        if (reach[m * k + j]) reach[i * k + j] = 1;
    }
  for (auto v : reach)
    if (!v) return false;
  return true;
}

bool is_mixing(const Sft& sft) {
  const std::size_t k = sft.alphabet_size();
  const std::size_t wielandt = (k - 1) * (k - 1) + 1;
  std::vector<std::uint8_t> power(sft.transitions());
  for (std::size_t n = 1; n <= wielandt; ++n) {
    bool all = true;
    for (auto v : power) all = all && v;
    if (all) return true;
    if (n == wielandt) break;
    std::vector<std::uint8_t> next(k * k, 0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t m = 0; m < k; ++m) {
        if (!power[i * k + m]) continue;
        for (std::size_t j = 0; j < k; ++j)
          if (sft.transitions()[m * k + j]) next[i * k + j] = 1;
      }
    power = std::move(next);
  }
  return false;
}

int sft_period(const Sft& sft) {
  if (!is_irreducible(sft))
    throw DomainError("period is defined for irreducible shifts only");
  const std::size_t k = sft.alphabet_size();
  std::vector<long long> level(k, -1);
  std::queue<std::size_t> queue;
  level[0] = 0;
  queue.push(0);
  long long g = 0;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop();
    for (std::size_t v = 0; v < k; ++v) {
      if (!sft.transitions()[u * k + v]) continue;
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        queue.push(v);
      } else {
        g = std::gcd(g, level[u] + 1 - level[v]);
      }
    }
  }
  return g == 0 ? 1 : static_cast<int>(g < 0 ? -g : g);
}

}  // namespace indpress
