#include "indpress/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace indpress {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string word_text(const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(w[i]);
  }
  return s;
}

std::size_t dense_table_size(std::size_t k, int memory) {
  constexpr std::size_t kMaxEntries = std::size_t{1} << 24;
  std::size_t size = 1;
  for (int i = 0; i < memory; ++i) {
    if (size > kMaxEntries / k)
      throw ValidationError("potential table too large: alphabet " +
                            std::to_string(k) + ", memory " +
                            std::to_string(memory));
    size *= k;
  }
  return size;
}

}  // namespace

Potential::Potential(Sft sft, int memory, std::vector<double> table)
    : sft_(std::move(sft)), memory_(memory), table_(std::move(table)) {
  min_value_ = std::numeric_limits<double>::infinity();
  max_value_ = -std::numeric_limits<double>::infinity();
  for (double v : table_) {
    if (std::isnan(v)) continue;
    min_value_ = std::min(min_value_, v);
    max_value_ = std::max(max_value_, v);
  }
  sup_norm_ = std::max(std::abs(min_value_), std::abs(max_value_));
}

Potential::Potential(Sft sft_in, int memory, const std::map<Word, double>& table,
                     std::uint64_t enum_cap)
    : sft_(std::move(sft_in)), memory_(memory) {
  if (memory_ < 1) throw ValidationError("potential memory must be >= 1");
  table_.assign(dense_table_size(sft_.alphabet_size(), memory_), kNaN);

  for (const auto& [word, value] : table) {
    if (static_cast<int>(word.size()) != memory_)
      throw ValidationError("table key " + word_text(word) +
                            " does not have length " + std::to_string(memory_));
    if (!is_admissible_word(sft_, word))
      throw ValidationError("inadmissible table key " + word_text(word));
    if (!std::isfinite(value))
      throw ValidationError("non-finite value for table key " +
                            word_text(word));
    table_[index_of(word)] = value;
  }

  std::uint64_t admissible = 0;
  for_each_word(sft_, memory_, enum_cap, [&](const Word& w) {
    ++admissible;
    if (std::isnan(table_[index_of(w)]))
      throw ValidationError("table is missing admissible word " +
                            word_text(w));
  });
  if (admissible != table.size())
    throw ValidationError("table has entries for inadmissible words");

  min_value_ = std::numeric_limits<double>::infinity();
  max_value_ = -std::numeric_limits<double>::infinity();
  for (double v : table_) {
    if (std::isnan(v)) continue;
    min_value_ = std::min(min_value_, v);
    max_value_ = std::max(max_value_, v);
  }
  sup_norm_ = std::max(std::abs(min_value_), std::abs(max_value_));
}

Potential Potential::constant(const Sft& sft, double value) {
  std::map<Word, double> table;
  for (int s = 1; s <= static_cast<int>(sft.alphabet_size()); ++s)
    table[{s}] = value;
  return Potential(sft, 1, table);
}

std::size_t Potential::index_of(std::span<const int> window) const {
  std::size_t index = 0;
  for (int s : window)
    index = index * sft_.alphabet_size() + static_cast<std::size_t>(s - 1);
  return index;
}

double Potential::value(std::span<const int> window) const {
  if (static_cast<int>(window.size()) != memory_)
    throw ValidationError("window length does not match potential memory");
  for (int s : window)
    if (s < 1 || s > static_cast<int>(sft_.alphabet_size()))
      throw ValidationError("window symbol out of range");
  const double v = table_[index_of(window)];
  if (std::isnan(v)) throw ValidationError("window is not admissible");
  return v;
}

double Potential::birkhoff_sum(const Word& word, int n) const {
  if (n < 0) throw ValidationError("birkhoff_sum needs n >= 0");
  if (static_cast<int>(word.size()) < n + memory_ - 1)
    throw ValidationError(
        "word too short for birkhoff_sum: need " +
        std::to_string(n + memory_ - 1) + " symbols, have " +
        std::to_string(word.size()));
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    sum += value(std::span<const int>(word.data() + i,
                                      static_cast<std::size_t>(memory_)));
  return sum;
}

Potential Potential::linear_combination(double a, const Potential& p, double b,
                                        const Potential& q) {
  if (p.sft_ != q.sft_)
    throw ValidationError("potentials live over different shifts");
  const int m = std::max(p.memory_, q.memory_);
  const std::size_t k = p.sft_.alphabet_size();
  std::vector<double> table(dense_table_size(k, m), kNaN);
  for_each_word(p.sft_, m, std::numeric_limits<std::uint64_t>::max(),
                [&](const Word& w) {
                  std::size_t index = 0;
                  for (int s : w)
                    index = index * k + static_cast<std::size_t>(s - 1);
                  const std::span<const int> wp(
                      w.data(), static_cast<std::size_t>(p.memory_));
                  const std::span<const int> wq(
                      w.data(), static_cast<std::size_t>(q.memory_));
                  table[index] = a * p.value(wp) + b * q.value(wq);
                });
  return Potential(p.sft_, m, std::move(table));
}

RecodedSystem recode_to_memory2(const Sft& sft,
                                const std::vector<Potential>& potentials,
                                std::uint64_t enum_cap) {
  int max_memory = 1;
  for (const auto& p : potentials) {
    if (p.sft() != sft)
      throw ValidationError("potential does not live over the given shift");
    max_memory = std::max(max_memory, p.memory());
  }

  RecodedSystem out{sft, potentials, {}, false};
  if (max_memory <= 2) {
    for (int s = 1; s <= static_cast<int>(sft.alphabet_size()); ++s)
      out.symbol_words.push_back({s});
    return out;
  }

  const int block = max_memory - 1;
  const std::vector<Word> blocks = enumerate_words(sft, block, enum_cap);
  const std::size_t big_k = blocks.size();

  std::vector<std::uint8_t> transitions(big_k * big_k, 0);
  for (std::size_t u = 0; u < big_k; ++u)
    for (std::size_t v = 0; v < big_k; ++v) {
      bool overlap = true;
      for (int i = 0; i + 1 < block; ++i)
        overlap = overlap && blocks[u][static_cast<std::size_t>(i) + 1] ==
                                 blocks[v][static_cast<std::size_t>(i)];
      if (!overlap) continue;
      Word joined = blocks[u];
      joined.push_back(blocks[v].back());
      if (is_admissible_word(sft, joined)) transitions[u * big_k + v] = 1;
    }
  Sft recoded(big_k, std::move(transitions));

  std::vector<Potential> recoded_potentials;
  recoded_potentials.reserve(potentials.size());
  for (const auto& p : potentials) {
    if (p.memory() <= block) {
      // The first new symbol already spells the whole window.
      std::map<Word, double> table;
      for (std::size_t u = 0; u < big_k; ++u) {
        const std::span<const int> window(blocks[u].data(),
                                          static_cast<std::size_t>(p.memory()));
        table[{static_cast<int>(u) + 1}] = p.value(window);
      }
      recoded_potentials.emplace_back(recoded, 1, table, enum_cap);
    } else {
      // memory == max_memory: a transition (u, v) spells a full window.
      std::map<Word, double> table;
      for (std::size_t u = 0; u < big_k; ++u)
        for (std::size_t v = 0; v < big_k; ++v) {
          if (!recoded.transition(static_cast<int>(u) + 1,
                                  static_cast<int>(v) + 1))
            continue;
          Word window = blocks[u];
          window.push_back(blocks[v].back());
          table[{static_cast<int>(u) + 1, static_cast<int>(v) + 1}] =
              p.value(window);
        }
      recoded_potentials.emplace_back(recoded, 2, table, enum_cap);
    }
  }

  return RecodedSystem{std::move(recoded), std::move(recoded_potentials),
                       blocks, true};
}

bool operator==(const Potential& x, const Potential& y) {
  if (x.sft_ != y.sft_ || x.memory_ != y.memory_) return false;
  if (x.table_.size() != y.table_.size()) return false;
  for (std::size_t i = 0; i < x.table_.size(); ++i) {
    const double a = x.table_[i];
    const double b = y.table_[i];
    if (std::isnan(a) != std::isnan(b)) return false;
    if (!std::isnan(a) && a != b) return false;
  }
  return true;
}

}  // namespace indpress
