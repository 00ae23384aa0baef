#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "doctest.h"
#include "indpress/errors.hpp"
#include "indpress/potential.hpp"
#include "test_helpers.hpp"

using namespace indpress;
using namespace testutil;

TEST_CASE("constant potential") {
  const Potential c = Potential::constant(golden_mean(), 2.5);
  CHECK(c.memory() == 1);
  CHECK(c.min_value() == 2.5);
  CHECK(c.max_value() == 2.5);
  const int w1[] = {1};
  const int w2[] = {2};
  CHECK(c.value(w1) == 2.5);
  CHECK(c.value(w2) == 2.5);
}

TEST_CASE("table must cover exactly the admissible words") {
  const Sft g = golden_mean();
  // Missing entry for word 21.
  CHECK_THROWS_AS(
      Potential(g, 2, {{{1, 1}, 0.0}, {{1, 2}, 0.0}}), ValidationError);
  // Entry for the inadmissible word 22.
  CHECK_THROWS_AS(
      Potential(g, 2, {{{1, 1}, 0.0}, {{1, 2}, 0.0}, {{2, 1}, 0.0},
                       {{2, 2}, 0.0}}),
      ValidationError);
  // Key of the wrong length.
  const std::map<Word, double> short_key = {{{1}, 0.0}};
  CHECK_THROWS_AS(Potential(g, 2, short_key), ValidationError);
  // Non-finite value.
  CHECK_THROWS_AS(
      Potential(g, 1, {{{1}, 0.0}, {{2}, std::nan("")}}), ValidationError);
  CHECK_NOTHROW(
      Potential(g, 2, {{{1, 1}, 0.1}, {{1, 2}, 0.2}, {{2, 1}, 0.3}}));
}

TEST_CASE("value lookup and bounds") {
  const Sft g = golden_mean();
  const Potential p(g, 2, {{{1, 1}, 0.1}, {{1, 2}, -0.2}, {{2, 1}, 0.3}});
  const int w11[] = {1, 1};
  const int w12[] = {1, 2};
  const int w21[] = {2, 1};
  CHECK(p.value(w11) == 0.1);
  CHECK(p.value(w12) == -0.2);
  CHECK(p.value(w21) == 0.3);
  CHECK(p.min_value() == -0.2);
  CHECK(p.max_value() == 0.3);
  CHECK(p.sup_norm() == 0.3);

  const int bad[] = {2, 2};
  CHECK_THROWS_AS(p.value(bad), ValidationError);
  const int short_w[] = {1};
  CHECK_THROWS_AS(p.value(short_w), ValidationError);
}

TEST_CASE("birkhoff sums slide windows left to right") {
  const Sft g = golden_mean();
  const Potential p(g, 2, {{{1, 1}, 0.1}, {{1, 2}, -0.2}, {{2, 1}, 0.3}});
  // Word 11211: windows 11, 12, 21, 11.
  const Word w = {1, 1, 2, 1, 1};
  CHECK(p.birkhoff_sum(w, 4) == doctest::Approx(0.1 - 0.2 + 0.3 + 0.1));
  CHECK(p.birkhoff_sum(w, 1) == doctest::Approx(0.1));
  CHECK_THROWS_AS(p.birkhoff_sum(w, 5), ValidationError);  // needs 6 symbols
}

TEST_CASE("birkhoff sums are additive under splitting") {
  std::mt19937_64 rng(20240817);
  for (const Sft& sft : {golden_mean(), full3()}) {
    for (int memory : {1, 2, 3}) {
      const Potential p = random_potential(sft, memory, rng);
      const std::vector<Word> words = enumerate_words(sft, 9 + memory - 1);
      for (std::size_t wi = 0; wi < words.size(); wi += 7) {
        const Word& w = words[wi];
        for (int n1 : {1, 4, 6}) {
          const int n2 = 9 - n1;
          const Word tail(w.begin() + n1, w.end());
          const double whole = p.birkhoff_sum(w, 9);
          const double split = p.birkhoff_sum(w, n1) + p.birkhoff_sum(tail, n2);
          CHECK(whole == doctest::Approx(split).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("linear combinations agree pointwise") {
  std::mt19937_64 rng(7);
  const Sft g = golden_mean();
  const Potential p = random_potential(g, 1, rng);
  const Potential q = random_potential(g, 3, rng);
  const Potential combo = Potential::linear_combination(2.0, p, -0.5, q);
  CHECK(combo.memory() == 3);
  for (const Word& w : enumerate_words(g, 3)) {
    const double expect = 2.0 * p.value({w.data(), 1}) -
                          0.5 * q.value({w.data(), w.size()});
    CHECK(combo.value({w.data(), w.size()}) ==
          doctest::Approx(expect).epsilon(1e-14));
  }
  // Mismatched shifts are rejected.
  const Potential other = Potential::constant(full2(), 1.0);
  CHECK_THROWS_AS(Potential::linear_combination(1.0, p, 1.0, other),
                  ValidationError);
}

TEST_CASE("equality treats the inadmissible-window sentinels as equal") {
  const Sft g = golden_mean();
  const Potential a(g, 2, {{{1, 1}, 0.1}, {{1, 2}, -0.2}, {{2, 1}, 0.3}});
  const Potential b(g, 2, {{{1, 1}, 0.1}, {{1, 2}, -0.2}, {{2, 1}, 0.3}});
  const Potential c(g, 2, {{{1, 1}, 0.1}, {{1, 2}, -0.2}, {{2, 1}, 0.4}});
  CHECK(a == b);
  CHECK(a != c);
  CHECK(a != Potential::constant(g, 0.1));
}

TEST_CASE("recoding to memory 2: golden-mean shift with a memory-3 "
          "potential") {
  const Sft g = golden_mean();
  std::mt19937_64 rng(99);
  const Potential p = random_potential(g, 3, rng);
  const RecodedSystem rec = recode_to_memory2(g, {p});

  CHECK(rec.changed);
  // New symbols are the admissible 2-blocks 11, 12, 21.
  REQUIRE(rec.sft.alphabet_size() == 3);
  const std::vector<Word> expect_blocks = {{1, 1}, {1, 2}, {2, 1}};
  CHECK(rec.symbol_words == expect_blocks);
  // Allowed block transitions: 11->11, 11->12, 12->21, 21->11, 21->12.
  const std::vector<std::uint8_t> expect_t = {1, 1, 0, 0, 0, 1, 1, 1, 0};
  CHECK(rec.sft.transitions() == expect_t);
  REQUIRE(rec.potentials.size() == 1);
  CHECK(rec.potentials[0].memory() == 2);

  // Word counts: length-n recoded words <-> length-(n+1) original words.
  for (int n = 1; n <= 10; ++n)
    CHECK(count_words(rec.sft, n) == count_words(g, n + 1));
}

TEST_CASE("recoding preserves birkhoff sums exactly") {
  std::mt19937_64 rng(123);
  for (const Sft& sft : {golden_mean(), full2()}) {
    const Potential p = random_potential(sft, 3, rng);
    const Potential q = random_potential(sft, 1, rng);
    const RecodedSystem rec = recode_to_memory2(sft, {p, q});
    REQUIRE(rec.potentials.size() == 2);

    const int n = 6;
    const int block = static_cast<int>(rec.symbol_words[0].size());
    for (const Word& w : enumerate_words(rec.sft, n + 1)) {
      // Spell out the original word: first block, then last symbols.
      Word original = rec.symbol_words[w[0] - 1];
      for (std::size_t i = 1; i < w.size(); ++i)
        original.push_back(rec.symbol_words[w[i] - 1].back());
      CHECK(static_cast<int>(original.size()) == n + 1 + block - 1);
      CHECK(is_admissible_word(sft, original));

      for (std::size_t pi = 0; pi < 2; ++pi) {
        const Potential& orig = pi == 0 ? p : q;
        const double a = orig.birkhoff_sum(original, n);
        const double b = rec.potentials[pi].birkhoff_sum(w, n);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("recoding is the identity when memory is already <= 2") {
  const Sft g = golden_mean();
  const Potential p(g, 2, {{{1, 1}, 0.5}, {{1, 2}, -0.25}, {{2, 1}, 1.0}});
  const Potential q = Potential::constant(g, 1.0);
  const RecodedSystem rec = recode_to_memory2(g, {p, q});
  CHECK_FALSE(rec.changed);
  CHECK(rec.sft == g);
  CHECK(rec.potentials[0] == p);
  CHECK(rec.potentials[1] == q);
}
