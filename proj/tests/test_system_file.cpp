#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "indpress/errors.hpp"
#include "indpress/system_file.hpp"
#include "test_helpers.hpp"

using namespace indpress;
using namespace testutil;

namespace {

std::size_t parse_error_line(const std::string& text) {
  try {
    parse_system(text);
  } catch (const ParseError& e) {
    return e.line;
  }
  return static_cast<std::size_t>(-1);  // did not throw
}

const char* kGoldenText = R"(# golden-mean shift
[shift]
alphabet = 2
1 1
1 0

[potential zero memory=1]
1 0.0
2 0.0

[potential pair memory=2]
11 0.5
12 -0.25
21 1.0

[options]
tol = 1e-13
seed = 99
)";

}  // namespace

TEST_CASE("minimal valid file parses") {
  const SystemFile f = parse_system(
      "[shift]\nalphabet = 2\n1 1\n1 1\n[potential c memory=1]\n1 0.5\n2 "
      "0.5\n");
  CHECK(f.sft == full2());
  REQUIRE(f.potentials.size() == 1);
  CHECK(f.potentials[0].first == "c");
  CHECK(f.potentials[0].second.memory() == 1);
  CHECK(f.potentials[0].second.min_value() == 0.5);
  CHECK(f.find("c") != nullptr);
  CHECK(f.find("missing") == nullptr);
  // Defaults.
  CHECK(f.options.tol == 1e-12);
  CHECK(f.options.tol_beta == 1e-10);
  CHECK(f.options.enum_cap == kDefaultEnumCap);
  CHECK_FALSE(f.options.seed.has_value());
}

TEST_CASE("full file with comments, memory 2, and options") {
  const SystemFile f = parse_system(kGoldenText);
  CHECK(f.sft == golden_mean());
  REQUIRE(f.potentials.size() == 2);
  CHECK(f.potentials[1].first == "pair");
  CHECK(f.potentials[1].second.memory() == 2);
  const int w[] = {1, 2};
  CHECK(f.potentials[1].second.value(w) == -0.25);
  CHECK(f.options.tol == 1e-13);
  REQUIRE(f.options.seed.has_value());
  CHECK(*f.options.seed == 99);
}

TEST_CASE("log() sugar evaluates exactly") {
  const SystemFile f = parse_system(
      "[shift]\nalphabet = 2\n1 1\n1 1\n[potential p memory=1]\n1 "
      "log(0.3)\n2 log(0.7)\n");
  const int w1[] = {1};
  const int w2[] = {2};
  CHECK(f.potentials[0].second.value(w1) == std::log(0.3));
  CHECK(f.potentials[0].second.value(w2) == std::log(0.7));
}

TEST_CASE("parse errors carry the offending line") {
  // Transition row with wrong arity (line 4).
  CHECK(parse_error_line("[shift]\nalphabet = 2\n1 1\n1\n") == 4);
  // Bad transition entry.
  CHECK(parse_error_line("[shift]\nalphabet = 2\n1 1\n1 2\n") == 4);
  // Alphabet line missing.
  CHECK(parse_error_line("[shift]\n1 1\n1 1\n") == 2);
  // Alphabet not a number.
  CHECK(parse_error_line("[shift]\nalphabet = x\n") == 2);
  // Missing rows (reported at the last line seen).
  CHECK(parse_error_line("[shift]\nalphabet = 2\n1 1\n") == 3);
  // Inadmissible table word 22 on the golden-mean shift.
  CHECK(parse_error_line("[shift]\nalphabet = 2\n1 1\n1 0\n[potential p "
                         "memory=2]\n11 1\n12 1\n21 1\n22 1\n") == 9);
  // Wrong word length.
  CHECK(parse_error_line("[shift]\nalphabet = 2\n1 1\n1 1\n[potential p "
                         "memory=1]\n11 1\n") == 6);
  // Duplicate table entry.
  CHECK(parse_error_line("[shift]\nalphabet = 2\n1 1\n1 1\n[potential p "
                         "memory=1]\n1 1\n1 2\n2 3\n") == 7);
  // Incomplete table (missing word 2): reported at the header.
  CHECK(parse_error_line("[shift]\nalphabet = 2\n1 1\n1 1\n[potential p "
                         "memory=1]\n1 1\n") == 5);
  // Bad value.
  CHECK(parse_error_line("[shift]\nalphabet = 2\n1 1\n1 1\n[potential p "
                         "memory=1]\n1 abc\n2 1\n") == 6);
  // log of a non-positive number.
  CHECK(parse_error_line("[shift]\nalphabet = 2\n1 1\n1 1\n[potential p "
                         "memory=1]\n1 log(0)\n2 1\n") == 6);
  // Duplicate potential name.
  CHECK(parse_error_line("[shift]\nalphabet = 2\n1 1\n1 1\n[potential p "
                         "memory=1]\n1 1\n2 1\n[potential p memory=1]\n1 "
                         "1\n2 1\n") == 8);
  // Unknown option key.
  CHECK(parse_error_line("[shift]\nalphabet = 2\n1 1\n1 1\n[options]\nbogus "
                         "= 1\n") == 6);
  // Non-positive tolerance.
  CHECK(parse_error_line("[shift]\nalphabet = 2\n1 1\n1 1\n[options]\ntol = "
                         "0\n") == 6);
  // Duplicate option.
  CHECK(parse_error_line("[shift]\nalphabet = 2\n1 1\n1 1\n[options]\ntol = "
                         "1e-9\ntol = 1e-8\n") == 7);
  // Content before any section.
  CHECK(parse_error_line("alphabet = 2\n[shift]\nalphabet = 2\n1 1\n1 1\n") ==
        1);
  // Unknown section.
  CHECK(parse_error_line("[shift]\nalphabet = 2\n1 1\n1 1\n[junk]\n") == 5);
  // No shift section at all.
  CHECK(parse_error_line("[potential p memory=1]\n1 1\n") != 0);
  // Zero transition row is a validation failure at the shift section.
  CHECK(parse_error_line("[shift]\nalphabet = 2\n1 1\n0 0\n") != 0);
  // Memory out of range.
  CHECK(parse_error_line("[shift]\nalphabet = 2\n1 1\n1 1\n[potential p "
                         "memory=0]\n") == 5);
  // Malformed potential header.
  CHECK(parse_error_line("[shift]\nalphabet = 2\n1 1\n1 1\n[potential "
                         "p]\n1 1\n2 1\n") == 5);
}

TEST_CASE("alphabets beyond nine symbols use dotted words") {
  std::string text = "[shift]\nalphabet = 12\n";
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) text += j ? " 1" : "1";
    text += "\n";
  }
  text += "[potential p memory=1]\n";
  for (int s = 1; s <= 12; ++s)
    text += std::to_string(s) + " " + std::to_string(0.25 * s) + "\n";
  const SystemFile base = parse_system(text);
  CHECK(base.sft.alphabet_size() == 12);
  const int w10[] = {10};
  CHECK(base.potentials[0].second.value(w10) == 2.5);

  // Dotted two-symbol words round-trip through emission.
  const std::string emitted = emit_system(base);
  CHECK(parse_system(emitted) == base);
  CHECK(emitted.find("10 2.5") != std::string::npos);
}

TEST_CASE("round trip: parse, emit, parse yields identical objects") {
  std::mt19937_64 rng(271828);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);

  std::vector<std::string> texts = {kGoldenText,
                                    "[shift]\nalphabet = 2\n1 1\n1 1\n"
                                    "[potential c memory=1]\n1 0.5\n2 0.5\n"};
  // A file with awkward full-precision values.
  std::string awkward =
      "[shift]\nalphabet = 3\n1 1 1\n1 1 1\n1 1 1\n[potential r memory=2]\n";
  char buf[64];
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b) {
      std::snprintf(buf, sizeof buf, "%d%d %.17g\n", a, b, dist(rng));
      awkward += buf;
    }
  awkward +=
      "[options]\ntol = 2.5e-13\ntol_beta = 1e-9\nenum_cap = "
      "123456\npsi_floor = 1e-8\nseed = 18446744073709551615\n";
  texts.push_back(awkward);

  for (const std::string& text : texts) {
    const SystemFile once = parse_system(text);
    const std::string emitted = emit_system(once);
    const SystemFile twice = parse_system(emitted);
    CHECK(twice == once);
    CHECK(emit_system(twice) == emitted);  // emission is canonical
  }
}

TEST_CASE("options accept the full key set") {
  const SystemFile f = parse_system(
      "[shift]\nalphabet = 2\n1 1\n1 1\n[options]\ntol = 1e-11\ntol_beta = "
      "1e-9\nenum_cap = 5000\npsi_floor = 1e-6\nseed = 7\n");
  CHECK(f.options.tol == 1e-11);
  CHECK(f.options.tol_beta == 1e-9);
  CHECK(f.options.enum_cap == 5000);
  CHECK(f.options.psi_floor == 1e-6);
  CHECK(*f.options.seed == 7);
}
