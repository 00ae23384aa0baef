// Acceptance gate: every release-blocking check, one per criterion, each
// printing a single [PASS]/[FAIL] line (plus indented detail on failure).
//
// Usage: acceptance [N]   -- run criterion N only (1..10), or all when absent.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "indpress/commands.hpp"
#include "indpress/induced.hpp"
#include "indpress/measures.hpp"
#include "indpress/pressure.hpp"
#include "indpress/system_file.hpp"
#include "../test_helpers.hpp"

using namespace indpress;
using namespace testutil;

namespace {

const double kGoldenRatio = (1.0 + std::sqrt(5.0)) / 2.0;

struct SuiteProblem {
  std::string name;
  InducedProblem prob;
};

// The cross-command regression suite: small systems whose roots exercise
// every memory/alphabet combination the library supports.
std::vector<SuiteProblem> make_suite() {
  std::vector<SuiteProblem> suite;
  const Sft g = golden_mean();
  const Sft f2 = full2();
  const Sft f3 = full3();

  suite.push_back({"P1 golden, phi=0, psi=1",
                   InducedProblem(g, Potential::constant(g, 0.0),
                                  Potential::constant(g, 1.0))});
  suite.push_back({"P2 golden, weighted gauge",
                   InducedProblem(g, memory1(g, {0.2, -0.3}),
                                  memory1(g, {1.0, 2.0}))});
  suite.push_back({"P3 full-2 Bernoulli(0.3, 0.7)",
                   InducedProblem(f2,
                                  memory1(f2, {std::log(0.3), std::log(0.7)}),
                                  Potential::constant(f2, 1.0))});
  suite.push_back({"P4 full-2 Moran gauge",
                   InducedProblem(f2, Potential::constant(f2, 0.0),
                                  memory1(f2, {std::log(2.0), std::log(4.0)}))});
  suite.push_back(
      {"P5 golden, memory-2 phi",
       InducedProblem(golden_mean(),
                      Potential(g, 2, {{{1, 1}, 0.5},
                                       {{1, 2}, -0.25},
                                       {{2, 1}, 1.0}}),
                      Potential::constant(g, 1.0))});
  suite.push_back({"P6 full-3 graded",
                   InducedProblem(f3, memory1(f3, {-0.1, 0.0, 0.1}),
                                  memory1(f3, {0.5, 1.0, 1.5}))});
  return suite;
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& line) {
    pass = false;
    detail << "    " << line << "\n";
  }
  void note(const std::string& line) { detail << "    " << line << "\n"; }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// --- criterion 1: constant unit gauge reduces to ordinary pressure --------

void criterion1(Outcome& out) {
  std::mt19937_64 rng(101);
  for (const Sft& sft : {full2(), golden_mean()}) {
    const Potential one = Potential::constant(sft, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
      const Potential phi = random_potential(sft, 1, rng, -2.0, 2.0);
      const double root =
          induced_pressure_root(InducedProblem(sft, phi, one)).beta;
      const double spectral = pressure_spectral(sft, phi);
      if (std::abs(root - spectral) > 1e-8)
        out.fail("alphabet " + std::to_string(sft.alphabet_size()) +
                 ", draw " + std::to_string(rep) + ": |root - pressure| = " +
                 fmt(std::abs(root - spectral)));
    }
  }
}

// --- criterion 2: the root zeroes the inner pressure ----------------------

void criterion2(Outcome& out) {
  for (const SuiteProblem& s : make_suite()) {
    const RootResult r = induced_pressure_root(s.prob);
    if (std::abs(r.inner_pressure) > 1e-8)
      out.fail(s.name + ": |P(phi - beta* psi)| = " +
               fmt(std::abs(r.inner_pressure)));
  }
}

// --- criterion 3: closed-form oracles -------------------------------------

void criterion3(Outcome& out) {
  const Sft g = golden_mean();
  const double p0 = pressure_spectral(g, Potential::constant(g, 0.0));
  if (std::abs(p0 - std::log(kGoldenRatio)) > 1e-9)
    out.fail("golden-mean P(0): error " +
             fmt(std::abs(p0 - std::log(kGoldenRatio))));

  const Sft f2 = full2();
  const double dim =
      bs_dimension(f2, memory1(f2, {std::log(2.0), std::log(4.0)})).beta;
  const double moran = std::log(kGoldenRatio) / std::log(2.0);
  if (std::abs(dim - moran) > 1e-8)
    out.fail("Moran dimension: error " + fmt(std::abs(dim - moran)));

  const double bern = pressure_spectral(
      f2, memory1(f2, {std::log(0.3), std::log(0.7)}));
  if (std::abs(bern) > 1e-10)
    out.fail("Bernoulli zero pressure: |P| = " + fmt(std::abs(bern)));
}

// --- criterion 4: randomized variational search stays below the root ------

void criterion4(Outcome& out) {
  const std::vector<SuiteProblem> suite = make_suite();
  for (std::size_t i = 0; i < 5; ++i) {
    const SuiteProblem& s = suite[i];
    const VariationalResult r =
        variational_search(s.prob, 2000, 500, 1000 + i, true);
    for (double q : r.sample_quotients)
      if (q > r.beta_star + 1e-8) {
        out.fail(s.name + ": candidate quotient exceeds the root by " +
                 fmt(q - r.beta_star));
        break;
      }
    if (r.best_quotient > r.beta_star + 1e-8)
      out.fail(s.name + ": best quotient exceeds the root by " +
               fmt(r.best_quotient - r.beta_star));
    if (!r.injected) {
      out.fail(s.name + ": Gibbs candidate was not injected");
    } else if (r.injected_quotient < r.beta_star - 1e-6) {
      out.fail(s.name + ": injected quotient falls short by " +
               fmt(r.beta_star - r.injected_quotient));
    }
  }
}

// --- criterion 5: the Gibbs measure passes the equilibrium check ----------

void criterion5(Outcome& out) {
  for (const SuiteProblem& s : make_suite()) {
    if (!is_mixing(s.prob.sft)) continue;
    const GibbsResult g = gibbs_measure(s.prob);
    const EquilibriumReport eq = equilibrium_check(g.measure, s.prob, 1e-6);
    if (!eq.pass)
      out.fail(s.name + ": quotient " + fmt(eq.quotient) + " vs root " +
               fmt(eq.root) + " (gap " + fmt(eq.gap) + ")");
  }
}

// --- criterion 6: cylinder-ratio bands against the depth-2 band -----------

void criterion6(Outcome& out) {
  for (const SuiteProblem& s : make_suite()) {
    const GibbsResult g = gibbs_measure(s.prob);
    const std::vector<GibbsBand> bands =
        gibbs_constant_estimate(g.measure, s.prob, g.beta_star, 12);
    double spread2 = 0.0;
    for (const GibbsBand& b : bands)
      if (b.depth == 2) spread2 = b.ratio_max / b.ratio_min;
    bool ok = true;
    for (const GibbsBand& b : bands) {
      const double spread = b.ratio_max / b.ratio_min;
      if (spread > spread2 * 1.000001) {
        out.fail(s.name + ": depth " + std::to_string(b.depth) +
                 " spread " + fmt(spread) + " > depth-2 spread " +
                 fmt(spread2) + " * 1.000001");
        ok = false;
      }
    }
    if (!ok) {
      double spread3 = 0.0;
      bool stable = true;
      for (const GibbsBand& b : bands) {
        if (b.depth < 3) continue;
        const double spread = b.ratio_max / b.ratio_min;
        if (spread3 == 0.0) spread3 = spread;
        stable = stable && std::abs(spread - spread3) <= 1e-9 * spread3;
      }
      out.note("reference: depths 3..12 share the constant spread " +
               fmt(spread3) + (stable ? "" : " (not constant!)") +
               "; the depth-2 band is narrower than the stabilized value"
               " because no admissible depth-2 word both starts and ends"
               " with the rare symbol, so depth 2 understates the uniform"
               " bound that depths >= 3 settle on.");
    }
  }

  // Bernoulli measures satisfy the defining estimate with constant 1.
  const Sft f2 = full2();
  const std::vector<std::pair<std::string, Potential>> bernoullis = {
      {"Bernoulli(0.3, 0.7)", memory1(f2, {std::log(0.3), std::log(0.7)})},
      {"Bernoulli(0.5, 0.5)", memory1(f2, {std::log(0.5), std::log(0.5)})}};
  for (const auto& [name, phi] : bernoullis) {
    const InducedProblem prob(f2, phi, Potential::constant(f2, 1.0));
    // The ratio exponent carries beta* times the gauge sum, so the root must
    // be solved well past the 1e-10 ratio target.
    const GibbsResult g = gibbs_measure(prob, 1e-13, 1e-14);
    for (const GibbsBand& b :
         gibbs_constant_estimate(g.measure, prob, g.beta_star, 12)) {
      if (std::abs(b.ratio_min - 1.0) > 1e-10 ||
          std::abs(b.ratio_max - 1.0) > 1e-10)
        out.fail(name + ": depth " + std::to_string(b.depth) +
                 " ratios [" + fmt(b.ratio_min) + ", " + fmt(b.ratio_max) +
                 "] leave 1 +- 1e-10");
    }
  }
}

// --- criterion 7: finite-threshold partition sums approach the root -------

void criterion7(Outcome& out) {
  for (const SuiteProblem& s : make_suite()) {
    const double beta = induced_pressure_root(s.prob).beta;
    const double t_max = 30.0 / s.prob.psi.min_value();
    const int max_mem = std::max(s.prob.phi.memory(), s.prob.psi.memory());
    const double log_k =
        std::log(static_cast<double>(s.prob.sft.alphabet_size()));

    const PartitionSumReport q_full = spanning_partition_sum(s.prob, t_max);
    const PartitionSumReport q_half =
        spanning_partition_sum(s.prob, t_max / 2.0);
    const double err_full = std::abs(q_full.log_rate - beta);
    const double err_half = std::abs(q_half.log_rate - beta);
    if (err_full > 0.05)
      out.fail(s.name + ": |rate(T_max) - beta*| = " + fmt(err_full));
    if (err_full > err_half + 1e-12)
      out.fail(s.name + ": error grew from " + fmt(err_half) +
               " at T_max/2 to " + fmt(err_full) + " at T_max");

    for (const PartitionSumReport* q : {&q_full, &q_half}) {
      const PartitionSumReport p =
          separated_partition_sum(s.prob, q->T);
      const double gap = std::abs(q->log_rate - p.log_rate);
      const double bound = max_mem * log_k / q->T;
      if (gap > bound + 1e-12)
        out.fail(s.name + ": spanning/separated rate gap " + fmt(gap) +
                 " exceeds bound " + fmt(bound) + " at T = " + fmt(q->T));
    }
  }
}

// --- criterion 8: tail-series dichotomy around the root -------------------

void criterion8(Outcome& out) {
  for (const SuiteProblem& s : make_suite()) {
    const double beta = induced_pressure_root(s.prob).beta;
    const double t_max = 12.0 * s.prob.psi.max_value();
    std::vector<double> grid;
    for (int i = 1; i <= 6; ++i) grid.push_back(t_max * i / 6.0);

    const TailDiagnosticReport above = r_diagnostic(s.prob, beta + 0.2, grid);
    if (above.verdict != TailVerdict::bounded)
      out.fail(s.name + ": verdict at beta* + 0.2 is " +
               std::string(to_string(above.verdict)));
    const TailDiagnosticReport below = r_diagnostic(s.prob, beta - 0.2, grid);
    if (below.verdict != TailVerdict::growing)
      out.fail(s.name + ": verdict at beta* - 0.2 is " +
               std::string(to_string(below.verdict)));
  }
}

// --- criterion 9: gauge scaling and affine shifts of the root -------------

void criterion9(Outcome& out) {
  for (const SuiteProblem& s : make_suite()) {
    const double beta = induced_pressure_root(s.prob).beta;
    for (double c : {0.5, 2.0, 3.0}) {
      const Potential scaled =
          Potential::linear_combination(c, s.prob.psi, 0.0, s.prob.psi);
      const double beta_scaled =
          induced_pressure_root(InducedProblem(s.prob.sft, s.prob.phi, scaled))
              .beta;
      if (std::abs(beta_scaled - beta / c) > 2e-8)
        out.fail(s.name + ", c = " + fmt(c) + ": scaled-gauge root off by " +
                 fmt(std::abs(beta_scaled - beta / c)));

      const Potential shifted =
          Potential::linear_combination(1.0, s.prob.phi, c, s.prob.psi);
      const double beta_shifted =
          induced_pressure_root(
              InducedProblem(s.prob.sft, shifted, s.prob.psi))
              .beta;
      if (std::abs(beta_shifted - (beta + c)) > 2e-8)
        out.fail(s.name + ", c = " + fmt(c) + ": shifted root off by " +
                 fmt(std::abs(beta_shifted - (beta + c))));
    }
  }
}

// --- criterion 10: seeded CSV output is byte-identical --------------------

void criterion10(Outcome& out) {
  const SystemFile sys = parse_system(R"([shift]
alphabet = 2
1 1
1 0

[potential wt memory=1]
1 0.2
2 -0.3

[potential ht memory=1]
1 1.0
2 2.0
)");
  const std::vector<std::string> args = {"--phi", "wt",   "--psi",
                                         "ht",    "--samples", "200",
                                         "--seed", "90210", "--csv"};
  std::string first;
  for (int run = 0; run < 2; ++run) {
    std::ostringstream cout_s, cerr_s;
    const int code =
        run_command("variational-check", args, sys, cout_s, cerr_s);
    if (code != 0) {
      out.fail("variational-check exited with " + std::to_string(code) +
               ": " + cerr_s.str());
      return;
    }
    if (run == 0) {
      first = cout_s.str();
      if (first.empty()) out.fail("first run produced no output");
    } else if (cout_s.str() != first) {
      out.fail("two runs with seed 90210 differ");
    }
  }

  std::ostringstream other_out, other_err;
  std::vector<std::string> other = args;
  other[7] = "90211";
  run_command("variational-check", other, sys, other_out, other_err);
  if (other_out.str() == first)
    out.fail("different seeds unexpectedly produced identical output");
}

struct Criterion {
  int id;
  const char* title;
  void (*run)(Outcome&);
  double budget_seconds;  // 0 = no budget
};

const Criterion kCriteria[] = {
    {1, "unit gauge reduces the root to ordinary pressure (40 random "
        "potentials, tol 1e-8)", criterion1, 5.0},
    {2, "root zeroes the inner pressure on the suite (tol 1e-8)", criterion2,
     5.0},
    {3, "closed-form oracles: golden-mean entropy, Moran dimension, "
        "Bernoulli zero pressure", criterion3, 0.0},
    {4, "variational search: 2000 samples + refinement stay below the root; "
        "injected Gibbs attains it", criterion4, 60.0},
    {5, "Gibbs measure passes the equilibrium check (tol 1e-6)", criterion5,
     0.0},
    {6, "cylinder-ratio bands up to depth 12 within the depth-2 band; "
        "Bernoulli ratios are 1", criterion6, 0.0},
    {7, "partition-sum rates: within 0.05 at T_max = 30/min psi, improving "
        "from T_max/2, variants within the log-alphabet bound", criterion7,
     120.0},
    {8, "tail series bounded above the root, growing below it", criterion8,
     0.0},
    {9, "gauge scaling and affine shift laws (tol 2e-8)", criterion9, 0.0},
    {10, "variational-check CSV is byte-identical for identical seeds",
     criterion10, 0.0},
};

bool run_criterion(const Criterion& c) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    c.run(out);
  } catch (const std::exception& e) {
    out.fail(std::string("unexpected exception: ") + e.what());
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (c.budget_seconds > 0.0 && seconds > c.budget_seconds)
    out.fail("runtime " + fmt(seconds) + " s exceeds the budget of " +
             fmt(c.budget_seconds) + " s");

  std::printf("[%s] criterion %d: %s (%.2fs)\n", out.pass ? "PASS" : "FAIL",
              c.id, c.title, seconds);
  const std::string detail = out.detail.str();
  if (!detail.empty()) std::fputs(detail.c_str(), stdout);
  return out.pass;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > 10) {
      std::fprintf(stderr, "usage: acceptance [1..10]\n");
      return 2;
    }
  }

  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    if (!run_criterion(c)) ++failures;
  }
  if (only == 0)
    std::printf("%s\n", failures == 0 ? "all criteria passed"
                                      : (std::to_string(failures) +
                                         " criterion(s) failed")
                                            .c_str());
  return failures == 0 ? 0 : 1;
}
