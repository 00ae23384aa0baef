#pragma once

#include <vector>

#include "indpress/potential.hpp"
#include "indpress/pressure.hpp"
#include "indpress/sft.hpp"

namespace indpress {

// A pair (phi, psi) of locally constant potentials over one shift, with psi
// strictly positive: the data of an induced-pressure problem.  The positivity
// floor guards against psi values too close to zero for the T/min(psi)
// bounds downstream.
struct InducedProblem {
  InducedProblem(Sft sft_in, Potential phi_in, Potential psi_in,
                 double psi_floor = 1e-9);

  Sft sft;
  Potential phi;
  Potential psi;
};

// Root of the strictly decreasing map beta -> pressure(phi - beta * psi),
// located by bracketed bisection.  `beta` is the bracket midpoint at
// termination, `bracket_width` the final bracket width (<= tol_beta), and
// `inner_pressure` the pressure evaluated at the returned beta.
struct RootResult {
  double beta = 0.0;
  double bracket_width = 0.0;
  double inner_pressure = 0.0;
  int iterations = 0;
};

RootResult induced_pressure_root(const InducedProblem& prob,
                                 double tol_beta = 1e-10,
                                 double tol_inner = 1e-12);

// Induced pressure of the zero potential: the critical exponent that plays
// the role of a dimension for the gauge psi.
RootResult bs_dimension(const Sft& sft, const Potential& psi,
                        double tol_beta = 1e-10, double tol_inner = 1e-12);

// One nonempty level of a partition sum: words whose psi-sum crosses the
// threshold T after exactly n steps.  `family_size` is the number of distinct
// cylinders counted at this level and `log_sum` the log of their total
// exp(phi-sum) weight.  The size is carried as a double because long
// thresholds produce families far beyond 64-bit range; it is exact whenever
// it fits in 53 bits.
struct PartitionLevel {
  int n = 0;
  double family_size = 0.0;
  double log_sum = 0.0;
};

// Separation scale is pinned at one symbol: at that scale (n, eps)-separated
// families and minimal spanning families are both transversals of
// n-cylinders, so both partition-sum conventions reduce to weighted cylinder
// counts and the eps -> 0 limit is already attained.
struct PartitionSumReport {
  double T = 0.0;
  std::vector<PartitionLevel> levels;  // ascending n; exactly the set S_T
  double log_value = 0.0;              // log of the full sum
  double value = 0.0;                  // may round to inf for huge sums
  double log_rate = 0.0;               // log_value / T
  bool separated_variant = false;
};

// Infimum/spanning convention: each level-n summand exp(S_n phi) is counted
// once per distinct cylinder at depth n + phi.memory - 1 that admits a
// crossing extension (S_n psi <= T < S_{n+1} psi).
PartitionSumReport spanning_partition_sum(const InducedProblem& prob, double T,
                                          std::uint64_t cap = kDefaultEnumCap);

// Supremum/separated convention: one summand per n-cylinder, taking the
// largest exp(S_n phi) over its crossing refinements.  Coincides with the
// spanning variant whenever phi has memory 1.
PartitionSumReport separated_partition_sum(const InducedProblem& prob, double T,
                                           std::uint64_t cap = kDefaultEnumCap);

struct DefinitionalSample {
  double T = 0.0;
  double log_rate = 0.0;
};

// Finite-T surrogate for the limsup defining the induced pressure: partition
// sums over the grid T_step, 2 T_step, ..., T_max, reported as the largest
// log-rate over the final third of the grid.  `complete` is false when the
// enumeration cap cut the grid short (the value then covers the computed
// prefix).  Validation-only; the root solver is the production path.
struct DefinitionalResult {
  double value = 0.0;
  std::vector<DefinitionalSample> grid;
  bool complete = true;
};

DefinitionalResult induced_pressure_definitional(
    const InducedProblem& prob, double t_max, double t_step,
    std::uint64_t cap = kDefaultEnumCap);

enum class TailVerdict { bounded, growing, inconclusive };

struct TailSample {
  double T = 0.0;
  double log_value = 0.0;  // log of the truncated tail sum
};

// Truncated tail series sum_{n} sum_{S_n psi > T} exp(S_n(phi - beta psi)),
// levels truncated at ceil(4 T / min psi).  Finite for beta above the induced
// pressure and divergent below it, so the growth of the samples in T is a
// dichotomy diagnostic for the root.
struct TailDiagnosticReport {
  double beta = 0.0;
  double inner_pressure = 0.0;  // pressure(phi - beta psi)
  std::vector<TailSample> samples;
  // log of the geometric bound on the discarded levels at the last T; only
  // meaningful (finite) when inner_pressure < 0.
  double tail_bound_log = 0.0;
  TailVerdict verdict = TailVerdict::inconclusive;
};

TailDiagnosticReport r_diagnostic(const InducedProblem& prob, double beta,
                                  const std::vector<double>& t_grid,
                                  std::uint64_t cap = kDefaultEnumCap);

const char* to_string(TailVerdict v);

}  // namespace indpress
