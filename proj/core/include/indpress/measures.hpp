#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "indpress/induced.hpp"
#include "indpress/potential.hpp"
#include "indpress/pressure.hpp"
#include "indpress/sft.hpp"

namespace indpress {

// Shift-invariant Markov measure: a row-stochastic matrix supported on the
// transition pattern of an Sft together with its stationary distribution.
// Cylinder masses are pi_{w1} * prod_j P_{w_j w_{j+1}}.
class MarkovMeasure {
 public:
  // Validating constructor: rows sum to 1 within 1e-12, pi is stationary
  // within 1e-12, and P vanishes wherever the shift forbids a transition.
  MarkovMeasure(Sft support, std::vector<double> transition_rows,
                std::vector<double> stationary);

  // Computes the stationary vector by damped power iteration on the
  // transpose (tolerance 1e-14); damping keeps periodic supports from
  // oscillating.
  static MarkovMeasure from_transition(Sft support,
                                       std::vector<double> transition_rows);

  const Sft& sft() const { return sft_; }
  std::size_t dim() const { return sft_.alphabet_size(); }
  double transition(int i, int j) const;  // 1-based
  double stationary(int i) const;         // 1-based
  const std::vector<double>& transition_rows() const { return p_; }
  const std::vector<double>& stationary_vector() const { return pi_; }

  double cylinder_mass(const Word& w) const;
  double log_cylinder_mass(const Word& w) const;

  friend bool operator==(const MarkovMeasure& a, const MarkovMeasure& b) {
    return a.sft_ == b.sft_ && a.p_ == b.p_ && a.pi_ == b.pi_;
  }

 private:
  Sft sft_;
  std::vector<double> p_;   // row-major k*k
  std::vector<double> pi_;  // length k
};

// Kolmogorov-Sinai entropy of a Markov measure:
// -sum_{i,j: P_ij > 0} pi_i P_ij log P_ij.
double markov_entropy(const MarkovMeasure& mu);

// Integral of a locally constant potential (memory <= 2) against the
// measure: memory 1 gives sum_i pi_i p(i), memory 2 gives
// sum_{ij} pi_i P_ij p(ij).  The potential must live on the measure's shift.
double integrate(const MarkovMeasure& mu, const Potential& p);

// (entropy + integral of phi) / integral of psi; the objective of the
// variational characterization of induced pressure.
double pressure_quotient(const MarkovMeasure& mu, const Potential& phi,
                         const Potential& psi);

// Gibbs measure for (psi, phi) built from the eigendata of the transfer
// matrix of chi = phi - beta* psi at the Bowen root beta*:
// P_ij = L_ij r_j / (lambda r_i), pi_i = l_i r_i.  Requires a topologically
// mixing shift.  The measure lives on the recoded (memory <= 2) system.
struct GibbsResult {
  RecodedSystem recoded;
  MarkovMeasure measure;
  double beta_star = 0.0;
  SpectralData spectral;
};

GibbsResult gibbs_measure(const InducedProblem& prob, double tol_beta = 1e-10,
                          double tol_inner = 1e-12);

// Does the measure attain the variational supremum?  Compares the measure's
// pressure quotient (with phi, psi re-expressed on the measure's alphabet)
// against the Bowen root.
struct EquilibriumReport {
  bool pass = false;
  double quotient = 0.0;
  double root = 0.0;
  double gap = 0.0;  // quotient - root
};

EquilibriumReport equilibrium_check(const MarkovMeasure& mu,
                                    const InducedProblem& prob, double tol);

// Per-depth cylinder-mass comparison band for the Gibbs property: for each
// depth n, the min and max over admissible n-cylinders of
// mu(C) / exp(S_n phi - beta* S_n psi), where the point dependence of the
// Birkhoff sums is resolved by taking min/max over all admissible
// (M-1)-symbol extensions (M = max memory).  Uniform boundedness of these
// bands in n is the defining Gibbs estimate.
struct GibbsBand {
  int depth = 0;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
};

std::vector<GibbsBand> gibbs_constant_estimate(
    const MarkovMeasure& mu, const InducedProblem& prob, double beta_star,
    int n_max, std::uint64_t cap = kDefaultEnumCap);

// Randomized search for the variational supremum over Markov measures on
// the recoded alphabet: `samples` row-stochastic matrices drawn
// Dirichlet-style from the seeded generator, followed by `refine_steps`
// multiplicative coordinate perturbations of the best candidate (step size
// halved after 20 consecutive rejections).  When `inject_gibbs` is set and
// the shift is mixing, the constructed Gibbs measure joins the candidate
// list, certifying that the supremum is attained.  Identical seeds give
// bit-identical trajectories.
struct VariationalResult {
  double best_quotient = 0.0;
  MarkovMeasure best_measure;
  double beta_star = 0.0;  // Bowen root, for gap reporting
  std::vector<double> sample_quotients;  // all random candidates, draw order
  bool injected = false;
  double injected_quotient = 0.0;  // meaningful when injected
  int accepted_moves = 0;
};

VariationalResult variational_search(const InducedProblem& prob, int samples,
                                     int refine_steps, std::uint64_t seed,
                                     bool inject_gibbs = true);

}  // namespace indpress
