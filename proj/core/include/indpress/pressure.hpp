#pragma once

#include <vector>

#include "indpress/potential.hpp"
#include "indpress/sft.hpp"

namespace indpress {

// Weighted transition matrix L[i][j] = t[i][j] * exp(value at (i, j)).  For a
// memory-2 potential the weight of edge (i, j) is exp(p(ij)); for memory-1 it
// is exp(p(i)) (row convention), so that products of entries along a path of
// n edges are exp of the Birkhoff sum over n windows.
struct TransferMatrix {
  std::size_t dim = 0;
  std::vector<double> entries;  // row-major, entry > 0 iff transition allowed

  double at(std::size_t i, std::size_t j) const { return entries[i * dim + j]; }
};

// Requires potential memory <= 2 (recode first otherwise).
TransferMatrix build_transfer_matrix(const Sft& sft, const Potential& p);

// Perron eigendata of an irreducible nonnegative matrix: spectral radius,
// right and left eigenvectors normalized by sum(r) = 1 and sum(l_i r_i) = 1,
// both strictly positive.  `residual` is the max of the two infinity-norm
// eigen-equation residuals; the solver iterates until it is <= tol * lambda.
struct SpectralData {
  double eigenvalue = 0.0;
  std::vector<double> right;
  std::vector<double> left;
  double residual = 0.0;
  int iterations = 0;
};

// Power iteration from the all-ones vector.  Irreducible but non-mixing
// patterns make the plain iteration oscillate, so the solver detects the
// pattern period p up front, iterates the p-th power (whose diagonal blocks
// are primitive), and assembles the eigenvector as the eigenvalue-rescaled
// average of one full period of iterates.
SpectralData perron_eigendata(const TransferMatrix& matrix, double tol = 1e-12,
                              int max_iters = 100000);

// Topological pressure P(p) = log of the Perron eigenvalue of the transfer
// matrix, after recoding to memory <= 2 if necessary.  Requires an
// irreducible sft.  The potential table is shifted by its maximum before
// exponentiation (and the shift added back) so large values cannot overflow.
double pressure_spectral(const Sft& sft, const Potential& p,
                         double tol = 1e-12, int max_iters = 100000);

// (1/n) log sum over admissible words of length n + memory - 1 of
// exp(Birkhoff sum of n windows).  Direct enumeration; a validation-grade
// cross-check of pressure_spectral, not a production path.
double pressure_definitional(const Sft& sft, const Potential& p, int n,
                             std::uint64_t cap = kDefaultEnumCap);

}  // namespace indpress
