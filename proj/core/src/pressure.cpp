#include "indpress/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace indpress {

namespace {

Sft pattern_of(const TransferMatrix& m) {
  std::vector<std::uint8_t> t(m.dim * m.dim, 0);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = m.entries[i] > 0.0 ? 1 : 0;
  return Sft(m.dim, std::move(t));
}

std::vector<double> apply(const TransferMatrix& m, const std::vector<double>& v,
                          bool transpose) {
  std::vector<double> out(m.dim, 0.0);
  for (std::size_t i = 0; i < m.dim; ++i)
    for (std::size_t j = 0; j < m.dim; ++j) {
      const double e = m.entries[i * m.dim + j];
      if (e == 0.0) continue;
      if (transpose)
        out[j] += e * v[i];
      else
        out[i] += e * v[j];
    }
  return out;
}

double vec_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

struct OneSided {
  double eigenvalue;
  std::vector<double> vec;  // positive, sums to 1
  int iterations;
};

// Power iteration on the p-th power of the matrix, eigenvector assembled as
// the lambda-rescaled average of one period of iterates.
OneSided one_sided_perron(const TransferMatrix& m, int period, bool transpose,
                          double tol, int max_iters) {
  const std::size_t k = m.dim;
  std::vector<double> v(k, 1.0);
  {
    const double s = vec_sum(v);
    for (auto& x : v) x /= s;
  }
  std::vector<double> log_growth(static_cast<std::size_t>(period), 0.0);
  double lambda_prev = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;

  while (iterations < max_iters) {
    for (int i = 0; i < period; ++i) {
      std::vector<double> w = apply(m, v, transpose);
      const double s = vec_sum(w);
      if (!(s > 0.0) || !std::isfinite(s))
        throw ConvergenceError("power iteration produced a degenerate vector");
      log_growth[static_cast<std::size_t>(i)] = std::log(s);
      for (auto& x : w) x /= s;
      v = std::move(w);
    }
    ++iterations;

    double mean = 0.0;
    for (double g : log_growth) mean += g;
    mean /= period;
    const double lambda = std::exp(mean);

    const bool estimates_close =
        std::isfinite(lambda_prev) &&
        std::abs(lambda - lambda_prev) <= tol * std::max(1.0, lambda);
    lambda_prev = lambda;
    if (!estimates_close) continue;

    // Assemble the candidate eigenvector and accept it only if the actual
    // eigen-equation residual meets the tolerance.
    std::vector<double> r = v;
    if (period > 1) {
      std::vector<double> z = v;
      for (int i = 1; i < period; ++i) {
        z = apply(m, z, transpose);
        for (auto& x : z) x /= lambda;
        for (std::size_t j = 0; j < k; ++j) r[j] += z[j];
      }
    }
    const double rs = vec_sum(r);
    for (auto& x : r) x /= rs;

    const std::vector<double> mr = apply(m, r, transpose);
    const double lambda_refined = vec_sum(mr);
    double residual = 0.0;
    for (std::size_t j = 0; j < k; ++j)
      residual = std::max(residual, std::abs(mr[j] - lambda_refined * r[j]));
    if (residual <= tol * lambda_refined) {
      bool positive = true;
      for (double x : r) positive = positive && x > 0.0;
      if (positive) return OneSided{lambda_refined, std::move(r), iterations};
    }
  }
  throw ConvergenceError("perron eigendata did not converge within " +
                         std::to_string(max_iters) + " iterations");
}

}  // namespace

TransferMatrix build_transfer_matrix(const Sft& sft, const Potential& p) {
  if (p.sft() != sft)
    throw ValidationError("potential does not live over the given shift");
  if (p.memory() > 2)
    throw ValidationError(
        "transfer matrix needs memory <= 2; recode the potential first");
  const std::size_t k = sft.alphabet_size();
  TransferMatrix m;
  m.dim = k;
  m.entries.assign(k * k, 0.0);
  for (int i = 1; i <= static_cast<int>(k); ++i)
    for (int j = 1; j <= static_cast<int>(k); ++j) {
      if (!sft.transition(i, j)) continue;
      const Word window = p.memory() == 1 ? Word{i} : Word{i, j};
      m.entries[static_cast<std::size_t>(i - 1) * k +
                static_cast<std::size_t>(j - 1)] =
          std::exp(p.value(window));
    }
  return m;
}

SpectralData perron_eigendata(const TransferMatrix& matrix, double tol,
                              int max_iters) {
  if (matrix.dim == 0 || matrix.entries.size() != matrix.dim * matrix.dim)
    throw ValidationError("malformed transfer matrix");
  for (double e : matrix.entries)
    if (!(e >= 0.0) || !std::isfinite(e))
      throw ValidationError("transfer matrix entries must be finite and >= 0");

  const Sft pattern = pattern_of(matrix);  // rejects zero rows/columns
  if (!is_irreducible(pattern))
    throw DomainError("perron eigendata requires an irreducible matrix");
  const int period = sft_period(pattern);

  OneSided right = one_sided_perron(matrix, period, false, tol, max_iters);
  OneSided left = one_sided_perron(matrix, period, true, tol, max_iters);

  SpectralData data;
  data.eigenvalue = right.eigenvalue;
  data.right = std::move(right.vec);
  data.left = std::move(left.vec);
  data.iterations = right.iterations + left.iterations;

  // Normalize sum(l_i r_i) = 1.
  double lr = 0.0;
  for (std::size_t i = 0; i < matrix.dim; ++i) lr += data.left[i] * data.right[i];
  for (auto& x : data.left) x /= lr;

  const std::vector<double> mr = apply(matrix, data.right, false);
  const std::vector<double> lm = apply(matrix, data.left, true);
  double residual = 0.0;
  for (std::size_t i = 0; i < matrix.dim; ++i) {
    residual = std::max(residual,
                        std::abs(mr[i] - data.eigenvalue * data.right[i]));
    residual = std::max(residual,
                        std::abs(lm[i] - data.eigenvalue * data.left[i]));
  }
  data.residual = residual;
  return data;
}

double pressure_spectral(const Sft& sft, const Potential& p, double tol,
                         int max_iters) {
  if (!is_irreducible(sft))
    throw DomainError("pressure requires an irreducible shift");
  const RecodedSystem recoded = recode_to_memory2(sft, {p});
  const Potential& q = recoded.potentials.front();
  // Shift the table so the largest weight is exp(0); exact for the result
  // because pressure(q - c) = pressure(q) - c.
  const double shift = q.max_value();
  const Potential adjusted = Potential::linear_combination(
      1.0, q, -shift, Potential::constant(recoded.sft, 1.0));
  const TransferMatrix m = build_transfer_matrix(recoded.sft, adjusted);
  const SpectralData sd = perron_eigendata(m, tol, max_iters);
  return std::log(sd.eigenvalue) + shift;
}

double pressure_definitional(const Sft& sft, const Potential& p, int n,
                             std::uint64_t cap) {
  if (p.sft() != sft)
    throw ValidationError("potential does not live over the given shift");
  if (n < 1) throw ValidationError("pressure_definitional needs n >= 1");
  const int depth = n + p.memory() - 1;
  const double top = static_cast<double>(n) * p.max_value();
  double acc = 0.0;
  for_each_word(sft, depth, cap, [&](const Word& w) {
    acc += std::exp(p.birkhoff_sum(w, n) - top);
  });
  return (std::log(acc) + top) / static_cast<double>(n);
}

}  // namespace indpress
