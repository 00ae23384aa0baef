#include "indpress/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <string>

#include "indpress/errors.hpp"

namespace indpress {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMeasureTol = 1e-12;
constexpr double kStationaryTol = 1e-14;
constexpr int kStationaryMaxIters = 500000;

// Damped power iteration x <- (x + xP)/2 on the left; damping removes the
// oscillation of periodic supports while keeping the same fixed point.
std::vector<double> stationary_from(const Sft& sft,
                                    const std::vector<double>& rows,
                                    std::vector<double> x) {
  const std::size_t k = sft.alphabet_size();
  for (int iter = 0; iter < kStationaryMaxIters; ++iter) {
    std::vector<double> next(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      const double xi = x[i];
      if (xi == 0.0) continue;
      for (std::size_t j = 0; j < k; ++j) {
        const double p = rows[i * k + j];
        if (p != 0.0) next[j] += xi * p;
      }
    }
    double err = 0.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      next[j] = 0.5 * (next[j] + x[j]);
      err = std::max(err, std::abs(next[j] - x[j]));
      sum += next[j];
    }
    for (auto& v : next) v /= sum;
    x = std::move(next);
    if (err <= kStationaryTol) return x;
  }
  throw ConvergenceError("stationary vector iteration did not converge");
}

}  // namespace

MarkovMeasure::MarkovMeasure(Sft support, std::vector<double> transition_rows,
                             std::vector<double> stationary)
    : sft_(std::move(support)),
      p_(std::move(transition_rows)),
      pi_(std::move(stationary)) {
  const std::size_t k = sft_.alphabet_size();
  if (p_.size() != k * k)
    throw ValidationError("transition matrix size does not match alphabet");
  if (pi_.size() != k)
    throw ValidationError("stationary vector size does not match alphabet");

  for (std::size_t i = 0; i < k; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double p = p_[i * k + j];
      if (!std::isfinite(p) || p < 0.0)
        throw ValidationError("transition probabilities must be finite and "
                              "nonnegative (row " +
                              std::to_string(i + 1) + ")");
      if (p > 0.0 &&
          !sft_.transition(static_cast<int>(i) + 1, static_cast<int>(j) + 1))
        throw ValidationError(
            "transition probability assigned to forbidden pair (" +
            std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      row_sum += p;
    }
    if (std::abs(row_sum - 1.0) > kMeasureTol)
      throw ValidationError("row " + std::to_string(i + 1) +
                            " of the transition matrix does not sum to 1");
  }

  double pi_sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!std::isfinite(pi_[i]) || pi_[i] < 0.0)
      throw ValidationError("stationary vector must be nonnegative");
    pi_sum += pi_[i];
  }
  if (std::abs(pi_sum - 1.0) > kMeasureTol)
    throw ValidationError("stationary vector does not sum to 1");
  for (std::size_t j = 0; j < k; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += pi_[i] * p_[i * k + j];
    if (std::abs(acc - pi_[j]) > kMeasureTol)
      throw ValidationError("vector is not stationary for the transition "
                            "matrix (component " +
                            std::to_string(j + 1) + ")");
  }
}

MarkovMeasure MarkovMeasure::from_transition(
    Sft support, std::vector<double> transition_rows) {
  const std::size_t k = support.alphabet_size();
  if (transition_rows.size() != k * k)
    throw ValidationError("transition matrix size does not match alphabet");
  std::vector<double> uniform(k, 1.0 / static_cast<double>(k));
  std::vector<double> pi =
      stationary_from(support, transition_rows, std::move(uniform));
  return MarkovMeasure(std::move(support), std::move(transition_rows),
                       std::move(pi));
}

double MarkovMeasure::transition(int i, int j) const {
  const std::size_t k = sft_.alphabet_size();
  return p_[(static_cast<std::size_t>(i) - 1) * k +
            (static_cast<std::size_t>(j) - 1)];
}

double MarkovMeasure::stationary(int i) const {
  return pi_[static_cast<std::size_t>(i) - 1];
}

namespace {
void check_cylinder_word(const Sft& sft, const Word& w) {
  if (w.empty()) throw ValidationError("cylinder word must be nonempty");
  for (int s : w)
    if (s < 1 || s > static_cast<int>(sft.alphabet_size()))
      throw ValidationError("cylinder word symbol out of range");
}
}  // namespace

double MarkovMeasure::log_cylinder_mass(const Word& w) const {
  check_cylinder_word(sft_, w);
  double acc = std::log(stationary(w[0]));
  for (std::size_t j = 0; j + 1 < w.size(); ++j)
    acc += std::log(transition(w[j], w[j + 1]));
  return acc;
}

double MarkovMeasure::cylinder_mass(const Word& w) const {
  check_cylinder_word(sft_, w);
  double acc = stationary(w[0]);
  for (std::size_t j = 0; j + 1 < w.size(); ++j)
    acc *= transition(w[j], w[j + 1]);
  return acc;
}

double markov_entropy(const MarkovMeasure& mu) {
  const std::size_t k = mu.dim();
  double h = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double pi_i = mu.stationary_vector()[i];
    if (pi_i == 0.0) continue;
    for (std::size_t j = 0; j < k; ++j) {
      const double p = mu.transition_rows()[i * k + j];
      if (p > 0.0) h -= pi_i * p * std::log(p);
    }
  }
  return h;
}

double integrate(const MarkovMeasure& mu, const Potential& p) {
  if (p.sft() != mu.sft())
    throw ValidationError(
        "potential and measure live on different shifts; recode first");
  const std::size_t k = mu.dim();
  if (p.memory() == 1) {
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const int sym = static_cast<int>(i) + 1;
      acc += mu.stationary_vector()[i] *
             p.value(std::span<const int>(&sym, 1));
    }
    return acc;
  }
  if (p.memory() == 2) {
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        const double w = mu.transition_rows()[i * k + j];
        if (w == 0.0) continue;
        const int pair[2] = {static_cast<int>(i) + 1, static_cast<int>(j) + 1};
        acc += mu.stationary_vector()[i] * w *
               p.value(std::span<const int>(pair, 2));
      }
    return acc;
  }
  throw ValidationError("integrate needs memory <= 2; recode first");
}

double pressure_quotient(const MarkovMeasure& mu, const Potential& phi,
                         const Potential& psi) {
  const double denom = integrate(mu, psi);
  if (!(denom > 0.0))
    throw ValidationError("psi integral must be positive in the quotient");
  return (markov_entropy(mu) + integrate(mu, phi)) / denom;
}

GibbsResult gibbs_measure(const InducedProblem& prob, double tol_beta,
                          double tol_inner) {
  if (!is_mixing(prob.sft))
    throw DomainError(
        "Gibbs construction requires a topologically mixing shift");

  const RootResult root = induced_pressure_root(prob, tol_beta, tol_inner);
  RecodedSystem rec = recode_to_memory2(prob.sft, {prob.phi, prob.psi});
  const Potential chi = Potential::linear_combination(
      1.0, rec.potentials[0], -root.beta, rec.potentials[1]);
  const TransferMatrix matrix = build_transfer_matrix(rec.sft, chi);
  const SpectralData sd = perron_eigendata(matrix, tol_inner);

  const std::size_t k = matrix.dim;
  std::vector<double> rows(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double e = matrix.entries[i * k + j];
      if (e > 0.0)
        rows[i * k + j] = e * sd.right[j] / (sd.eigenvalue * sd.right[i]);
      row_sum += rows[i * k + j];
    }
    // The exact rows sum to 1; dividing out the residual drift keeps the
    // stochasticity invariant tight.
    for (std::size_t j = 0; j < k; ++j) rows[i * k + j] /= row_sum;
  }

  // pi = l*r is the exact stationary vector of the exact rows; polish the
  // numerical one with the stationary iteration to its tighter tolerance.
  std::vector<double> pi(k, 0.0);
  double pi_sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    pi[i] = sd.left[i] * sd.right[i];
    pi_sum += pi[i];
  }
  for (auto& v : pi) v /= pi_sum;
  pi = stationary_from(rec.sft, rows, std::move(pi));

  MarkovMeasure measure(rec.sft, std::move(rows), std::move(pi));
  return GibbsResult{std::move(rec), std::move(measure), root.beta, sd};
}

EquilibriumReport equilibrium_check(const MarkovMeasure& mu,
                                    const InducedProblem& prob, double tol) {
  const RecodedSystem rec = recode_to_memory2(prob.sft, {prob.phi, prob.psi});
  if (mu.sft() != rec.sft)
    throw ValidationError(
        "measure alphabet does not match the recoded problem alphabet");
  const RootResult root = induced_pressure_root(prob);
  EquilibriumReport report;
  report.quotient =
      pressure_quotient(mu, rec.potentials[0], rec.potentials[1]);
  report.root = root.beta;
  report.gap = report.quotient - report.root;
  report.pass = std::abs(report.gap) <= tol;
  return report;
}

namespace {

// log mu(C_w) for a word of the problem's original alphabet, through the
// block bijection when the measure lives on a recoded alphabet.
double log_original_cylinder_mass(const MarkovMeasure& mu,
                                  const std::vector<Word>& blocks,
                                  const Word& w) {
  const std::size_t block_len = blocks.empty() ? 1 : blocks.front().size();
  if (block_len <= 1) return mu.log_cylinder_mass(w);

  if (w.size() >= block_len) {
    // Translate to the recoded word of length |w| - block_len + 1.
    Word recoded_word;
    for (std::size_t start = 0; start + block_len <= w.size(); ++start) {
      const Word piece(w.begin() + static_cast<std::ptrdiff_t>(start),
                       w.begin() + static_cast<std::ptrdiff_t>(start) +
                           static_cast<std::ptrdiff_t>(block_len));
      const auto it = std::lower_bound(blocks.begin(), blocks.end(), piece);
      if (it == blocks.end() || *it != piece)
        throw ValidationError("word is not admissible for the block map");
      recoded_word.push_back(static_cast<int>(it - blocks.begin()) + 1);
    }
    return mu.log_cylinder_mass(recoded_word);
  }

  // Shorter than one block: the cylinder is a disjoint union of the
  // cylinders of all blocks starting with w.
  double mass = 0.0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (std::equal(w.begin(), w.end(), blocks[b].begin()))
      mass += mu.stationary(static_cast<int>(b) + 1);
  }
  if (!(mass > 0.0))
    throw ValidationError("word is not admissible for the block map");
  return std::log(mass);
}

}  // namespace

std::vector<GibbsBand> gibbs_constant_estimate(const MarkovMeasure& mu,
                                               const InducedProblem& prob,
                                               double beta_star, int n_max,
                                               std::uint64_t cap) {
  if (n_max < 1) throw ValidationError("depth bound must be at least 1");
  const int m = std::max(prob.phi.memory(), prob.psi.memory());

  // The measure must live on the problem's recoded alphabet (which is the
  // original alphabet whenever max memory <= 2).
  const RecodedSystem full =
      recode_to_memory2(prob.sft, {prob.phi, prob.psi}, cap);
  if (mu.sft() != full.sft)
    throw ValidationError(
        "measure alphabet does not match the problem's recoded alphabet");
  const std::vector<Word>& blocks = full.symbol_words;

  std::vector<GibbsBand> bands;
  for (int n = 1; n <= n_max; ++n) {
    const int depth = n + m - 1;
    double band_min = kInf;
    double band_max = -kInf;

    // Enumerate at depth n + M - 1 and group by the n-prefix; within a
    // group the extension resolves the test-point dependence of the
    // Birkhoff sums.
    Word current_prefix;
    double e_min = kInf, e_max = -kInf;
    const auto close_group = [&]() {
      if (current_prefix.empty()) return;
      const double log_mass =
          log_original_cylinder_mass(mu, blocks, current_prefix);
      band_min = std::min(band_min, std::exp(log_mass - e_max));
      band_max = std::max(band_max, std::exp(log_mass - e_min));
    };
    for_each_word(prob.sft, depth, cap, [&](const Word& w) {
      const Word prefix(w.begin(), w.begin() + n);
      const double e = prob.phi.birkhoff_sum(w, n) -
                       beta_star * prob.psi.birkhoff_sum(w, n);
      if (prefix != current_prefix) {
        close_group();
        current_prefix = prefix;
        e_min = e;
        e_max = e;
      } else {
        e_min = std::min(e_min, e);
        e_max = std::max(e_max, e);
      }
    });
    close_group();
    bands.push_back(GibbsBand{n, band_min, band_max});
  }
  return bands;
}

VariationalResult variational_search(const InducedProblem& prob, int samples,
                                     int refine_steps, std::uint64_t seed,
                                     bool inject_gibbs) {
  if (samples < 1) throw ValidationError("need at least one sample");
  if (refine_steps < 0) throw ValidationError("refine steps must be >= 0");

  const RootResult root = induced_pressure_root(prob);
  RecodedSystem rec = recode_to_memory2(prob.sft, {prob.phi, prob.psi});
  const Sft& sft = rec.sft;
  const Potential& phi = rec.potentials[0];
  const Potential& psi = rec.potentials[1];
  const std::size_t k = sft.alphabet_size();

  // Hand-rolled uniforms/exponentials on top of the fixed-width engine so
  // trajectories are identical across platforms and library versions.
  std::mt19937_64 engine(seed);
  const auto uniform01 = [&engine]() {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
  };
  const auto exponential = [&]() { return -std::log1p(-uniform01()); };

  std::vector<std::pair<std::size_t, std::size_t>> allowed;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (sft.transition(static_cast<int>(i) + 1, static_cast<int>(j) + 1))
        allowed.emplace_back(i, j);

  const auto random_rows = [&]() {
    std::vector<double> rows(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      double row_sum = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        if (!sft.transition(static_cast<int>(i) + 1,
                            static_cast<int>(j) + 1))
          continue;
        double e;
        do {
          e = exponential();
        } while (e == 0.0);
        rows[i * k + j] = e;
        row_sum += e;
      }
      for (std::size_t j = 0; j < k; ++j) rows[i * k + j] /= row_sum;
    }
    return rows;
  };

  std::vector<double> sample_quotients;
  sample_quotients.reserve(static_cast<std::size_t>(samples));

  double best_q = -kInf;
  std::vector<double> best_rows;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> rows = random_rows();
    MarkovMeasure mu = MarkovMeasure::from_transition(sft, rows);
    const double q = pressure_quotient(mu, phi, psi);
    sample_quotients.push_back(q);
    if (q > best_q) {
      best_q = q;
      best_rows = std::move(rows);
    }
  }

  // Local refinement: multiplicative perturbation of one allowed entry,
  // renormalize its row, accept on improvement.
  double sigma = 0.1;
  int consecutive_rejects = 0;
  int accepted = 0;
  for (int step = 0; step < refine_steps; ++step) {
    const std::size_t pick = static_cast<std::size_t>(
        uniform01() * static_cast<double>(allowed.size()));
    const auto [pi_row, pj] = allowed[std::min(pick, allowed.size() - 1)];
    std::vector<double> rows = best_rows;
    rows[pi_row * k + pj] *= std::exp(sigma * (2.0 * uniform01() - 1.0));
    double row_sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) row_sum += rows[pi_row * k + j];
    for (std::size_t j = 0; j < k; ++j) rows[pi_row * k + j] /= row_sum;
    MarkovMeasure mu = MarkovMeasure::from_transition(sft, rows);
    const double q = pressure_quotient(mu, phi, psi);
    sample_quotients.push_back(q);
    if (q > best_q) {
      best_q = q;
      best_rows = std::move(rows);
      ++accepted;
      consecutive_rejects = 0;
    } else if (++consecutive_rejects >= 20) {
      sigma *= 0.5;
      consecutive_rejects = 0;
    }
  }

  bool injected = false;
  double injected_quotient = 0.0;
  if (inject_gibbs && is_mixing(prob.sft)) {
    const GibbsResult gibbs = gibbs_measure(prob);
    injected_quotient = pressure_quotient(gibbs.measure, phi, psi);
    injected = true;
    if (injected_quotient > best_q) {
      best_q = injected_quotient;
      best_rows = gibbs.measure.transition_rows();
    }
  }

  MarkovMeasure best = MarkovMeasure::from_transition(sft, best_rows);
  return VariationalResult{best_q,
                           std::move(best),
                           root.beta,
                           std::move(sample_quotients),
                           injected,
                           injected_quotient,
                           accepted};
}

}  // namespace indpress
