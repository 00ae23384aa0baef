#include "indpress/induced.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>

namespace indpress {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Table value of `p` for the window made of the last memory-1 symbols of
// `ctx` followed by `next`.
double window_value(const Potential& p, const std::vector<int>& ctx, int next) {
  const int m = p.memory();
  Word w;
  w.reserve(static_cast<std::size_t>(m));
  for (int i = m - 1; i >= 1; --i)
    w.push_back(ctx[ctx.size() - static_cast<std::size_t>(i)]);
  w.push_back(next);
  return p.value(w);
}

// ---------------------------------------------------------------------------
// Level walk shared by both partition-sum conventions.
//
// A state stands for the set of admissible prefixes of the current depth t
// that share (a) their last few symbols, (b) the completed phi partial sum,
// and (c) a short ring of recent psi partial sums (ring[j] = psi partial at
// depth t - j).  Prefixes merged here are exchangeable for every later
// membership or weight computation, so the walk carries multiplicities
// instead of enumerating words one by one.  Multiplicities are doubles: for
// long thresholds a single state can stand for far more than 2^64 words, and
// the rounding past 2^53 is negligible against the log-scale outputs.
// ---------------------------------------------------------------------------

struct StateKey {
  std::vector<int> ctx;
  double phi_sum = 0.0;
  std::vector<double> psi_ring;

  bool operator<(const StateKey& o) const {
    if (ctx != o.ctx) return ctx < o.ctx;
    if (phi_sum != o.phi_sum) return phi_sum < o.phi_sum;
    return psi_ring < o.psi_ring;
  }
};

using StateMap = std::map<StateKey, double>;

class LevelWalk {
 public:
  LevelWalk(const Sft& sft, const Potential& phi, const Potential& psi,
            std::uint64_t cap)
      : sft_(sft),
        phi_(phi),
        psi_(psi),
        cap_(cap),
        m_phi_(phi.memory()),
        m_psi_(psi.memory()),
        ctx_len_(std::max(std::max(m_phi_, m_psi_) - 1, 1)),
        ring_len_(std::max(1, m_phi_ - m_psi_ + 1)) {
    StateKey root;
    root.psi_ring.assign(static_cast<std::size_t>(ring_len_), 0.0);
    states_[root] = 1.0;
  }

  int depth() const { return depth_; }
  const StateMap& states() const { return states_; }

  void advance() {
    const int t_next = depth_ + 1;
    StateMap next;
    for (const auto& [key, count] : states_) {
      const int k = static_cast<int>(sft_.alphabet_size());
      for (int s = 1; s <= k; ++s) {
        if (!key.ctx.empty() && !sft_.transition(key.ctx.back(), s)) continue;
        StateKey nk;
        nk.ctx = key.ctx;
        nk.ctx.push_back(s);
        if (static_cast<int>(nk.ctx.size()) > ctx_len_)
          nk.ctx.erase(nk.ctx.begin());
        nk.phi_sum = key.phi_sum;
        if (t_next >= m_phi_) nk.phi_sum += window_value(phi_, key.ctx, s);
        double psi_top = key.psi_ring.front();
        if (t_next >= m_psi_) psi_top += window_value(psi_, key.ctx, s);
        nk.psi_ring.assign(static_cast<std::size_t>(ring_len_), 0.0);
        nk.psi_ring[0] = psi_top;
        for (int j = 1; j < ring_len_; ++j)
          nk.psi_ring[static_cast<std::size_t>(j)] =
              key.psi_ring[static_cast<std::size_t>(j - 1)];
        auto [it, fresh] = next.try_emplace(nk, 0.0);
        it->second += count;
      }
    }
    states_ = std::move(next);
    depth_ = t_next;
    total_states_ += states_.size();
    if (total_states_ > cap_)
      throw CapExceededError("partition sum state count exceeds cap",
                             total_states_);
  }

  // Does some extension of a state's prefixes cross the threshold at level n
  // (psi-sum <= T after n windows, > T after n+1)?  The extension reaches
  // max(0, m_psi - m_phi + 1) symbols past the current depth; when phi has
  // the larger memory the crossing is already decided by the ring.
  bool has_crossing_extension(const StateKey& key, double T) const {
    const int lag = m_phi_ - m_psi_;
    if (lag > 0) {
      const double s_n = key.psi_ring[static_cast<std::size_t>(lag)];
      const double s_next = key.psi_ring[static_cast<std::size_t>(lag - 1)];
      return s_n <= T && s_next > T;
    }
    const int steps = -lag + 1;
    bool found = false;
    crossing_dfs(key.ctx, 0, steps, key.psi_ring.front(), T, found);
    return found;
  }

  // Largest additional phi weight over refinements of a level-n cylinder
  // (n = current depth) that admit a crossing extension, or -inf if none.
  double best_crossing_refinement(const StateKey& key, double T) const {
    double best = -kInf;
    refine_dfs(key.ctx, 0, 0.0, key.psi_ring.front(), T, best);
    return best;
  }

 private:
  void crossing_dfs(const std::vector<int>& ctx, int j, int steps,
                    double psi_val, double T, bool& found) const {
    if (found) return;
    if (j == steps - 1) {
      if (psi_val > T) return;  // S_n psi must stay below the threshold
      for (int s = 1; s <= static_cast<int>(sft_.alphabet_size()); ++s) {
        if (!sft_.transition(ctx.back(), s)) continue;
        const int d = depth_ + j + 1;
        double v = psi_val;
        if (d >= m_psi_) v += window_value(psi_, ctx, s);
        if (v > T) {
          found = true;
          return;
        }
      }
      return;
    }
    for (int s = 1; s <= static_cast<int>(sft_.alphabet_size()); ++s) {
      if (!sft_.transition(ctx.back(), s)) continue;
      const int d = depth_ + j + 1;
      double v = psi_val;
      if (d >= m_psi_) v += window_value(psi_, ctx, s);
      std::vector<int> nctx = ctx;
      nctx.push_back(s);
      if (static_cast<int>(nctx.size()) > ctx_len_) nctx.erase(nctx.begin());
      crossing_dfs(nctx, j + 1, steps, v, T, found);
      if (found) return;
    }
  }

  void refine_dfs(const std::vector<int>& ctx, int j, double phi_extra,
                  double psi_val, double T, double& best) const {
    const int n = depth_;
    const int horizon = std::max(m_phi_ - 1, m_psi_);
    if (j == m_psi_ - 1 && psi_val > T) return;
    if (j == m_psi_ && psi_val <= T) return;
    if (j == horizon) {
      best = std::max(best, phi_extra);
      return;
    }
    for (int s = 1; s <= static_cast<int>(sft_.alphabet_size()); ++s) {
      if (!sft_.transition(ctx.back(), s)) continue;
      const int d = n + j + 1;
      double nphi = phi_extra;
      if (j + 1 <= m_phi_ - 1 && d >= m_phi_)
        nphi += window_value(phi_, ctx, s);
      double npsi = psi_val;
      if (j + 1 <= m_psi_ && d >= m_psi_) npsi += window_value(psi_, ctx, s);
      std::vector<int> nctx = ctx;
      nctx.push_back(s);
      if (static_cast<int>(nctx.size()) > ctx_len_) nctx.erase(nctx.begin());
      refine_dfs(nctx, j + 1, nphi, npsi, T, best);
    }
  }

  const Sft& sft_;
  const Potential& phi_;
  const Potential& psi_;
  std::uint64_t cap_;
  int m_phi_, m_psi_, ctx_len_, ring_len_;
  StateMap states_;
  int depth_ = 0;
  std::uint64_t total_states_ = 0;
};

PartitionSumReport run_partition_sum(const InducedProblem& prob, double T,
                                     std::uint64_t cap, bool separated) {
  if (!(T > 0.0) || !std::isfinite(T))
    throw ValidationError("threshold T must be positive and finite");

  const int m_phi = prob.phi.memory();
  const std::int64_t level_cap =
      static_cast<std::int64_t>(std::floor(T / prob.psi.min_value())) + 1;
  const std::int64_t t_end = separated ? level_cap : level_cap + m_phi - 1;

  LevelWalk walk(prob.sft, prob.phi, prob.psi, cap);
  PartitionSumReport report;
  report.T = T;
  report.separated_variant = separated;

  for (std::int64_t t = 1; t <= t_end; ++t) {
    walk.advance();
    const std::int64_t n = separated ? t : t - m_phi + 1;
    if (n < 1 || n > level_cap) continue;

    // First pass: the largest exponent among crossing states, for scaling.
    double top = -kInf;
    for (const auto& [key, count] : walk.states()) {
      if (separated) {
        const double extra = walk.best_crossing_refinement(key, T);
        if (extra > -kInf) top = std::max(top, key.phi_sum + extra);
      } else if (walk.has_crossing_extension(key, T)) {
        top = std::max(top, key.phi_sum);
      }
    }
    if (top == -kInf) continue;  // level empty, n not in S_T

    double sum = 0.0;
    double family = 0.0;
    for (const auto& [key, count] : walk.states()) {
      double exponent;
      if (separated) {
        const double extra = walk.best_crossing_refinement(key, T);
        if (extra == -kInf) continue;
        exponent = key.phi_sum + extra;
      } else {
        if (!walk.has_crossing_extension(key, T)) continue;
        exponent = key.phi_sum;
      }
      family += count;
      sum += count * std::exp(exponent - top);
    }
    report.levels.push_back(PartitionLevel{
        static_cast<int>(n), family, top + std::log(sum)});
  }

  if (report.levels.empty()) {
    report.log_value = -kInf;
    report.value = 0.0;
    report.log_rate = -kInf;
    return report;
  }
  double top = -kInf;
  for (const auto& lvl : report.levels) top = std::max(top, lvl.log_sum);
  double sum = 0.0;
  for (const auto& lvl : report.levels) sum += std::exp(lvl.log_sum - top);
  report.log_value = top + std::log(sum);
  report.value = std::exp(report.log_value);
  report.log_rate = report.log_value / T;
  return report;
}

}  // namespace

InducedProblem::InducedProblem(Sft sft_in, Potential phi_in, Potential psi_in,
                               double psi_floor)
    : sft(std::move(sft_in)), phi(std::move(phi_in)), psi(std::move(psi_in)) {
  if (phi.sft() != sft || psi.sft() != sft)
    throw ValidationError("potentials must live over the problem's shift");
  if (!(psi.min_value() > psi_floor))
    throw ValidationError("psi must be strictly positive: min value " +
                          std::to_string(psi.min_value()) +
                          " is not above the floor " +
                          std::to_string(psi_floor));
}

RootResult induced_pressure_root(const InducedProblem& prob, double tol_beta,
                                 double tol_inner) {
  if (!(tol_beta > 0.0) || !(tol_inner > 0.0))
    throw ValidationError("tolerances must be positive");
  if (!is_irreducible(prob.sft))
    throw DomainError("induced pressure requires an irreducible shift");

  const RecodedSystem rec = recode_to_memory2(prob.sft, {prob.phi, prob.psi});
  const Potential& phi = rec.potentials[0];
  const Potential& psi = rec.potentials[1];

  const auto g = [&](double beta) {
    const Potential chi = Potential::linear_combination(1.0, phi, -beta, psi);
    return pressure_spectral(rec.sft, chi, tol_inner);
  };

  int iterations = 0;
  const double p0 = pressure_spectral(rec.sft, phi, tol_inner);
  double lo = std::min(p0 / prob.psi.max_value(), p0 / prob.psi.min_value()) -
              1.0;
  double hi = std::max(p0 / prob.psi.max_value(), p0 / prob.psi.min_value()) +
              1.0;

  double step = 1.0;
  double g_lo = g(lo);
  while (g_lo < 0.0) {
    lo -= step;
    step *= 2.0;
    g_lo = g(lo);
    if (++iterations > 80)
      throw ConvergenceError("failed to bracket the induced-pressure root");
  }
  step = 1.0;
  double g_hi = g(hi);
  while (g_hi > 0.0) {
    hi += step;
    step *= 2.0;
    g_hi = g(hi);
    if (++iterations > 160)
      throw ConvergenceError("failed to bracket the induced-pressure root");
  }

  while (hi - lo > tol_beta) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at floating-point resolution
    const double g_mid = g(mid);
    ++iterations;
    if (g_mid > 0.0)
      lo = mid;
    else
      hi = mid;
  }

  RootResult result;
  result.beta = 0.5 * (lo + hi);
  result.bracket_width = hi - lo;
  result.inner_pressure = g(result.beta);
  result.iterations = iterations;
  return result;
}

RootResult bs_dimension(const Sft& sft, const Potential& psi, double tol_beta,
                        double tol_inner) {
  return induced_pressure_root(
      InducedProblem(sft, Potential::constant(sft, 0.0), psi), tol_beta,
      tol_inner);
}

PartitionSumReport spanning_partition_sum(const InducedProblem& prob, double T,
                                          std::uint64_t cap) {
  return run_partition_sum(prob, T, cap, /*separated=*/false);
}

PartitionSumReport separated_partition_sum(const InducedProblem& prob, double T,
                                           std::uint64_t cap) {
  return run_partition_sum(prob, T, cap, /*separated=*/true);
}

DefinitionalResult induced_pressure_definitional(const InducedProblem& prob,
                                                 double t_max, double t_step,
                                                 std::uint64_t cap) {
  if (!(t_step > 0.0) || !(t_max >= t_step))
    throw ValidationError("need 0 < t_step <= t_max");

  DefinitionalResult result;
  const std::int64_t points =
      static_cast<std::int64_t>(std::floor(t_max / t_step + 1e-9));
  for (std::int64_t i = 1; i <= points; ++i) {
    const double T = static_cast<double>(i) * t_step;
    try {
      const PartitionSumReport r = spanning_partition_sum(prob, T, cap);
      result.grid.push_back(DefinitionalSample{T, r.log_rate});
    } catch (const CapExceededError&) {
      if (result.grid.empty()) throw;
      result.complete = false;
      break;
    }
  }

  const std::size_t m = result.grid.size();
  const std::size_t start = (2 * m) / 3;
  double best = -kInf;
  for (std::size_t i = start; i < m; ++i)
    best = std::max(best, result.grid[i].log_rate);
  result.value = best;
  return result;
}

// ---------------------------------------------------------------------------
// Tail diagnostic.
// ---------------------------------------------------------------------------

namespace {

// min/max of the n-window psi sum over admissible words, advanced one level
// at a time.  State: last max(memory-1, 1) symbols.
class PathExtrema {
 public:
  PathExtrema(const Sft& sft, const Potential& psi)
      : sft_(sft), psi_(psi), ctx_len_(std::max(psi.memory() - 1, 1)) {
    const int k = static_cast<int>(sft.alphabet_size());
    for (int s = 1; s <= k; ++s)
      cells_.push_back(Cell{{s}, 0.0, 0.0});
    depth_ = 1;
    if (psi_.memory() == 1)
      for (auto& c : cells_) {
        const double v = psi_.value(std::span<const int>(c.ctx.data(), 1));
        c.min_sum = c.max_sum = v;
      }
  }

  // Extrema of the level-n sum live at depth n + memory - 1; call advance
  // until depth() reaches that and read off.
  int depth() const { return depth_; }
  double min_sum() const {
    double v = kInf;
    for (const auto& c : cells_) v = std::min(v, c.min_sum);
    return v;
  }
  double max_sum() const {
    double v = -kInf;
    for (const auto& c : cells_) v = std::max(v, c.max_sum);
    return v;
  }

  void advance() {
    const int t_next = depth_ + 1;
    std::map<std::vector<int>, std::pair<double, double>> next;
    for (const auto& c : cells_) {
      for (int s = 1; s <= static_cast<int>(sft_.alphabet_size()); ++s) {
        if (!sft_.transition(c.ctx.back(), s)) continue;
        double w = 0.0;
        if (t_next >= psi_.memory()) w = window_value(psi_, c.ctx, s);
        std::vector<int> nctx = c.ctx;
        nctx.push_back(s);
        if (static_cast<int>(nctx.size()) > ctx_len_) nctx.erase(nctx.begin());
        auto [it, fresh] = next.try_emplace(
            nctx, std::pair<double, double>{kInf, -kInf});
        it->second.first = std::min(it->second.first, c.min_sum + w);
        it->second.second = std::max(it->second.second, c.max_sum + w);
      }
    }
    cells_.clear();
    for (auto& [ctx, mm] : next)
      cells_.push_back(Cell{ctx, mm.first, mm.second});
    depth_ = t_next;
  }

 private:
  struct Cell {
    std::vector<int> ctx;
    double min_sum, max_sum;
  };
  const Sft& sft_;
  const Potential& psi_;
  int ctx_len_;
  std::vector<Cell> cells_;
  int depth_ = 1;
};

// log of the sum over all admissible level-n words of exp(S_n chi), computed
// from a matrix whose weights were shifted down by `shift` per window.
//
// Memory 2: level n sums words of length n+1, so log Z_n = log(1^T L^n 1).
// Memory 1: level n sums words of length n, so log Z_n = log(1^T L^(n-1) d)
// with d the per-symbol weights.  Both track the row vector 1^T L^j with a
// running log scale; values are cached so levels can be requested per grid
// point without recomputation.
class FullLevelSums {
 public:
  FullLevelSums(const TransferMatrix& matrix, int memory, double shift,
                std::vector<double> end_weights)
      : matrix_(matrix),
        memory_(memory),
        shift_(shift),
        weights_(std::move(end_weights)),
        row_(matrix.dim, 1.0 / static_cast<double>(matrix.dim)),
        log_scale_(std::log(static_cast<double>(matrix.dim))) {}

  double log_level(int n) {
    while (static_cast<int>(cache_.size()) < n) {
      const int target = static_cast<int>(cache_.size()) + 1;
      const int needed = memory_ == 2 ? target : target - 1;
      while (applications_ < needed) step();
      double v;
      if (memory_ == 2) {
        v = log_scale_ + shift_ * target;
      } else {
        double dot = 0.0;
        for (std::size_t b = 0; b < matrix_.dim; ++b)
          dot += row_[b] * weights_[b];
        v = log_scale_ + std::log(dot) + shift_ * target;
      }
      cache_.push_back(v);
    }
    return cache_[static_cast<std::size_t>(n) - 1];
  }

 private:
  void step() {
    std::vector<double> next(matrix_.dim, 0.0);
    for (std::size_t i = 0; i < matrix_.dim; ++i) {
      const double xi = row_[i];
      if (xi == 0.0) continue;
      for (std::size_t j = 0; j < matrix_.dim; ++j) {
        const double e = matrix_.entries[i * matrix_.dim + j];
        if (e != 0.0) next[j] += xi * e;
      }
    }
    double s = 0.0;
    for (double x : next) s += x;
    if (!(s > 0.0))
      throw ConvergenceError("tail diagnostic level sum degenerated");
    for (auto& x : next) x /= s;
    row_ = std::move(next);
    log_scale_ += std::log(s);
    ++applications_;
  }

  const TransferMatrix& matrix_;
  int memory_;
  double shift_;
  std::vector<double> weights_;
  std::vector<double> row_;
  double log_scale_;
  int applications_ = 0;
  std::vector<double> cache_;
};

// log of the sum over level-n words with psi-sum above the threshold of
// exp(S_n chi), by an exact walk that merges prefixes sharing their recent
// symbols and both partial sums.  Only called for the narrow range of levels
// where the threshold cuts through the family.
double band_level_log(const Sft& sft, const Potential& chi,
                      const Potential& psi, int n, double T,
                      std::uint64_t cap, std::uint64_t& states_used) {
  struct Key {
    std::vector<int> ctx;
    double chi_sum, psi_sum;
    bool operator<(const Key& o) const {
      if (ctx != o.ctx) return ctx < o.ctx;
      if (chi_sum != o.chi_sum) return chi_sum < o.chi_sum;
      return psi_sum < o.psi_sum;
    }
  };
  const int m_chi = chi.memory();
  const int m_psi = psi.memory();
  const int ctx_len = std::max(m_chi - 1, 1);
  const int final_depth = n + m_chi - 1;

  std::map<Key, double> states;
  states[Key{{}, 0.0, 0.0}] = 1.0;
  for (int d = 1; d <= final_depth; ++d) {
    std::map<Key, double> next;
    for (const auto& [key, count] : states) {
      for (int s = 1; s <= static_cast<int>(sft.alphabet_size()); ++s) {
        if (!key.ctx.empty() && !sft.transition(key.ctx.back(), s)) continue;
        Key nk;
        nk.ctx = key.ctx;
        nk.ctx.push_back(s);
        if (static_cast<int>(nk.ctx.size()) > ctx_len)
          nk.ctx.erase(nk.ctx.begin());
        nk.chi_sum = key.chi_sum;
        if (d >= m_chi) nk.chi_sum += window_value(chi, key.ctx, s);
        nk.psi_sum = key.psi_sum;
        // only the first n psi windows belong to the level-n sum
        if (d >= m_psi && d <= n + m_psi - 1)
          nk.psi_sum += window_value(psi, key.ctx, s);
        auto [it, fresh] = next.try_emplace(nk, 0.0);
        it->second += count;
      }
    }
    states = std::move(next);
    states_used += states.size();
    if (states_used > cap)
      throw CapExceededError("tail diagnostic state count exceeds cap",
                             states_used);
  }

  double top = -kInf;
  for (const auto& [key, count] : states)
    if (key.psi_sum > T) top = std::max(top, key.chi_sum);
  if (top == -kInf) return -kInf;
  double sum = 0.0;
  for (const auto& [key, count] : states)
    if (key.psi_sum > T) sum += count * std::exp(key.chi_sum - top);
  return top + std::log(sum);
}

}  // namespace

const char* to_string(TailVerdict v) {
  switch (v) {
    case TailVerdict::bounded:
      return "bounded";
    case TailVerdict::growing:
      return "growing";
    case TailVerdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

TailDiagnosticReport r_diagnostic(const InducedProblem& prob, double beta,
                                  const std::vector<double>& t_grid,
                                  std::uint64_t cap) {
  if (t_grid.empty())
    throw ValidationError("tail diagnostic needs a nonempty threshold grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || !std::isfinite(t_grid[i]))
      throw ValidationError("tail diagnostic thresholds must be positive");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
      throw ValidationError(
          "tail diagnostic thresholds must be strictly increasing");
  }
  if (!std::isfinite(beta))
    throw ValidationError("tail diagnostic beta must be finite");
  if (!is_irreducible(prob.sft))
    throw DomainError("tail diagnostic requires an irreducible shift");

  const Potential chi =
      Potential::linear_combination(1.0, prob.phi, -beta, prob.psi);
  const RecodedSystem rec = recode_to_memory2(prob.sft, {chi});
  const Potential& chi_r = rec.potentials[0];
  const double shift = chi_r.max_value();
  const Potential adjusted = Potential::linear_combination(
      1.0, chi_r, -shift, Potential::constant(rec.sft, 1.0));
  const TransferMatrix matrix = build_transfer_matrix(rec.sft, adjusted);
  const SpectralData sd = perron_eigendata(matrix);

  TailDiagnosticReport report;
  report.beta = beta;
  report.inner_pressure = shift + std::log(sd.eigenvalue);

  std::vector<double> end_weights;
  if (chi_r.memory() == 1) {
    end_weights.assign(matrix.dim, 0.0);
    for (std::size_t b = 0; b < matrix.dim; ++b) {
      const int sym = static_cast<int>(b) + 1;
      end_weights[b] =
          std::exp(adjusted.value(std::span<const int>(&sym, 1)));
    }
  }
  FullLevelSums full(matrix, chi_r.memory(), shift, std::move(end_weights));

  PathExtrema extrema(prob.sft, prob.psi);
  std::vector<std::pair<double, double>> extrema_cache;  // level n -> min,max
  const auto extrema_at = [&](int n) {
    while (static_cast<int>(extrema_cache.size()) < n) {
      const int target = static_cast<int>(extrema_cache.size()) + 1;
      const int want = target + prob.psi.memory() - 1;
      while (extrema.depth() < want) extrema.advance();
      extrema_cache.emplace_back(extrema.min_sum(), extrema.max_sum());
    }
    return extrema_cache[static_cast<std::size_t>(n) - 1];
  };

  std::uint64_t states_used = 0;
  std::int64_t last_level_cap = 0;
  for (const double T : t_grid) {
    const std::int64_t level_cap = static_cast<std::int64_t>(
        std::ceil(4.0 * T / prob.psi.min_value()));
    if (level_cap > static_cast<std::int64_t>(cap))
      throw CapExceededError("tail diagnostic level range exceeds cap",
                             static_cast<std::uint64_t>(level_cap));
    last_level_cap = level_cap;

    std::vector<double> level_logs;
    for (std::int64_t n = 1; n <= level_cap; ++n) {
      const auto [mn, mx] = extrema_at(static_cast<int>(n));
      if (mx <= T) continue;  // no word at this level clears the threshold
      double v;
      if (mn > T)
        v = full.log_level(static_cast<int>(n));  // every word clears it
      else
        v = band_level_log(prob.sft, chi, prob.psi, static_cast<int>(n), T,
                           cap, states_used);
      if (v > -kInf) level_logs.push_back(v);
    }

    double value = -kInf;
    if (!level_logs.empty()) {
      double top = *std::max_element(level_logs.begin(), level_logs.end());
      double sum = 0.0;
      for (double v : level_logs) sum += std::exp(v - top);
      value = top + std::log(sum);
    }
    report.samples.push_back(TailSample{T, value});
  }

  // Geometric bound on everything past the deepest level examined: each full
  // level obeys log Z_n <= n * P + log C with C from the eigendata, so for
  // P < 0 the remainder past level N is at most C e^((N+1)P) / (1 - e^P).
  const double P = report.inner_pressure;
  if (P < 0.0) {
    double min_r = kInf;
    for (double r : sd.right) min_r = std::min(min_r, r);
    double log_c = -std::log(min_r);
    if (chi_r.memory() == 1) {
      double max_d = 0.0;
      for (std::size_t b = 0; b < matrix.dim; ++b) {
        const int sym = static_cast<int>(b) + 1;
        max_d = std::max(
            max_d, std::exp(adjusted.value(std::span<const int>(&sym, 1))));
      }
      log_c += std::log(max_d) - std::log(sd.eigenvalue);
    }
    report.tail_bound_log = static_cast<double>(last_level_cap + 1) * P -
                            std::log1p(-std::exp(P)) + log_c;
  } else {
    report.tail_bound_log = kInf;
  }

  // Verdict: bounded needs negative inner pressure, samples that stop
  // increasing over the later part of the grid, and a remainder bound below
  // one percent of the last sample; growing needs a tenfold rise across the
  // grid; anything else is inconclusive.
  const auto& s = report.samples;
  const std::size_t third = s.size() / 3;
  bool settled = true;
  for (std::size_t i = third; i + 1 < s.size(); ++i)
    if (s[i + 1].log_value > s[i].log_value + 1e-9) settled = false;
  const bool small_tail =
      report.tail_bound_log <= s.back().log_value + std::log(0.01);
  if (P < 0.0 && settled && small_tail)
    report.verdict = TailVerdict::bounded;
  else if (s.back().log_value - s.front().log_value >= std::log(10.0))
    report.verdict = TailVerdict::growing;
  else
    report.verdict = TailVerdict::inconclusive;
  return report;
}

}  // namespace indpress
