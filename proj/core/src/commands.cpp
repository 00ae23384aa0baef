#include "indpress/commands.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <sstream>

#include "indpress/errors.hpp"
#include "indpress/induced.hpp"
#include "indpress/measures.hpp"
#include "indpress/pressure.hpp"

namespace indpress {

namespace {

std::string fmt7(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.7g", v);
  return buf;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Flag grammar: "--name value" pairs plus the valueless "--csv".
struct Flags {
  std::map<std::string, std::string> values;
  bool csv = false;

  bool has(const std::string& name) const { return values.count(name) > 0; }
  const std::string& get(const std::string& name) const {
    return values.at(name);
  }
};

Flags parse_flags(const std::vector<std::string>& args,
                  const std::vector<std::string>& allowed) {
  Flags flags;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--csv") {
      if (flags.csv) throw ValidationError("duplicate flag --csv");
      flags.csv = true;
      continue;
    }
    bool known = false;
    for (const auto& name : allowed) known = known || name == a;
    if (!known) throw ValidationError("unknown flag '" + a + "'");
    if (i + 1 >= args.size())
      throw ValidationError("flag '" + a + "' needs a value");
    if (flags.has(a)) throw ValidationError("duplicate flag '" + a + "'");
    flags.values[a] = args[++i];
  }
  return flags;
}

double flag_double(const Flags& flags, const std::string& name) {
  const std::string& tok = flags.get(name);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (tok.empty() || end != tok.c_str() + tok.size() || errno == ERANGE ||
      !std::isfinite(v))
    throw ValidationError("flag '" + name + "' needs a finite number, got '" +
                          tok + "'");
  return v;
}

std::uint64_t flag_u64(const Flags& flags, const std::string& name) {
  const std::string& tok = flags.get(name);
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    throw ValidationError("flag '" + name +
                          "' needs a nonnegative integer, got '" + tok + "'");
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
  if (end != tok.c_str() + tok.size() || errno == ERANGE)
    throw ValidationError("flag '" + name + "' is out of range: '" + tok +
                          "'");
  return static_cast<std::uint64_t>(v);
}

int flag_int(const Flags& flags, const std::string& name, int lo, int hi) {
  const std::uint64_t v = flag_u64(flags, name);
  if (v < static_cast<std::uint64_t>(lo) ||
      v > static_cast<std::uint64_t>(hi))
    throw ValidationError("flag '" + name + "' must be between " +
                          std::to_string(lo) + " and " + std::to_string(hi));
  return static_cast<int>(v);
}

const Potential& named_potential(const SystemFile& system, const Flags& flags,
                                 const std::string& flag) {
  if (!flags.has(flag))
    throw ValidationError("missing required flag '" + flag + "'");
  const std::string& name = flags.get(flag);
  const Potential* p = system.find(name);
  if (!p)
    throw ValidationError("no potential named '" + name + "' in the file");
  return *p;
}

InducedProblem make_problem(const SystemFile& system, const Flags& flags) {
  const Potential& phi = named_potential(system, flags, "--phi");
  const Potential& psi = named_potential(system, flags, "--psi");
  return InducedProblem(system.sft, phi, psi, system.options.psi_floor);
}

void kv(std::ostream& out, const std::string& key, const std::string& value) {
  out << key;
  for (std::size_t i = key.size(); i < 18; ++i) out << ' ';
  out << "= " << value << "\n";
}

// ---------------------------------------------------------------------------

void cmd_pressure(const SystemFile& system, const Flags& flags,
                  std::ostream& out) {
  const Potential& phi = named_potential(system, flags, "--phi");
  const double spectral =
      pressure_spectral(system.sft, phi, system.options.tol);
  bool with_definitional = flags.has("--definitional");
  int depth = 0;
  double definitional = 0.0;
  if (with_definitional) {
    depth = flag_int(flags, "--definitional", 1, 1000000);
    definitional = pressure_definitional(system.sft, phi, depth,
                                         system.options.enum_cap);
  }

  if (flags.csv) {
    out << "quantity,n,value\n";
    out << "spectral,," << fmt17(spectral) << "\n";
    if (with_definitional)
      out << "definitional," << depth << "," << fmt17(definitional) << "\n";
    return;
  }
  out << "pressure report\n";
  kv(out, "phi", flags.get("--phi"));
  kv(out, "spectral", fmt7(spectral));
  if (with_definitional) {
    kv(out, "definitional(n=" + std::to_string(depth) + ")",
       fmt7(definitional));
    kv(out, "definitional_gap", fmt7(definitional - spectral));
  }
}

void cmd_induced(const SystemFile& system, const Flags& flags,
                 std::ostream& out) {
  const InducedProblem prob = make_problem(system, flags);
  const RootResult root = induced_pressure_root(
      prob, system.options.tol_beta, system.options.tol);

  if (flags.csv) {
    out << "quantity,value\n";
    out << "beta_star," << fmt17(root.beta) << "\n";
    out << "bracket_width," << fmt17(root.bracket_width) << "\n";
    out << "inner_pressure," << fmt17(root.inner_pressure) << "\n";
    out << "iterations," << root.iterations << "\n";
    return;
  }
  out << "induced pressure report\n";
  kv(out, "phi", flags.get("--phi"));
  kv(out, "psi", flags.get("--psi"));
  kv(out, "beta_star", fmt7(root.beta));
  kv(out, "bracket_width", fmt7(root.bracket_width));
  kv(out, "inner_pressure", fmt7(root.inner_pressure));
  kv(out, "iterations", std::to_string(root.iterations));
}

void cmd_bs_dim(const SystemFile& system, const Flags& flags,
                std::ostream& out) {
  const Potential& psi = named_potential(system, flags, "--psi");
  const InducedProblem prob(system.sft,
                            Potential::constant(system.sft, 0.0), psi,
                            system.options.psi_floor);
  const RootResult root = induced_pressure_root(
      prob, system.options.tol_beta, system.options.tol);

  if (flags.csv) {
    out << "quantity,value\n";
    out << "dimension," << fmt17(root.beta) << "\n";
    out << "bracket_width," << fmt17(root.bracket_width) << "\n";
    out << "inner_pressure," << fmt17(root.inner_pressure) << "\n";
    out << "iterations," << root.iterations << "\n";
    return;
  }
  out << "BS dimension report\n";
  kv(out, "psi", flags.get("--psi"));
  kv(out, "dimension", fmt7(root.beta));
  kv(out, "bracket_width", fmt7(root.bracket_width));
  kv(out, "inner_pressure", fmt7(root.inner_pressure));
  kv(out, "iterations", std::to_string(root.iterations));
}

void cmd_gibbs(const SystemFile& system, const Flags& flags,
               std::ostream& out) {
  const InducedProblem prob = make_problem(system, flags);
  const int depth = flags.has("--gibbs-depth")
                        ? flag_int(flags, "--gibbs-depth", 1, 16)
                        : 8;
  const GibbsResult g = gibbs_measure(prob, system.options.tol_beta,
                                      system.options.tol);
  const std::vector<GibbsBand> bands = gibbs_constant_estimate(
      g.measure, prob, g.beta_star, depth, system.options.enum_cap);
  const std::size_t k = g.measure.dim();

  if (flags.csv) {
    out << "record,i,j,value\n";
    out << "beta_star,,," << fmt17(g.beta_star) << "\n";
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        out << "transition," << i + 1 << "," << j + 1 << ","
            << fmt17(g.measure.transition_rows()[i * k + j]) << "\n";
    for (std::size_t i = 0; i < k; ++i)
      out << "stationary," << i + 1 << ",,"
          << fmt17(g.measure.stationary_vector()[i]) << "\n";
    for (const GibbsBand& b : bands) {
      out << "band_min," << b.depth << ",," << fmt17(b.ratio_min) << "\n";
      out << "band_max," << b.depth << ",," << fmt17(b.ratio_max) << "\n";
    }
    return;
  }
  out << "Gibbs measure report\n";
  kv(out, "phi", flags.get("--phi"));
  kv(out, "psi", flags.get("--psi"));
  kv(out, "beta_star", fmt7(g.beta_star));
  kv(out, "alphabet", std::to_string(k) +
                          (g.recoded.changed ? " (recoded)" : ""));
  for (std::size_t i = 0; i < k; ++i) {
    std::string row;
    for (std::size_t j = 0; j < k; ++j) {
      if (j) row += ' ';
      row += fmt7(g.measure.transition_rows()[i * k + j]);
    }
    kv(out, "P[" + std::to_string(i + 1) + "]", row);
  }
  std::string pi_row;
  for (std::size_t i = 0; i < k; ++i) {
    if (i) pi_row += ' ';
    pi_row += fmt7(g.measure.stationary_vector()[i]);
  }
  kv(out, "pi", pi_row);
  for (const GibbsBand& b : bands)
    kv(out, "band[" + std::to_string(b.depth) + "]",
       "min " + fmt7(b.ratio_min) + "  max " + fmt7(b.ratio_max) +
           "  spread " + fmt7(b.ratio_max / b.ratio_min));
}

void cmd_variational(const SystemFile& system, const Flags& flags,
                     std::ostream& out) {
  const InducedProblem prob = make_problem(system, flags);
  if (!flags.has("--samples"))
    throw ValidationError("missing required flag '--samples'");
  const int samples = flag_int(flags, "--samples", 1, 10000000);
  const int refine = flags.has("--refine")
                         ? flag_int(flags, "--refine", 0, 10000000)
                         : 200;
  std::uint64_t seed = 0;
  if (flags.has("--seed")) {
    seed = flag_u64(flags, "--seed");
  } else if (system.options.seed) {
    seed = *system.options.seed;
  } else {
    throw ValidationError(
        "variational-check needs --seed (or a seed option in the file)");
  }

  const VariationalResult r =
      variational_search(prob, samples, refine, seed, true);
  const double gap = r.best_quotient - r.beta_star;
  const bool bound_ok = r.best_quotient <= r.beta_star + 1e-8;

  if (flags.csv) {
    out << "record,index,value\n";
    out << "seed,," << seed << "\n";
    out << "beta_star,," << fmt17(r.beta_star) << "\n";
    for (std::size_t i = 0; i < r.sample_quotients.size(); ++i)
      out << "sample," << i + 1 << "," << fmt17(r.sample_quotients[i])
          << "\n";
    if (r.injected)
      out << "injected,," << fmt17(r.injected_quotient) << "\n";
    out << "best,," << fmt17(r.best_quotient) << "\n";
    out << "gap,," << fmt17(gap) << "\n";
    out << "bound_ok,," << (bound_ok ? 1 : 0) << "\n";
    return;
  }
  out << "variational check report\n";
  kv(out, "phi", flags.get("--phi"));
  kv(out, "psi", flags.get("--psi"));
  kv(out, "samples", std::to_string(samples));
  kv(out, "refine_steps", std::to_string(refine));
  kv(out, "seed", std::to_string(seed));
  kv(out, "beta_star", fmt7(r.beta_star));
  kv(out, "best_quotient", fmt7(r.best_quotient));
  kv(out, "gap", fmt7(gap));
  if (r.injected) kv(out, "injected_quotient", fmt7(r.injected_quotient));
  kv(out, "accepted_moves", std::to_string(r.accepted_moves));
  kv(out, "upper_bound", bound_ok ? "PASS" : "FAIL");
}

void cmd_definitional(const SystemFile& system, const Flags& flags,
                      std::ostream& out) {
  const InducedProblem prob = make_problem(system, flags);
  if (!flags.has("--t-max"))
    throw ValidationError("missing required flag '--t-max'");
  const double t_max = flag_double(flags, "--t-max");
  if (!(t_max > 0.0)) throw ValidationError("--t-max must be positive");
  const double t_step =
      flags.has("--t-step") ? flag_double(flags, "--t-step") : t_max / 20.0;
  if (!(t_step > 0.0)) throw ValidationError("--t-step must be positive");

  const DefinitionalResult d = induced_pressure_definitional(
      prob, t_max, t_step, system.options.enum_cap);
  const RootResult root = induced_pressure_root(
      prob, system.options.tol_beta, system.options.tol);

  if (flags.csv) {
    out << "record,T,value\n";
    for (const DefinitionalSample& s : d.grid)
      out << "sample," << fmt17(s.T) << "," << fmt17(s.log_rate) << "\n";
    out << "surrogate,," << fmt17(d.value) << "\n";
    out << "root,," << fmt17(root.beta) << "\n";
    out << "complete,," << (d.complete ? 1 : 0) << "\n";
    return;
  }
  out << "definitional estimate report (validation-only; the root solver is "
         "the production method)\n";
  kv(out, "phi", flags.get("--phi"));
  kv(out, "psi", flags.get("--psi"));
  for (const DefinitionalSample& s : d.grid)
    kv(out, "rate(T=" + fmt7(s.T) + ")", fmt7(s.log_rate));
  kv(out, "surrogate_limsup", fmt7(d.value));
  kv(out, "root_reference", fmt7(root.beta));
  kv(out, "grid_complete", d.complete ? "yes" : "no (enumeration cap)");
  kv(out, "surrogate_gap", fmt7(d.value - root.beta));
}

void cmd_r_diagnostic(const SystemFile& system, const Flags& flags,
                      std::ostream& out) {
  const InducedProblem prob = make_problem(system, flags);
  if (!flags.has("--beta"))
    throw ValidationError("missing required flag '--beta'");
  const double beta = flag_double(flags, "--beta");
  const double t_max = flags.has("--t-max")
                           ? flag_double(flags, "--t-max")
                           : 12.0 * prob.psi.max_value();
  if (!(t_max > 0.0)) throw ValidationError("--t-max must be positive");
  const int points =
      flags.has("--points") ? flag_int(flags, "--points", 2, 1000) : 6;
  std::vector<double> grid;
  for (int i = 1; i <= points; ++i)
    grid.push_back(t_max * static_cast<double>(i) /
                   static_cast<double>(points));

  const TailDiagnosticReport r =
      r_diagnostic(prob, beta, grid, system.options.enum_cap);

  if (flags.csv) {
    out << "record,T,value\n";
    out << "beta,," << fmt17(r.beta) << "\n";
    out << "inner_pressure,," << fmt17(r.inner_pressure) << "\n";
    for (const TailSample& s : r.samples)
      out << "sample," << fmt17(s.T) << "," << fmt17(s.log_value) << "\n";
    out << "tail_bound_log,," << fmt17(r.tail_bound_log) << "\n";
    out << "verdict,," << to_string(r.verdict) << "\n";
    return;
  }
  out << "tail series diagnostic report\n";
  kv(out, "phi", flags.get("--phi"));
  kv(out, "psi", flags.get("--psi"));
  kv(out, "beta", fmt7(r.beta));
  kv(out, "inner_pressure", fmt7(r.inner_pressure));
  for (const TailSample& s : r.samples)
    kv(out, "R(T=" + fmt7(s.T) + ")",
       fmt7(std::exp(s.log_value)) + "  (log " + fmt7(s.log_value) + ")");
  kv(out, "tail_bound_log", fmt7(r.tail_bound_log));
  kv(out, "verdict", to_string(r.verdict));
}

void cmd_info(const SystemFile& system, const Flags& flags,
              std::ostream& out) {
  const Sft& sft = system.sft;
  const bool irr = is_irreducible(sft);
  const bool mix = is_mixing(sft);
  const int period = irr ? sft_period(sft) : 0;

  std::vector<std::pair<int, std::uint64_t>> counts;
  for (int n = 1; n <= 8; ++n) {
    try {
      counts.emplace_back(n, count_words(sft, n));
    } catch (const OverflowError&) {
      break;
    }
  }

  if (flags.csv) {
    out << "record,key,value\n";
    out << "alphabet,," << sft.alphabet_size() << "\n";
    out << "irreducible,," << (irr ? 1 : 0) << "\n";
    out << "mixing,," << (mix ? 1 : 0) << "\n";
    if (irr) out << "period,," << period << "\n";
    for (const auto& [n, c] : counts)
      out << "word_count," << n << "," << c << "\n";
    for (const auto& [name, p] : system.potentials)
      out << "potential," << name << "," << p.memory() << "\n";
    return;
  }
  out << "system info\n";
  kv(out, "alphabet", std::to_string(sft.alphabet_size()));
  kv(out, "irreducible", irr ? "yes" : "no");
  kv(out, "mixing", mix ? "yes" : "no");
  if (irr) kv(out, "period", std::to_string(period));
  for (const auto& [n, c] : counts)
    kv(out, "words(n=" + std::to_string(n) + ")", std::to_string(c));
  for (const auto& [name, p] : system.potentials)
    kv(out, "potential " + name,
       "memory " + std::to_string(p.memory()) + ", min " +
           fmt7(p.min_value()) + ", max " + fmt7(p.max_value()));
}

}  // namespace

int run_command(const std::string& command,
                const std::vector<std::string>& args, const SystemFile& system,
                std::ostream& out, std::ostream& err) {
  std::ostringstream buffer;
  try {
    if (command == "pressure") {
      const Flags f =
          parse_flags(args, {"--phi", "--definitional"});
      cmd_pressure(system, f, buffer);
    } else if (command == "induced") {
      const Flags f = parse_flags(args, {"--phi", "--psi"});
      cmd_induced(system, f, buffer);
    } else if (command == "bs-dim") {
      const Flags f = parse_flags(args, {"--psi"});
      cmd_bs_dim(system, f, buffer);
    } else if (command == "gibbs") {
      const Flags f = parse_flags(args, {"--phi", "--psi", "--gibbs-depth"});
      cmd_gibbs(system, f, buffer);
    } else if (command == "variational-check") {
      const Flags f = parse_flags(
          args, {"--phi", "--psi", "--samples", "--seed", "--refine"});
      cmd_variational(system, f, buffer);
    } else if (command == "definitional") {
      const Flags f =
          parse_flags(args, {"--phi", "--psi", "--t-max", "--t-step"});
      cmd_definitional(system, f, buffer);
    } else if (command == "r-diagnostic") {
      const Flags f = parse_flags(
          args, {"--phi", "--psi", "--beta", "--t-max", "--points"});
      cmd_r_diagnostic(system, f, buffer);
    } else if (command == "info") {
      const Flags f = parse_flags(args, {});
      cmd_info(system, f, buffer);
    } else {
      throw ValidationError("unknown command '" + command + "'");
    }
  } catch (const ParseError& e) {
    err << "error: parse: " << e.what();
    if (e.line > 0) err << " (line " << e.line << ")";
    err << "\n";
    return 2;
  } catch (const ValidationError& e) {
    err << "error: validation: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: domain: " << e.what() << "\n";
    return 1;
  } catch (const CapExceededError& e) {
    err << "error: cap: " << e.what() << "\n";
    return 1;
  } catch (const OverflowError& e) {
    err << "error: overflow: " << e.what() << "\n";
    return 1;
  } catch (const ConvergenceError& e) {
    err << "error: convergence: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return 1;
  }
  out << buffer.str();
  return 0;
}

}  // namespace indpress
