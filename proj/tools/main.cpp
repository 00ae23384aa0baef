// indpress: thermodynamic-formalism calculations for topological Markov
// shifts described by a plain-text system file.

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "indpress/commands.hpp"
#include "indpress/errors.hpp"
#include "indpress/system_file.hpp"

namespace {

constexpr const char* kUsage = R"(usage: indpress <command> <system-file> [flags]

commands:
  pressure          --phi NAME [--definitional N]
  induced           --phi NAME --psi NAME
  bs-dim            --psi NAME
  gibbs             --phi NAME --psi NAME [--gibbs-depth N]
  variational-check --phi NAME --psi NAME --samples N --seed S [--refine N]
  definitional      --phi NAME --psi NAME --t-max T [--t-step S]
  r-diagnostic      --phi NAME --psi NAME --beta X [--t-max T] [--points N]
  info

Every command accepts --csv for machine-readable output with a header row.
The environment variable INDPRESS_ENUM_CAP overrides the enumeration cap
from the file's [options] section (default 10000000).
)";

int fail_validation(const std::string& message) {
  std::cerr << "error: validation: " << message << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);

  if (!args.empty() && (args[0] == "--help" || args[0] == "-h")) {
    std::cout << kUsage;
    return 0;
  }
  if (args.empty()) return fail_validation("missing command; try --help");
  if (args.size() < 2)
    return fail_validation("missing system-file path; try --help");

  const std::string command = args[0];
  const std::string path = args[1];
  const std::vector<std::string> rest(args.begin() + 2, args.end());

  std::ifstream in(path);
  if (!in) return fail_validation("cannot read file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();

  std::optional<indpress::SystemFile> system;
  try {
    system.emplace(indpress::parse_system(text.str()));
  } catch (const indpress::ParseError& e) {
    std::cerr << "error: parse: " << e.what();
    if (e.line > 0) std::cerr << " (line " << e.line << ")";
    std::cerr << "\n";
    return 2;
  } catch (const indpress::Error& e) {
    return fail_validation(e.what());
  }

  if (const char* cap_env = std::getenv("INDPRESS_ENUM_CAP")) {
    const std::string tok = cap_env;
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
    if (tok.empty() || end != tok.c_str() + tok.size() || errno == ERANGE ||
        v == 0)
      return fail_validation(
          "INDPRESS_ENUM_CAP must be a positive integer, got '" + tok + "'");
    system->options.enum_cap = v;
  }

  return indpress::run_command(command, rest, *system, std::cout, std::cerr);
}
