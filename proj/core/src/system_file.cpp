#include "indpress/system_file.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "indpress/errors.hpp"

namespace indpress {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, std::size_t line,
                    const std::string& what) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || tok.empty() || errno == ERANGE ||
      !std::isfinite(v))
    throw ParseError(what + " is not a finite number: '" + tok + "'", line);
  return v;
}

// VALUE token: a float literal, or log(X) with X a positive literal.
double parse_value(const std::string& tok, std::size_t line) {
  if (tok.size() > 5 && tok.compare(0, 4, "log(") == 0 && tok.back() == ')') {
    const std::string inner = tok.substr(4, tok.size() - 5);
    const double x = parse_double(inner, line, "log() argument");
    if (!(x > 0.0))
      throw ParseError("log() argument must be positive: '" + inner + "'",
                       line);
    return std::log(x);
  }
  return parse_double(tok, line, "value");
}

std::uint64_t parse_u64(const std::string& tok, std::size_t line,
                        const std::string& what) {
  if (tok.empty() ||
      tok.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(what + " is not a nonnegative integer: '" + tok + "'",
                     line);
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
  if (end != tok.c_str() + tok.size() || errno == ERANGE)
    throw ParseError(what + " is out of range: '" + tok + "'", line);
  return static_cast<std::uint64_t>(v);
}

Word parse_word(const std::string& tok, std::size_t line, int alphabet) {
  Word w;
  if (tok.find('.') != std::string::npos || alphabet > 9) {
    // Dot-separated symbols; a dotless token is a single symbol.
    std::size_t pos = 0;
    while (pos <= tok.size()) {
      const std::size_t dot = tok.find('.', pos);
      const std::string part =
          tok.substr(pos, dot == std::string::npos ? std::string::npos
                                                   : dot - pos);
      w.push_back(static_cast<int>(parse_u64(part, line, "word symbol")));
      if (dot == std::string::npos) break;
      pos = dot + 1;
    }
  } else {
    for (char c : tok) {
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw ParseError("word must be digits or dot-separated symbols: '" +
                             tok + "'",
                         line);
      w.push_back(c - '0');
    }
  }
  if (w.empty()) throw ParseError("empty word", line);
  for (int s : w)
    if (s < 1 || s > alphabet)
      throw ParseError("symbol " + std::to_string(s) +
                           " outside alphabet 1.." +
                           std::to_string(alphabet),
                       line);
  return w;
}

std::string word_text(const Word& w, std::size_t alphabet) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (alphabet > 9 && i > 0) out += '.';
    out += std::to_string(w[i]);
  }
  return out;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct PendingPotential {
  std::string name;
  int memory = 0;
  std::size_t header_line = 0;
  std::map<Word, double> table;
  std::map<Word, std::size_t> entry_lines;
};

}  // namespace

const Potential* SystemFile::find(const std::string& name) const {
  for (const auto& [n, p] : potentials)
    if (n == name) return &p;
  return nullptr;
}

SystemFile parse_system(const std::string& text) {
  enum class Section { none, shift, potential, options };

  std::vector<std::pair<std::size_t, std::string>> lines;
  {
    std::istringstream in(text);
    std::string raw;
    std::size_t num = 0;
    while (std::getline(in, raw)) {
      ++num;
      const std::size_t hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      const std::string stripped = trim(raw);
      if (!stripped.empty()) lines.emplace_back(num, stripped);
    }
  }

  Section section = Section::none;
  bool saw_shift = false;
  int alphabet = 0;
  bool alphabet_set = false;
  std::vector<std::uint8_t> rows;
  std::size_t rows_seen = 0;
  std::size_t shift_line = 0;

  std::optional<Sft> sft;
  std::vector<PendingPotential> pendings;
  PendingPotential* current = nullptr;
  SystemOptions options;
  std::set<std::string> seen_options;

  const auto finish_shift = [&](std::size_t line) {
    if (sft) return;
    if (!saw_shift) throw ParseError("missing [shift] section", line);
    if (!alphabet_set)
      throw ParseError("[shift] section needs an 'alphabet = K' line",
                       shift_line);
    if (rows_seen != static_cast<std::size_t>(alphabet))
      throw ParseError("[shift] has " + std::to_string(rows_seen) +
                           " transition rows, expected " +
                           std::to_string(alphabet),
                       line);
    try {
      sft.emplace(static_cast<std::size_t>(alphabet), rows);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), shift_line);
    }
  };

  for (const auto& [num, line] : lines) {
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("malformed section header", num);
      const std::string header = trim(line.substr(1, line.size() - 2));
      const std::vector<std::string> parts = split_ws(header);
      if (parts.empty()) throw ParseError("empty section header", num);

      if (parts[0] == "shift") {
        if (parts.size() != 1)
          throw ParseError("[shift] takes no attributes", num);
        if (saw_shift) throw ParseError("duplicate [shift] section", num);
        saw_shift = true;
        shift_line = num;
        section = Section::shift;
      } else if (parts[0] == "potential") {
        finish_shift(num);
        if (parts.size() != 3 || parts[2].compare(0, 7, "memory=") != 0)
          throw ParseError(
              "potential header must be [potential NAME memory=M]", num);
        PendingPotential p;
        p.name = parts[1];
        if (p.name.empty() ||
            (!std::isalpha(static_cast<unsigned char>(p.name[0])) &&
             p.name[0] != '_'))
          throw ParseError("potential name must start with a letter or '_'",
                           num);
        for (char c : p.name)
          if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            throw ParseError("potential name has invalid character '" +
                                 std::string(1, c) + "'",
                             num);
        for (const auto& q : pendings)
          if (q.name == p.name)
            throw ParseError("duplicate potential name '" + p.name + "'",
                             num);
        const std::uint64_t m =
            parse_u64(parts[2].substr(7), num, "memory attribute");
        if (m < 1 || m > 8)
          throw ParseError("memory must be between 1 and 8", num);
        p.memory = static_cast<int>(m);
        p.header_line = num;
        pendings.push_back(std::move(p));
        current = &pendings.back();
        section = Section::potential;
      } else if (parts[0] == "options") {
        finish_shift(num);
        if (parts.size() != 1)
          throw ParseError("[options] takes no attributes", num);
        section = Section::options;
      } else {
        throw ParseError("unknown section '" + parts[0] + "'", num);
      }
      continue;
    }

    switch (section) {
      case Section::none:
        throw ParseError("content before any section header", num);
      case Section::shift: {
        const std::vector<std::string> toks = split_ws(line);
        if (toks.size() == 3 && toks[0] == "alphabet" && toks[1] == "=") {
          if (alphabet_set)
            throw ParseError("duplicate alphabet line", num);
          const std::uint64_t k = parse_u64(toks[2], num, "alphabet size");
          if (k < 1 || k > 4096)
            throw ParseError("alphabet size must be between 1 and 4096",
                             num);
          alphabet = static_cast<int>(k);
          alphabet_set = true;
          break;
        }
        if (!alphabet_set)
          throw ParseError(
              "expected 'alphabet = K' before the transition rows", num);
        if (toks.size() != static_cast<std::size_t>(alphabet))
          throw ParseError("transition row has " +
                               std::to_string(toks.size()) +
                               " entries, expected " +
                               std::to_string(alphabet),
                           num);
        if (rows_seen >= static_cast<std::size_t>(alphabet))
          throw ParseError("too many transition rows", num);
        for (const std::string& t : toks) {
          if (t != "0" && t != "1")
            throw ParseError("transition entries must be 0 or 1, got '" + t +
                                 "'",
                             num);
          rows.push_back(t == "1" ? 1 : 0);
        }
        ++rows_seen;
        break;
      }
      case Section::potential: {
        const std::vector<std::string> toks = split_ws(line);
        if (toks.size() != 2)
          throw ParseError("potential entry must be 'WORD VALUE'", num);
        const Word w = parse_word(toks[0], num, alphabet);
        if (static_cast<int>(w.size()) != current->memory)
          throw ParseError("word '" + toks[0] + "' has length " +
                               std::to_string(w.size()) + ", expected " +
                               std::to_string(current->memory),
                           num);
        if (!is_admissible_word(*sft, w))
          throw ParseError("word '" + toks[0] +
                               "' is not admissible for the shift",
                           num);
        if (current->table.count(w))
          throw ParseError("duplicate entry for word '" + toks[0] +
                               "' (first at line " +
                               std::to_string(current->entry_lines[w]) + ")",
                           num);
        current->table[w] = parse_value(toks[1], num);
        current->entry_lines[w] = num;
        break;
      }
      case Section::options: {
        const std::vector<std::string> toks = split_ws(line);
        if (toks.size() != 3 || toks[1] != "=")
          throw ParseError("option must be 'key = value'", num);
        const std::string& key = toks[0];
        if (!seen_options.insert(key).second)
          throw ParseError("duplicate option '" + key + "'", num);
        if (key == "tol") {
          options.tol = parse_double(toks[2], num, "tol");
          if (!(options.tol > 0.0))
            throw ParseError("tol must be positive", num);
        } else if (key == "tol_beta") {
          options.tol_beta = parse_double(toks[2], num, "tol_beta");
          if (!(options.tol_beta > 0.0))
            throw ParseError("tol_beta must be positive", num);
        } else if (key == "enum_cap") {
          options.enum_cap = parse_u64(toks[2], num, "enum_cap");
          if (options.enum_cap < 1)
            throw ParseError("enum_cap must be at least 1", num);
        } else if (key == "psi_floor") {
          options.psi_floor = parse_double(toks[2], num, "psi_floor");
          if (!(options.psi_floor >= 0.0))
            throw ParseError("psi_floor must be nonnegative", num);
        } else if (key == "seed") {
          options.seed = parse_u64(toks[2], num, "seed");
        } else {
          throw ParseError("unknown option '" + key + "'", num);
        }
        break;
      }
    }
  }

  finish_shift(lines.empty() ? 0 : lines.back().first);

  SystemFile file{*sft, {}, options};
  for (auto& p : pendings) {
    try {
      file.potentials.emplace_back(
          p.name, Potential(*sft, p.memory, p.table, options.enum_cap));
    } catch (const Error& e) {
      throw ParseError(std::string("potential '") + p.name + "': " + e.what(),
                       p.header_line);
    }
  }
  return file;
}

std::string emit_system(const SystemFile& file) {
  std::ostringstream out;
  const std::size_t k = file.sft.alphabet_size();
  out << "[shift]\n";
  out << "alphabet = " << k << "\n";
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (j) out << ' ';
      out << (file.sft.transition(static_cast<int>(i) + 1,
                                  static_cast<int>(j) + 1)
                  ? '1'
                  : '0');
    }
    out << "\n";
  }

  for (const auto& [name, p] : file.potentials) {
    out << "\n[potential " << name << " memory=" << p.memory() << "]\n";
    for_each_word(file.sft, p.memory(), kDefaultEnumCap, [&](const Word& w) {
      out << word_text(w, k) << ' '
          << fmt17(p.value(std::span<const int>(w.data(), w.size()))) << "\n";
    });
  }

  out << "\n[options]\n";
  out << "tol = " << fmt17(file.options.tol) << "\n";
  out << "tol_beta = " << fmt17(file.options.tol_beta) << "\n";
  out << "enum_cap = " << file.options.enum_cap << "\n";
  out << "psi_floor = " << fmt17(file.options.psi_floor) << "\n";
  if (file.options.seed) out << "seed = " << *file.options.seed << "\n";
  return out.str();
}

}  // namespace indpress
