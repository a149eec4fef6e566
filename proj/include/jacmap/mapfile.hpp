#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "jacmap/error.hpp"
#include "jacmap/parse.hpp"
#include "jacmap/polymap.hpp"

namespace jacmap {

// Line-oriented map description:
//
//   # comment
//   vars: x y z
//   f1 = x + y*z
//   f2 = y
//
// Components are f1..fm, each exactly once, in any order.
inline PolyMap parse_map(const std::string& text) {
  auto trim = [](std::string s) {
    auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    return s;
  };
  std::optional<Vars> vars;
  std::map<std::size_t, std::string> exprs;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("vars:", 0) == 0) {
      if (vars) throw ParseError("duplicate vars line", lineno);
      std::istringstream names(line.substr(5));
      std::vector<std::string> v;
      for (std::string n; names >> n;) v.push_back(n);
      if (v.empty()) throw ParseError("vars line declares no variables", lineno);
      vars = Vars(v);
      continue;
    }
    auto eq = line.find('=');
    std::string lhs = eq == std::string::npos ? "" : trim(line.substr(0, eq));
    if (lhs.size() < 2 || lhs[0] != 'f' || !std::all_of(lhs.begin() + 1, lhs.end(), ::isdigit))
      throw ParseError("expected 'vars:' or 'f<k> = <expr>'", lineno);
    std::size_t k = std::stoul(lhs.substr(1));
    if (k == 0) throw ParseError("components are numbered from 1", lineno);
    if (!exprs.emplace(k, trim(line.substr(eq + 1))).second) throw ParseError("duplicate component " + lhs, lineno);
    if (!vars) throw ParseError("component before vars line", lineno);
  }
  if (!vars) throw ParseError("missing vars line", lineno);
  if (exprs.empty()) throw ParseError("no components", lineno);
  std::vector<Polynomial> comps;
  std::size_t expected = 1;
  for (const auto& [k, e] : exprs) {
    if (k != expected) throw ParseError("component f" + std::to_string(expected) + " missing", lineno);
    try {
      comps.push_back(parse_poly(e, *vars));
    } catch (const ParseError& err) {
      throw ParseError("in f" + std::to_string(k) + ": " + err.what(), lineno);
    }
    ++expected;
  }
  return PolyMap(*vars, std::move(comps));
}

inline PolyMap load_map(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot read " + file);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_map(buf.str());
}

inline std::string format_map(const PolyMap& f) {
  std::string out = "vars:";
  for (const std::string& v : f.vars().names()) out += " " + v;
  out += "\n";
  for (std::size_t i = 0; i < f.target_dim(); ++i)
    out += "f" + std::to_string(i + 1) + " = " + format(f[i]) + "\n";
  return out;
}

}  // namespace jacmap
