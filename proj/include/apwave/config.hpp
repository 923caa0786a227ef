#pragma once

#include <array>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "apwave/error.hpp"

namespace apwave
{

/// Mesh request; n[1] == 0 means "same as n[0]" on 2D problems.
using MeshSize = std::array<int, 2>;

struct RunConfig
{
  std::string problem;
  double epsilon = 0.0;          ///< <= 0 selects the problem default
  std::vector<double> epsilons;  ///< sweep for the vortex study
  std::string tableau = "ARS222";
  std::optional<double> cfl;
  std::vector<MeshSize> meshes;
  std::optional<double> t_final;
  double solver_tol = 1e-12;
  std::string out;               ///< output directory, empty = no files
  int observe_every = 1;
  std::optional<bool> advection_on;
  std::string t_final_rule = "literal";
  int jobs = 1;

  void validate() const
  {
    if (cfl && !(*cfl > 0.0 && *cfl < 1.0))
      throw ConfigError("cfl must lie in (0, 1)");
    if (t_final && !(*t_final > 0.0))
      throw ConfigError("t_final must be positive");
    if (!(solver_tol > 0.0))
      throw ConfigError("solver_tol must be positive");
    if (observe_every < 1)
      throw ConfigError("observe_every must be at least 1");
    if (jobs < 1)
      throw ConfigError("jobs must be at least 1");
    for (double e : epsilons)
      if (!(e > 0.0))
        throw ConfigError("epsilons must be positive");
    for (std::size_t k = 0; k < meshes.size(); ++k) {
      if (meshes[k][0] <= 0 || meshes[k][1] < 0)
        throw ConfigError("mesh sizes must be positive");
      if (k > 0 && meshes[k][0] <= meshes[k - 1][0])
        throw ConfigError("mesh sizes must be strictly increasing");
    }
  }
};

namespace detail
{

inline std::string_view trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  s = s.substr(b, e - b + 1);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
    s = s.substr(1, s.size() - 2);
  return s;
}

inline std::vector<std::string_view> split_list(std::string_view s)
{
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto end = s.find_first_of(", \t", pos);
    const auto tok = s.substr(pos, end == std::string_view::npos ? s.npos : end - pos);
    if (!tok.empty())
      out.push_back(tok);
    if (end == std::string_view::npos)
      break;
    pos = end + 1;
  }
  return out;
}

} // namespace detail

inline double parse_double(std::string_view s, std::string_view what)
{
  s = detail::trim(s);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ConfigError(std::string(what) + ": cannot parse '" + std::string(s) + "' as a number");
  return v;
}

inline int parse_int(std::string_view s, std::string_view what)
{
  s = detail::trim(s);
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ConfigError(std::string(what) + ": cannot parse '" + std::string(s) +
                      "' as an integer");
  return v;
}

inline bool parse_bool(std::string_view s, std::string_view what)
{
  s = detail::trim(s);
  if (s == "true" || s == "1" || s == "on" || s == "yes")
    return true;
  if (s == "false" || s == "0" || s == "off" || s == "no")
    return false;
  throw ConfigError(std::string(what) + ": expected a boolean, got '" + std::string(s) + "'");
}

/// "N" or "N1xN2".
inline MeshSize parse_mesh(std::string_view s)
{
  s = detail::trim(s);
  const auto x = s.find_first_of("xX");
  if (x == std::string_view::npos)
    return {parse_int(s, "mesh"), 0};
  return {parse_int(s.substr(0, x), "mesh"), parse_int(s.substr(x + 1), "mesh")};
}

inline std::vector<MeshSize> parse_mesh_list(std::string_view s)
{
  std::vector<MeshSize> out;
  for (auto tok : detail::split_list(s))
    out.push_back(parse_mesh(tok));
  return out;
}

inline std::vector<double> parse_double_list(std::string_view s, std::string_view what)
{
  std::vector<double> out;
  for (auto tok : detail::split_list(s))
    out.push_back(parse_double(tok, what));
  return out;
}

/// Apply one key=value setting; unknown keys are configuration errors.
inline void apply_setting(RunConfig& c, std::string_view key, std::string_view value)
{
  key = detail::trim(key);
  value = detail::trim(value);
  if (key == "problem")
    c.problem = value;
  else if (key == "epsilon")
    c.epsilon = parse_double(value, key);
  else if (key == "epsilons")
    c.epsilons = parse_double_list(value, key);
  else if (key == "tableau")
    c.tableau = value;
  else if (key == "cfl")
    c.cfl = parse_double(value, key);
  else if (key == "mesh")
    c.meshes = parse_mesh_list(value);
  else if (key == "t_final")
    c.t_final = parse_double(value, key);
  else if (key == "solver_tol")
    c.solver_tol = parse_double(value, key);
  else if (key == "out")
    c.out = value;
  else if (key == "observe_every")
    c.observe_every = parse_int(value, key);
  else if (key == "advection_on")
    c.advection_on = parse_bool(value, key);
  else if (key == "t_final_rule")
    c.t_final_rule = value;
  else if (key == "jobs")
    c.jobs = parse_int(value, key);
  else
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

/// Flat key = value text; '#' starts a comment.
inline void parse_config(std::istream& in, RunConfig& c)
{
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s(line);
    if (const auto h = s.find('#'); h != std::string_view::npos)
      s = s.substr(0, h);
    if (detail::trim(s).empty())
      continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(c, s.substr(0, eq), s.substr(eq + 1));
  }
}

inline RunConfig parse_config_text(const std::string& text)
{
  RunConfig c;
  std::istringstream in(text);
  parse_config(in, c);
  return c;
}

inline void load_config_file(const std::string& path, RunConfig& c)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file " + path);
  parse_config(in, c);
}

} // namespace apwave
