// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#include "scenario.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace magbloch::cli
{

namespace
{

using Json = nlohmann::json;

void Strict(const Json &j, const std::set<std::string> &allowed, const std::string &where)
{
  if (!j.is_object())
  {
    throw ConfigError("key '" + where + "' must be an object");
  }
  for (const auto &item : j.items())
  {
    if (!allowed.count(item.key()))
    {
      throw ConfigError("unknown key '" + where + "." + item.key() + "'");
    }
  }
}

double Number(const Json &j, const std::string &key)
{
  if (!j.is_number())
  {
    throw ConfigError("key '" + key + "' must be a number");
  }
  return j.get<double>();
}

double Positive(const Json &j, const std::string &key)
{
  const double x = Number(j, key);
  if (!(x > 0.0))
  {
    throw ConfigError("key '" + key + "' must be positive");
  }
  return x;
}

int Integer(const Json &j, const std::string &key, int min)
{
  if (!j.is_number_integer() || j.get<long long>() < min)
  {
    throw ConfigError("key '" + key + "' must be an integer >= " + std::to_string(min));
  }
  return j.get<int>();
}

bool Boolean(const Json &j, const std::string &key)
{
  if (!j.is_boolean())
  {
    throw ConfigError("key '" + key + "' must be true or false");
  }
  return j.get<bool>();
}

template <std::size_t N>
std::array<double, N> Vector(const Json &j, const std::string &key)
{
  if (!j.is_array() || j.size() != N)
  {
    throw ConfigError("key '" + key + "' must be an array of " + std::to_string(N) + " numbers");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; i++)
  {
    out[i] = Number(j[i], key);
  }
  return out;
}

PencilPoint Point(const Json &j, const std::string &key)
{
  Strict(j, {"khat", "lambda"}, key);
  if (!j.contains("khat") || !j.contains("lambda"))
  {
    throw ConfigError("key '" + key + "' needs 'khat' and 'lambda'");
  }
  return {Vector<2>(j.at("khat"), key + ".khat"), Number(j.at("lambda"), key + ".lambda")};
}

void ParseSolver(const Json &j, EigenOptions &solver)
{
  Strict(j, {"tol", "seed", "max_iterations", "guard", "dense_threshold"}, "solver");
  if (j.contains("tol"))
  {
    solver.tol = Positive(j.at("tol"), "solver.tol");
  }
  if (j.contains("seed"))
  {
    if (!j.at("seed").is_number_unsigned())
    {
      throw ConfigError("key 'solver.seed' must be an unsigned 64-bit integer");
    }
    solver.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("max_iterations"))
  {
    solver.max_iterations = Integer(j.at("max_iterations"), "solver.max_iterations", 1);
  }
  if (j.contains("guard"))
  {
    solver.guard = Integer(j.at("guard"), "solver.guard", 1);
  }
  if (j.contains("dense_threshold"))
  {
    solver.dense_threshold = Integer(j.at("dense_threshold"), "solver.dense_threshold", 0);
  }
}

void ParseBody(const Json &root, ScenarioConfig &cfg)
{
  Strict(root,
         {"problem", "grid", "solver", "n_bands", "bands", "scan", "pencil", "crosscheck",
          "dump_matrix", "output_dir"},
         "<root>");
  if (!root.contains("problem"))
  {
    throw ConfigError("missing key 'problem'");
  }
  try
  {
    cfg.problem = ParseProblemDefinition(root.at("problem"));
  }
  catch (const ConfigError &)
  {
    throw;
  }
  catch (const InvalidInput &e)
  {
    throw ConfigError(std::string("in key 'problem': ") + e.what());
  }
  if (root.contains("grid"))
  {
    const Json &g = root.at("grid");
    Strict(g, {"sizes", "mode"}, "grid");
    if (g.contains("sizes"))
    {
      const auto sizes = g.at("sizes");
      if (!sizes.is_array() || sizes.size() != 3)
      {
        throw ConfigError("key 'grid.sizes' must be an array of 3 integers");
      }
      for (int d = 0; d < 3; d++)
      {
        cfg.grid_sizes[d] = Integer(sizes[d], "grid.sizes", 4);
      }
    }
    if (g.contains("mode"))
    {
      if (!g.at("mode").is_string())
      {
        throw ConfigError("key 'grid.mode' must be 'fiber' or 'slab'");
      }
      try
      {
        cfg.mode = ParseGridMode(g.at("mode").get<std::string>());
      }
      catch (const InvalidInput &e)
      {
        throw ConfigError(std::string("key 'grid.mode': ") + e.what());
      }
    }
  }
  if (root.contains("solver"))
  {
    ParseSolver(root.at("solver"), cfg.solver);
  }
  if (root.contains("n_bands"))
  {
    cfg.n_bands = Integer(root.at("n_bands"), "n_bands", 1);
  }
  if (root.contains("bands"))
  {
    const Json &b = root.at("bands");
    Strict(b, {"waypoints", "samples"}, "bands");
    KPath path;
    if (!b.contains("waypoints") || !b.at("waypoints").is_array())
    {
      throw ConfigError("key 'bands.waypoints' must be an array of k-points");
    }
    for (const auto &w : b.at("waypoints"))
    {
      const auto k = Vector<3>(w, "bands.waypoints");
      path.waypoints.emplace_back(k[0], k[1], k[2]);
    }
    if (b.contains("samples"))
    {
      path.samples = Integer(b.at("samples"), "bands.samples", 2);
    }
    try
    {
      path.Check();
    }
    catch (const InvalidInput &e)
    {
      throw ConfigError(std::string("key 'bands': ") + e.what());
    }
    cfg.path = path;
  }
  if (root.contains("scan"))
  {
    const Json &s = root.at("scan");
    Strict(s, {"k_grid"}, "scan");
    if (!s.contains("k_grid"))
    {
      throw ConfigError("missing key 'scan.k_grid'");
    }
    cfg.k_grid = Integer(s.at("k_grid"), "scan.k_grid", 1);
  }
  if (root.contains("pencil"))
  {
    const Json &p = root.at("pencil");
    Strict(p, {"points", "tol_null", "tol_real", "tol_singular"}, "pencil");
    if (!p.contains("points") || !p.at("points").is_array() || p.at("points").empty())
    {
      throw ConfigError("key 'pencil.points' must be a non-empty array");
    }
    for (std::size_t i = 0; i < p.at("points").size(); i++)
    {
      cfg.pencil_points.push_back(
          Point(p.at("points")[i], "pencil.points[" + std::to_string(i) + "]"));
    }
    if (p.contains("tol_null"))
    {
      cfg.pencil.tol_null = Positive(p.at("tol_null"), "pencil.tol_null");
    }
    if (p.contains("tol_real"))
    {
      cfg.pencil.tol_real = Positive(p.at("tol_real"), "pencil.tol_real");
    }
    if (p.contains("tol_singular"))
    {
      cfg.pencil.tol_singular = Positive(p.at("tol_singular"), "pencil.tol_singular");
    }
  }
  if (root.contains("crosscheck"))
  {
    const Json &c = root.at("crosscheck");
    Strict(c, {"khat", "lambda", "k3_grid", "fiber_n3", "allowance"}, "crosscheck");
    Json point = Json::object();
    for (const char *key : {"khat", "lambda"})
    {
      if (c.contains(key))
      {
        point[key] = c.at(key);
      }
    }
    cfg.crosscheck_point = Point(point, "crosscheck");
    if (c.contains("k3_grid"))
    {
      cfg.k3_grid = Integer(c.at("k3_grid"), "crosscheck.k3_grid", 2);
    }
    if (c.contains("fiber_n3"))
    {
      cfg.fiber_n3 = Integer(c.at("fiber_n3"), "crosscheck.fiber_n3", 4);
    }
    if (c.contains("allowance"))
    {
      cfg.allowance = Number(c.at("allowance"), "crosscheck.allowance");
      if (cfg.allowance < 0.0)
      {
        throw ConfigError("key 'crosscheck.allowance' must be non-negative");
      }
    }
  }
  if (root.contains("dump_matrix"))
  {
    cfg.dump_matrix = Boolean(root.at("dump_matrix"), "dump_matrix");
  }
  if (root.contains("output_dir"))
  {
    if (!root.at("output_dir").is_string())
    {
      throw ConfigError("key 'output_dir' must be a string");
    }
    cfg.output_dir = root.at("output_dir").get<std::string>();
  }
}

}  // namespace

ScenarioConfig ParseScenario(const std::string &text)
{
  Json root;
  try
  {
    root = Json::parse(text);
  }
  catch (const Json::parse_error &e)
  {
    std::size_t line = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); i++)
    {
      line += text[i] == '\n' ? 1 : 0;
    }
    throw ConfigError("syntax error at line " + std::to_string(line) + ": " + e.what());
  }
  ScenarioConfig cfg;
  try
  {
    ParseBody(root, cfg);
  }
  catch (const ConfigError &)
  {
    throw;
  }
  catch (const Json::exception &e)
  {
    throw ConfigError(e.what());
  }
  return cfg;
}

ScenarioConfig LoadScenario(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw ConfigError("cannot read config file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseScenario(buf.str());
}

std::array<int, 3> ParseGridSizes(const std::string &text)
{
  std::array<int, 3> sizes{};
  char tail = 0;
  if (std::sscanf(text.c_str(), "%d,%d,%d%c", &sizes[0], &sizes[1], &sizes[2], &tail) != 3)
  {
    throw ConfigError("--grid expects n1,n2,n3 (got '" + text + "')");
  }
  return sizes;
}

std::string Fnv1aHex(const std::string &bytes)
{
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes)
  {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace magbloch::cli
