// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <magbloch/bands.hpp>
#include <magbloch/crosscheck.hpp>
#include <magbloch/errors.hpp>
#include <magbloch/fiber.hpp>
#include <magbloch/format.hpp>
#include <magbloch/parallel.hpp>
#include <magbloch/pencil.hpp>
#include <magbloch/problem_io.hpp>
#include "scenario.hpp"

#ifndef MAGBLOCH_VERSION
#define MAGBLOCH_VERSION "unknown"
#endif

namespace magbloch::cli
{

namespace fs = std::filesystem;

namespace
{

std::string UtcNow()
{
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string ReadFile(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw ConfigError("cannot read config file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string KhatLabel(const PencilPoint &p)
{
  return "khat=(" + FormatNumber(p.khat[0]) + "," + FormatNumber(p.khat[1]) +
         ") lambda=" + FormatNumber(p.lambda);
}

// Collects output files in memory; they are written by one writer after all tasks join.
class OutputSet
{
public:
  void Add(const std::string &name, std::string content)
  {
    files_.emplace_back(name, std::move(content));
  }
  void Json(const std::string &name, const nlohmann::json &j) { Add(name, j.dump(2) + "\n"); }

  std::vector<std::string> WriteAll(const fs::path &dir) const
  {
    std::vector<std::string> names;
    for (const auto &[name, content] : files_)
    {
      const fs::path path = dir / name;
      std::ofstream out(path, std::ios::binary);
      if (!out)
      {
        throw Error("cannot write " + path.string());
      }
      out << content;
      names.push_back(name);
    }
    return names;
  }

private:
  std::vector<std::pair<std::string, std::string>> files_;
};

void RequireMode(const std::string &command, GridMode have, GridMode want)
{
  if (have != want)
  {
    throw ConfigError("command '" + command + "' needs a " + GridModeName(want) +
                      "-mode grid (got " + GridModeName(have) + ")");
  }
}

void CheckCombination(const std::string &command, const ScenarioConfig &cfg)
{
  if (command == "bands")
  {
    RequireMode(command, cfg.mode, GridMode::Fiber);
    if (!cfg.path)
    {
      throw ConfigError("command 'bands' needs a 'bands' block with waypoints");
    }
  }
  else if (command == "scan")
  {
    RequireMode(command, cfg.mode, GridMode::Fiber);
    if (cfg.k_grid < 1)
    {
      throw ConfigError("command 'scan' needs a 'scan' block with k_grid");
    }
  }
  else if (command == "pencil")
  {
    RequireMode(command, cfg.mode, GridMode::Slab);
    if (cfg.pencil_points.empty())
    {
      throw ConfigError("command 'pencil' needs a 'pencil' block with points");
    }
  }
  else if (command == "crosscheck")
  {
    RequireMode(command, cfg.mode, GridMode::Slab);
    if (!cfg.crosscheck_point)
    {
      throw ConfigError("command 'crosscheck' needs a 'crosscheck' block");
    }
  }
  else if (command != "validate")
  {
    throw ConfigError("unknown command '" + command + "'");
  }
  if (command != "validate" && cfg.n_bands >= cfg.grid_sizes[0] * cfg.grid_sizes[1])
  {
    throw ConfigError("n_bands is too large for the grid");
  }
}

std::string BandCsv(const BandTable &table)
{
  std::ostringstream out;
  WriteBandCsv(table, out);
  return out.str();
}

void RecordBandTasks(const BandTable &table, RunManifest &manifest)
{
  for (Index j = 0; j < table.Points(); j++)
  {
    const Vec3 &k = table.k_points[j];
    manifest.tasks.push_back({"k=(" + FormatNumber(k(0)) + "," + FormatNumber(k(1)) + "," +
                                  FormatNumber(k(2)) + ")",
                              table.Ok(j), table.errors[j]});
  }
}

}  // namespace

bool RunManifest::Ok() const
{
  for (const auto &t : tasks)
  {
    if (!t.ok)
    {
      return false;
    }
  }
  return true;
}

nlohmann::json RunManifest::ToJson() const
{
  nlohmann::json tasks_json = nlohmann::json::array();
  for (const auto &t : tasks)
  {
    nlohmann::json entry = {{"name", t.name}, {"status", t.ok ? "ok" : "failed"}};
    if (!t.message.empty())
    {
      entry["message"] = t.message;
    }
    tasks_json.push_back(entry);
  }
  return {{"schema_version", 1},
          {"tool", "magbloch"},
          {"version", MAGBLOCH_VERSION},
          {"command", command},
          {"config", config_path},
          {"config_hash", config_hash},
          {"started_at", started_at},
          {"finished_at", finished_at},
          {"status", Ok() ? "ok" : "failed"},
          {"tasks", tasks_json},
          {"outputs", outputs}};
}

int Run(const RunRequest &request, std::ostream &out, std::ostream &err)
{
  RunManifest manifest;
  manifest.command = request.command;
  manifest.config_path = request.config_path;
  manifest.started_at = UtcNow();

  // Everything up to the first assembly is validation; failures here exit with 2.
  ScenarioConfig cfg;
  std::optional<Problem> built;
  fs::path out_dir;
  try
  {
    const std::string text = ReadFile(request.config_path);
    manifest.config_hash = Fnv1aHex(text);
    cfg = ParseScenario(text);
    if (request.grid)
    {
      cfg.grid_sizes = *request.grid;
    }
    if (request.mode)
    {
      cfg.mode = *request.mode;
    }
    CheckCombination(request.command, cfg);
    built = MakeProblem(cfg.problem);
    if (request.command != "validate")
    {
      built->RequireFluxInteger();
      TwistedGrid(cfg.mode, cfg.grid_sizes, *built->FluxInteger());
    }
    if (request.out_dir)
    {
      out_dir = *request.out_dir;
    }
    else if (cfg.output_dir)
    {
      out_dir = *cfg.output_dir;
    }
    else if (request.command != "validate")
    {
      throw ConfigError("command '" + request.command + "' needs --out <dir>");
    }
  }
  catch (const FluxQuantizationError &e)
  {
    err << "rejected before assembly: " << e.what() << '\n';
    return 2;
  }
  catch (const Error &e)
  {
    err << "config error: " << e.what() << '\n';
    return 2;
  }

  const Problem &problem = *built;
  OutputSet outputs;
  try
  {
    if (request.command == "validate")
    {
      const ValidationReport report = Validate(problem, 17, cfg.problem.symmetrize);
      nlohmann::json j = ToJson(report);
      j["schema_version"] = 1;
      out << j.dump(2) << '\n';
      outputs.Json("validation.json", j);
      manifest.tasks.push_back({"validate", report.Pass(), ""});
      for (const auto &f : report.Failures())
      {
        manifest.tasks.back().message += (manifest.tasks.back().message.empty() ? "" : "; ") + f;
      }
    }
    else
    {
      const TwistedGrid grid(cfg.mode, cfg.grid_sizes, *problem.FluxInteger());
      BandOptions band_options;
      band_options.solver = cfg.solver;
      if (request.command == "bands")
      {
        const BandTable table = BandStructure(problem, grid, *cfg.path, cfg.n_bands, band_options);
        RecordBandTasks(table, manifest);
        outputs.Add("bands.csv", BandCsv(table));
        std::ostringstream plot;
        WriteBandPlot(table, cfg.path->ArcLength(), plot);
        outputs.Add("bands_plot.csv", plot.str());
        if (cfg.dump_matrix)
        {
          const SparseMatrix h = AssembleFiber(problem, grid, table.k_points.front()).H;
          fs::create_directories(out_dir);
          WriteCoordinateFile(h, out_dir / "matrix.txt");
          manifest.outputs.push_back("matrix.txt");
        }
      }
      else if (request.command == "scan")
      {
        const FlatBandReport report =
            FlatBandScan(problem, grid, cfg.k_grid, cfg.n_bands, band_options);
        RecordBandTasks(report.table, manifest);
        outputs.Json("scan.json", ToJson(report));
        outputs.Add("scan_bands.csv", BandCsv(report.table));
      }
      else if (request.command == "pencil")
      {
        const std::size_t m = cfg.pencil_points.size();
        std::vector<std::optional<PencilRun>> runs(m);
        std::vector<std::string> errors(m);
        ParallelFor(m,
                    [&](std::size_t i)
                    {
                      const auto &p = cfg.pencil_points[i];
                      try
                      {
                        runs[i] = RunPencil(problem, grid, p.khat, p.lambda, cfg.pencil);
                      }
                      catch (const Error &e)
                      {
                        errors[i] = e.what();
                      }
                    });
        nlohmann::json list = nlohmann::json::array();
        for (std::size_t i = 0; i < m; i++)
        {
          const auto &p = cfg.pencil_points[i];
          if (runs[i])
          {
            list.push_back(ToJson(*runs[i]));
            std::ostringstream plot;
            WriteMultiplierPlot(runs[i]->multipliers, plot);
            outputs.Add("multipliers_plot_" + std::to_string(i) + ".csv", plot.str());
          }
          else
          {
            list.push_back({{"khat", p.khat}, {"lambda", p.lambda}, {"error", errors[i]}});
          }
          manifest.tasks.push_back({KhatLabel(p), runs[i].has_value(), errors[i]});
        }
        outputs.Json("pencil.json", {{"schema_version", 1},
                                      {"grid", cfg.grid_sizes},
                                      {"runs", list}});
        if (cfg.dump_matrix)
        {
          const auto &p = cfg.pencil_points.front();
          fs::create_directories(out_dir);
          WriteCoordinateFile(AssembleSlab(problem, grid, p.khat, p.lambda).H,
                              out_dir / "matrix.txt");
          manifest.outputs.push_back("matrix.txt");
        }
      }
      else if (request.command == "crosscheck")
      {
        const TwistedGrid fiber(GridMode::Fiber,
                                {cfg.grid_sizes[0], cfg.grid_sizes[1],
                                 cfg.fiber_n3.value_or(cfg.grid_sizes[2])},
                                *problem.FluxInteger());
        CrosscheckOptions options;
        options.n_bands = cfg.n_bands;
        options.k3_grid = cfg.k3_grid;
        options.allowance = cfg.allowance;
        options.solver = cfg.solver;
        options.pencil = cfg.pencil;
        const auto &p = *cfg.crosscheck_point;
        const CrosscheckReport report = Crosscheck(problem, grid, fiber, p.khat, p.lambda, options);
        outputs.Json("crosscheck.json", ToJson(report));
        manifest.tasks.push_back(
            {KhatLabel(p), report.pass,
             report.pass ? "" : "distance " + FormatNumber(report.distance) + " exceeds " +
                                    FormatNumber(report.tolerance)});
      }
    }
  }
  catch (const Error &e)
  {
    manifest.tasks.push_back({request.command, false, e.what()});
  }

  int code = manifest.Ok() ? 0 : 1;
  if (!out_dir.empty())
  {
    try
    {
      fs::create_directories(out_dir);
      for (const auto &name : outputs.WriteAll(out_dir))
      {
        manifest.outputs.push_back(name);
      }
      manifest.finished_at = UtcNow();
      std::ofstream m(out_dir / "manifest.json", std::ios::binary);
      m << manifest.ToJson().dump(2) << '\n';
      if (!m)
      {
        throw Error("cannot write manifest");
      }
    }
    catch (const std::exception &e)
    {
      err << "I/O error: " << e.what() << '\n';
      return 1;
    }
  }
  for (const auto &t : manifest.tasks)
  {
    if (!t.ok)
    {
      err << "task failed: " << t.name << (t.message.empty() ? "" : ": " + t.message) << '\n';
    }
  }
  return code;
}

}  // namespace magbloch::cli
