// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#include "magbloch/bands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include "magbloch/errors.hpp"
#include "magbloch/fiber.hpp"
#include "magbloch/format.hpp"
#include "magbloch/parallel.hpp"

namespace magbloch
{

void KPath::Check() const
{
  if (waypoints.size() < 2)
  {
    throw InvalidInput("a k-path needs at least 2 waypoints");
  }
  if (samples < 2)
  {
    throw InvalidInput("a k-path needs at least 2 samples per segment");
  }
}

std::vector<Vec3> KPath::Points() const
{
  Check();
  std::vector<Vec3> points;
  const std::size_t w = waypoints.size();
  for (std::size_t s = 0; s < w; s++)
  {
    const Vec3 &a = waypoints[s];
    const Vec3 &b = waypoints[(s + 1) % w];
    for (int t = 0; t < samples; t++)
    {
      points.push_back(a + (double(t) / samples) * (b - a));
    }
  }
  return points;
}

std::vector<double> KPath::ArcLength() const
{
  const auto points = Points();
  std::vector<double> arc(points.size(), 0.0);
  for (std::size_t j = 1; j < points.size(); j++)
  {
    arc[j] = arc[j - 1] + (points[j] - points[j - 1]).norm();
  }
  return arc;
}

int BandTable::FailureCount() const
{
  return int(std::count_if(errors.begin(), errors.end(),
                           [](const std::string &e) { return !e.empty(); }));
}

EigenResult SolveFiber(const Problem &problem, const TwistedGrid &grid, const Vec3 &k,
                       int n_bands, const EigenOptions &options)
{
  return SolveLowest(AssembleFiber(problem, grid, k), n_bands, options);
}

BandTable BandStructure(const Problem &problem, const TwistedGrid &grid,
                        const std::vector<Vec3> &k_points, int n_bands,
                        const BandOptions &options)
{
  if (grid.Mode() != GridMode::Fiber)
  {
    throw InvalidInput("band structure needs a fiber-mode grid");
  }
  if (n_bands < 1 || n_bands >= grid.DofCount())
  {
    throw InvalidInput("n_bands must be in [1, dofs)");
  }
  problem.RequireFluxInteger();

  BandTable table;
  table.k_points = k_points;
  table.n_bands = n_bands;
  const Index m = Index(k_points.size());
  table.values.setConstant(n_bands, m, std::numeric_limits<double>::quiet_NaN());
  table.residuals.setConstant(n_bands, m, std::numeric_limits<double>::quiet_NaN());
  table.errors.assign(m, "");
  if (m == 0)
  {
    return table;
  }

  ParallelFor(
      std::size_t(m),
      [&](std::size_t j)
      {
        try
        {
          const FiberSystem system = AssembleFiber(problem, grid, k_points[j]);
          const EigenResult result = SolveLowest(system, n_bands, options.solver);
          for (int n = 0; n < n_bands; n++)
          {
            table.values(n, j) = result.values(n);
            table.residuals(n, j) = result.residuals[n];
          }
        }
        catch (const Error &e)
        {
          table.errors[j] = e.what();
        }
      },
      options.workers);
  return table;
}

BandTable BandStructure(const Problem &problem, const TwistedGrid &grid, const KPath &path,
                        int n_bands, const BandOptions &options)
{
  return BandStructure(problem, grid, path.Points(), n_bands, options);
}

std::vector<Vec3> UniformKGrid(int n)
{
  if (n < 1)
  {
    throw InvalidInput("k-grid size must be positive");
  }
  std::vector<Vec3> points;
  points.reserve(std::size_t(n) * n * n);
  for (int i3 = 0; i3 < n; i3++)
  {
    for (int i2 = 0; i2 < n; i2++)
    {
      for (int i1 = 0; i1 < n; i1++)
      {
        points.emplace_back(double(i1) / n, double(i2) / n, double(i3) / n);
      }
    }
  }
  return points;
}

FlatBandReport FlatBandScan(const Problem &problem, const TwistedGrid &grid, int k_grid,
                            int n_bands, const BandOptions &options)
{
  FlatBandReport report;
  report.k_grid = k_grid;
  report.n_bands = n_bands;
  report.grid_sizes = grid.Sizes();
  report.tol = options.solver.tol;
  report.seed = options.solver.seed;
  report.table = BandStructure(problem, grid, UniformKGrid(k_grid), n_bands, options);
  report.failed_points = report.table.FailureCount();
  report.band_min.assign(n_bands, std::numeric_limits<double>::infinity());
  report.band_max.assign(n_bands, -std::numeric_limits<double>::infinity());
  for (Index j = 0; j < report.table.Points(); j++)
  {
    if (!report.table.Ok(j))
    {
      continue;
    }
    for (int n = 0; n < n_bands; n++)
    {
      report.band_min[n] = std::min(report.band_min[n], report.table.values(n, j));
      report.band_max[n] = std::max(report.band_max[n], report.table.values(n, j));
    }
  }
  report.oscillation.resize(n_bands);
  for (int n = 0; n < n_bands; n++)
  {
    report.oscillation[n] = std::max(0.0, report.band_max[n] - report.band_min[n]);
  }
  report.min_oscillation = *std::min_element(report.oscillation.begin(), report.oscillation.end());
  return report;
}

void WriteBandCsv(const BandTable &table, std::ostream &out)
{
  out << "k1,k2,k3,band_index,lambda,residual\n";
  for (Index j = 0; j < table.Points(); j++)
  {
    if (!table.Ok(j))
    {
      continue;
    }
    const Vec3 &k = table.k_points[j];
    for (int n = 0; n < table.n_bands; n++)
    {
      out << FormatNumber(k(0)) << ',' << FormatNumber(k(1)) << ',' << FormatNumber(k(2)) << ','
          << n + 1 << ',' << FormatNumber(table.values(n, j)) << ','
          << FormatNumber(table.residuals(n, j)) << '\n';
    }
  }
}

void WriteBandPlot(const BandTable &table, const std::vector<double> &arc_length,
                   std::ostream &out)
{
  if (Index(arc_length.size()) != table.Points())
  {
    throw InvalidInput("arc length and band table sizes differ");
  }
  out << "arc_length,band_index,lambda\n";
  for (int n = 0; n < table.n_bands; n++)
  {
    for (Index j = 0; j < table.Points(); j++)
    {
      if (table.Ok(j))
      {
        out << FormatNumber(arc_length[j]) << ',' << n + 1 << ','
            << FormatNumber(table.values(n, j)) << '\n';
      }
    }
  }
}

nlohmann::json ToJson(const FlatBandReport &report)
{
  nlohmann::json bands = nlohmann::json::array();
  for (int n = 0; n < report.n_bands; n++)
  {
    bands.push_back({{"band_index", n + 1},
                     {"min", report.band_min[n]},
                     {"max", report.band_max[n]},
                     {"oscillation", report.oscillation[n]}});
  }
  return {{"schema_version", 1},
          {"k_grid", report.k_grid},
          {"n_bands", report.n_bands},
          {"grid", report.grid_sizes},
          {"solver", {{"tol", report.tol}, {"seed", report.seed}}},
          {"bands", bands},
          {"min_oscillation", report.min_oscillation},
          {"failed_points", report.failed_points}};
}

}  // namespace magbloch
