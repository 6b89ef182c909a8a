// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#include "magbloch/crosscheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include "magbloch/errors.hpp"
#include "magbloch/parallel.hpp"

namespace magbloch
{

namespace
{

double CircleDistance(double a, double b)
{
  double d = std::fmod(std::abs(a - b), 1.0);
  return std::min(d, 1.0 - d);
}

double Directed(const std::vector<double> &from, const std::vector<double> &to)
{
  double out = 0.0;
  for (double a : from)
  {
    double best = std::numeric_limits<double>::infinity();
    for (double b : to)
    {
      best = std::min(best, CircleDistance(a, b));
    }
    out = std::max(out, best);
  }
  return out;
}

}  // namespace

double CircleHausdorff(const std::vector<double> &a, const std::vector<double> &b)
{
  if (a.empty() && b.empty())
  {
    return 0.0;
  }
  if (a.empty() || b.empty())
  {
    return std::numeric_limits<double>::infinity();
  }
  return std::max(Directed(a, b), Directed(b, a));
}

CrosscheckReport Crosscheck(const Problem &problem, const TwistedGrid &slab_grid,
                            const TwistedGrid &fiber_grid, const std::array<double, 2> &khat,
                            double lambda, const CrosscheckOptions &options)
{
  if (slab_grid.Mode() != GridMode::Slab || fiber_grid.Mode() != GridMode::Fiber)
  {
    throw InvalidInput("crosscheck needs one slab grid and one fiber grid");
  }
  if (slab_grid.Size(0) != fiber_grid.Size(0) || slab_grid.Size(1) != fiber_grid.Size(1) ||
      slab_grid.FluxInteger() != fiber_grid.FluxInteger())
  {
    throw InvalidInput("slab and fiber grids must share n1, n2 and the flux");
  }
  if (options.k3_grid < 2)
  {
    throw InvalidInput("k3 grid needs at least 2 points");
  }

  CrosscheckReport report;
  report.khat = khat;
  report.lambda = lambda;
  report.k3_grid = options.k3_grid;
  report.tolerance = 2.0 / options.k3_grid + options.allowance;

  report.pencil = RunPencil(problem, slab_grid, khat, lambda, options.pencil);
  report.pencil_k3 = PropagatingK3(report.pencil.multipliers);

  const int nk = options.k3_grid;
  // The fiber stencil carries k3 in the covariant term, so the discrete band functions are
  // even in k3 exactly but 1-periodic only up to discretization error. Sampling the
  // centered interval [-1/2, 1/2] keeps the plane-wave content of the low bands smallest.
  std::vector<Vec3> samples;
  for (int j = 0; j <= nk; j++)
  {
    samples.emplace_back(khat[0], khat[1], -0.5 + double(j) / nk);
  }
  BandOptions band_options;
  band_options.solver = options.solver;
  const BandTable table =
      BandStructure(problem, fiber_grid, samples, options.n_bands, band_options);
  if (table.FailureCount() > 0)
  {
    throw SolverError("fiber solve failed on the k3 grid", {});
  }

  // Brackets [j, j + 1] where band n - lambda changes sign.
  struct Bracket
  {
    int band;
    double lo, hi, f_lo;
  };
  std::vector<Bracket> brackets;
  for (int n = 0; n < options.n_bands; n++)
  {
    for (int j = 0; j < nk; j++)
    {
      const double a = table.values(n, j) - lambda;
      const double b = table.values(n, j + 1) - lambda;
      if ((a < 0.0) != (b < 0.0))
      {
        brackets.push_back({n, samples[j](2), samples[j + 1](2), a});
      }
    }
  }

  report.fiber_roots.resize(brackets.size());
  ParallelFor(brackets.size(),
              [&](std::size_t i)
              {
                Bracket br = brackets[i];
                FiberRoot root;
                root.band_index = br.band + 1;
                root.converged = false;
                try
                {
                  for (int it = 0; it < options.bisection_max; it++)
                  {
                    if (br.hi - br.lo <= options.bisection_tol)
                    {
                      root.converged = true;
                      break;
                    }
                    const double mid = 0.5 * (br.lo + br.hi);
                    const EigenResult r =
                        SolveFiber(problem, fiber_grid, Vec3(khat[0], khat[1], mid),
                                   br.band + 1, options.solver);
                    const double f = r.values(br.band) - lambda;
                    if ((f < 0.0) == (br.f_lo < 0.0))
                    {
                      br.lo = mid;
                      br.f_lo = f;
                    }
                    else
                    {
                      br.hi = mid;
                    }
                  }
                  root.converged = root.converged || br.hi - br.lo <= options.bisection_tol;
                }
                catch (const Error &)
                {
                  root.converged = false;
                }
                const double mid = 0.5 * (br.lo + br.hi);
                root.k3 = mid - std::floor(mid);
                report.fiber_roots[i] = root;
              });

  for (const auto &root : report.fiber_roots)
  {
    if (root.converged)
    {
      report.fiber_k3.push_back(root.k3);
    }
    else
    {
      report.flagged++;
    }
  }
  std::sort(report.fiber_k3.begin(), report.fiber_k3.end());
  report.distance = CircleHausdorff(report.pencil_k3, report.fiber_k3);
  report.pass = report.flagged == 0 && report.distance <= report.tolerance;
  return report;
}

nlohmann::json ToJson(const CrosscheckReport &report)
{
  nlohmann::json roots = nlohmann::json::array();
  for (const auto &r : report.fiber_roots)
  {
    roots.push_back({{"band_index", r.band_index}, {"k3", r.k3}, {"converged", r.converged}});
  }
  const bool finite = std::isfinite(report.distance);
  return {{"schema_version", 1},
          {"khat", report.khat},
          {"lambda", report.lambda},
          {"k3_grid", report.k3_grid},
          {"pencil_k3", report.pencil_k3},
          {"fiber_k3", report.fiber_k3},
          {"fiber_roots", roots},
          {"flagged", report.flagged},
          {"distance", finite ? nlohmann::json(report.distance) : nlohmann::json("inf")},
          {"tolerance", report.tolerance},
          {"pass", report.pass},
          {"pencil", ToJson(report.pencil)}};
}

}  // namespace magbloch
