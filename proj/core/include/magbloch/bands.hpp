// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGBLOCH_BANDS_HPP
#define MAGBLOCH_BANDS_HPP

#include <ostream>
#include <string>
#include <vector>
#include <nlohmann/json.hpp>
#include "magbloch/eigensolver.hpp"
#include "magbloch/grid.hpp"
#include "magbloch/problem.hpp"

namespace magbloch
{

// Closed polyline through the waypoints: segment s runs from waypoint s to waypoint s + 1,
// the last one back to waypoint 0. Each segment contributes `samples` points, its start
// included and its end excluded, so the path has waypoints * samples points.
struct KPath
{
  std::vector<Vec3> waypoints;
  int samples = 2;

  void Check() const;
  std::vector<Vec3> Points() const;
  // Cumulative Euclidean distance along the path, one entry per point.
  std::vector<double> ArcLength() const;
};

struct BandOptions
{
  EigenOptions solver;
  int workers = 0;
};

struct BandTable
{
  std::vector<Vec3> k_points;
  int n_bands = 0;
  Eigen::MatrixXd values;     // n_bands x k_points, ascending per column, NaN on failure
  Eigen::MatrixXd residuals;  // same layout
  std::vector<std::string> errors;  // empty string where the k-point succeeded

  Index Points() const { return Index(k_points.size()); }
  bool Ok(Index j) const { return errors[j].empty(); }
  int FailureCount() const;
};

// Lowest n_bands eigenpairs of the fiber operator at one k.
EigenResult SolveFiber(const Problem &problem, const TwistedGrid &grid, const Vec3 &k,
                       int n_bands, const EigenOptions &options = {});

// Solves every k-point on the worker pool. A solver failure is recorded for its k-point
// and does not stop the others.
BandTable BandStructure(const Problem &problem, const TwistedGrid &grid,
                        const std::vector<Vec3> &k_points, int n_bands,
                        const BandOptions &options = {});
BandTable BandStructure(const Problem &problem, const TwistedGrid &grid, const KPath &path,
                        int n_bands, const BandOptions &options = {});

// Uniform grid k_d = i / n, i in [0, n).
std::vector<Vec3> UniformKGrid(int n);

struct FlatBandReport
{
  int k_grid = 0;
  int n_bands = 0;
  std::array<int, 3> grid_sizes{0, 0, 0};
  double tol = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> band_min, band_max, oscillation;
  double min_oscillation = 0.0;
  int failed_points = 0;
  BandTable table;
};

FlatBandReport FlatBandScan(const Problem &problem, const TwistedGrid &grid, int k_grid,
                            int n_bands, const BandOptions &options = {});

// CSV with header k1,k2,k3,band_index,lambda,residual; band_index starts at 1. Failed
// k-points are skipped.
void WriteBandCsv(const BandTable &table, std::ostream &out);
// Plot series: arc_length,band_index,lambda per point and band.
void WriteBandPlot(const BandTable &table, const std::vector<double> &arc_length,
                   std::ostream &out);

nlohmann::json ToJson(const FlatBandReport &report);

}  // namespace magbloch

#endif  // MAGBLOCH_BANDS_HPP
