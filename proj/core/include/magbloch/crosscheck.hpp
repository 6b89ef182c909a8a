// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGBLOCH_CROSSCHECK_HPP
#define MAGBLOCH_CROSSCHECK_HPP

#include <array>
#include <vector>
#include <nlohmann/json.hpp>
#include "magbloch/bands.hpp"
#include "magbloch/pencil.hpp"

namespace magbloch
{

struct CrosscheckOptions
{
  int n_bands = 4;
  int k3_grid = 32;
  // Added to the 2 / k3_grid matching tolerance.
  double allowance = 0.0;
  double bisection_tol = 1e-7;
  int bisection_max = 60;
  EigenOptions solver;
  PencilOptions pencil;
};

// A root of lambda_n(khat, k3) = lambda located on the fiber side.
struct FiberRoot
{
  int band_index = 0;  // 1-based
  double k3 = 0.0;  // reduced to [0, 1)
  bool converged = true;
};

struct CrosscheckReport
{
  std::array<double, 2> khat{0.0, 0.0};
  double lambda = 0.0;
  std::vector<double> pencil_k3;  // S1
  std::vector<FiberRoot> fiber_roots;
  std::vector<double> fiber_k3;   // S2, converged roots only
  int flagged = 0;                // roots whose bisection did not converge
  double distance = 0.0;          // symmetric Hausdorff distance on the circle R/Z
  double tolerance = 0.0;
  int k3_grid = 0;
  bool pass = false;
  PencilRun pencil;
};

// Distance between k3 sets on the circle of circumference 1; 0 for two empty sets and
// infinity when exactly one is empty.
double CircleHausdorff(const std::vector<double> &a, const std::vector<double> &b);

// Compares the unit-circle multipliers of the slab pencil with the roots of the fiber bands
// over k3 in [-1/2, 1/2], located by sign changes on k3_grid intervals and bisection. The
// grids must share n1, n2 and the flux.
CrosscheckReport Crosscheck(const Problem &problem, const TwistedGrid &slab_grid,
                            const TwistedGrid &fiber_grid, const std::array<double, 2> &khat,
                            double lambda, const CrosscheckOptions &options = {});

nlohmann::json ToJson(const CrosscheckReport &report);

}  // namespace magbloch

#endif  // MAGBLOCH_CROSSCHECK_HPP
