// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGBLOCH_EIGENSOLVER_HPP
#define MAGBLOCH_EIGENSOLVER_HPP

#include <cstdint>
#include <vector>
#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include "magbloch/fiber.hpp"

namespace magbloch
{

struct EigenOptions
{
  double tol = 1e-8;
  std::uint64_t seed = 0;
  int max_iterations = 400;
  // Systems with at most this many dofs are solved densely.
  Index dense_threshold = 1000;
  // Extra block vectors carried beyond the requested count.
  int guard = 4;
};

struct EigenResult
{
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // unit Euclidean norm columns
  std::vector<double> residuals;
  int iterations = 0;
};

// Incomplete Cholesky factorization of H / mass - shift I with shift = potential_min - 1,
// applied as the LOBPCG preconditioner.
class ShiftedIncompleteCholesky
{
public:
  explicit ShiftedIncompleteCholesky(const FiberSystem &system);

  double Shift() const { return shift_; }
  Eigen::MatrixXcd Apply(const Eigen::MatrixXcd &r) const;

private:
  Eigen::IncompleteCholesky<Complex, Eigen::Lower, Eigen::AMDOrdering<int>> factor_;
  double shift_ = 0.0;
};

// Lowest `count` eigenpairs of A = H / mass, the diagonal-mass scaled fiber operator.
// Residuals are ||A v - lambda v|| / ||v||, i.e. ||H v - lambda M v|| measured in the
// M^{-1} norm against ||v||_M. Large systems use LOBPCG with the preconditioner above;
// small ones use LAPACK.
// Throws SolverError when the iteration cap is reached first.
EigenResult SolveLowest(const FiberSystem &system, int count, const EigenOptions &options = {});

}  // namespace magbloch

#endif  // MAGBLOCH_EIGENSOLVER_HPP
