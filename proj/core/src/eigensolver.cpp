// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#include "magbloch/eigensolver.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <Eigen/Eigenvalues>
#include "magbloch/dense.hpp"
#include "magbloch/errors.hpp"

namespace magbloch
{

ShiftedIncompleteCholesky::ShiftedIncompleteCholesky(const FiberSystem &system)
  : shift_(system.potential_min - 1.0)
{
  // A >= potential_min, so A - shift >= I and the incomplete factorization exists.
  SparseMatrix k = system.H * Complex(1.0 / system.mass, 0.0);
  SparseMatrix identity(k.rows(), k.cols());
  identity.setIdentity();
  k -= shift_ * identity;
  factor_.compute(k);
  if (factor_.info() != Eigen::Success)
  {
    throw SolverError("incomplete Cholesky factorization of the shifted operator failed", {});
  }
}

Eigen::MatrixXcd ShiftedIncompleteCholesky::Apply(const Eigen::MatrixXcd &r) const
{
  Eigen::MatrixXcd out(r.rows(), r.cols());
  for (Index j = 0; j < r.cols(); j++)
  {
    out.col(j) = factor_.solve(r.col(j));
  }
  return out;
}

namespace
{

using Block = Eigen::MatrixXcd;

// Orthonormalizes the columns of v in place (SVQB); directions whose Gram eigenvalue falls
// below drop * max are discarded.
void Svqb(Block &v, double drop = 1e-12)
{
  if (v.cols() == 0)
  {
    return;
  }
  Eigen::VectorXd scale = v.colwise().norm().transpose();
  for (Index j = 0; j < scale.size(); j++)
  {
    scale(j) = scale(j) > 0.0 ? 1.0 / scale(j) : 0.0;
  }
  Block scaled = v * scale.asDiagonal();
  Block gram = scaled.adjoint() * scaled;
  gram = 0.5 * (gram + gram.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Block> eig(gram);
  const Eigen::VectorXd &s = eig.eigenvalues();
  const double top = s.maxCoeff();
  Index keep = 0;
  for (Index j = 0; j < s.size(); j++)
  {
    keep += s(j) > drop * top ? 1 : 0;
  }
  Block u = eig.eigenvectors().rightCols(keep);
  Eigen::VectorXd inv = s.tail(keep).cwiseSqrt().cwiseInverse();
  v = scaled * u * inv.asDiagonal();
}

// Removes the span of the orthonormal block x from v, then orthonormalizes v.
void OrthonormalizeAgainst(const Block &x, Block &v)
{
  for (int pass = 0; pass < 2; pass++)
  {
    v -= x * (x.adjoint() * v);
    Svqb(v);
  }
}

Block RandomBlock(Index rows, Index cols, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Block x(rows, cols);
  for (Index j = 0; j < cols; j++)
  {
    for (Index i = 0; i < rows; i++)
    {
      const double re = normal(rng);
      const double im = normal(rng);
      x(i, j) = Complex(re, im);
    }
  }
  return x;
}

std::vector<double> ResidualNorms(const Block &ax, const Block &x, const Eigen::VectorXd &theta,
                                  Index count)
{
  std::vector<double> out(count);
  for (Index j = 0; j < count; j++)
  {
    out[j] = (ax.col(j) - theta(j) * x.col(j)).norm() / x.col(j).norm();
  }
  return out;
}

EigenResult SolveDense(const SparseMatrix &a, int count)
{
  const Block dense = Block(a);
  HermitianEigenpairs pairs = HermitianEigen(dense, count);
  EigenResult result;
  result.values = pairs.values;
  result.vectors = pairs.vectors;
  result.residuals = ResidualNorms(a * pairs.vectors, pairs.vectors, pairs.values, count);
  return result;
}

EigenResult SolveLobpcg(const SparseMatrix &a, int count, const EigenOptions &options,
                        const ShiftedIncompleteCholesky &precond)
{
  const Index n = a.rows();
  const Index b = std::min<Index>(count + std::max(options.guard, 1), n / 3);
  Block x = RandomBlock(n, b, options.seed);
  Svqb(x);
  if (x.cols() < b)
  {
    throw SolverError("degenerate random start block", {});
  }

  // Initial Rayleigh-Ritz.
  Block ax = a * x;
  Block small = x.adjoint() * ax;
  Eigen::SelfAdjointEigenSolver<Block> rr(0.5 * (small + small.adjoint()));
  x = x * rr.eigenvectors();
  ax = ax * rr.eigenvectors();
  Eigen::VectorXd theta = rr.eigenvalues();
  Block p(n, 0);

  std::vector<double> best(count, std::numeric_limits<double>::infinity());
  for (int it = 1; it <= options.max_iterations; it++)
  {
    const Block r = ax - x * theta.asDiagonal();
    std::vector<Index> active;
    bool converged = true;
    for (Index j = 0; j < b; j++)
    {
      const double res = r.col(j).norm();
      if (j < count)
      {
        best[j] = std::min(best[j], res);
        converged = converged && res <= options.tol;
      }
      if (res > 0.1 * options.tol)
      {
        active.push_back(j);
      }
    }
    if (converged)
    {
      EigenResult result;
      result.values = theta.head(count);
      result.vectors = x.leftCols(count);
      result.residuals = ResidualNorms(ax, x, theta, count);
      result.iterations = it - 1;
      return result;
    }

    Block w(n, Index(active.size()));
    for (Index j = 0; j < Index(active.size()); j++)
    {
      w.col(j) = r.col(active[j]);
    }
    w = precond.Apply(w);
    Block q(n, w.cols() + p.cols());
    q << w, p;
    OrthonormalizeAgainst(x, q);

    const Block aq = a * q;
    Block s(n, b + q.cols());
    s << x, q;
    Block as(n, b + q.cols());
    as << ax, aq;
    Block gram = s.adjoint() * as;
    Eigen::SelfAdjointEigenSolver<Block> eig(0.5 * (gram + gram.adjoint()));
    const Block c = eig.eigenvectors().leftCols(b);
    theta = eig.eigenvalues().head(b);
    p = q * c.bottomRows(q.cols());
    x = s * c;
    ax = as * c;
  }
  throw SolverError("LOBPCG did not reach tolerance within " +
                        std::to_string(options.max_iterations) + " iterations",
                    best);
}

}  // namespace

EigenResult SolveLowest(const FiberSystem &system, int count, const EigenOptions &options)
{
  const Index n = system.Size();
  if (count < 1 || count >= n)
  {
    throw InvalidInput("requested band count must be in [1, dofs)");
  }
  if (!(options.tol > 0.0))
  {
    throw InvalidInput("solver tolerance must be positive");
  }
  const SparseMatrix a = system.H * Complex(1.0 / system.mass, 0.0);
  if (n <= options.dense_threshold || 3 * (count + std::max(options.guard, 1)) > n)
  {
    EigenResult result = SolveDense(a, count);
    for (double r : result.residuals)
    {
      if (r > options.tol)
      {
        throw SolverError("dense eigensolve residual above tolerance", result.residuals);
      }
    }
    return result;
  }
  return SolveLobpcg(a, count, options, ShiftedIncompleteCholesky(system));
}

}  // namespace magbloch
