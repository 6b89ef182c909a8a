// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#include "magbloch/fiber.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include "magbloch/errors.hpp"

namespace magbloch
{

namespace
{

using CellMatrix = Eigen::Matrix<Complex, 8, 8>;
using AnchorMatrix = Eigen::Matrix<Complex, 3, 8>;

void CheckFlux(const Problem &problem, const TwistedGrid &grid)
{
  const int n0 = problem.RequireFluxInteger();
  if (n0 != grid.FluxInteger())
  {
    throw InvalidInput("grid twist n0 = " + std::to_string(grid.FluxInteger()) +
                       " does not match the problem flux n0 = " + std::to_string(n0));
  }
}

FiberSystem Assemble(const Problem &problem, const TwistedGrid &grid, const Vec3 &k)
{
  CheckFlux(problem, grid);
  const std::array<double, 3> h{grid.Spacing(0), grid.Spacing(1), grid.Spacing(2)};
  const double vol = grid.CellVolume();
  const double lambda = problem.LambdaShift();
  const Vec3 shift(k(0) + problem.KhatShift()[0], k(1) + problem.KhatShift()[1], k(2));

  // Difference part of the anchor rows; the covariant part is added per cell.
  std::array<AnchorMatrix, 8> diff;
  for (int a = 0; a < 8; a++)
  {
    diff[a].setZero();
    for (int d = 0; d < 3; d++)
    {
      const int lo = a & ~(1 << d), hi = a | (1 << d);
      diff[a](d, hi) += Complex(0.0, -1.0 / h[d]);
      diff[a](d, lo) += Complex(0.0, 1.0 / h[d]);
    }
  }

  const int n1 = grid.Size(0), n2 = grid.Size(1), n3 = grid.Size(2);
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(std::size_t(n1) * n2 * n3 * 64);
  double potential_min = std::numeric_limits<double>::infinity();

  std::array<WrappedNode, 8> corners;
  for (int c3 = 0; c3 < n3; c3++)
  {
    for (int c2 = 0; c2 < n2; c2++)
    {
      for (int c1 = 0; c1 < n1; c1++)
      {
        const Vec3 xc(grid.CellCenter(0, c1), grid.CellCenter(1, c2), grid.CellCenter(2, c3));
        const Mat3 g = problem.Metric(xc);
        const Vec3 kappa = shift - problem.VectorPotential(xc);
        const double v = problem.ScalarPotential(xc) - lambda;
        potential_min = std::min(potential_min, v);

        CellMatrix local = CellMatrix::Zero();
        const Eigen::Matrix<Complex, 3, 3> gc = g.cast<Complex>();
        for (int a = 0; a < 8; a++)
        {
          AnchorMatrix b = diff[a];
          for (int d = 0; d < 3; d++)
          {
            b.row(d).array() += kappa(d) / 8.0;
          }
          local.noalias() += b.adjoint() * gc * b;
        }
        local *= vol / 8.0;
        local.diagonal().array() += vol / 8.0 * v;
        local = 0.5 * (local + local.adjoint()).eval();

        for (int s = 0; s < 8; s++)
        {
          corners[s] = *grid.Resolve(c1 + (s & 1), c2 + ((s >> 1) & 1), c3 + ((s >> 2) & 1));
        }
        for (int r = 0; r < 8; r++)
        {
          triplets.emplace_back(corners[r].dof, corners[r].dof, Complex(local(r, r).real(), 0.0));
          for (int t = r + 1; t < 8; t++)
          {
            const Complex val = std::conj(corners[r].phase) * local(r, t) * corners[t].phase;
            triplets.emplace_back(corners[r].dof, corners[t].dof, val);
            triplets.emplace_back(corners[t].dof, corners[r].dof, std::conj(val));
          }
        }
      }
    }
  }

  FiberSystem system{SparseMatrix(grid.DofCount(), grid.DofCount()), vol, k, lambda,
                     potential_min, grid};
  system.H.setFromTriplets(triplets.begin(), triplets.end());
  system.H.makeCompressed();
  return system;
}

double MaxAbs(const SparseMatrix &m)
{
  double out = 0.0;
  for (int j = 0; j < m.outerSize(); j++)
  {
    for (SparseMatrix::InnerIterator it(m, j); it; ++it)
    {
      out = std::max(out, std::abs(it.value()));
    }
  }
  return out;
}

}  // namespace

FiberSystem AssembleFiber(const Problem &problem, const TwistedGrid &grid, const Vec3 &k)
{
  if (grid.Mode() != GridMode::Fiber)
  {
    throw InvalidInput("AssembleFiber needs a fiber-mode grid");
  }
  return Assemble(problem, grid, k);
}

FiberSystem AssembleSlab(const Problem &problem, const TwistedGrid &grid,
                         const std::array<double, 2> &khat, double lambda)
{
  if (grid.Mode() != GridMode::Slab)
  {
    throw InvalidInput("AssembleSlab needs a slab-mode grid");
  }
  FiberSystem system = Assemble(problem.WithShifts(khat, lambda), grid, Vec3::Zero());
  system.k = Vec3(khat[0], khat[1], 0.0);
  return system;
}

SparseMatrix ReflectionMatrix(const TwistedGrid &grid)
{
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(grid.DofCount());
  for (Index i = 0; i < grid.DofCount(); i++)
  {
    triplets.emplace_back(i, grid.ReflectDof(i), Complex(1.0, 0.0));
  }
  SparseMatrix j(grid.DofCount(), grid.DofCount());
  j.setFromTriplets(triplets.begin(), triplets.end());
  return j;
}

double HermitianDefect(const SparseMatrix &H)
{
  const SparseMatrix adj = H.adjoint();
  const SparseMatrix diff = H - adj;
  const double scale = MaxAbs(H);
  return scale > 0.0 ? MaxAbs(diff) / scale : 0.0;
}

double ReflectionDefect(const SparseMatrix &H, const TwistedGrid &grid)
{
  const SparseMatrix j = ReflectionMatrix(grid);
  const SparseMatrix jhj = SparseMatrix(j.adjoint()) * H * j;
  const SparseMatrix diff = jhj - H;
  const double scale = MaxAbs(H);
  return scale > 0.0 ? MaxAbs(diff) / scale : 0.0;
}

void WriteCoordinateFile(const SparseMatrix &H, const std::filesystem::path &path)
{
  std::ofstream out(path);
  if (!out)
  {
    throw Error("cannot open " + path.string() + " for writing");
  }
  out.precision(17);
  out << "# " << H.rows() << ' ' << H.cols() << ' ' << H.nonZeros() << '\n';
  for (int j = 0; j < H.outerSize(); j++)
  {
    for (SparseMatrix::InnerIterator it(H, j); it; ++it)
    {
      out << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' '
          << it.value().imag() << '\n';
    }
  }
}

}  // namespace magbloch
