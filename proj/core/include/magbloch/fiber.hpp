// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGBLOCH_FIBER_HPP
#define MAGBLOCH_FIBER_HPP

#include <array>
#include <filesystem>
#include <Eigen/Sparse>
#include "magbloch/grid.hpp"
#include "magbloch/problem.hpp"

namespace magbloch
{

using SparseMatrix = Eigen::SparseMatrix<Complex>;

// Discrete form h[v] = v^* H v of the fiber operator, with lumped mass M = h1 h2 h3 I.
//
// Each cell contributes
//   vol * ( 1/8 sum_{anchors} <G(x_c) w, w>  +  V(x_c) * 1/8 sum_{corners} |v|^2 )
// where, for an anchor corner, w_d = -i (v(edge_d end) - v(edge_d start)) / h_d
// + (k_d - A_d(x_c)) vbar, the edge_d being the cell edge along axis d through the anchor,
// and vbar the mean of the 8 corner values. Averaging over all 8 anchors makes the cell
// term invariant under the reflections of the cell.
struct FiberSystem
{
  SparseMatrix H;
  double mass = 0.0;  // diagonal entry of M
  Vec3 k = Vec3::Zero();
  double lambda = 0.0;
  // min over cells of V(x_c) - lambda; the form is bounded below by this times M.
  double potential_min = 0.0;
  TwistedGrid grid;

  // gamma >= 0 with H + gamma M >= 0.
  double LowerBoundShift() const { return potential_min < 0.0 ? -potential_min : 0.0; }
  Index Size() const { return H.rows(); }
};

// h(k) with x3 periodic. The quasimomentum enters the covariant term only.
FiberSystem AssembleFiber(const Problem &problem, const TwistedGrid &grid, const Vec3 &k);

// h_0 for the potentials A - (khat, 0) and V - lambda on the open slab.
FiberSystem AssembleSlab(const Problem &problem, const TwistedGrid &grid,
                         const std::array<double, 2> &khat, double lambda);

// Permutation matrix of the reflection J on the grid's dofs.
SparseMatrix ReflectionMatrix(const TwistedGrid &grid);

// max|H - H^*| / max|H|.
double HermitianDefect(const SparseMatrix &H);
// max|J^* H J - H| / max|H|.
double ReflectionDefect(const SparseMatrix &H, const TwistedGrid &grid);

// Writes "row col re im" lines (0-based) after a "# rows cols nnz" header.
void WriteCoordinateFile(const SparseMatrix &H, const std::filesystem::path &path);

}  // namespace magbloch

#endif  // MAGBLOCH_FIBER_HPP
