// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGBLOCH_GRID_HPP
#define MAGBLOCH_GRID_HPP

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace magbloch
{

using Complex = std::complex<double>;
using Index = std::ptrdiff_t;

// fiber: x3 periodic, every x3 layer i3 in [0, n3).
// slab:  x3 open, layers i3 in [0, n3] with bottom face i3 = 0 and top face i3 = n3.
enum class GridMode
{
  Fiber,
  Slab
};

GridMode ParseGridMode(const std::string &name);
std::string GridModeName(GridMode mode);

// Degree of freedom reached from a (possibly out-of-range) node index, together with the
// unit-modulus factor relating the node value to the stored dof value.
struct WrappedNode
{
  Index dof = -1;
  Complex phase{1.0, 0.0};
};

// Node-centered discretization of the cell (-pi, pi)^3 with
//   x1 periodic,  x2 quasi-periodic v(x1, pi, x3) = exp(-i n0 x1) v(x1, -pi, x3),
//   x3 periodic (fiber) or open with faces (slab).
class TwistedGrid
{
public:
  TwistedGrid(GridMode mode, std::array<int, 3> sizes, int flux_integer);

  GridMode Mode() const { return mode_; }
  int Size(int d) const { return sizes_[d]; }
  const std::array<int, 3> &Sizes() const { return sizes_; }
  double Spacing(int d) const { return spacing_[d]; }
  int FluxInteger() const { return flux_integer_; }
  double CellVolume() const { return spacing_[0] * spacing_[1] * spacing_[2]; }

  // Number of x3 node layers: n3 (fiber) or n3 + 1 (slab).
  int Layers() const { return mode_ == GridMode::Fiber ? sizes_[2] : sizes_[2] + 1; }
  Index DofCount() const { return Index(sizes_[0]) * sizes_[1] * Layers(); }
  Index FaceSize() const { return Index(sizes_[0]) * sizes_[1]; }

  Index Dof(int i1, int i2, int i3) const { return i1 + Index(sizes_[0]) * (i2 + Index(sizes_[1]) * i3); }
  std::array<int, 3> Node(Index dof) const;

  // x_d(i) = -pi + i h_d.
  double NodeCoordinate(int d, int i) const;
  // Center of cell c along axis d, computed so that reflected cells have exactly negated
  // coordinates.
  double CellCenter(int d, int c) const;

  // Resolves an arbitrary integer node index. x1 wraps with phase 1, x2 wraps with
  // exp(-i n0 x1) per forward cycle, x3 wraps with phase 1 in fiber mode. In slab mode an
  // x3 index outside [0, n3] has no dof.
  std::optional<WrappedNode> Resolve(int i1, int i2, int i3) const;
  // Neighbor of a valid node one step (+1 or -1) along axis.
  std::optional<WrappedNode> Wrap(int i1, int i2, int i3, int axis, int step) const;

  int ReflectLayer(int i3) const;
  Index ReflectDof(Index dof) const;
  // (Jv)(i1, i2, i3) = v(i1, i2, reflect(i3)).
  std::vector<Complex> Reflect(std::span<const Complex> v) const;

  // Slab faces and interior, in increasing dof order.
  std::vector<Index> BottomFace() const;
  std::vector<Index> TopFace() const;
  std::vector<Index> Interior() const;

private:
  GridMode mode_;
  std::array<int, 3> sizes_;
  std::array<double, 3> spacing_;
  int flux_integer_;
};

}  // namespace magbloch

#endif  // MAGBLOCH_GRID_HPP
