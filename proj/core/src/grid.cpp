// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#include "magbloch/grid.hpp"

#include <numbers>
#include "magbloch/errors.hpp"

namespace magbloch
{

namespace
{

// Floor division and matching remainder in [0, n).
std::pair<int, int> FloorDivMod(int i, int n)
{
  int q = i / n, r = i % n;
  if (r < 0)
  {
    r += n;
    q -= 1;
  }
  return {q, r};
}

}  // namespace

GridMode ParseGridMode(const std::string &name)
{
  if (name == "fiber")
  {
    return GridMode::Fiber;
  }
  if (name == "slab")
  {
    return GridMode::Slab;
  }
  throw InvalidInput("grid mode must be 'fiber' or 'slab' (got '" + name + "')");
}

std::string GridModeName(GridMode mode) { return mode == GridMode::Fiber ? "fiber" : "slab"; }

TwistedGrid::TwistedGrid(GridMode mode, std::array<int, 3> sizes, int flux_integer)
  : mode_(mode), sizes_(sizes), flux_integer_(flux_integer)
{
  for (int d = 0; d < 3; d++)
  {
    if (sizes_[d] < 4)
    {
      throw InvalidInput("grid size along axis " + std::to_string(d + 1) +
                         " must be at least 4 (got " + std::to_string(sizes_[d]) + ")");
    }
    spacing_[d] = 2.0 * std::numbers::pi / sizes_[d];
  }
  if (flux_integer_ < 0)
  {
    throw InvalidInput("flux integer must be non-negative");
  }
}

std::array<int, 3> TwistedGrid::Node(Index dof) const
{
  const Index n1 = sizes_[0], n2 = sizes_[1];
  return {int(dof % n1), int((dof / n1) % n2), int(dof / (n1 * n2))};
}

double TwistedGrid::NodeCoordinate(int d, int i) const
{
  return -std::numbers::pi + i * spacing_[d];
}

double TwistedGrid::CellCenter(int d, int c) const
{
  // (c + 1/2 - n/2) is a half-integer, so negation under c -> n - 1 - c is exact.
  return (c + 0.5 - 0.5 * sizes_[d]) * spacing_[d];
}

std::optional<WrappedNode> TwistedGrid::Resolve(int i1, int i2, int i3) const
{
  const auto [w1, r1] = FloorDivMod(i1, sizes_[0]);
  const auto [w2, r2] = FloorDivMod(i2, sizes_[1]);
  int r3 = i3;
  if (mode_ == GridMode::Fiber)
  {
    r3 = FloorDivMod(i3, sizes_[2]).second;
  }
  else if (i3 < 0 || i3 > sizes_[2])
  {
    return std::nullopt;
  }
  (void)w1;
  WrappedNode node;
  node.dof = Dof(r1, r2, r3);
  if (w2 != 0 && flux_integer_ != 0)
  {
    node.phase = std::polar(1.0, -double(flux_integer_) * NodeCoordinate(0, r1) * w2);
  }
  return node;
}

std::optional<WrappedNode> TwistedGrid::Wrap(int i1, int i2, int i3, int axis, int step) const
{
  std::array<int, 3> node{i1, i2, i3};
  node[axis] += step;
  return Resolve(node[0], node[1], node[2]);
}

int TwistedGrid::ReflectLayer(int i3) const
{
  const int n3 = sizes_[2];
  return mode_ == GridMode::Slab ? n3 - i3 : (n3 - i3) % n3;
}

Index TwistedGrid::ReflectDof(Index dof) const
{
  const auto node = Node(dof);
  return Dof(node[0], node[1], ReflectLayer(node[2]));
}

std::vector<Complex> TwistedGrid::Reflect(std::span<const Complex> v) const
{
  if (Index(v.size()) != DofCount())
  {
    throw InvalidInput("grid function has the wrong length for reflection");
  }
  std::vector<Complex> out(v.size());
  for (Index i = 0; i < DofCount(); i++)
  {
    out[i] = v[ReflectDof(i)];
  }
  return out;
}

std::vector<Index> TwistedGrid::BottomFace() const
{
  std::vector<Index> face(FaceSize());
  for (Index i = 0; i < FaceSize(); i++)
  {
    face[i] = i;
  }
  return face;
}

std::vector<Index> TwistedGrid::TopFace() const
{
  if (mode_ != GridMode::Slab)
  {
    throw InvalidInput("top face exists only in slab mode");
  }
  std::vector<Index> face(FaceSize());
  const Index offset = FaceSize() * sizes_[2];
  for (Index i = 0; i < FaceSize(); i++)
  {
    face[i] = offset + i;
  }
  return face;
}

std::vector<Index> TwistedGrid::Interior() const
{
  if (mode_ != GridMode::Slab)
  {
    throw InvalidInput("interior/face split exists only in slab mode");
  }
  std::vector<Index> interior;
  interior.reserve(FaceSize() * (sizes_[2] - 1));
  for (Index i = FaceSize(); i < FaceSize() * sizes_[2]; i++)
  {
    interior.push_back(i);
  }
  return interior;
}

}  // namespace magbloch
