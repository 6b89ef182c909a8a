// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#include "magbloch/gelfand.hpp"

#include <numbers>
#include "magbloch/errors.hpp"

namespace magbloch
{

Complex GelfandValue(const GelfandSample &sample, const Vec3 &x)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  Complex sum(0.0, 0.0);
  for (const auto &n : sample.support)
  {
    const Vec3 shifted(x(0) + two_pi * n[0], x(1) + two_pi * n[1], x(2) + two_pi * n[2]);
    const double arg =
        -sample.k.dot(shifted) + double(sample.flux_integer) * double(n[1]) * x(0);
    sum += std::polar(1.0, arg) * sample.f(shifted);
  }
  return sum;
}

std::vector<Complex> GelfandTransform(const GelfandSample &sample, const TwistedGrid &grid)
{
  if (grid.Mode() != GridMode::Fiber)
  {
    throw InvalidInput("the Floquet-Bloch transform lives on a fiber-mode grid");
  }
  if (grid.FluxInteger() != sample.flux_integer)
  {
    throw InvalidInput("grid twist does not match the sample flux");
  }
  std::vector<Complex> out(grid.DofCount());
  for (Index i = 0; i < grid.DofCount(); i++)
  {
    const auto node = grid.Node(i);
    const Vec3 x(grid.NodeCoordinate(0, node[0]), grid.NodeCoordinate(1, node[1]),
                 grid.NodeCoordinate(2, node[2]));
    out[i] = GelfandValue(sample, x);
  }
  return out;
}

}  // namespace magbloch
