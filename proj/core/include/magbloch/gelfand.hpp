// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGBLOCH_GELFAND_HPP
#define MAGBLOCH_GELFAND_HPP

#include <array>
#include <functional>
#include <vector>
#include "magbloch/grid.hpp"
#include "magbloch/problem.hpp"

namespace magbloch
{

// Finitely supported data for the magnetic Floquet-Bloch transform. f is sampled only on the
// translated cells Omega + 2 pi n, n in support; it is treated as zero elsewhere.
struct GelfandSample
{
  std::function<Complex(const Vec3 &)> f;
  std::vector<std::array<int, 3>> support;
  Vec3 k = Vec3::Zero();
  int flux_integer = 0;
};

// (Uf)(x, k) = sum_n exp(-i k.(x + 2 pi n)) exp(i n0 n2 x1) f(x + 2 pi n).
Complex GelfandValue(const GelfandSample &sample, const Vec3 &x);

// Transform evaluated at the nodes of a fiber-mode grid.
std::vector<Complex> GelfandTransform(const GelfandSample &sample, const TwistedGrid &grid);

}  // namespace magbloch

#endif  // MAGBLOCH_GELFAND_HPP
