// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGBLOCH_FORMAT_HPP
#define MAGBLOCH_FORMAT_HPP

#include <cstdio>
#include <string>

namespace magbloch
{

// Locale-independent shortest-ish text for a double, used by every CSV writer.
inline std::string FormatNumber(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.15g", x);
  return buf;
}

}  // namespace magbloch

#endif  // MAGBLOCH_FORMAT_HPP
