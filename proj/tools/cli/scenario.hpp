// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGBLOCH_CLI_SCENARIO_HPP
#define MAGBLOCH_CLI_SCENARIO_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>
#include <magbloch/bands.hpp>
#include <magbloch/errors.hpp>
#include <magbloch/crosscheck.hpp>
#include <magbloch/pencil.hpp>
#include <magbloch/problem_io.hpp>

namespace magbloch::cli
{

// Malformed scenario file; the message names the line or the offending key.
class ConfigError : public InvalidInput
{
public:
  using InvalidInput::InvalidInput;
};

struct PencilPoint
{
  std::array<double, 2> khat{0.0, 0.0};
  double lambda = 0.0;
};

struct ScenarioConfig
{
  ProblemDefinition problem;
  std::array<int, 3> grid_sizes{8, 8, 8};
  GridMode mode = GridMode::Fiber;
  EigenOptions solver;
  int n_bands = 4;

  std::optional<KPath> path;                   // bands
  int k_grid = 0;                              // scan
  std::vector<PencilPoint> pencil_points;      // pencil
  PencilOptions pencil;
  std::optional<PencilPoint> crosscheck_point; // crosscheck
  int k3_grid = 128;
  std::optional<int> fiber_n3;
  double allowance = 0.0;

  bool dump_matrix = false;
  std::optional<std::string> output_dir;
};

// Strict parse: unknown keys, wrong types and non-positive tolerances are ConfigErrors.
ScenarioConfig ParseScenario(const std::string &text);
ScenarioConfig LoadScenario(const std::string &path);

// "n1,n2,n3"
std::array<int, 3> ParseGridSizes(const std::string &text);

// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string Fnv1aHex(const std::string &bytes);

}  // namespace magbloch::cli

#endif  // MAGBLOCH_CLI_SCENARIO_HPP
