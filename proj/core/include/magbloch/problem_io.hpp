// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGBLOCH_PROBLEM_IO_HPP
#define MAGBLOCH_PROBLEM_IO_HPP

#include <optional>
#include <nlohmann/json.hpp>
#include "magbloch/problem.hpp"

namespace magbloch
{

// Problem definition file:
//   { "preset": "free" | "landau" | "custom",
//     "flux_integer": n0,
//     "fourier_terms": [ { "target": "V", "mode": [m1, m2, m3],
//                          "amplitude": a, "phase": "cos" | "sin" }, ... ],
//     "symmetrize": bool,
//     "field_strength": b }            (optional, raw b instead of flux_integer)
// Unknown keys are rejected.
struct ProblemDefinition
{
  CoefficientSpec spec;
  bool symmetrize = false;
  std::optional<double> field_strength;
};

ProblemDefinition ParseProblemDefinition(const nlohmann::json &j);
nlohmann::json ToJson(const ProblemDefinition &definition);

// Builds the problem; a raw field_strength yields a problem whose flux may fail validation.
Problem MakeProblem(const ProblemDefinition &definition);

nlohmann::json ToJson(const ValidationReport &report);

}  // namespace magbloch

#endif  // MAGBLOCH_PROBLEM_IO_HPP
