// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#include "magbloch/problem_io.hpp"

#include <set>
#include "magbloch/errors.hpp"

namespace magbloch
{

namespace
{

void RejectUnknownKeys(const nlohmann::json &j, const std::set<std::string> &allowed,
                       const std::string &where)
{
  if (!j.is_object())
  {
    throw InvalidInput(where + " must be an object");
  }
  for (const auto &item : j.items())
  {
    if (!allowed.count(item.key()))
    {
      throw InvalidInput("unknown key '" + item.key() + "' in " + where);
    }
  }
}

FourierTerm ParseTerm(const nlohmann::json &j, std::size_t index)
{
  const std::string where = "fourier_terms[" + std::to_string(index) + "]";
  RejectUnknownKeys(j, {"target", "mode", "amplitude", "phase"}, where);
  if (!j.contains("target") || !j.contains("mode") || !j.contains("amplitude"))
  {
    throw InvalidInput(where + " needs 'target', 'mode' and 'amplitude'");
  }
  const auto &mode = j.at("mode");
  if (!mode.is_array() || mode.size() != 3)
  {
    throw InvalidInput(where + ".mode must be an array of 3 integers");
  }
  std::array<double, 3> m{};
  for (int d = 0; d < 3; d++)
  {
    if (!mode[d].is_number())
    {
      throw InvalidInput(where + ".mode must be numeric");
    }
    m[d] = mode[d].get<double>();
  }
  Phase phase = Phase::Cos;
  if (j.contains("phase"))
  {
    const auto p = j.at("phase").get<std::string>();
    if (p == "cos")
    {
      phase = Phase::Cos;
    }
    else if (p == "sin")
    {
      phase = Phase::Sin;
    }
    else
    {
      throw InvalidInput(where + ".phase must be 'cos' or 'sin'");
    }
  }
  if (!j.at("amplitude").is_number())
  {
    throw InvalidInput(where + ".amplitude must be a number");
  }
  return MakeFourierTerm(m, j.at("amplitude").get<double>(),
                         ParseTarget(j.at("target").get<std::string>()), phase);
}

}  // namespace

ProblemDefinition ParseProblemDefinition(const nlohmann::json &j)
{
  RejectUnknownKeys(j, {"preset", "flux_integer", "fourier_terms", "symmetrize", "field_strength"},
                    "problem");
  ProblemDefinition def;
  if (!j.contains("preset") || !j.at("preset").is_string())
  {
    throw InvalidInput("problem.preset must be a string");
  }
  def.spec.kind = j.at("preset").get<std::string>();
  if (j.contains("flux_integer"))
  {
    const auto &n0 = j.at("flux_integer");
    if (!n0.is_number_integer())
    {
      throw InvalidInput("problem.flux_integer must be an integer");
    }
    def.spec.flux_integer = n0.get<int>();
  }
  if (j.contains("fourier_terms"))
  {
    const auto &terms = j.at("fourier_terms");
    if (!terms.is_array())
    {
      throw InvalidInput("problem.fourier_terms must be an array");
    }
    for (std::size_t i = 0; i < terms.size(); i++)
    {
      def.spec.fourier_terms.push_back(ParseTerm(terms[i], i));
    }
  }
  if (j.contains("symmetrize"))
  {
    if (!j.at("symmetrize").is_boolean())
    {
      throw InvalidInput("problem.symmetrize must be a boolean");
    }
    def.symmetrize = j.at("symmetrize").get<bool>();
  }
  if (j.contains("field_strength"))
  {
    if (!j.at("field_strength").is_number())
    {
      throw InvalidInput("problem.field_strength must be a number");
    }
    if (j.contains("flux_integer"))
    {
      throw InvalidInput("give either problem.flux_integer or problem.field_strength");
    }
    def.field_strength = j.at("field_strength").get<double>();
  }
  return def;
}

nlohmann::json ToJson(const ProblemDefinition &definition)
{
  nlohmann::json terms = nlohmann::json::array();
  for (const auto &t : definition.spec.fourier_terms)
  {
    terms.push_back({{"target", TargetName(t.target)},
                     {"mode", t.mode},
                     {"amplitude", t.amplitude},
                     {"phase", t.phase == Phase::Cos ? "cos" : "sin"}});
  }
  nlohmann::json j = {{"preset", definition.spec.kind},
                      {"fourier_terms", terms},
                      {"symmetrize", definition.symmetrize}};
  if (definition.field_strength)
  {
    j["field_strength"] = *definition.field_strength;
  }
  else
  {
    j["flux_integer"] = definition.spec.flux_integer;
  }
  return j;
}

Problem MakeProblem(const ProblemDefinition &definition)
{
  CoefficientSpec spec = definition.spec;
  Problem problem = [&]
  {
    if (!definition.field_strength)
    {
      return BuildProblem(spec);
    }
    // The preset checks run against a zero-flux spec; the raw field is attached afterwards.
    if (spec.kind == "landau")
    {
      spec.flux_integer = 1;
    }
    const Problem base = BuildProblem(spec);
    return Problem::WithFieldStrength(base.MetricField(), base.PeriodicPotentialField(),
                                      base.ScalarPotentialField(), *definition.field_strength);
  }();
  return definition.symmetrize ? Symmetrize(problem) : problem;
}

nlohmann::json ToJson(const ValidationReport &report)
{
  nlohmann::json j = {{"pass", report.Pass()},
                      {"ellipticity", {report.ellipticity_min, report.ellipticity_max}},
                      {"metric_asymmetry", report.metric_asymmetry},
                      {"symmetry_residual", report.symmetry_residual},
                      {"symmetry_required", report.symmetry_required},
                      {"flux_ok", report.flux_ok},
                      {"periodicity_residual", report.periodicity_residual},
                      {"periodicity_ok", report.periodicity_ok},
                      {"samples", report.samples},
                      {"failures", report.Failures()}};
  j["flux_integer"] = report.flux_integer ? nlohmann::json(*report.flux_integer) : nlohmann::json(nullptr);
  return j;
}

}  // namespace magbloch
