// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <doctest.h>
#include <magbloch/errors.hpp>
#include <magbloch/problem.hpp>
#include <magbloch/problem_io.hpp>
#include "presets.hpp"

using namespace magbloch;
using testing::Term;

TEST_CASE("free preset validates with unit ellipticity")
{
  const ValidationReport r = Validate(testing::Free());
  CHECK(r.Pass());
  CHECK(r.ellipticity_min == doctest::Approx(1.0));
  CHECK(r.ellipticity_max == doctest::Approx(1.0));
  CHECK(r.flux_integer == 0);
  CHECK(r.Failures().empty());
}

TEST_CASE("landau preset carries b = n0 / (2 pi)")
{
  const Problem p = testing::Landau(1);
  CHECK(p.FieldStrength() == doctest::Approx(1.0 / (2.0 * std::numbers::pi)));
  CHECK(p.RequireFluxInteger() == 1);
  const Vec3 x(0.3, -1.2, 0.7);
  CHECK(p.VectorPotential(x)(0) == doctest::Approx(1.2 * p.FieldStrength()));
  CHECK(p.VectorPotential(x)(1) == 0.0);
}

TEST_CASE("unquantized field strength is rejected")
{
  ProblemDefinition def;
  def.spec = {"landau", {}, 1};
  def.field_strength = 0.1;
  const Problem p = MakeProblem(def);
  CHECK_FALSE(p.FluxInteger().has_value());
  CHECK_THROWS_AS(p.RequireFluxInteger(), FluxQuantizationError);
  const ValidationReport r = Validate(p);
  CHECK_FALSE(r.flux_ok);
  CHECK_FALSE(r.Pass());
}

TEST_CASE("field strength that is a whole flux quantum is accepted")
{
  ProblemDefinition def;
  def.spec = {"landau", {}, 1};
  def.field_strength = 2.0 / (2.0 * std::numbers::pi);
  CHECK(MakeProblem(def).RequireFluxInteger() == 2);
}

TEST_CASE("non-integer Fourier modes are rejected")
{
  CHECK_THROWS_AS(MakeFourierTerm({0.5, 0.0, 0.0}, 1.0, Target::V, Phase::Cos), InvalidInput);
  CHECK_THROWS_AS(ParseTarget("G7"), InvalidInput);
}

TEST_CASE("Fourier term evaluation and gradient")
{
  const FourierTerm t = Term(Target::V, 1, 2, 0, 0.5, Phase::Sin);
  const Vec3 x(0.2, 0.3, 0.4);
  CHECK(t.Evaluate(x) == doctest::Approx(0.5 * std::sin(0.8)));
  const Vec3 g = t.Gradient(x);
  CHECK(g(0) == doctest::Approx(0.5 * std::cos(0.8)));
  CHECK(g(1) == doctest::Approx(1.0 * std::cos(0.8)));
  CHECK(g(2) == doctest::Approx(0.0));
}

TEST_CASE("symmetrization yields reflection-even coefficients")
{
  const Problem raw = testing::AsymmetricPreset();
  CHECK(Validate(raw, 9, true).symmetry_residual > 0.1);
  const Problem sym = Symmetrize(raw);
  CHECK(sym.IsSymmetrized());
  const ValidationReport r = Validate(sym);
  CHECK(r.symmetry_required);
  CHECK(r.symmetry_residual <= ValidationReport::symmetry_tolerance);
  CHECK(r.Pass());
  const Vec3 x(0.4, -0.9, 1.1);
  CHECK(sym.ScalarPotential(x) == doctest::Approx(sym.ScalarPotential(Reflect(x))));
}

TEST_CASE("symmetrized presets keep odd a3 and even a1")
{
  const Problem p = testing::SymmetricPreset(3);
  const Vec3 x(0.4, -0.9, 1.1);
  const Vec3 a = p.PeriodicPotential(x), ar = p.PeriodicPotential(Reflect(x));
  CHECK(a(0) == doctest::Approx(ar(0)));
  CHECK(a(2) == doctest::Approx(-ar(2)));
  CHECK(Validate(p).Pass());
}

TEST_CASE("non-elliptic metric fails validation with a witness point")
{
  const Problem p = BuildProblem({"custom", {Term(Target::G11, 1, 0, 0, 1.5)}, 0});
  const ValidationReport r = Validate(p);
  CHECK_FALSE(r.Pass());
  CHECK(r.non_elliptic_point.has_value());
  CHECK(r.ellipticity_min <= 0.0);
}

TEST_CASE("gauge transform adds grad chi to a and leaves V and G alone")
{
  const Problem p = testing::SymmetricPreset(2);
  const ScalarSeries chi{Term(Target::V, 1, 0, 0, 1.0, Phase::Sin)};
  const Problem q = GaugeTransform(p, chi);
  const Vec3 x(0.7, 0.1, -0.5);
  const Vec3 diff = q.PeriodicPotential(x) - p.PeriodicPotential(x);
  CHECK(diff(0) == doctest::Approx(std::cos(0.7)));
  CHECK(diff(1) == doctest::Approx(0.0));
  CHECK(diff(2) == doctest::Approx(0.0));
  CHECK(q.ScalarPotential(x) == doctest::Approx(p.ScalarPotential(x)));
  CHECK((q.Metric(x) - p.Metric(x)).norm() == doctest::Approx(0.0));
  CHECK(q.RequireFluxInteger() == 1);
}

TEST_CASE("shifts move khat into the potential and lambda into V")
{
  const Problem p = testing::Free().WithShifts({0.25, 0.5}, 0.7);
  CHECK(p.LambdaShift() == 0.7);
  CHECK(p.KhatShift()[1] == 0.5);
}

TEST_CASE("problem definition JSON round trip and strictness")
{
  const auto j = nlohmann::json::parse(R"({
    "preset": "custom", "flux_integer": 1, "symmetrize": true,
    "fourier_terms": [{"target": "V", "mode": [0, 1, 0], "amplitude": 0.4, "phase": "cos"}]})");
  const ProblemDefinition def = ParseProblemDefinition(j);
  CHECK(def.symmetrize);
  CHECK(def.spec.fourier_terms.size() == 1);
  const ProblemDefinition again = ParseProblemDefinition(ToJson(def));
  CHECK(ToJson(again) == ToJson(def));

  auto bad = j;
  bad["colour"] = "blue";
  CHECK_THROWS_AS(ParseProblemDefinition(bad), InvalidInput);
  auto bad_mode = j;
  bad_mode["fourier_terms"][0]["mode"] = {0.5, 0, 0};
  CHECK_THROWS_AS(ParseProblemDefinition(bad_mode), InvalidInput);
}
