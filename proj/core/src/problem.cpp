// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#include "magbloch/problem.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <Eigen/Eigenvalues>
#include "magbloch/errors.hpp"

namespace magbloch
{

namespace
{

constexpr double two_pi = 2.0 * std::numbers::pi;

// Metric entries touched by a target, as (row, col); off-diagonal targets fill both.
std::optional<std::pair<int, int>> MetricEntry(Target target)
{
  switch (target)
  {
    case Target::G11:
      return std::pair{0, 0};
    case Target::G12:
      return std::pair{0, 1};
    case Target::G13:
      return std::pair{0, 2};
    case Target::G22:
      return std::pair{1, 1};
    case Target::G23:
      return std::pair{1, 2};
    case Target::G33:
      return std::pair{2, 2};
    default:
      return std::nullopt;
  }
}

std::optional<int> PotentialComponent(Target target)
{
  switch (target)
  {
    case Target::A1:
      return 0;
    case Target::A2:
      return 1;
    case Target::A3:
      return 2;
    default:
      return std::nullopt;
  }
}

Problem FromTerms(const std::vector<FourierTerm> &terms, int flux_integer)
{
  auto shared = std::make_shared<const std::vector<FourierTerm>>(terms);
  auto metric = [shared](const Vec3 &x) -> Mat3
  {
    Mat3 g = Mat3::Identity();
    for (const auto &term : *shared)
    {
      if (auto entry = MetricEntry(term.target))
      {
        const double value = term.Evaluate(x);
        g(entry->first, entry->second) += value;
        if (entry->first != entry->second)
        {
          g(entry->second, entry->first) += value;
        }
      }
    }
    return g;
  };
  auto potential = [shared](const Vec3 &x) -> Vec3
  {
    Vec3 a = Vec3::Zero();
    for (const auto &term : *shared)
    {
      if (auto d = PotentialComponent(term.target))
      {
        a(*d) += term.Evaluate(x);
      }
    }
    return a;
  };
  auto scalar = [shared](const Vec3 &x) -> double
  {
    double v = 0.0;
    for (const auto &term : *shared)
    {
      if (term.target == Target::V)
      {
        v += term.Evaluate(x);
      }
    }
    return v;
  };
  return Problem(metric, potential, scalar, flux_integer);
}

double MaxAbs(const Mat3 &m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

double FourierTerm::Evaluate(const Vec3 &x) const
{
  const double arg = mode[0] * x(0) + mode[1] * x(1) + mode[2] * x(2);
  return amplitude * (phase == Phase::Cos ? std::cos(arg) : std::sin(arg));
}

Vec3 FourierTerm::Gradient(const Vec3 &x) const
{
  const double arg = mode[0] * x(0) + mode[1] * x(1) + mode[2] * x(2);
  const double factor = amplitude * (phase == Phase::Cos ? -std::sin(arg) : std::cos(arg));
  return factor * Vec3(mode[0], mode[1], mode[2]);
}

FourierTerm MakeFourierTerm(const std::array<double, 3> &mode, double amplitude, Target target,
                            Phase phase)
{
  FourierTerm term;
  for (int d = 0; d < 3; d++)
  {
    if (!std::isfinite(mode[d]) || std::nearbyint(mode[d]) != mode[d] ||
        std::abs(mode[d]) > 1e6)
    {
      throw InvalidInput("Fourier mode vector must have integer entries (got " +
                         std::to_string(mode[d]) + ")");
    }
    term.mode[d] = static_cast<int>(mode[d]);
  }
  if (!std::isfinite(amplitude))
  {
    throw InvalidInput("Fourier amplitude must be finite");
  }
  term.amplitude = amplitude;
  term.target = target;
  term.phase = phase;
  return term;
}

Target ParseTarget(const std::string &name)
{
  static const std::pair<const char *, Target> table[] = {
      {"V", Target::V},     {"a1", Target::A1},   {"a2", Target::A2},   {"a3", Target::A3},
      {"g11", Target::G11}, {"g12", Target::G12}, {"g21", Target::G12}, {"g13", Target::G13},
      {"g31", Target::G13}, {"g22", Target::G22}, {"g23", Target::G23}, {"g32", Target::G23},
      {"g33", Target::G33}};
  for (const auto &[key, target] : table)
  {
    if (name == key)
    {
      return target;
    }
  }
  throw InvalidInput("unknown Fourier target '" + name + "'");
}

std::string TargetName(Target target)
{
  switch (target)
  {
    case Target::V:
      return "V";
    case Target::A1:
      return "a1";
    case Target::A2:
      return "a2";
    case Target::A3:
      return "a3";
    case Target::G11:
      return "g11";
    case Target::G12:
      return "g12";
    case Target::G13:
      return "g13";
    case Target::G22:
      return "g22";
    case Target::G23:
      return "g23";
    case Target::G33:
      return "g33";
  }
  return "?";
}

Problem::Problem(MatrixField metric, VectorField periodic_potential,
                 ScalarField scalar_potential, int flux_integer)
  : metric_(std::move(metric)), periodic_potential_(std::move(periodic_potential)),
    scalar_potential_(std::move(scalar_potential)), field_strength_(flux_integer / two_pi),
    flux_integer_(flux_integer)
{
  if (flux_integer < 0)
  {
    throw InvalidInput("flux_integer must be non-negative");
  }
}

Problem Problem::WithFieldStrength(MatrixField metric, VectorField periodic_potential,
                                   ScalarField scalar_potential, double field_strength)
{
  if (!(field_strength >= 0.0) || !std::isfinite(field_strength))
  {
    throw InvalidInput("field strength must be finite and non-negative");
  }
  Problem p(std::move(metric), std::move(periodic_potential), std::move(scalar_potential), 0);
  p.field_strength_ = field_strength;
  const double flux = two_pi * field_strength;
  const double rounded = std::nearbyint(flux);
  if (std::abs(flux - rounded) <= 1e-12 * std::max(1.0, flux))
  {
    p.flux_integer_ = static_cast<int>(rounded);
  }
  else
  {
    p.flux_integer_.reset();
  }
  return p;
}

Vec3 Problem::VectorPotential(const Vec3 &x) const
{
  Vec3 a = periodic_potential_(x);
  a(0) -= field_strength_ * x(1);
  return a;
}

int Problem::RequireFluxInteger() const
{
  if (!flux_integer_)
  {
    throw FluxQuantizationError("flux 2*pi*b = " + std::to_string(two_pi * field_strength_) +
                                " is not a non-negative integer");
  }
  return *flux_integer_;
}

Problem Problem::WithShifts(const std::array<double, 2> &khat, double lambda) const
{
  Problem p = *this;
  p.khat_shift_ = khat;
  p.lambda_shift_ = lambda;
  return p;
}

Problem BuildProblem(const CoefficientSpec &spec)
{
  if (spec.kind.empty())
  {
    throw InvalidInput("empty coefficient spec");
  }
  if (spec.flux_integer < 0)
  {
    throw InvalidInput("flux_integer must be non-negative");
  }
  if (spec.kind == "free")
  {
    if (spec.flux_integer != 0)
    {
      throw InvalidInput("preset 'free' has zero field; flux_integer must be 0");
    }
  }
  else if (spec.kind == "landau")
  {
    if (spec.flux_integer < 1)
    {
      throw InvalidInput("preset 'landau' needs flux_integer >= 1");
    }
  }
  else if (spec.kind == "custom")
  {
    if (spec.fourier_terms.empty())
    {
      throw InvalidInput("empty coefficient spec: 'custom' needs at least one Fourier term");
    }
  }
  else
  {
    throw InvalidInput("unknown preset '" + spec.kind + "'");
  }
  return FromTerms(spec.fourier_terms, spec.flux_integer);
}

Problem Symmetrize(const Problem &problem)
{
  Problem out = problem;
  const Mat3 r = Vec3(1.0, 1.0, -1.0).asDiagonal();
  auto g = problem.metric_;
  out.metric_ = [g, r](const Vec3 &x) -> Mat3
  { return 0.5 * (g(x) + r * g(Reflect(x)) * r); };
  auto a = problem.periodic_potential_;
  out.periodic_potential_ = [a](const Vec3 &x) -> Vec3
  { return 0.5 * (a(x) + Reflect(a(Reflect(x)))); };
  auto v = problem.scalar_potential_;
  out.scalar_potential_ = [v](const Vec3 &x) -> double { return 0.5 * (v(x) + v(Reflect(x))); };
  out.symmetrized_ = true;
  return out;
}

Problem GaugeTransform(const Problem &problem, const ScalarSeries &chi)
{
  for (const auto &term : chi)
  {
    if (!std::isfinite(term.amplitude))
    {
      throw InvalidInput("gauge function has a non-finite amplitude");
    }
  }
  Problem out = problem;
  auto a = problem.periodic_potential_;
  auto terms = std::make_shared<const ScalarSeries>(chi);
  out.periodic_potential_ = [a, terms](const Vec3 &x) -> Vec3
  {
    Vec3 value = a(x);
    for (const auto &term : *terms)
    {
      value += term.Gradient(x);
    }
    return value;
  };
  return out;
}

bool ValidationReport::Pass() const { return Failures().empty(); }

std::vector<std::string> ValidationReport::Failures() const
{
  std::vector<std::string> failures;
  if (!(ellipticity_min > 0.0))
  {
    std::string where;
    if (non_elliptic_point)
    {
      where = " at (" + std::to_string((*non_elliptic_point)(0)) + ", " +
              std::to_string((*non_elliptic_point)(1)) + ", " +
              std::to_string((*non_elliptic_point)(2)) + ")";
    }
    failures.push_back("metric is not positive definite" + where);
  }
  if (metric_asymmetry > 1e-14 * std::max(1.0, ellipticity_max))
  {
    failures.push_back("metric is not symmetric");
  }
  if (!flux_ok)
  {
    failures.push_back("flux of the constant field is not an integer");
  }
  if (!periodicity_ok)
  {
    failures.push_back("coefficients are not (2 pi Z)^3-periodic");
  }
  if (symmetry_required && !(symmetry_residual <= symmetry_tolerance))
  {
    failures.push_back("reflection symmetry residual " + std::to_string(symmetry_residual) +
                       " exceeds tolerance");
  }
  return failures;
}

ValidationReport Validate(const Problem &problem, int samples, bool require_symmetry)
{
  if (samples < 2)
  {
    throw InvalidInput("validation needs at least 2 samples per axis");
  }
  ValidationReport report;
  report.samples = samples;
  report.symmetry_required = require_symmetry || problem.IsSymmetrized();
  report.flux_integer = problem.FluxInteger();
  report.flux_ok = report.flux_integer.has_value();
  report.ellipticity_min = std::numeric_limits<double>::infinity();
  report.ellipticity_max = -std::numeric_limits<double>::infinity();

  const Mat3 r = Vec3(1.0, 1.0, -1.0).asDiagonal();
  const double h = two_pi / samples;
  double periodic = 0.0;
  for (int i3 = 0; i3 < samples; i3++)
  {
    for (int i2 = 0; i2 < samples; i2++)
    {
      for (int i1 = 0; i1 < samples; i1++)
      {
        const Vec3 x(-std::numbers::pi + i1 * h, -std::numbers::pi + i2 * h,
                     -std::numbers::pi + i3 * h);
        const Mat3 g = problem.Metric(x);
        report.metric_asymmetry = std::max(report.metric_asymmetry, MaxAbs(g - g.transpose()));
        Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (g + g.transpose()),
                                               Eigen::EigenvaluesOnly);
        const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(2);
        if (lo < report.ellipticity_min)
        {
          report.ellipticity_min = lo;
          if (!(lo > 0.0) && !report.non_elliptic_point)
          {
            report.non_elliptic_point = x;
          }
        }
        report.ellipticity_max = std::max(report.ellipticity_max, hi);

        const Vec3 a = problem.PeriodicPotential(x);
        const double v = problem.ScalarPotential(x);
        const Vec3 rx = Reflect(x);
        double sym = MaxAbs(problem.Metric(rx) - r * g * r);
        sym = std::max(sym, (problem.VectorPotential(rx) - r * problem.VectorPotential(x))
                                .cwiseAbs()
                                .maxCoeff());
        sym = std::max(sym, std::abs(problem.ScalarPotential(rx) - v));
        report.symmetry_residual = std::max(report.symmetry_residual, sym);

        for (int d = 0; d < 3; d++)
        {
          Vec3 shifted = x;
          shifted(d) += two_pi;
          const double scale = std::max({1.0, g.cwiseAbs().maxCoeff(), a.cwiseAbs().maxCoeff(),
                                         std::abs(v)});
          double diff = MaxAbs(problem.Metric(shifted) - g);
          diff = std::max(diff, (problem.PeriodicPotential(shifted) - a).cwiseAbs().maxCoeff());
          diff = std::max(diff, std::abs(problem.ScalarPotential(shifted) - v));
          periodic = std::max(periodic, diff / scale);
        }
      }
    }
  }
  report.periodicity_residual = periodic;
  report.periodicity_ok = periodic <= ValidationReport::periodicity_tolerance;
  return report;
}

}  // namespace magbloch
