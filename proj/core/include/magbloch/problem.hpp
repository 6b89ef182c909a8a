// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGBLOCH_PROBLEM_HPP
#define MAGBLOCH_PROBLEM_HPP

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>
#include <Eigen/Core>

namespace magbloch
{

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Coefficient a Fourier term contributes to.
enum class Target
{
  V,
  A1,
  A2,
  A3,
  G11,
  G12,
  G13,
  G22,
  G23,
  G33
};

enum class Phase
{
  Cos,
  Sin
};

// One real Fourier mode amplitude * cos(m.x) or amplitude * sin(m.x). Integer modes make
// every term (2 pi Z)^3-periodic.
struct FourierTerm
{
  std::array<int, 3> mode{0, 0, 0};
  double amplitude = 0.0;
  Target target = Target::V;
  Phase phase = Phase::Cos;

  double Evaluate(const Vec3 &x) const;
  Vec3 Gradient(const Vec3 &x) const;
};

// Builds a term from a real-valued mode vector, rejecting non-integer entries.
FourierTerm MakeFourierTerm(const std::array<double, 3> &mode, double amplitude, Target target,
                            Phase phase);

Target ParseTarget(const std::string &name);
std::string TargetName(Target target);

struct CoefficientSpec
{
  std::string kind;  // "free", "landau" or "custom"
  std::vector<FourierTerm> fourier_terms;
  int flux_integer = 0;  // n0, with b = n0 / (2 pi)
};

// Periodic scalar field chi given as a finite real Fourier series; used for gauge changes.
using ScalarSeries = std::vector<FourierTerm>;

// Immutable coefficient data of the magnetic Schroedinger operator
//   H = <(-i grad - A), G (-i grad - A)> + V,   A(x) = (-b x2, 0, 0) + a(x).
// The spectral shift lambda and transverse quasimomentum khat are carried along so that a
// slab assembly can realize the shifted potentials V - lambda and A - (khat, 0).
class Problem
{
public:
  using MatrixField = std::function<Mat3(const Vec3 &)>;
  using VectorField = std::function<Vec3(const Vec3 &)>;
  using ScalarField = std::function<double(const Vec3 &)>;

  Problem(MatrixField metric, VectorField periodic_potential, ScalarField scalar_potential,
          int flux_integer);

  // Escape hatch for a raw, possibly unquantized field strength b. Such problems fail
  // validation and are rejected by every assembly routine.
  static Problem WithFieldStrength(MatrixField metric, VectorField periodic_potential,
                                   ScalarField scalar_potential, double field_strength);

  Mat3 Metric(const Vec3 &x) const { return metric_(x); }
  Vec3 PeriodicPotential(const Vec3 &x) const { return periodic_potential_(x); }
  // Full vector potential including the linear gauge term a0 = (-b x2, 0, 0).
  Vec3 VectorPotential(const Vec3 &x) const;
  double ScalarPotential(const Vec3 &x) const { return scalar_potential_(x); }

  double FieldStrength() const { return field_strength_; }
  // n0 when 2 pi b is a non-negative integer.
  std::optional<int> FluxInteger() const { return flux_integer_; }
  // n0, or FluxQuantizationError.
  int RequireFluxInteger() const;

  double LambdaShift() const { return lambda_shift_; }
  const std::array<double, 2> &KhatShift() const { return khat_shift_; }
  Problem WithShifts(const std::array<double, 2> &khat, double lambda) const;

  bool IsSymmetrized() const { return symmetrized_; }

  const MatrixField &MetricField() const { return metric_; }
  const VectorField &PeriodicPotentialField() const { return periodic_potential_; }
  const ScalarField &ScalarPotentialField() const { return scalar_potential_; }

private:
  friend Problem Symmetrize(const Problem &problem);
  friend Problem GaugeTransform(const Problem &problem, const ScalarSeries &chi);

  MatrixField metric_;
  VectorField periodic_potential_;
  ScalarField scalar_potential_;
  double field_strength_ = 0.0;
  std::optional<int> flux_integer_;
  double lambda_shift_ = 0.0;
  std::array<double, 2> khat_shift_{0.0, 0.0};
  bool symmetrized_ = false;
};

// The reflection R(x1, x2, x3) = (x1, x2, -x3).
inline Vec3 Reflect(const Vec3 &x) { return {x(0), x(1), -x(2)}; }

Problem BuildProblem(const CoefficientSpec &spec);

// Even part with respect to R: G' = (G + R G(R.) R) / 2, a' = (a + R a(R.)) / 2,
// V' = (V + V(R.)) / 2.
Problem Symmetrize(const Problem &problem);

// a -> a + grad chi. The magnetic field curl A is unchanged.
Problem GaugeTransform(const Problem &problem, const ScalarSeries &chi);

struct ValidationReport
{
  double ellipticity_min = 0.0;  // c_est
  double ellipticity_max = 0.0;  // C_est
  double metric_asymmetry = 0.0;
  std::optional<Vec3> non_elliptic_point;
  double symmetry_residual = 0.0;
  bool symmetry_required = false;
  std::optional<int> flux_integer;
  bool flux_ok = false;
  double periodicity_residual = 0.0;
  bool periodicity_ok = false;
  int samples = 0;

  static constexpr double symmetry_tolerance = 1e-12;
  static constexpr double periodicity_tolerance = 1e-12;

  bool Pass() const;
  std::vector<std::string> Failures() const;
};

// Samples the coefficients on a samples^3 lattice over the cell. Symmetry is demanded when
// the problem was produced by Symmetrize or when require_symmetry is set.
ValidationReport Validate(const Problem &problem, int samples = 17,
                          bool require_symmetry = false);

}  // namespace magbloch

#endif  // MAGBLOCH_PROBLEM_HPP
