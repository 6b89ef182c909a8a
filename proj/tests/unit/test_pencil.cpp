// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <sstream>
#include <doctest.h>
#include <magbloch/dense.hpp>
#include <magbloch/errors.hpp>
#include <magbloch/pencil.hpp>
#include "presets.hpp"

using namespace magbloch;

namespace
{

DNForms HandForms(const Eigen::MatrixXcd &t0, const Eigen::MatrixXcd &t1, int m)
{
  DNForms f;
  f.t0 = t0;
  f.t1 = t1;
  f.inertia_m = m;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t1);
  f.sigma_max_t1 = svd.singularValues()(0);
  f.sigma_min_t1 = svd.singularValues()(t1.rows() - 1);
  return f;
}

}  // namespace

TEST_CASE("multiplier at z = 1 is the double root 1")
{
  const Multiplier m = MultiplierFor(1.0);
  CHECK(m.on_unit_circle);
  CHECK(std::abs(m.zeta_plus - 1.0) < 1e-15);
  CHECK(*m.k3 == doctest::Approx(0.0));
}

TEST_CASE("multiplier at z = cos(0.6 pi) sits at k3 = 0.3")
{
  const Multiplier m = MultiplierFor(std::cos(0.6 * std::numbers::pi));
  CHECK(m.on_unit_circle);
  CHECK(*m.k3 == doctest::Approx(0.3));
  CHECK(std::abs(m.zeta_plus) == doctest::Approx(1.0));
  CHECK(m.decay_rate == 0.0);
  const auto k3 = PropagatingK3({m});
  REQUIRE(k3.size() == 2);
  CHECK(k3[0] == doctest::Approx(0.3));
  CHECK(k3[1] == doctest::Approx(0.7));
}

TEST_CASE("multiplier at z = 1.25 is the pair {2, 1/2}")
{
  const Multiplier m = MultiplierFor(1.25);
  CHECK_FALSE(m.on_unit_circle);
  CHECK_FALSE(m.k3.has_value());
  CHECK(m.zeta_plus.real() == doctest::Approx(2.0));
  CHECK(m.zeta_minus.real() == doctest::Approx(0.5));
  CHECK(m.decay_rate == doctest::Approx(std::log(2.0)));

  std::ostringstream plot;
  WriteMultiplierPlot({m}, plot);
  std::istringstream lines(plot.str());
  std::string header, a, b, extra;
  std::getline(lines, header);
  std::getline(lines, a);
  std::getline(lines, b);
  CHECK(header == "re_zeta,im_zeta,on_unit_circle");
  CHECK(a.substr(a.rfind(',')) == ",0");
  CHECK(b.substr(b.rfind(',')) == ",0");
  CHECK_FALSE(std::getline(lines, extra));
}

TEST_CASE("hand pencil with an isotropic non-real pair")
{
  Eigen::MatrixXcd t0(2, 2), t1(2, 2);
  t0 << 1, 0, 0, -1;
  t1 << 0, 1, 1, 0;
  const PencilReport r = PencilSpectrum(HandForms(t0, t1, 1));
  REQUIRE(r.z.size() == 2);
  CHECK(r.nonreal_count == 2);
  CHECK(r.BoundHolds());
  CHECK(std::abs(r.z[0] - Complex(0.0, -1.0)) < 1e-12);
  CHECK(std::abs(r.z[1] - Complex(0.0, 1.0)) < 1e-12);
  CHECK(r.max_isotropy_residual < 1e-14);
  CHECK(r.conjugation_defect < 1e-14);
}

TEST_CASE("definite t0 gives a real pencil spectrum")
{
  Eigen::MatrixXcd t0(2, 2), t1(2, 2);
  t0 << 2, 0, 0, 1;
  t1 << 0, 1, 1, 0;
  const PencilReport r = PencilSpectrum(HandForms(t0, t1, 0));
  CHECK(r.nonreal_count == 0);
  CHECK(std::abs(r.z[0].real()) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("singular t1 is rejected")
{
  Eigen::MatrixXcd t0 = Eigen::MatrixXcd::Identity(2, 2), t1 = Eigen::MatrixXcd::Zero(2, 2);
  t1(0, 0) = 1.0;
  CHECK_THROWS_AS(PencilSpectrum(HandForms(t0, t1, 0)), DegenerateFormError);
}

TEST_CASE("free slab at lambda = 0 has a purely real pencil spectrum")
{
  const TwistedGrid slab(GridMode::Slab, {6, 6, 6}, 0);
  const PencilRun run = RunPencil(testing::Free(), slab, {0.2, 0.1}, 0.0);
  CHECK(run.forms.inertia_m == 0);
  CHECK(run.report.nonreal_count == 0);
  CHECK(run.subspaces.DimN() == 0);
  CHECK(run.subspaces.DimZ() == 36);
}

TEST_CASE("slab forms on a symmetric preset are Hermitian and satisfy the bound")
{
  const TwistedGrid slab(GridMode::Slab, {6, 6, 6}, 1);
  for (double lambda : {0.3, 1.5})
  {
    const PencilRun run = RunPencil(testing::SymmetricPreset(2), slab, {0.25, 0.1}, lambda);
    CHECK(run.forms.t0_hermitian_defect <= 1e-10);
    CHECK(run.forms.t1_hermitian_defect <= 1e-10);
    CHECK(run.report.BoundHolds());
    CHECK(run.report.max_isotropy_residual <= 1e-8);
    CHECK(run.report.conjugation_defect <= 1e-6);
    CHECK(run.subspaces.max_interior_residual <= 1e-10);
    CHECK(run.multipliers.size() == run.report.z.size());
  }
}

TEST_CASE("lambda at an interior Dirichlet eigenvalue produces a null space")
{
  const TwistedGrid slab(GridMode::Slab, {6, 6, 6}, 0);
  const Problem p = testing::SymmetricPreset(1);
  const FiberSystem s0 = AssembleSlab(p, slab, {0.0, 0.0}, 0.0);
  const auto interior = slab.Interior();
  const Index ni = Index(interior.size());
  const Eigen::MatrixXcd full(s0.H);
  Eigen::MatrixXcd hii(ni, ni);
  for (Index a = 0; a < ni; a++)
  {
    for (Index b = 0; b < ni; b++)
    {
      hii(a, b) = full(interior[a], interior[b]);
    }
  }
  const double mu = HermitianEigen(hii / s0.mass, 1, false).values(0);
  const FiberSystem s = AssembleSlab(p, slab, {0.0, 0.0}, mu);
  const Subspaces sub = BuildSubspaces(s);
  CHECK(sub.DimN() >= 1);
  CHECK(sub.incompatible_directions >= 1);
  CHECK(sub.DimN() + sub.DimZ() > 0);
  const Eigen::MatrixXcd gram = sub.null_basis.adjoint() * sub.null_basis * s.mass;
  CHECK((gram - Eigen::MatrixXcd::Identity(sub.DimN(), sub.DimN())).norm() < 1e-10);
}

TEST_CASE("reconstruction and its inverse round-trip")
{
  const TwistedGrid slab(GridMode::Slab, {4, 4, 4}, 0);
  const Index n = slab.DofCount();
  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(n), omega = Eigen::VectorXcd::Zero(n);
  for (Index i = 0; i < n; i++)
  {
    const int layer = slab.Node(i)[2];
    if (layer < 4)
    {
      phi(i) = Complex(std::sin(0.3 * i), std::cos(0.7 * i));
    }
    if (layer > 0 && layer < 4)
    {
      omega(i) = Complex(0.1 * i, -0.05);
    }
  }
  const Complex zeta = std::polar(1.3, 0.4);
  const Eigen::VectorXcd u = ReconstructSolution(phi, zeta, omega, slab);
  const Eigen::VectorXcd back = InvertReconstruction(u, zeta, slab);
  CHECK((back - (phi + InvertReconstruction(omega, zeta, slab))).norm() < 1e-12 * u.norm());
  CHECK(TraceRelationDefect(u, zeta, slab) < 1e-12 * u.norm());
  CHECK_THROWS_AS(InvertReconstruction(u, 1.0, slab), InvalidInput);
}

TEST_CASE("pencil JSON carries the schema version and multipliers")
{
  const TwistedGrid slab(GridMode::Slab, {4, 4, 4}, 0);
  const PencilRun run = RunPencil(testing::Free(), slab, {0.0, 0.0}, 0.5);
  const auto j = ToJson(run);
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("z").size() == run.report.z.size());
  CHECK(j.at("inertia_m") == run.forms.inertia_m);
}
