// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGBLOCH_PENCIL_HPP
#define MAGBLOCH_PENCIL_HPP

#include <optional>
#include <vector>
#include <Eigen/Dense>
#include <nlohmann/json.hpp>
#include "magbloch/fiber.hpp"

namespace magbloch
{

struct PencilOptions
{
  // Interior eigenvalues below tol_null * max|eig| span the near-null space N.
  double tol_null = 1e-8;
  // z is non-real when |Im z| > tol_real * (1 + |z|).
  double tol_real = 1e-7;
  // t1 counts as singular when sigma_min / sigma_max <= tol_singular.
  double tol_singular = 1e-13;
};

// Discrete spaces of the reduction on a slab grid. Columns are full slab grid functions.
struct Subspaces
{
  Eigen::MatrixXcd null_basis;  // N, mass-orthonormal, zero on both faces
  Eigen::MatrixXcd z_basis;     // Z, unit mass norm, zero on the top face, mass-orthogonal to N
  Eigen::MatrixXcd face_data;   // bottom-face traces of the z_basis columns before scaling
  Index incompatible_directions = 0;
  double interior_norm = 0.0;          // max |eig| of the interior block
  double interior_min_abs = 0.0;       // min |eig| over the complement of N
  double max_interior_residual = 0.0;  // max_m |(H phi_m)_I| / (|H| |phi_m|)
  double z_condition = 0.0;            // condition number of the mass Gram matrix of Z

  Index DimN() const { return null_basis.cols(); }
  Index DimZ() const { return z_basis.cols(); }
};

// Builds N and Z from the interior block of the slab form. Bottom-face data is restricted to
// the subspace for which the interior problem is solvable (the orthogonal complement of
// N^* H_{I,B-} data); its codimension is reported as incompatible_directions.
Subspaces BuildSubspaces(const FiberSystem &slab, const PencilOptions &options = {});

struct DNForms
{
  Eigen::MatrixXcd t0;  // t0[m, n] = phi_m^* H phi_n
  Eigen::MatrixXcd t1;  // t1[m, n] = phi_m^* H (J phi_n)
  Eigen::VectorXd t0_eigenvalues;
  double sigma_min_t1 = 0.0;
  double sigma_max_t1 = 0.0;
  int inertia_m = 0;  // eigenvalues of t0 that are <= 0
  double t0_hermitian_defect = 0.0;  // |t - t^*| / |t|, spectral norms
  double t1_hermitian_defect = 0.0;
  double h_norm = 0.0;  // max-abs-row-sum bound on |H|
};

DNForms AssembleDnForms(const FiberSystem &slab, const Subspaces &sub);

struct PencilReport
{
  std::vector<Complex> z;  // eigenvalues of t0 + z t1, ascending by (Re, Im)
  Eigen::MatrixXcd eigenvectors;
  std::vector<bool> nonreal;
  int nonreal_count = 0;
  int inertia_m = 0;
  int bound_2m = 0;
  // For each non-real z: (|c^* t0 c| + |c^* t1 c|) / ((|t0| + |t1|) |c|^2).
  std::vector<double> isotropy_residuals;
  double max_isotropy_residual = 0.0;
  // max over z of min over z' of |conj(z) - z'| / (1 + |z|).
  double conjugation_defect = 0.0;
  double sigma_min_t1 = 0.0;
  double sigma_max_t1 = 0.0;

  bool BoundHolds() const { return nonreal_count <= bound_2m; }
};

// Throws DegenerateFormError when t1 is numerically singular.
PencilReport PencilSpectrum(const DNForms &forms, const PencilOptions &options = {});

// Roots of zeta^2 - 2 z zeta + 1 = 0.
struct Multiplier
{
  Complex z;
  Complex zeta_plus;   // |zeta_plus| >= 1
  Complex zeta_minus;  // 1 / zeta_plus
  bool on_unit_circle = false;
  std::optional<double> k3;  // arccos(z) / (2 pi) in [0, 1/2] when on the unit circle
  double decay_rate = 0.0;   // |log |zeta||
};

Multiplier MultiplierFor(Complex z, double tol_real = 1e-7);
std::vector<Multiplier> Multipliers(const PencilReport &report, double tol_real = 1e-7);

// Quasimomenta k3 in [0, 1) of the unit-circle multipliers, both k3 and 1 - k3, sorted.
std::vector<double> PropagatingK3(const std::vector<Multiplier> &multipliers);

// u = phi + zeta J phi + omega.
Eigen::VectorXcd ReconstructSolution(const Eigen::VectorXcd &phi, Complex zeta,
                                     const Eigen::VectorXcd &omega, const TwistedGrid &grid);
// (1 - zeta^2)^{-1} (u - zeta J u); requires zeta^2 != 1.
Eigen::VectorXcd InvertReconstruction(const Eigen::VectorXcd &u, Complex zeta,
                                      const TwistedGrid &grid);
// max over top-face nodes of |u(top) - zeta u(matching bottom node)|.
double TraceRelationDefect(const Eigen::VectorXcd &u, Complex zeta, const TwistedGrid &grid);
// |(H u)_I| / (|H| |u|).
double InteriorResidual(const FiberSystem &slab, const Eigen::VectorXcd &u);

// Complete reduction at one (khat, lambda).
struct PencilRun
{
  std::array<double, 2> khat{0.0, 0.0};
  double lambda = 0.0;
  Subspaces subspaces;
  DNForms forms;
  PencilReport report;
  std::vector<Multiplier> multipliers;
};

PencilRun RunPencil(const Problem &problem, const TwistedGrid &grid,
                    const std::array<double, 2> &khat, double lambda,
                    const PencilOptions &options = {});

nlohmann::json ToJson(const PencilRun &run);
// Scatter rows re_zeta,im_zeta,on_unit_circle for both roots of every multiplier.
void WriteMultiplierPlot(const std::vector<Multiplier> &multipliers, std::ostream &out);

}  // namespace magbloch

#endif  // MAGBLOCH_PENCIL_HPP
