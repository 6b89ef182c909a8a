// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#include "magbloch/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <lapacke.h>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include "magbloch/dense.hpp"
#include "magbloch/errors.hpp"
#include "magbloch/format.hpp"

namespace magbloch
{

namespace
{

using Dense = Eigen::MatrixXcd;

// Max absolute row sum, an upper bound on the spectral norm of a Hermitian matrix.
double RowSumNorm(const SparseMatrix &h)
{
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(h.rows());
  for (int j = 0; j < h.outerSize(); j++)
  {
    for (SparseMatrix::InnerIterator it(h, j); it; ++it)
    {
      sums(it.row()) += std::abs(it.value());
    }
  }
  return sums.size() ? sums.maxCoeff() : 0.0;
}

double SpectralNorm(const Dense &a)
{
  if (a.size() == 0)
  {
    return 0.0;
  }
  Eigen::BDCSVD<Dense> svd(a);
  return svd.singularValues()(0);
}

Dense ApplyReflection(const Dense &v, const TwistedGrid &grid)
{
  Dense out(v.rows(), v.cols());
  for (Index i = 0; i < v.rows(); i++)
  {
    out.row(i) = v.row(grid.ReflectDof(i));
  }
  return out;
}

void CheckSlab(const FiberSystem &slab)
{
  if (slab.grid.Mode() != GridMode::Slab)
  {
    throw InvalidInput("the pencil reduction needs a slab-mode system");
  }
}

}  // namespace

Subspaces BuildSubspaces(const FiberSystem &slab, const PencilOptions &options)
{
  CheckSlab(slab);
  const TwistedGrid &grid = slab.grid;
  const Index f = grid.FaceSize();
  const Index n = grid.DofCount();
  const Index ni = n - 2 * f;
  const Dense hii = Dense(slab.H.block(f, f, ni, ni));
  const Dense hib = Dense(slab.H.block(f, 0, ni, f));

  const HermitianEigenpairs eig = HermitianEigen(hii);
  const double top = eig.values.cwiseAbs().maxCoeff();
  std::vector<Index> null_idx, range_idx;
  for (Index j = 0; j < eig.values.size(); j++)
  {
    (std::abs(eig.values(j)) < options.tol_null * top ? null_idx : range_idx).push_back(j);
  }
  Dense un(ni, Index(null_idx.size()));
  for (Index j = 0; j < un.cols(); j++)
  {
    un.col(j) = eig.vectors.col(null_idx[j]);
  }
  Dense ur(ni, Index(range_idx.size()));
  Eigen::VectorXd inv(ur.cols());
  double min_abs = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < ur.cols(); j++)
  {
    ur.col(j) = eig.vectors.col(range_idx[j]);
    inv(j) = 1.0 / eig.values(range_idx[j]);
    min_abs = std::min(min_abs, std::abs(eig.values(range_idx[j])));
  }

  Subspaces sub;
  sub.interior_norm = top;
  sub.interior_min_abs = min_abs;

  // Bottom data g is admissible when the interior equation H_II phi = -H_IB g is solvable,
  // i.e. N^* H_IB g = 0.
  Dense g = Dense::Identity(f, f);
  if (un.cols() > 0)
  {
    const Dense c = un.adjoint() * hib;
    Eigen::JacobiSVD<Dense> svd(c, Eigen::ComputeFullV);
    const double threshold = options.tol_null * hib.norm();
    Index rank = 0;
    for (Index j = 0; j < svd.singularValues().size(); j++)
    {
      rank += svd.singularValues()(j) > threshold ? 1 : 0;
    }
    g = svd.matrixV().rightCols(f - rank);
    sub.incompatible_directions = rank;
  }
  if (g.cols() == 0)
  {
    throw Error("no admissible bottom-face data: Z is trivial");
  }

  Dense phi_i = -(ur * (inv.asDiagonal() * (ur.adjoint() * (hib * g))));
  if (un.cols() > 0)
  {
    phi_i -= un * (un.adjoint() * phi_i);
  }

  const double sqrt_mass = std::sqrt(slab.mass);
  sub.null_basis = Dense::Zero(n, un.cols());
  sub.null_basis.middleRows(f, ni) = un / sqrt_mass;

  Dense phi = Dense::Zero(n, g.cols());
  phi.topRows(f) = g;
  phi.middleRows(f, ni) = phi_i;
  sub.face_data = g;

  const double hnorm = RowSumNorm(slab.H);
  const Dense hphi = slab.H * phi;
  for (Index j = 0; j < phi.cols(); j++)
  {
    const double res = hphi.col(j).segment(f, ni).norm() / (hnorm * phi.col(j).norm());
    sub.max_interior_residual = std::max(sub.max_interior_residual, res);
    phi.col(j) /= sqrt_mass * phi.col(j).norm();
  }
  sub.z_basis = std::move(phi);

  const Dense gram = slab.mass * (sub.z_basis.adjoint() * sub.z_basis);
  Eigen::SelfAdjointEigenSolver<Dense> gram_eig(0.5 * (gram + gram.adjoint()), Eigen::EigenvaluesOnly);
  sub.z_condition = gram_eig.eigenvalues().maxCoeff() / gram_eig.eigenvalues().minCoeff();
  return sub;
}

DNForms AssembleDnForms(const FiberSystem &slab, const Subspaces &sub)
{
  CheckSlab(slab);
  const Dense &phi = sub.z_basis;
  const Dense hphi = slab.H * phi;
  const Dense jphi = ApplyReflection(phi, slab.grid);

  DNForms forms;
  forms.t0 = phi.adjoint() * hphi;
  // H is Hermitian, so phi^* H (J phi) = (H phi)^* (J phi).
  forms.t1 = hphi.adjoint() * jphi;
  forms.h_norm = RowSumNorm(slab.H);

  const double t0_norm = SpectralNorm(forms.t0);
  const double t1_norm = SpectralNorm(forms.t1);
  forms.t0_hermitian_defect =
      t0_norm > 0.0 ? SpectralNorm(forms.t0 - forms.t0.adjoint()) / t0_norm : 0.0;
  forms.t1_hermitian_defect =
      t1_norm > 0.0 ? SpectralNorm(forms.t1 - forms.t1.adjoint()) / t1_norm : 0.0;

  Eigen::BDCSVD<Dense> svd(forms.t1);
  forms.sigma_max_t1 = svd.singularValues()(0);
  forms.sigma_min_t1 = svd.singularValues()(svd.singularValues().size() - 1);

  forms.t0_eigenvalues = HermitianEigen(0.5 * (forms.t0 + forms.t0.adjoint()), -1, false).values;
  const double scale = forms.t0_eigenvalues.cwiseAbs().maxCoeff();
  forms.inertia_m = 0;
  for (Index j = 0; j < forms.t0_eigenvalues.size(); j++)
  {
    forms.inertia_m += forms.t0_eigenvalues(j) <= 1e-13 * scale ? 1 : 0;
  }
  return forms;
}

PencilReport PencilSpectrum(const DNForms &forms, const PencilOptions &options)
{
  if (!(forms.sigma_min_t1 > options.tol_singular * forms.sigma_max_t1))
  {
    throw DegenerateFormError("t1 is numerically singular: sigma_min = " +
                                  FormatNumber(forms.sigma_min_t1) +
                                  ", sigma_max = " + FormatNumber(forms.sigma_max_t1),
                              forms.sigma_min_t1, forms.sigma_max_t1);
  }
  const lapack_int n = lapack_int(forms.t0.rows());
  // (t0 + z t1) c = 0  <=>  t0 c = z (-t1) c.
  Dense a = 0.5 * (forms.t0 + forms.t0.adjoint());
  Dense b = -forms.t1;
  Eigen::VectorXcd alpha(n), beta(n);
  Dense vr(n, n);
  const lapack_int info = LAPACKE_zggev(
      LAPACK_COL_MAJOR, 'N', 'V', n, reinterpret_cast<lapack_complex_double *>(a.data()), n,
      reinterpret_cast<lapack_complex_double *>(b.data()), n,
      reinterpret_cast<lapack_complex_double *>(alpha.data()),
      reinterpret_cast<lapack_complex_double *>(beta.data()), nullptr, n,
      reinterpret_cast<lapack_complex_double *>(vr.data()), n);
  if (info != 0)
  {
    throw Error("LAPACK zggev failed with info = " + std::to_string(info));
  }

  std::vector<Index> order(n);
  std::vector<Complex> z(n);
  for (Index j = 0; j < n; j++)
  {
    order[j] = j;
    z[j] = alpha(j) / beta(j);
  }
  std::sort(order.begin(), order.end(),
            [&](Index p, Index q)
            {
              return z[p].real() != z[q].real() ? z[p].real() < z[q].real()
                                                : z[p].imag() < z[q].imag();
            });

  PencilReport report;
  report.sigma_min_t1 = forms.sigma_min_t1;
  report.sigma_max_t1 = forms.sigma_max_t1;
  report.inertia_m = forms.inertia_m;
  report.bound_2m = 2 * forms.inertia_m;
  report.eigenvectors.resize(n, n);
  const double norm_sum = SpectralNorm(forms.t0) + SpectralNorm(forms.t1);
  for (Index j = 0; j < n; j++)
  {
    const Complex zj = z[order[j]];
    const Eigen::VectorXcd c = vr.col(order[j]);
    report.z.push_back(zj);
    report.eigenvectors.col(j) = c;
    const bool nonreal = std::abs(zj.imag()) > options.tol_real * (1.0 + std::abs(zj));
    report.nonreal.push_back(nonreal);
    if (nonreal)
    {
      report.nonreal_count++;
      const Complex q0 = c.dot(forms.t0 * c);
      const Complex q1 = c.dot(forms.t1 * c);
      const double iso = (std::abs(q0) + std::abs(q1)) / (norm_sum * c.squaredNorm());
      report.isotropy_residuals.push_back(iso);
      report.max_isotropy_residual = std::max(report.max_isotropy_residual, iso);
    }
  }
  for (const Complex &zi : report.z)
  {
    double best = std::numeric_limits<double>::infinity();
    for (const Complex &zj : report.z)
    {
      best = std::min(best, std::abs(std::conj(zi) - zj) / (1.0 + std::abs(zi)));
    }
    report.conjugation_defect = std::max(report.conjugation_defect, best);
  }
  return report;
}

Multiplier MultiplierFor(Complex z, double tol_real)
{
  Multiplier m;
  m.z = z;
  const bool real = std::abs(z.imag()) <= tol_real * (1.0 + std::abs(z));
  if (real && std::abs(z.real()) <= 1.0 + tol_real)
  {
    const double theta = std::acos(std::clamp(z.real(), -1.0, 1.0));
    m.zeta_plus = std::polar(1.0, theta);
    m.zeta_minus = std::polar(1.0, -theta);
    m.on_unit_circle = true;
    m.k3 = theta / (2.0 * std::numbers::pi);
    return m;
  }
  const Complex s = std::sqrt(z * z - 1.0);
  const Complex a = z + s, b = z - s;
  m.zeta_plus = std::abs(a) >= std::abs(b) ? a : b;
  m.zeta_minus = 1.0 / m.zeta_plus;
  m.decay_rate = std::abs(std::log(std::abs(m.zeta_plus)));
  return m;
}

std::vector<Multiplier> Multipliers(const PencilReport &report, double tol_real)
{
  std::vector<Multiplier> out;
  out.reserve(report.z.size());
  for (const Complex &z : report.z)
  {
    out.push_back(MultiplierFor(z, tol_real));
  }
  return out;
}

std::vector<double> PropagatingK3(const std::vector<Multiplier> &multipliers)
{
  std::vector<double> k3;
  for (const auto &m : multipliers)
  {
    if (m.on_unit_circle)
    {
      k3.push_back(*m.k3);
      k3.push_back(*m.k3 > 0.0 ? 1.0 - *m.k3 : 0.0);
    }
  }
  std::sort(k3.begin(), k3.end());
  return k3;
}

Eigen::VectorXcd ReconstructSolution(const Eigen::VectorXcd &phi, Complex zeta,
                                     const Eigen::VectorXcd &omega, const TwistedGrid &grid)
{
  return phi + zeta * ApplyReflection(phi, grid) + omega;
}

Eigen::VectorXcd InvertReconstruction(const Eigen::VectorXcd &u, Complex zeta,
                                      const TwistedGrid &grid)
{
  const Complex d = 1.0 - zeta * zeta;
  if (d == 0.0)
  {
    throw InvalidInput("reconstruction is not invertible at zeta = +-1");
  }
  return (u - zeta * ApplyReflection(u, grid)) / d;
}

double TraceRelationDefect(const Eigen::VectorXcd &u, Complex zeta, const TwistedGrid &grid)
{
  const auto bottom = grid.BottomFace();
  const auto top = grid.TopFace();
  double out = 0.0;
  for (std::size_t i = 0; i < top.size(); i++)
  {
    out = std::max(out, std::abs(u(top[i]) - zeta * u(bottom[i])));
  }
  return out;
}

double InteriorResidual(const FiberSystem &slab, const Eigen::VectorXcd &u)
{
  CheckSlab(slab);
  const Index f = slab.grid.FaceSize();
  const Index ni = slab.Size() - 2 * f;
  const Eigen::VectorXcd hu = slab.H * u;
  const double denom = RowSumNorm(slab.H) * u.norm();
  return denom > 0.0 ? hu.segment(f, ni).norm() / denom : 0.0;
}

PencilRun RunPencil(const Problem &problem, const TwistedGrid &grid,
                    const std::array<double, 2> &khat, double lambda, const PencilOptions &options)
{
  PencilRun run;
  run.khat = khat;
  run.lambda = lambda;
  const FiberSystem slab = AssembleSlab(problem, grid, khat, lambda);
  run.subspaces = BuildSubspaces(slab, options);
  run.forms = AssembleDnForms(slab, run.subspaces);
  run.report = PencilSpectrum(run.forms, options);
  run.multipliers = Multipliers(run.report, options.tol_real);
  return run;
}

nlohmann::json ToJson(const PencilRun &run)
{
  auto pair = [](Complex c) { return nlohmann::json::array({c.real(), c.imag()}); };
  nlohmann::json z = nlohmann::json::array(), zeta = nlohmann::json::array(),
                 circle = nlohmann::json::array(), k3 = nlohmann::json::array(),
                 decay = nlohmann::json::array();
  for (const auto &m : run.multipliers)
  {
    z.push_back(pair(m.z));
    zeta.push_back(nlohmann::json::array({pair(m.zeta_plus), pair(m.zeta_minus)}));
    circle.push_back(m.on_unit_circle);
    k3.push_back(m.k3 ? nlohmann::json(*m.k3) : nlohmann::json(nullptr));
    decay.push_back(m.decay_rate);
  }
  const auto &r = run.report;
  return {{"schema_version", 1},
          {"khat", run.khat},
          {"lambda", run.lambda},
          {"dim_n", run.subspaces.DimN()},
          {"dim_z", run.subspaces.DimZ()},
          {"incompatible_directions", run.subspaces.incompatible_directions},
          {"z_condition", run.subspaces.z_condition},
          {"max_interior_residual", run.subspaces.max_interior_residual},
          {"inertia_m", r.inertia_m},
          {"bound_2m", r.bound_2m},
          {"nonreal_count", r.nonreal_count},
          {"sigma_min_t1", r.sigma_min_t1},
          {"sigma_max_t1", r.sigma_max_t1},
          {"t0_hermitian_defect", run.forms.t0_hermitian_defect},
          {"t1_hermitian_defect", run.forms.t1_hermitian_defect},
          {"max_isotropy_residual", r.max_isotropy_residual},
          {"conjugation_defect", r.conjugation_defect},
          {"z", z},
          {"zeta", zeta},
          {"on_unit_circle", circle},
          {"k3", k3},
          {"decay_rate", decay}};
}

void WriteMultiplierPlot(const std::vector<Multiplier> &multipliers, std::ostream &out)
{
  out << "re_zeta,im_zeta,on_unit_circle\n";
  for (const auto &m : multipliers)
  {
    for (const Complex &zeta : {m.zeta_plus, m.zeta_minus})
    {
      out << FormatNumber(zeta.real()) << ',' << FormatNumber(zeta.imag()) << ','
          << (m.on_unit_circle ? 1 : 0) << '\n';
    }
  }
}

}  // namespace magbloch
