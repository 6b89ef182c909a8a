// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#include "magbloch/dense.hpp"

#include <vector>
#include <lapacke.h>
#include "magbloch/errors.hpp"

namespace magbloch
{

HermitianEigenpairs HermitianEigen(const Eigen::MatrixXcd &a, int count, bool vectors)
{
  const lapack_int n = static_cast<lapack_int>(a.rows());
  if (a.cols() != a.rows())
  {
    throw InvalidInput("HermitianEigen needs a square matrix");
  }
  HermitianEigenpairs out;
  if (n == 0)
  {
    return out;
  }
  const bool partial = count >= 0 && count < n;
  const lapack_int m_max = partial ? count : n;
  Eigen::MatrixXcd work = a;
  Eigen::VectorXd w(n);
  Eigen::MatrixXcd z(n, vectors ? m_max : 1);
  std::vector<lapack_int> isuppz(2 * std::size_t(n));
  lapack_int found = 0;
  if (partial && count == 0)
  {
    out.values.resize(0);
    out.vectors.resize(n, 0);
    return out;
  }
  const lapack_int info = LAPACKE_zheevr(
      LAPACK_COL_MAJOR, vectors ? 'V' : 'N', partial ? 'I' : 'A', 'L', n,
      reinterpret_cast<lapack_complex_double *>(work.data()), n, 0.0, 0.0, 1, m_max, 0.0,
      &found, w.data(), reinterpret_cast<lapack_complex_double *>(z.data()), n,
      isuppz.data());
  if (info != 0)
  {
    throw Error("LAPACK zheevr failed with info = " + std::to_string(info));
  }
  out.values = w.head(found);
  if (vectors)
  {
    out.vectors = z.leftCols(found);
  }
  return out;
}

}  // namespace magbloch
