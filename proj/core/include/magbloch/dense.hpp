// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGBLOCH_DENSE_HPP
#define MAGBLOCH_DENSE_HPP

#include <Eigen/Dense>

namespace magbloch
{

struct HermitianEigenpairs
{
  Eigen::VectorXd values;  // ascending
  Eigen::MatrixXcd vectors;
};

// Eigenpairs of a Hermitian matrix (lower triangle referenced) through LAPACK zheevr.
// count < 0 returns the full spectrum, otherwise the lowest `count` pairs.
HermitianEigenpairs HermitianEigen(const Eigen::MatrixXcd &a, int count = -1,
                                   bool vectors = true);

}  // namespace magbloch

#endif  // MAGBLOCH_DENSE_HPP
