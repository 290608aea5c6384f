// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "helmdd/types.hpp"

namespace helmdd
{

struct EigenPairs
{
  ComplexVector values;
  // Column j pairs with values[j]; normalized to unit M-norm.
  DenseMatrix vectors;
};

// All eigenpairs of S v = lambda M v for Hermitian positive definite M, by
// Cholesky reduction to a standard problem. Sorted by ascending real part, then
// imaginary part, then original index.
EigenPairs generalized_eig(const DenseMatrix &s, const DenseMatrix &m);

// max_j ||S v_j - lambda_j M v_j|| / (||v_j|| (||S||_F + |lambda_j| ||M||_F))
double max_eigen_residual(const DenseMatrix &s, const DenseMatrix &m, const EigenPairs &pairs);

}  // namespace helmdd
