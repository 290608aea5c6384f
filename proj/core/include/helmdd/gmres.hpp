// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "helmdd/types.hpp"

namespace helmdd
{

// out = Op(in); out is pre-sized by the caller.
using LinearOperator = std::function<void(const ComplexVector &in, ComplexVector &out)>;

struct GmresOptions
{
  double tol = 1e-6;
  int max_iter = 500;
  // Residuals are relative to ||b|| by default; otherwise to the initial residual.
  bool relative_to_rhs = true;
  // Reorthogonalize when MGS shrinks the new Krylov vector by more than this factor.
  double reorth_ratio = 100.0;
};

struct GmresOutcome
{
  ComplexVector solution;
  int iterations = 0;
  // Entry 0 is the initial residual; entry m follows m Arnoldi steps.
  std::vector<double> residual_history;
  bool converged = false;
  bool breakdown = false;
};

// Full (unrestarted) GMRES on A M^{-1} y = b with right preconditioning;
// returns x = x0 + M^{-1} y. An empty apply_m means no preconditioner.
GmresOutcome gmres(const LinearOperator &apply_a, const ComplexVector &b,
                   const LinearOperator &apply_m, const ComplexVector &x0,
                   const GmresOptions &options = {});

}  // namespace helmdd
