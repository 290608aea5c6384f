// SPDX-License-Identifier: Apache-2.0

#include "helmdd/eigensolver.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace helmdd
{

EigenPairs generalized_eig(const DenseMatrix &s, const DenseMatrix &m)
{
  const Index n = s.rows();
  if (s.cols() != n || m.rows() != n || m.cols() != n)
  {
    throw ArgumentError("generalized_eig: matrices must be square and of equal size");
  }
  EigenPairs out;
  if (n == 0)
  {
    return out;
  }
  const double mnorm = m.norm();
  if ((m - m.adjoint()).norm() > 1e-12 * mnorm)
  {
    throw ArgumentError("generalized_eig: M is not Hermitian");
  }
  const Eigen::LLT<DenseMatrix> llt(m);
  if (llt.info() != Eigen::Success)
  {
    throw ArgumentError("generalized_eig: M is not positive definite");
  }
  const auto l = llt.matrixL();
  // C = L^{-1} S L^{-H}
  DenseMatrix c = l.solve(s);
  c = l.solve(c.adjoint()).adjoint();

  const Eigen::ComplexEigenSolver<DenseMatrix> solver(c, true);
  if (solver.info() != Eigen::Success)
  {
    throw NumericalError("generalized_eig: eigenvalue iteration did not converge");
  }
  DenseMatrix w = solver.eigenvectors();
  for (Index j = 0; j < n; j++)
  {
    w.col(j).normalize();
  }
  const DenseMatrix v = llt.matrixU().solve(w);

  const ComplexVector &lambda = solver.eigenvalues();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (lambda[a].real() != lambda[b].real())
    {
      return lambda[a].real() < lambda[b].real();
    }
    return lambda[a].imag() < lambda[b].imag();
  });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index j = 0; j < n; j++)
  {
    out.values[j] = lambda[order[static_cast<std::size_t>(j)]];
    out.vectors.col(j) = v.col(order[static_cast<std::size_t>(j)]);
  }
  return out;
}

double max_eigen_residual(const DenseMatrix &s, const DenseMatrix &m, const EigenPairs &pairs)
{
  const double snorm = s.norm();
  const double mnorm = m.norm();
  double worst = 0.0;
  for (Index j = 0; j < pairs.values.size(); j++)
  {
    const auto v = pairs.vectors.col(j);
    const double r = (s * v - pairs.values[j] * (m * v)).norm() / v.norm();
    worst = std::max(worst, r / (snorm + std::abs(pairs.values[j]) * mnorm));
  }
  return worst;
}

}  // namespace helmdd
