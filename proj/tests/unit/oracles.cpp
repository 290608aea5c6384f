// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace oracle
{

DenseLU::DenseLU(const DenseMatrix &a)
{
  const auto n = static_cast<std::size_t>(a.rows());
  lu.assign(n, std::vector<Complex>(n));
  perm.resize(n);
  for (std::size_t i = 0; i < n; i++)
  {
    perm[i] = i;
    for (std::size_t j = 0; j < n; j++)
    {
      lu[i][j] = a(static_cast<Index>(i), static_cast<Index>(j));
    }
  }
  for (std::size_t c = 0; c < n; c++)
  {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < n; r++)
    {
      if (std::abs(lu[r][c]) > std::abs(lu[pivot][c]))
      {
        pivot = r;
      }
    }
    if (lu[pivot][c] == Complex(0.0))
    {
      throw std::runtime_error("oracle: singular matrix");
    }
    if (pivot != c)
    {
      std::swap(lu[pivot], lu[c]);
      std::swap(perm[pivot], perm[c]);
      swaps++;
    }
    for (std::size_t r = c + 1; r < n; r++)
    {
      const Complex f = lu[r][c] / lu[c][c];
      lu[r][c] = f;
      for (std::size_t j = c + 1; j < n; j++)
      {
        lu[r][j] -= f * lu[c][j];
      }
    }
  }
}

ComplexVector DenseLU::solve(const ComplexVector &b) const
{
  const std::size_t n = lu.size();
  std::vector<Complex> y(n);
  for (std::size_t i = 0; i < n; i++)
  {
    Complex s = b[static_cast<Index>(perm[i])];
    for (std::size_t j = 0; j < i; j++)
    {
      s -= lu[i][j] * y[j];
    }
    y[i] = s;
  }
  ComplexVector x(static_cast<Index>(n));
  for (std::size_t i = n; i-- > 0;)
  {
    Complex s = y[i];
    for (std::size_t j = i + 1; j < n; j++)
    {
      s -= lu[i][j] * x[static_cast<Index>(j)];
    }
    x[static_cast<Index>(i)] = s / lu[i][i];
  }
  return x;
}

DenseMatrix DenseLU::inverse() const
{
  const auto n = static_cast<Index>(lu.size());
  DenseMatrix inv(n, n);
  for (Index c = 0; c < n; c++)
  {
    ComplexVector e = ComplexVector::Zero(n);
    e[c] = 1.0;
    inv.col(c) = solve(e);
  }
  return inv;
}

Complex DenseLU::determinant() const
{
  Complex det = swaps % 2 == 0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < lu.size(); i++)
  {
    det *= lu[i][i];
  }
  return det;
}

DenseMatrix dense(const helmdd::ComplexSparseMatrix &a)
{
  DenseMatrix d = DenseMatrix::Zero(a.rows(), a.cols());
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto values = a.values();
  for (Index r = 0; r < a.rows(); r++)
  {
    for (auto p = offsets[static_cast<std::size_t>(r)]; p < offsets[static_cast<std::size_t>(r) + 1];
         p++)
    {
      d(r, cols[static_cast<std::size_t>(p)]) += values[static_cast<std::size_t>(p)];
    }
  }
  return d;
}

DenseMatrix restriction(const helmdd::Subdomain &sub, Index n)
{
  DenseMatrix r = DenseMatrix::Zero(sub.size(), n);
  for (Index l = 0; l < sub.size(); l++)
  {
    r(l, sub.dofs[static_cast<std::size_t>(l)]) = 1.0;
  }
  return r;
}

DenseMatrix weighted_restriction(const helmdd::Decomposition &dd, Index j)
{
  const auto &sub = dd.subdomains[static_cast<std::size_t>(j)];
  DenseMatrix r = restriction(sub, dd.num_global_dofs);
  for (Index l = 0; l < sub.size(); l++)
  {
    r.row(l) *= dd.pou_weights[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)];
  }
  return r;
}

DenseMatrix one_level(const helmdd::Decomposition &dd,
                      const std::vector<helmdd::ComplexSparseMatrix> &local)
{
  const Index n = dd.num_global_dofs;
  DenseMatrix m = DenseMatrix::Zero(n, n);
  for (Index j = 0; j < dd.num_subdomains(); j++)
  {
    const auto &sub = dd.subdomains[static_cast<std::size_t>(j)];
    const DenseMatrix r = restriction(sub, n);
    const DenseMatrix rt = weighted_restriction(dd, j);
    const DenseMatrix inv = DenseLU(dense(local[static_cast<std::size_t>(j)])).inverse();
    m += rt.transpose() * inv * r;
  }
  return m;
}

DenseMatrix two_level(const DenseMatrix &m1, const DenseMatrix &z, const DenseMatrix &a,
                      bool hybrid)
{
  const Index n = a.rows();
  const DenseMatrix e = z.adjoint() * a * z;
  const DenseMatrix xi = z * DenseLU(e).inverse() * z.adjoint();
  if (!hybrid)
  {
    return m1 + xi;
  }
  const DenseMatrix id = DenseMatrix::Identity(n, n);
  const DenseMatrix p = id - a * xi;
  const DenseMatrix q = id - xi * a;
  return q * m1 * p + xi;
}

double max_abs(const DenseMatrix &a)
{
  double m = 0.0;
  for (Index i = 0; i < a.rows(); i++)
  {
    for (Index j = 0; j < a.cols(); j++)
    {
      m = std::max(m, std::abs(a(i, j)));
    }
  }
  return m;
}

ComplexVector random_vector(Index n, unsigned seed)
{
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexVector v(n);
  for (Index i = 0; i < n; i++)
  {
    const double re = u(gen);
    v[i] = Complex(re, u(gen));
  }
  return v;
}

}  // namespace oracle
