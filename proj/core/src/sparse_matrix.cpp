// SPDX-License-Identifier: Apache-2.0

#include "helmdd/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace helmdd
{

ComplexSparseMatrix ComplexSparseMatrix::from_triplets(Index rows, Index cols,
                                                       std::span<const Triplet> triplets)
{
  std::vector<Eigen::Triplet<Complex, int>> entries;
  entries.reserve(triplets.size());
  for (const auto &t : triplets)
  {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
    {
      throw ArgumentError("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                          ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    entries.emplace_back(static_cast<int>(t.row), static_cast<int>(t.col), t.value);
  }
  Storage m(rows, cols);
  m.setFromTriplets(entries.begin(), entries.end());
  return ComplexSparseMatrix(std::move(m));
}

ComplexSparseMatrix ComplexSparseMatrix::identity(Index n)
{
  Storage m(n, n);
  m.setIdentity();
  return ComplexSparseMatrix(std::move(m));
}

std::span<const int> ComplexSparseMatrix::row_offsets() const
{
  return {m_.outerIndexPtr(), static_cast<std::size_t>(m_.rows() + 1)};
}

std::span<const int> ComplexSparseMatrix::col_indices() const
{
  return {m_.innerIndexPtr(), static_cast<std::size_t>(m_.nonZeros())};
}

std::span<const Complex> ComplexSparseMatrix::values() const
{
  return {m_.valuePtr(), static_cast<std::size_t>(m_.nonZeros())};
}

Complex ComplexSparseMatrix::coeff(Index i, Index j) const
{
  return m_.coeff(i, j);
}

ComplexVector ComplexSparseMatrix::operator*(const ComplexVector &x) const
{
  ComplexVector y(rows());
  multiply(x, y);
  return y;
}

void ComplexSparseMatrix::multiply(const ComplexVector &x, ComplexVector &y) const
{
  if (x.size() != cols() || y.size() != rows())
  {
    throw ArgumentError("sparse matrix-vector product: dimension mismatch");
  }
  const int *offsets = m_.outerIndexPtr();
  const int *cols = m_.innerIndexPtr();
  const Complex *vals = m_.valuePtr();
  for (Index i = 0; i < rows(); i++)
  {
    Complex sum = 0.0;
    for (int p = offsets[i]; p < offsets[i + 1]; p++)
    {
      sum += vals[p] * x[cols[p]];
    }
    y[i] = sum;
  }
}

ComplexSparseMatrix ComplexSparseMatrix::operator*(const ComplexSparseMatrix &other) const
{
  if (cols() != other.rows())
  {
    throw ArgumentError("sparse matrix product: dimension mismatch");
  }
  Storage p = (m_ * other.m_).pruned(0.0);
  return ComplexSparseMatrix(std::move(p));
}

ComplexSparseMatrix ComplexSparseMatrix::operator+(const ComplexSparseMatrix &other) const
{
  if (rows() != other.rows() || cols() != other.cols())
  {
    throw ArgumentError("sparse matrix sum: dimension mismatch");
  }
  return ComplexSparseMatrix(Storage(m_ + other.m_));
}

ComplexSparseMatrix ComplexSparseMatrix::operator-(const ComplexSparseMatrix &other) const
{
  if (rows() != other.rows() || cols() != other.cols())
  {
    throw ArgumentError("sparse matrix difference: dimension mismatch");
  }
  return ComplexSparseMatrix(Storage(m_ - other.m_));
}

ComplexSparseMatrix ComplexSparseMatrix::scaled(Complex s) const
{
  return ComplexSparseMatrix(Storage(s * m_));
}

ComplexSparseMatrix ComplexSparseMatrix::transpose() const
{
  return ComplexSparseMatrix(Storage(m_.transpose()));
}

ComplexSparseMatrix ComplexSparseMatrix::adjoint() const
{
  return ComplexSparseMatrix(Storage(m_.adjoint()));
}

ComplexSparseMatrix ComplexSparseMatrix::submatrix(std::span<const Index> row_ids,
                                                   std::span<const Index> col_ids) const
{
  std::vector<Index> col_map(static_cast<std::size_t>(cols()), -1);
  for (std::size_t j = 0; j < col_ids.size(); j++)
  {
    if (col_ids[j] < 0 || col_ids[j] >= cols())
    {
      throw ArgumentError("submatrix: column index out of range");
    }
    col_map[static_cast<std::size_t>(col_ids[j])] = static_cast<Index>(j);
  }
  std::vector<Triplet> entries;
  const int *offsets = m_.outerIndexPtr();
  const int *cidx = m_.innerIndexPtr();
  const Complex *vals = m_.valuePtr();
  for (std::size_t i = 0; i < row_ids.size(); i++)
  {
    const Index r = row_ids[i];
    if (r < 0 || r >= rows())
    {
      throw ArgumentError("submatrix: row index out of range");
    }
    for (int p = offsets[r]; p < offsets[r + 1]; p++)
    {
      const Index c = col_map[static_cast<std::size_t>(cidx[p])];
      if (c >= 0)
      {
        entries.push_back({static_cast<Index>(i), c, vals[p]});
      }
    }
  }
  return from_triplets(static_cast<Index>(row_ids.size()), static_cast<Index>(col_ids.size()),
                       entries);
}

DenseMatrix ComplexSparseMatrix::to_dense() const
{
  return DenseMatrix(m_);
}

double ComplexSparseMatrix::max_asymmetry() const
{
  if (rows() != cols())
  {
    throw ArgumentError("max_asymmetry requires a square matrix");
  }
  double worst = 0.0;
  for (Index i = 0; i < rows(); i++)
  {
    for (Storage::InnerIterator it(m_, i); it; ++it)
    {
      worst = std::max(worst, std::abs(it.value() - m_.coeff(it.col(), i)));
    }
  }
  return worst;
}

double ComplexSparseMatrix::frobenius_norm() const
{
  return m_.norm();
}

Index ComplexSparseMatrix::count_zero_columns() const
{
  std::vector<char> seen(static_cast<std::size_t>(cols()), 0);
  for (Index i = 0; i < rows(); i++)
  {
    for (Storage::InnerIterator it(m_, i); it; ++it)
    {
      if (it.value() != Complex(0.0))
      {
        seen[static_cast<std::size_t>(it.col())] = 1;
      }
    }
  }
  return static_cast<Index>(std::count(seen.begin(), seen.end(), 0));
}

void write_coordinate(std::ostream &os, const ComplexSparseMatrix &a)
{
  const auto flags = os.flags();
  const auto precision = os.precision();
  os << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  os << std::setprecision(17);
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  for (Index i = 0; i < a.rows(); i++)
  {
    for (int p = offsets[static_cast<std::size_t>(i)]; p < offsets[static_cast<std::size_t>(i) + 1];
         p++)
    {
      const auto q = static_cast<std::size_t>(p);
      os << i << ' ' << cols[q] << ' ' << vals[q].real() << ' ' << vals[q].imag() << '\n';
    }
  }
  os.flags(flags);
  os.precision(precision);
}

}  // namespace helmdd
