// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <initializer_list>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "helmdd/types.hpp"

namespace helmdd
{

struct Triplet
{
  Index row;
  Index col;
  Complex value;
};

// Complex sparse matrix in compressed-row storage. Column indices are sorted
// and unique within each row. Duplicate triplets are summed in insertion order,
// so assembling a and its transpose contributions in the same element order
// yields bitwise symmetric matrices.
class ComplexSparseMatrix
{
public:
  using Storage = Eigen::SparseMatrix<Complex, Eigen::RowMajor, int>;

  ComplexSparseMatrix() = default;
  ComplexSparseMatrix(Index rows, Index cols) : m_(rows, cols) {}
  explicit ComplexSparseMatrix(Storage m) : m_(std::move(m)) { m_.makeCompressed(); }

  static ComplexSparseMatrix from_triplets(Index rows, Index cols,
                                           std::span<const Triplet> triplets);
  static ComplexSparseMatrix from_triplets(Index rows, Index cols,
                                           std::initializer_list<Triplet> triplets)
  {
    return from_triplets(rows, cols, std::span<const Triplet>(triplets.begin(), triplets.size()));
  }
  static ComplexSparseMatrix identity(Index n);

  Index rows() const noexcept { return m_.rows(); }
  Index cols() const noexcept { return m_.cols(); }
  Index nnz() const noexcept { return m_.nonZeros(); }

  std::span<const int> row_offsets() const;
  std::span<const int> col_indices() const;
  std::span<const Complex> values() const;

  // Stored value at (i, j), zero if structurally absent.
  Complex coeff(Index i, Index j) const;

  ComplexVector operator*(const ComplexVector &x) const;
  // y = A x without allocation; y must already have rows() entries.
  void multiply(const ComplexVector &x, ComplexVector &y) const;

  ComplexSparseMatrix operator*(const ComplexSparseMatrix &other) const;
  ComplexSparseMatrix operator+(const ComplexSparseMatrix &other) const;
  ComplexSparseMatrix operator-(const ComplexSparseMatrix &other) const;
  ComplexSparseMatrix scaled(Complex s) const;

  ComplexSparseMatrix transpose() const;
  ComplexSparseMatrix adjoint() const;

  // Sub-block with the given (ordered) row and column index lists.
  ComplexSparseMatrix submatrix(std::span<const Index> row_ids,
                                std::span<const Index> col_ids) const;

  DenseMatrix to_dense() const;

  // max |A(i,j) - A(j,i)| over stored entries; requires a square matrix.
  double max_asymmetry() const;
  double frobenius_norm() const;
  // Number of columns with no stored nonzero.
  Index count_zero_columns() const;

  const Storage &storage() const noexcept { return m_; }

private:
  Storage m_;
};

// Coordinate text format: "rows cols nnz" header, then one "row col re im" line
// per stored entry (0-based, full double precision).
void write_coordinate(std::ostream &os, const ComplexSparseMatrix &a);

}  // namespace helmdd
