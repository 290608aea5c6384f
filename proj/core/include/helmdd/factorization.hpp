// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>

#include "helmdd/sparse_matrix.hpp"
#include "helmdd/types.hpp"

namespace helmdd
{

// Sparse LU factorization (fill-reducing column ordering, partial pivoting).
// Immutable after construction; solve() is safe to call concurrently.
class SparseFactorization
{
public:
  SparseFactorization();
  explicit SparseFactorization(const ComplexSparseMatrix &a);
  ~SparseFactorization();
  SparseFactorization(SparseFactorization &&) noexcept;
  SparseFactorization &operator=(SparseFactorization &&) noexcept;

  Index size() const noexcept { return n_; }
  bool empty() const noexcept { return impl_ == nullptr; }

  ComplexVector solve(const ComplexVector &b) const;
  // Solve for every column of b.
  DenseMatrix solve(const DenseMatrix &b) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  Index n_ = 0;
};

inline SparseFactorization factorize(const ComplexSparseMatrix &a)
{
  return SparseFactorization(a);
}

}  // namespace helmdd
