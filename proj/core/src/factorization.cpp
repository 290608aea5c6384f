// SPDX-License-Identifier: Apache-2.0

#include "helmdd/factorization.hpp"

#include <regex>
#include <string>

#include <Eigen/SparseLU>

namespace helmdd
{

struct SparseFactorization::Impl
{
  using ColMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor, int>;
  Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> lu;
};

SparseFactorization::SparseFactorization() = default;
SparseFactorization::~SparseFactorization() = default;
SparseFactorization::SparseFactorization(SparseFactorization &&) noexcept = default;
SparseFactorization &SparseFactorization::operator=(SparseFactorization &&) noexcept = default;

SparseFactorization::SparseFactorization(const ComplexSparseMatrix &a)
  : impl_(std::make_unique<Impl>()), n_(a.rows())
{
  if (a.rows() != a.cols())
  {
    throw ArgumentError("factorize: matrix is not square");
  }
  if (a.rows() == 0)
  {
    throw ArgumentError("factorize: empty matrix");
  }
  Impl::ColMatrix col(a.storage());
  col.makeCompressed();
  impl_->lu.analyzePattern(col);
  impl_->lu.factorize(col);
  if (impl_->lu.info() != Eigen::Success)
  {
    const std::string message = impl_->lu.lastErrorMessage();
    // SparseLU reports "THE MATRIX IS STRUCTURALLY SINGULAR ... ZERO COLUMN AT <k>".
    Index pivot = -1;
    std::smatch match;
    if (std::regex_search(message, match, std::regex("([0-9]+)\\s*$")))
    {
      pivot = std::stol(match[1].str());
    }
    throw FactorizationError("sparse LU failed at pivot " + std::to_string(pivot) + ": " + message,
                             pivot);
  }
}

ComplexVector SparseFactorization::solve(const ComplexVector &b) const
{
  if (!impl_)
  {
    throw ArgumentError("solve on an empty factorization");
  }
  if (b.size() != n_)
  {
    throw ArgumentError("solve: right-hand side has wrong dimension");
  }
  return impl_->lu.solve(b);
}

DenseMatrix SparseFactorization::solve(const DenseMatrix &b) const
{
  if (!impl_)
  {
    throw ArgumentError("solve on an empty factorization");
  }
  if (b.rows() != n_)
  {
    throw ArgumentError("solve: right-hand side has wrong dimension");
  }
  return impl_->lu.solve(b);
}

}  // namespace helmdd
