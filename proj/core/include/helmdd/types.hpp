// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace helmdd
{

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;
using Index = std::ptrdiff_t;

// Invalid input to a public operation (bad dimension, bad parameter range, ...).
class ArgumentError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failure: singular pivots, degenerate elements, eigen-residual violations.
class NumericalError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class AssemblyError : public NumericalError
{
public:
  using NumericalError::NumericalError;
};

class FactorizationError : public NumericalError
{
public:
  FactorizationError(const std::string &what, Index pivot)
    : NumericalError(what), pivot_(pivot)
  {
  }

  // Column (pivot) index at which elimination failed, or -1 if unknown.
  Index pivot() const noexcept { return pivot_; }

private:
  Index pivot_;
};

}  // namespace helmdd
