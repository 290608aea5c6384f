// SPDX-License-Identifier: Apache-2.0

#include "helmdd/gmres.hpp"

#include <cmath>

namespace helmdd
{

namespace
{

// Complex Givens rotation with real cosine, zeroing b in (a, b).
struct Givens
{
  double c = 1.0;
  Complex s = 0.0;

  static Givens zeroing(Complex a, Complex b)
  {
    const double abs_a = std::abs(a);
    const double r = std::hypot(abs_a, std::abs(b));
    if (r == 0.0)
    {
      return {1.0, 0.0};
    }
    if (abs_a == 0.0)
    {
      return {0.0, 1.0};
    }
    return {abs_a / r, (a / abs_a) * std::conj(b) / r};
  }

  void apply(Complex &x, Complex &y) const
  {
    const Complex t = c * x + s * y;
    y = -std::conj(s) * x + c * y;
    x = t;
  }
};

}  // namespace

GmresOutcome gmres(const LinearOperator &apply_a, const ComplexVector &b,
                   const LinearOperator &apply_m, const ComplexVector &x0,
                   const GmresOptions &options)
{
  const Index n = b.size();
  if (x0.size() != n)
  {
    throw ArgumentError("gmres: initial guess has wrong dimension");
  }
  if (!(options.tol > 0.0))
  {
    throw ArgumentError("gmres: tolerance must be positive");
  }
  if (options.max_iter < 0)
  {
    throw ArgumentError("gmres: negative iteration limit");
  }

  GmresOutcome out;
  ComplexVector w(n);
  apply_a(x0, w);
  ComplexVector r = b - w;
  const double beta = r.norm();
  double scale = options.relative_to_rhs ? b.norm() : beta;
  if (scale == 0.0)
  {
    scale = 1.0;
  }
  out.residual_history.push_back(beta / scale);
  out.solution = x0;
  if (beta / scale <= options.tol || beta == 0.0)
  {
    out.converged = true;
    return out;
  }

  const int max_iter = options.max_iter;
  std::vector<ComplexVector> basis;
  basis.reserve(static_cast<std::size_t>(max_iter) + 1);
  basis.push_back(r / beta);
  // Column j of the Hessenberg matrix, rotated to upper triangular form in place.
  std::vector<std::vector<Complex>> h;
  std::vector<Givens> rotations;
  std::vector<Complex> g(1, beta);
  ComplexVector z(n);

  int steps = 0;
  while (steps < max_iter)
  {
    const auto j = static_cast<std::size_t>(steps);
    if (apply_m)
    {
      apply_m(basis[j], z);
    }
    else
    {
      z = basis[j];
    }
    apply_a(z, w);

    std::vector<Complex> col(j + 2, 0.0);
    const double before = w.norm();
    for (std::size_t i = 0; i <= j; i++)
    {
      col[i] = basis[i].dot(w);
      w -= col[i] * basis[i];
    }
    double after = w.norm();
    if (after * options.reorth_ratio < before)
    {
      for (std::size_t i = 0; i <= j; i++)
      {
        const Complex corr = basis[i].dot(w);
        col[i] += corr;
        w -= corr * basis[i];
      }
      after = w.norm();
    }
    col[j + 1] = after;
    const bool breakdown = after <= 1e-14 * before || after == 0.0;

    for (std::size_t i = 0; i < j; i++)
    {
      rotations[i].apply(col[i], col[i + 1]);
    }
    const Givens rot = Givens::zeroing(col[j], col[j + 1]);
    rot.apply(col[j], col[j + 1]);
    rotations.push_back(rot);
    g.push_back(0.0);
    rot.apply(g[j], g[j + 1]);
    h.push_back(std::move(col));
    steps++;

    const double residual = breakdown ? 0.0 : std::abs(g[j + 1]) / scale;
    out.residual_history.push_back(residual);
    if (residual <= options.tol || breakdown)
    {
      out.converged = true;
      out.breakdown = breakdown;
      break;
    }
    basis.push_back(w / after);
  }

  // Back substitution on the triangular factor.
  const auto m = static_cast<std::size_t>(steps);
  std::vector<Complex> y(m);
  for (std::size_t i = m; i-- > 0;)
  {
    Complex sum = g[i];
    for (std::size_t c = i + 1; c < m; c++)
    {
      sum -= h[c][i] * y[c];
    }
    y[i] = sum / h[i][i];
  }
  ComplexVector u = ComplexVector::Zero(n);
  for (std::size_t i = 0; i < m; i++)
  {
    u += y[i] * basis[i];
  }
  if (apply_m)
  {
    apply_m(u, z);
    out.solution = x0 + z;
  }
  else
  {
    out.solution = x0 + u;
  }
  out.iterations = steps;
  if (out.breakdown)
  {
    // Invariant Krylov space: the least-squares residual is exactly zero, so
    // confirm with the true residual.
    apply_a(out.solution, w);
    const double true_residual = (b - w).norm() / scale;
    out.residual_history.back() = true_residual;
    out.converged = true_residual <= options.tol;
  }
  return out;
}

}  // namespace helmdd
