// SPDX-License-Identifier: Apache-2.0

#include "helmdd/preconditioner.hpp"

#include <algorithm>
#include <sstream>

#include "helmdd/eigensolver.hpp"
#include "helmdd/parallel.hpp"

namespace helmdd
{

OneLevelORAS::OneLevelORAS(const SimplicialMesh &mesh, std::shared_ptr<const Decomposition> dd,
                           const HelmholtzParams &local_params, unsigned threads)
  : dd_(std::move(dd)), threads_(threads)
{
  if (!dd_)
  {
    throw ArgumentError("one-level preconditioner needs a decomposition");
  }
  if (local_params.epsilon < 0.0)
  {
    throw ArgumentError("preconditioner absorption must be non-negative");
  }
  local_.resize(dd_->subdomains.size());
  parallel_for(
    local_.size(),
    [&](std::size_t j) {
      const auto a = assemble_subdomain_robin(mesh, dd_->subdomains[j], local_params);
      try
      {
        local_[j] = SparseFactorization(a);
      }
      catch (const FactorizationError &e)
      {
        throw FactorizationError("local Robin matrix of subdomain " + std::to_string(j) +
                                   " is singular: " + e.what(),
                                 e.pivot());
      }
    },
    threads_);
}

void OneLevelORAS::apply(const ComplexVector &v, ComplexVector &out) const
{
  if (v.size() != size())
  {
    throw ArgumentError("one-level apply: dimension mismatch");
  }
  std::vector<ComplexVector> local(local_.size());
  parallel_for(
    local_.size(),
    [&](std::size_t j) { local[j] = local_[j].solve(restrict_to(dd_->subdomains[j], v)); },
    threads_);
  out.setZero(size());
  for (std::size_t j = 0; j < local.size(); j++)
  {
    prolongate_weighted(dd_->subdomains[j], dd_->pou_weights[j], local[j], out);
  }
}

ComplexVector OneLevelORAS::apply(const ComplexVector &v) const
{
  ComplexVector out(size());
  apply(v, out);
  return out;
}

SelectionPolicy SelectionPolicy::fixed(int m)
{
  if (m < 1)
  {
    throw ArgumentError("fixed selection needs m >= 1");
  }
  return {Kind::fixed, m};
}

SelectionPolicy SelectionPolicy::capped(int m_max)
{
  if (m_max < 1)
  {
    throw ArgumentError("capped selection needs m_max >= 1");
  }
  return {Kind::capped, m_max};
}

std::vector<Index> SelectionPolicy::select(const ComplexVector &sorted_values, double k) const
{
  std::vector<Index> kept;
  for (Index j = 0; j < sorted_values.size(); j++)
  {
    switch (kind)
    {
      case Kind::automatic:
      case Kind::capped:
        if (sorted_values[j].real() < k)
        {
          kept.push_back(j);
        }
        break;
      case Kind::fixed:
        kept.push_back(j);
        break;
    }
  }
  if (kind != Kind::automatic && static_cast<Index>(kept.size()) > count)
  {
    kept.resize(static_cast<std::size_t>(count));
  }
  return kept;
}

std::string SelectionPolicy::to_string() const
{
  switch (kind)
  {
    case Kind::automatic:
      return "automatic";
    case Kind::fixed:
      return "fixed:" + std::to_string(count);
    case Kind::capped:
      return "capped:" + std::to_string(count);
  }
  return "automatic";
}

ComplexVector CoarseSpace::correction(const ComplexVector &v) const
{
  return z * e_factorization.solve(z_adjoint * v);
}

namespace
{

void finish_coarse_space(CoarseSpace &cs, const ComplexSparseMatrix &a)
{
  if (a.rows() != cs.z.rows() || a.cols() != cs.z.rows())
  {
    throw ArgumentError("coarse space: operator and Z dimensions differ");
  }
  if (cs.z.cols() == 0)
  {
    throw ArgumentError("coarse space is empty");
  }
  cs.z_adjoint = cs.z.adjoint();
  cs.e = cs.z_adjoint * (a * cs.z);
  try
  {
    cs.e_factorization = SparseFactorization(cs.e);
  }
  catch (const FactorizationError &e)
  {
    throw FactorizationError(std::string("coarse matrix E is singular: ") + e.what(), e.pivot());
  }
}

}  // namespace

CoarseSpace build_grid_cs(const SimplicialMesh &coarse, const SimplicialMesh &fine,
                          const ComplexSparseMatrix &a)
{
  CoarseSpace cs;
  cs.kind = CoarseKind::grid;
  cs.coarse_intervals = coarse.intervals_per_edge();
  cs.z = nodal_interpolation_matrix(coarse, fine);
  finish_coarse_space(cs, a);
  return cs;
}

CoarseSpace build_grid_cs(const MeshHierarchy &hierarchy, const ComplexSparseMatrix &a)
{
  CoarseSpace cs;
  cs.kind = CoarseKind::grid;
  cs.coarse_intervals = hierarchy.coarse.intervals_per_edge();
  cs.z = nodal_interpolation_matrix(hierarchy);
  finish_coarse_space(cs, a);
  return cs;
}

DtnLocalProblem build_dtn_local_problem(const SimplicialMesh &mesh, const Subdomain &sub,
                                        const HelmholtzParams &params)
{
  DtnLocalProblem p;
  p.gamma = sub.interface_dofs;
  std::vector<char> is_gamma(static_cast<std::size_t>(sub.size()), 0);
  for (const Index l : p.gamma)
  {
    is_gamma[static_cast<std::size_t>(l)] = 1;
  }
  for (Index l = 0; l < sub.size(); l++)
  {
    if (!is_gamma[static_cast<std::size_t>(l)])
    {
      p.inner.push_back(l);
    }
  }
  if (p.gamma.empty())
  {
    return p;
  }

  const SubdomainMatrices mats = assemble_subdomain(mesh, sub, params);
  const ComplexSparseMatrix a_ii = mats.neumann.submatrix(p.inner, p.inner);
  const ComplexSparseMatrix a_ig = mats.neumann.submatrix(p.inner, p.gamma);
  const ComplexSparseMatrix a_gi = mats.neumann.submatrix(p.gamma, p.inner);
  const ComplexSparseMatrix a_gg = mats.neumann.submatrix(p.gamma, p.gamma);

  SparseFactorization lu;
  try
  {
    lu = SparseFactorization(a_ii);
  }
  catch (const FactorizationError &e)
  {
    throw FactorizationError("inner block of subdomain " + std::to_string(sub.index) +
                               " is singular: " + e.what(),
                             e.pivot());
  }
  const DenseMatrix x = lu.solve(a_ig.to_dense());
  p.schur = a_gg.to_dense() - a_gi.storage() * x;
  p.extension = -x;
  p.interface_mass = mats.interface_mass.submatrix(p.gamma, p.gamma).to_dense();
  return p;
}

CoarseSpace build_dtn_cs(const SimplicialMesh &mesh, const Decomposition &dd,
                         const HelmholtzParams &params, const ComplexSparseMatrix &a,
                         const DtnOptions &options)
{
  struct LocalResult
  {
    std::vector<Triplet> columns;  // column index local to the subdomain block
    std::vector<Complex> eigenvalues;
    double residual = 0.0;
  };
  std::vector<LocalResult> results(dd.subdomains.size());

  parallel_for(
    dd.subdomains.size(),
    [&](std::size_t i) {
      const Subdomain &sub = dd.subdomains[i];
      const DtnLocalProblem p = build_dtn_local_problem(mesh, sub, params);
      if (p.gamma.empty())
      {
        return;
      }
      const EigenPairs pairs = generalized_eig(p.schur, p.interface_mass);
      LocalResult &r = results[i];
      r.residual = max_eigen_residual(p.schur, p.interface_mass, pairs);
      if (!(r.residual <= options.eigen_tolerance))
      {
        std::ostringstream msg;
        msg << "DtN eigenproblem of subdomain " << i << " has residual " << r.residual;
        throw NumericalError(msg.str());
      }
      const auto kept = options.selection.select(pairs.values, params.k);
      const auto &weights = dd.pou_weights[i];
      for (std::size_t c = 0; c < kept.size(); c++)
      {
        const auto g = pairs.vectors.col(kept[c]);
        r.eigenvalues.push_back(pairs.values[kept[c]]);
        const ComplexVector inner = p.extension * g;
        const auto col = static_cast<Index>(c);
        for (std::size_t q = 0; q < p.inner.size(); q++)
        {
          const Index l = p.inner[q];
          const Complex value = weights[static_cast<std::size_t>(l)] * inner[static_cast<Index>(q)];
          if (value != Complex(0.0))
          {
            r.columns.push_back({sub.dofs[static_cast<std::size_t>(l)], col, value});
          }
        }
        for (std::size_t q = 0; q < p.gamma.size(); q++)
        {
          const Index l = p.gamma[q];
          const Complex value = weights[static_cast<std::size_t>(l)] * g[static_cast<Index>(q)];
          if (value != Complex(0.0))
          {
            r.columns.push_back({sub.dofs[static_cast<std::size_t>(l)], col, value});
          }
        }
      }
    },
    options.threads);

  CoarseSpace cs;
  cs.kind = CoarseKind::dtn;
  std::vector<Triplet> entries;
  Index offset = 0;
  for (auto &r : results)
  {
    const auto count = static_cast<Index>(r.eigenvalues.size());
    for (auto t : r.columns)
    {
      t.col += offset;
      entries.push_back(t);
    }
    offset += count;
    cs.per_subdomain_counts.push_back(count);
    cs.selected_eigenvalues.push_back(std::move(r.eigenvalues));
    cs.max_eigen_residual = std::max(cs.max_eigen_residual, r.residual);
  }
  if (offset == 0)
  {
    throw NumericalError("DtN selection kept no eigenvectors in any subdomain");
  }
  cs.z = ComplexSparseMatrix::from_triplets(dd.num_global_dofs, offset, entries);
  finish_coarse_space(cs, a);
  return cs;
}

TwoLevelPreconditioner::TwoLevelPreconditioner(std::shared_ptr<const OneLevelORAS> one_level,
                                               std::shared_ptr<const CoarseSpace> coarse,
                                               std::shared_ptr<const ComplexSparseMatrix> a,
                                               CoarseMode mode)
  : one_level_(std::move(one_level)), coarse_(std::move(coarse)), a_(std::move(a)), mode_(mode)
{
  if (!one_level_ || !coarse_ || !a_)
  {
    throw ArgumentError("two-level preconditioner needs one-level, coarse space and operator");
  }
  if (coarse_->z.rows() != one_level_->size() || a_->rows() != one_level_->size())
  {
    throw ArgumentError("two-level preconditioner: inconsistent dimensions");
  }
}

void TwoLevelPreconditioner::apply(const ComplexVector &v, ComplexVector &out) const
{
  const ComplexVector xi_v = coarse_->correction(v);
  switch (mode_)
  {
    case CoarseMode::additive:
      one_level_->apply(v, out);
      out += xi_v;
      return;
    case CoarseMode::hybrid:
    {
      const ComplexVector p = v - (*a_) * xi_v;
      one_level_->apply(p, out);
      out -= coarse_->correction((*a_) * out);
      out += xi_v;
      return;
    }
  }
}

ComplexVector TwoLevelPreconditioner::apply(const ComplexVector &v) const
{
  ComplexVector out(v.size());
  apply(v, out);
  return out;
}

}  // namespace helmdd
