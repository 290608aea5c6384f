// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "helmdd/assembly.hpp"
#include "helmdd/decomposition.hpp"
#include "helmdd/factorization.hpp"
#include "helmdd/gmres.hpp"
#include "helmdd/mesh.hpp"
#include "helmdd/sparse_matrix.hpp"

namespace helmdd
{

// One-level optimized restricted additive Schwarz:
//   M1^{-1} v = sum_j R_j^T D_j A_j^{-1} R_j v
// with A_j the local Robin matrices (absorption params.epsilon, impedance params.eta).
class OneLevelORAS
{
public:
  OneLevelORAS(const SimplicialMesh &mesh, std::shared_ptr<const Decomposition> dd,
               const HelmholtzParams &local_params, unsigned threads = 0);

  Index size() const noexcept { return dd_->num_global_dofs; }
  const Decomposition &decomposition() const noexcept { return *dd_; }

  // Subdomain solves run concurrently; the scatter-add runs in subdomain order,
  // so results are bitwise reproducible for any thread count.
  void apply(const ComplexVector &v, ComplexVector &out) const;
  ComplexVector apply(const ComplexVector &v) const;

private:
  std::shared_ptr<const Decomposition> dd_;
  std::vector<SparseFactorization> local_;
  unsigned threads_;
};

enum class CoarseKind
{
  grid,
  dtn
};

// Which DtN eigenvectors a subdomain contributes. Eigenvalues are examined in
// ascending real part (ties: imaginary part, then index).
struct SelectionPolicy
{
  enum class Kind
  {
    automatic,  // every eigenvalue with Re(lambda) < k
    fixed,      // the `count` smallest
    capped      // automatic, truncated to `count`
  };

  Kind kind = Kind::automatic;
  int count = 0;

  static SelectionPolicy automatic() { return {Kind::automatic, 0}; }
  static SelectionPolicy fixed(int m);
  static SelectionPolicy capped(int m_max);

  // Positions kept from an already sorted eigenvalue list.
  std::vector<Index> select(const ComplexVector &sorted_values, double k) const;
  std::string to_string() const;
};

struct CoarseSpace
{
  CoarseKind kind = CoarseKind::grid;
  // n x n_CS, full column rank.
  ComplexSparseMatrix z;
  ComplexSparseMatrix z_adjoint;
  // E = Z^* A Z
  ComplexSparseMatrix e;
  SparseFactorization e_factorization;

  // Grid coarse space: intervals per edge of the coarse mesh.
  int coarse_intervals = 0;
  // DtN coarse space: m_i and the selected eigenvalues per subdomain.
  std::vector<Index> per_subdomain_counts;
  std::vector<std::vector<Complex>> selected_eigenvalues;
  double max_eigen_residual = 0.0;

  Index size() const noexcept { return z.cols(); }
  // Xi v = Z E^{-1} Z^* v
  ComplexVector correction(const ComplexVector &v) const;
};

// Z = nodal interpolation from `coarse` to `fine`, E = Z^* A Z.
CoarseSpace build_grid_cs(const SimplicialMesh &coarse, const SimplicialMesh &fine,
                          const ComplexSparseMatrix &a);
CoarseSpace build_grid_cs(const MeshHierarchy &hierarchy, const ComplexSparseMatrix &a);

struct DtnOptions
{
  SelectionPolicy selection = SelectionPolicy::automatic();
  // Eigen-residual bound; exceeding it is an error naming the subdomain.
  double eigen_tolerance = 1e-8;
  unsigned threads = 0;
};

// DtN coarse space. Per subdomain: Schur complement of the Neumann-interface
// matrix onto the interface, generalized eigenproblem against the interface mass,
// selection, discrete Helmholtz extension, partition-of-unity scaling. `params`
// configure the subdomain matrices (k is also the selection threshold). E = Z^* A Z.
CoarseSpace build_dtn_cs(const SimplicialMesh &mesh, const Decomposition &dd,
                         const HelmholtzParams &params, const ComplexSparseMatrix &a,
                         const DtnOptions &options = {});

// Per-subdomain DtN data, exposed for inspection and testing.
struct DtnLocalProblem
{
  DenseMatrix schur;
  DenseMatrix interface_mass;
  // Local indices of the interface (Gamma) and of the remaining dofs (I).
  std::vector<Index> gamma;
  std::vector<Index> inner;
  // -A_II^{-1} A_IGamma: maps interface values to inner values (Helmholtz extension).
  DenseMatrix extension;
};
DtnLocalProblem build_dtn_local_problem(const SimplicialMesh &mesh, const Subdomain &sub,
                                        const HelmholtzParams &params);

enum class CoarseMode
{
  additive,
  hybrid
};

// M2^{-1} = Q M1^{-1} P + Xi with Xi = Z E^{-1} Z^*, P = I - A Xi, Q = I - Xi A (hybrid)
// or P = Q = I (additive). `a` must be the matrix E was built from.
class TwoLevelPreconditioner
{
public:
  TwoLevelPreconditioner(std::shared_ptr<const OneLevelORAS> one_level,
                         std::shared_ptr<const CoarseSpace> coarse,
                         std::shared_ptr<const ComplexSparseMatrix> a, CoarseMode mode);

  void apply(const ComplexVector &v, ComplexVector &out) const;
  ComplexVector apply(const ComplexVector &v) const;

  CoarseMode mode() const noexcept { return mode_; }
  const CoarseSpace &coarse() const noexcept { return *coarse_; }
  const OneLevelORAS &one_level() const noexcept { return *one_level_; }

private:
  std::shared_ptr<const OneLevelORAS> one_level_;
  std::shared_ptr<const CoarseSpace> coarse_;
  std::shared_ptr<const ComplexSparseMatrix> a_;
  CoarseMode mode_;
};

}  // namespace helmdd
