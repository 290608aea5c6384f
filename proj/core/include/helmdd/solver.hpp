// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "helmdd/assembly.hpp"
#include "helmdd/gmres.hpp"
#include "helmdd/mesh.hpp"
#include "helmdd/preconditioner.hpp"
#include "helmdd/sparse_matrix.hpp"

namespace helmdd
{

enum class PreconditionerKind
{
  none,
  one_level,
  grid,
  dtn
};

std::string to_string(PreconditionerKind kind);
std::string to_string(CoarseMode mode);
PreconditionerKind parse_preconditioner(const std::string &name);
CoarseMode parse_mode(const std::string &name);
// "automatic", "fixed:<m>" or "capped:<m>".
SelectionPolicy parse_selection(const std::string &text);

struct SolveConfig
{
  int dim = 2;
  double k = 10.0;
  // Subdomain diameter ~ k^-alpha, coarse mesh diameter ~ k^-alpha_prime.
  double alpha = 1.0;
  std::optional<double> alpha_prime;  // defaults to alpha
  // epsilon_prec = k^beta; no beta means epsilon_prec = 0.
  std::optional<double> beta = 1.0;
  PreconditionerKind precon = PreconditionerKind::dtn;
  CoarseMode mode = CoarseMode::hybrid;
  SelectionPolicy selection = SelectionPolicy::automatic();
  double tol = 1e-6;
  int max_iter = 500;
  std::uint64_t seed = 0;
  int overlap_layers = 2;
  PartitionOfUnity pou = PartitionOfUnity::ramp;

  // Overrides of the k-dependent resolution rules.
  std::optional<int> subdomains_1d;
  std::optional<int> fine_intervals;
  std::optional<int> coarse_intervals;
  // Grid coarse space sized to about this many dofs: m_c = round(n^{1/d}) - 1.
  std::optional<Index> coarse_size_target;

  // P, Q, Xi and E use A_{eps_prec} (true) or A_0 (false).
  bool coarse_operator_absorptive = true;
  // DtN eigenproblems use A^{(i)} with eps_prec (true) or eps = 0 (false).
  bool dtn_with_absorption = true;
  // Debug: solve the absorptive system instead of A_0.
  bool solve_absorptive = false;
  // GMRES residual relative to ||f|| (true) or to the initial residual.
  bool relative_to_rhs = true;
  unsigned threads = 0;

  double alpha_prime_value() const { return alpha_prime.value_or(alpha); }
  double epsilon_prec() const;
  int resolved_subdomains_1d() const;
  int resolved_fine_intervals() const;
  int resolved_coarse_intervals() const;

  // 3d load balancing: alpha' = 3/2 - alpha.
  static SolveConfig load_balanced_3d(double k, double alpha);

  // Throws ArgumentError describing the first invalid field.
  void validate() const;
};

struct SolveTimings
{
  double assembly_seconds = 0.0;
  double setup_seconds = 0.0;
  double solve_seconds = 0.0;
};

struct SolveReport
{
  SolveConfig config;
  int iterations = 0;
  bool converged = false;
  Index n = 0;
  int fine_intervals = 0;
  int subdomains_1d = 0;
  Index num_subdomains = 0;
  Index coarse_size = 0;
  int coarse_intervals = 0;
  double epsilon_prec = 0.0;
  std::vector<double> residual_history;
  // ||f - A x|| / ||f|| recomputed after the solve.
  double true_residual = 0.0;
  SolveTimings timings;

  std::vector<Index> per_subdomain_counts;
  std::vector<std::vector<Complex>> selected_eigenvalues;
  double max_eigen_residual = 0.0;

  ComplexVector solution;
};

// The linear system of one configuration: mesh, A_0 (or A_eps in debug mode) and f.
struct HelmholtzProblem
{
  SimplicialMesh mesh;
  ComplexSparseMatrix system;
  ComplexVector rhs;
};

HelmholtzProblem build_problem(const SolveConfig &config);

// Problem and preconditioner built once; run() solves from a given seed.
// run() is const and may be called from several threads.
class PreparedSolve
{
public:
  explicit PreparedSolve(const SolveConfig &config);
  PreparedSolve(const SolveConfig &config, std::shared_ptr<const HelmholtzProblem> problem);

  SolveReport run(std::uint64_t seed) const;
  SolveReport run() const { return run(config_.seed); }

  const SolveConfig &config() const noexcept { return config_; }
  const HelmholtzProblem &problem() const noexcept { return *problem_; }
  // Applies the configured preconditioner (identity for `none`).
  void apply_preconditioner(const ComplexVector &v, ComplexVector &out) const;

private:
  SolveConfig config_;
  std::shared_ptr<const HelmholtzProblem> problem_;
  LinearOperator preconditioner_;
  SolveReport base_;
};

SolveReport solve(const SolveConfig &config);
// Same as solve(config) but reuses an already built problem.
SolveReport solve(const SolveConfig &config, const HelmholtzProblem &problem);

// ||f - A x|| / ||f||, independent of GMRES internals.
double verify_solution(const ComplexVector &x, const ComplexSparseMatrix &a,
                       const ComplexVector &f);
double verify_solution(const SolveReport &report, const ComplexSparseMatrix &a,
                       const ComplexVector &f);

// Report as JSON (config echo, counts, timings, coarse-space summary, residual
// history). The solution vector is not included.
std::string report_to_json(const SolveReport &report);
// "iteration,relative_residual" rows.
void write_residual_csv(std::ostream &os, const SolveReport &report);

}  // namespace helmdd
