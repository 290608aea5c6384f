// SPDX-License-Identifier: Apache-2.0

#include "helmdd/solver.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <memory>
#include <ostream>

#include <json.hpp>

#include "helmdd/decomposition.hpp"
#include "helmdd/random.hpp"

namespace helmdd
{

namespace
{

class Stopwatch
{
public:
  double seconds() const
  {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

std::string to_string(PreconditionerKind kind)
{
  switch (kind)
  {
    case PreconditionerKind::none:
      return "none";
    case PreconditionerKind::one_level:
      return "one_level";
    case PreconditionerKind::grid:
      return "grid";
    case PreconditionerKind::dtn:
      return "dtn";
  }
  return "none";
}

std::string to_string(CoarseMode mode)
{
  return mode == CoarseMode::additive ? "additive" : "hybrid";
}

PreconditionerKind parse_preconditioner(const std::string &name)
{
  if (name == "none")
  {
    return PreconditionerKind::none;
  }
  if (name == "one_level" || name == "one-level" || name == "oras")
  {
    return PreconditionerKind::one_level;
  }
  if (name == "grid" || name == "two_level_grid")
  {
    return PreconditionerKind::grid;
  }
  if (name == "dtn" || name == "two_level_dtn")
  {
    return PreconditionerKind::dtn;
  }
  throw ArgumentError("unknown preconditioner '" + name + "'");
}

CoarseMode parse_mode(const std::string &name)
{
  if (name == "additive")
  {
    return CoarseMode::additive;
  }
  if (name == "hybrid")
  {
    return CoarseMode::hybrid;
  }
  throw ArgumentError("unknown two-level mode '" + name + "'");
}

SelectionPolicy parse_selection(const std::string &text)
{
  if (text == "automatic")
  {
    return SelectionPolicy::automatic();
  }
  const auto colon = text.find(':');
  if (colon != std::string::npos)
  {
    const std::string kind = text.substr(0, colon);
    int count = 0;
    try
    {
      std::size_t used = 0;
      count = std::stoi(text.substr(colon + 1), &used);
      if (used != text.size() - colon - 1)
      {
        throw ArgumentError("trailing characters");
      }
    }
    catch (const std::exception &)
    {
      throw ArgumentError("bad eigenvector count in selection '" + text + "'");
    }
    if (kind == "fixed")
    {
      return SelectionPolicy::fixed(count);
    }
    if (kind == "capped")
    {
      return SelectionPolicy::capped(count);
    }
  }
  throw ArgumentError("unknown selection policy '" + text + "'");
}

double SolveConfig::epsilon_prec() const
{
  return beta ? std::pow(k, *beta) : 0.0;
}

int SolveConfig::resolved_subdomains_1d() const
{
  return subdomains_1d ? *subdomains_1d : subdomains_per_dimension(k, alpha);
}

int SolveConfig::resolved_fine_intervals() const
{
  return fine_intervals ? *fine_intervals : fine_resolution(k, resolved_subdomains_1d());
}

int SolveConfig::resolved_coarse_intervals() const
{
  if (coarse_intervals)
  {
    return *coarse_intervals;
  }
  if (coarse_size_target)
  {
    return coarse_resolution_for_size(dim, *coarse_size_target);
  }
  return coarse_resolution(k, alpha_prime_value());
}

SolveConfig SolveConfig::load_balanced_3d(double k, double alpha)
{
  SolveConfig c;
  c.dim = 3;
  c.k = k;
  c.alpha = alpha;
  c.alpha_prime = 1.5 - alpha;
  return c;
}

void SolveConfig::validate() const
{
  if (dim != 2 && dim != 3)
  {
    throw ArgumentError("dim must be 2 or 3");
  }
  if (!(k > 0.0))
  {
    throw ArgumentError("k must be positive");
  }
  if (!(alpha > 0.0) || alpha > 1.0)
  {
    throw ArgumentError("alpha must lie in (0, 1]");
  }
  if (alpha_prime && (!(*alpha_prime > 0.0) || *alpha_prime > 1.0))
  {
    throw ArgumentError("alpha_prime must lie in (0, 1]");
  }
  if (!(tol > 0.0))
  {
    throw ArgumentError("tol must be positive");
  }
  if (max_iter < 1)
  {
    throw ArgumentError("max_iter must be at least 1");
  }
  if (overlap_layers < 1)
  {
    throw ArgumentError("overlap_layers must be at least 1");
  }
  if (subdomains_1d && *subdomains_1d < 1)
  {
    throw ArgumentError("subdomains_1d must be positive");
  }
  if (coarse_intervals && *coarse_intervals < 1)
  {
    throw ArgumentError("coarse_intervals must be positive");
  }
  const int n1 = resolved_subdomains_1d();
  const int m = resolved_fine_intervals();
  if (m < 1 || m % n1 != 0)
  {
    throw ArgumentError("fine intervals (" + std::to_string(m) +
                        ") must be a positive multiple of subdomains per dimension (" +
                        std::to_string(n1) + ")");
  }
  if (precon == PreconditionerKind::grid)
  {
    resolved_coarse_intervals();
  }
}

HelmholtzProblem build_problem(const SolveConfig &config)
{
  config.validate();
  HelmholtzProblem p;
  p.mesh = build_uniform_mesh(config.dim, config.resolved_fine_intervals());
  const double eps = config.solve_absorptive ? config.epsilon_prec() : 0.0;
  p.system = assemble_global(p.mesh, HelmholtzParams::with_default_robin(config.k, eps));
  p.rhs = assemble_rhs(p.mesh, SourceFunction::gaussian(config.dim));
  return p;
}

PreparedSolve::PreparedSolve(const SolveConfig &config)
  : PreparedSolve(config, nullptr)
{
}

PreparedSolve::PreparedSolve(const SolveConfig &config,
                             std::shared_ptr<const HelmholtzProblem> problem)
  : config_(config), problem_(std::move(problem))
{
  config_.validate();
  double problem_assembly = 0.0;
  if (!problem_)
  {
    Stopwatch clock;
    problem_ = std::make_shared<const HelmholtzProblem>(build_problem(config_));
    problem_assembly = clock.seconds();
  }
  const HelmholtzProblem &pb = *problem_;
  SolveReport &report = base_;
  report.config = config_;
  report.n = pb.mesh.num_vertices();
  report.fine_intervals = pb.mesh.intervals_per_edge();
  report.subdomains_1d = config_.resolved_subdomains_1d();
  report.epsilon_prec = config_.epsilon_prec();
  if (pb.mesh.intervals_per_edge() != config_.resolved_fine_intervals())
  {
    throw ArgumentError("problem mesh does not match the configuration");
  }

  // eta = k throughout: the preconditioner absorption is non-negative.
  const HelmholtzParams local_params{config_.k, report.epsilon_prec, config_.k};

  Stopwatch setup_clock;
  double assembly = 0.0;
  if (config_.precon != PreconditionerKind::none)
  {
    auto dd = std::make_shared<const Decomposition>(
      build_decomposition(pb.mesh, report.subdomains_1d, config_.overlap_layers, config_.pou));
    report.num_subdomains = dd->num_subdomains();
    auto one_level =
      std::make_shared<const OneLevelORAS>(pb.mesh, dd, local_params, config_.threads);

    if (config_.precon == PreconditionerKind::grid || config_.precon == PreconditionerKind::dtn)
    {
      Stopwatch assembly_clock;
      const HelmholtzParams coarse_params =
        config_.coarse_operator_absorptive ? local_params
                                           : HelmholtzParams::with_default_robin(config_.k, 0.0);
      auto a_coarse =
        std::make_shared<const ComplexSparseMatrix>(assemble_global(pb.mesh, coarse_params));
      assembly += assembly_clock.seconds();

      std::shared_ptr<const CoarseSpace> cs;
      if (config_.precon == PreconditionerKind::grid)
      {
        const SimplicialMesh coarse =
          build_uniform_mesh(config_.dim, config_.resolved_coarse_intervals());
        cs = std::make_shared<const CoarseSpace>(build_grid_cs(coarse, pb.mesh, *a_coarse));
      }
      else
      {
        HelmholtzParams dtn_params = local_params;
        if (!config_.dtn_with_absorption)
        {
          dtn_params.epsilon = 0.0;
        }
        DtnOptions options;
        options.selection = config_.selection;
        options.threads = config_.threads;
        cs = std::make_shared<const CoarseSpace>(
          build_dtn_cs(pb.mesh, *dd, dtn_params, *a_coarse, options));
      }
      report.coarse_size = cs->size();
      report.coarse_intervals = cs->coarse_intervals;
      report.per_subdomain_counts = cs->per_subdomain_counts;
      report.selected_eigenvalues = cs->selected_eigenvalues;
      report.max_eigen_residual = cs->max_eigen_residual;
      auto two_level =
        std::make_shared<const TwoLevelPreconditioner>(one_level, cs, a_coarse, config_.mode);
      preconditioner_ = [two_level](const ComplexVector &in, ComplexVector &out) {
        two_level->apply(in, out);
      };
    }
    else
    {
      preconditioner_ = [one_level](const ComplexVector &in, ComplexVector &out) {
        one_level->apply(in, out);
      };
    }
  }
  report.timings.setup_seconds = setup_clock.seconds() - assembly;
  report.timings.assembly_seconds = problem_assembly + assembly;
}

void PreparedSolve::apply_preconditioner(const ComplexVector &v, ComplexVector &out) const
{
  if (preconditioner_)
  {
    preconditioner_(v, out);
  }
  else
  {
    out = v;
  }
}

SolveReport PreparedSolve::run(std::uint64_t seed) const
{
  SolveReport report = base_;
  report.config.seed = seed;

  Stopwatch solve_clock;
  const ComplexSparseMatrix &a = problem_->system;
  const LinearOperator apply_a = [&a](const ComplexVector &in, ComplexVector &out) {
    a.multiply(in, out);
  };
  GmresOptions options;
  options.tol = config_.tol;
  options.max_iter = config_.max_iter;
  options.relative_to_rhs = config_.relative_to_rhs;
  const ComplexVector x0 = random_initial_guess(report.n, seed);
  GmresOutcome outcome = gmres(apply_a, problem_->rhs, preconditioner_, x0, options);
  report.timings.solve_seconds = solve_clock.seconds();

  report.iterations = outcome.iterations;
  report.converged = outcome.converged;
  report.residual_history = std::move(outcome.residual_history);
  report.solution = std::move(outcome.solution);
  report.true_residual = verify_solution(report.solution, a, problem_->rhs);
  return report;
}

SolveReport solve(const SolveConfig &config)
{
  return PreparedSolve(config).run();
}

SolveReport solve(const SolveConfig &config, const HelmholtzProblem &problem)
{
  // Non-owning: the caller keeps `problem` alive for the duration of the call.
  std::shared_ptr<const HelmholtzProblem> view(&problem, [](const HelmholtzProblem *) {});
  return PreparedSolve(config, view).run();
}

double verify_solution(const ComplexVector &x, const ComplexSparseMatrix &a,
                       const ComplexVector &f)
{
  if (x.size() != a.cols() || f.size() != a.rows())
  {
    throw ArgumentError("verify_solution: dimension mismatch");
  }
  const double fnorm = f.norm();
  const double r = (f - a * x).norm();
  return fnorm == 0.0 ? r : r / fnorm;
}

double verify_solution(const SolveReport &report, const ComplexSparseMatrix &a,
                       const ComplexVector &f)
{
  return verify_solution(report.solution, a, f);
}

std::string report_to_json(const SolveReport &report)
{
  const SolveConfig &c = report.config;
  nlohmann::json doc;
  auto &cfg = doc["config"];
  cfg["dim"] = c.dim;
  cfg["k"] = c.k;
  cfg["alpha"] = c.alpha;
  cfg["alpha_prime"] = c.alpha_prime_value();
  cfg["beta"] = c.beta ? nlohmann::json(*c.beta) : nlohmann::json(nullptr);
  cfg["precon"] = to_string(c.precon);
  cfg["mode"] = to_string(c.mode);
  cfg["selection"] = c.selection.to_string();
  cfg["tol"] = c.tol;
  cfg["max_iter"] = c.max_iter;
  cfg["seed"] = c.seed;
  cfg["overlap_layers"] = c.overlap_layers;
  cfg["partition_of_unity"] = c.pou == PartitionOfUnity::ramp ? "ramp" : "multiplicity";
  cfg["coarse_operator"] = c.coarse_operator_absorptive ? "absorptive" : "pure";
  cfg["dtn_absorption"] = c.dtn_with_absorption;

  doc["iterations"] = report.iterations;
  doc["converged"] = report.converged;
  doc["n"] = report.n;
  doc["fine_intervals"] = report.fine_intervals;
  doc["subdomains_per_dimension"] = report.subdomains_1d;
  doc["N_sub"] = report.num_subdomains;
  doc["n_CS"] = report.coarse_size;
  doc["epsilon_prec"] = report.epsilon_prec;
  doc["true_residual"] = report.true_residual;
  doc["timings"] = {{"assembly", report.timings.assembly_seconds},
                    {"setup", report.timings.setup_seconds},
                    {"solve", report.timings.solve_seconds}};
  doc["residual_history"] = report.residual_history;

  auto &coarse = doc["coarse_space"];
  coarse["kind"] = c.precon == PreconditionerKind::grid  ? "grid"
                   : c.precon == PreconditionerKind::dtn ? "dtn"
                                                         : "none";
  coarse["n_CS"] = report.coarse_size;
  if (c.precon == PreconditionerKind::grid)
  {
    coarse["coarse_intervals"] = report.coarse_intervals;
  }
  if (c.precon == PreconditionerKind::dtn)
  {
    coarse["per_subdomain_counts"] = report.per_subdomain_counts;
    coarse["max_eigen_residual"] = report.max_eigen_residual;
    nlohmann::json eigs = nlohmann::json::array();
    for (const auto &values : report.selected_eigenvalues)
    {
      nlohmann::json sub = nlohmann::json::array();
      for (const Complex &v : values)
      {
        sub.push_back({v.real(), v.imag()});
      }
      eigs.push_back(sub);
    }
    coarse["selected_eigenvalues"] = eigs;
  }
  return doc.dump(2);
}

void write_residual_csv(std::ostream &os, const SolveReport &report)
{
  const auto precision = os.precision();
  os << "iteration,relative_residual\n" << std::setprecision(17);
  for (std::size_t i = 0; i < report.residual_history.size(); i++)
  {
    os << i << ',' << report.residual_history[i] << '\n';
  }
  os.precision(precision);
}

}  // namespace helmdd
