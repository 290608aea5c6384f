// SPDX-License-Identifier: Apache-2.0

#include "helmdd/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "helmdd/decomposition.hpp"
#include "helmdd/harness.hpp"
#include "helmdd/solver.hpp"

namespace helmdd
{

namespace
{

constexpr int kUsageError = 2;
constexpr int kNumericalError = 1;

struct SolveFlags
{
  std::string config_file;
  std::optional<int> dim;
  std::optional<double> k;
  std::optional<double> alpha;
  std::optional<double> alpha_prime;
  std::optional<std::string> beta;
  std::optional<std::string> precon;
  std::optional<std::string> mode;
  std::optional<std::string> selection;
  std::optional<std::string> pou;
  std::optional<int> overlap;
  std::optional<int> subdomains;
  std::optional<int> fine_intervals;
  std::optional<int> coarse_intervals;
  std::optional<long long> coarse_size;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<unsigned> threads;
  bool pure_coarse = false;
  bool solve_absorptive = false;

  std::string out;
  std::string residual_csv;
  std::string mesh_out;
  std::string matrix_out;
  std::string decomposition_out;
};

struct SweepFlags
{
  std::string spec_file;
  std::optional<double> kmax;
  bool full = false;
  std::optional<int> seeds;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<unsigned> jobs;
  std::optional<unsigned> threads;
  std::string out;
};

std::ofstream open_output(const std::string &path)
{
  std::ofstream os(path);
  if (!os)
  {
    throw ArgumentError("cannot write '" + path + "'");
  }
  return os;
}

SolveConfig build_solve_config(const SolveFlags &f)
{
  SolveConfig c;
  if (!f.config_file.empty())
  {
    // Flags below may still change fields, so validation happens at the end.
    for (const auto &[key, value] : read_key_value_file(f.config_file))
    {
      if (!apply_config_key(c, key, value))
      {
        throw ArgumentError(f.config_file + ": unknown configuration key '" + key + "'");
      }
    }
  }
  if (f.dim)
    c.dim = *f.dim;
  if (f.k)
    c.k = *f.k;
  if (f.alpha)
    c.alpha = *f.alpha;
  if (f.alpha_prime)
    c.alpha_prime = *f.alpha_prime;
  if (f.beta)
    c.beta = *f.beta == "none" ? std::nullopt : std::optional<double>(std::stod(*f.beta));
  if (f.precon)
    c.precon = parse_preconditioner(*f.precon);
  if (f.mode)
    c.mode = parse_mode(*f.mode);
  if (f.selection)
    c.selection = parse_selection(*f.selection);
  if (f.pou)
    apply_config_key(c, "pou", *f.pou);
  if (f.overlap)
    c.overlap_layers = *f.overlap;
  if (f.subdomains)
    c.subdomains_1d = *f.subdomains;
  if (f.fine_intervals)
    c.fine_intervals = *f.fine_intervals;
  if (f.coarse_intervals)
    c.coarse_intervals = *f.coarse_intervals;
  if (f.coarse_size)
    c.coarse_size_target = static_cast<Index>(*f.coarse_size);
  if (f.seed)
    c.seed = *f.seed;
  if (f.tol)
    c.tol = *f.tol;
  if (f.max_iter)
    c.max_iter = *f.max_iter;
  if (f.threads)
    c.threads = *f.threads;
  if (f.pure_coarse)
    c.coarse_operator_absorptive = false;
  if (f.solve_absorptive)
    c.solve_absorptive = true;
  c.validate();
  return c;
}

int run_solve(const SolveFlags &f, std::ostream &out)
{
  const SolveConfig config = build_solve_config(f);
  auto problem = std::make_shared<const HelmholtzProblem>(build_problem(config));

  if (!f.mesh_out.empty())
  {
    auto os = open_output(f.mesh_out);
    write_mesh(os, problem->mesh);
  }
  if (!f.matrix_out.empty())
  {
    auto os = open_output(f.matrix_out);
    write_coordinate(os, problem->system);
  }
  if (!f.decomposition_out.empty())
  {
    const Decomposition dd = build_decomposition(problem->mesh, config.resolved_subdomains_1d(),
                                                 config.overlap_layers, config.pou);
    auto os = open_output(f.decomposition_out);
    write_decomposition_json(os, dd);
  }

  const SolveReport report = PreparedSolve(config, problem).run();
  out << "precon      " << to_string(config.precon);
  if (config.precon == PreconditionerKind::grid || config.precon == PreconditionerKind::dtn)
  {
    out << " (" << to_string(config.mode) << ")";
  }
  out << "\nn           " << report.n << "\nN_sub       " << report.num_subdomains
      << "\nn_CS        " << report.coarse_size << "\niterations  " << report.iterations
      << "\nconverged   " << (report.converged ? "yes" : "no") << "\nresidual    "
      << report.true_residual << "\ntimings     assembly " << report.timings.assembly_seconds
      << " s, setup " << report.timings.setup_seconds << " s, solve "
      << report.timings.solve_seconds << " s\n";

  if (!f.out.empty())
  {
    auto os = open_output(f.out);
    os << report_to_json(report) << '\n';
  }
  if (!f.residual_csv.empty())
  {
    auto os = open_output(f.residual_csv);
    write_residual_csv(os, report);
  }
  return 0;
}

void apply_sweep_overrides(SweepSpec &spec, const SweepFlags &f)
{
  if (f.seeds)
  {
    if (*f.seeds < 1)
    {
      throw ArgumentError("--seeds must be at least 1");
    }
    const std::uint64_t first = f.seed.value_or(0);
    spec.seeds.clear();
    for (int s = 0; s < *f.seeds; s++)
    {
      spec.seeds.push_back(first + static_cast<std::uint64_t>(s));
    }
  }
  else if (f.seed)
  {
    spec.seeds = {*f.seed};
  }
  if (f.tol)
    spec.base.tol = *f.tol;
  if (f.max_iter)
    spec.base.max_iter = *f.max_iter;
  if (f.jobs)
    spec.jobs = *f.jobs;
  if (f.threads)
    spec.base.threads = *f.threads;
  if (!f.out.empty())
    spec.output = f.out;
  if (f.kmax)
  {
    std::erase_if(spec.k_values, [&](double k) { return k > *f.kmax; });
  }
  spec.validate();
}

int run_sweep_command(SweepSpec spec, std::ostream &out)
{
  const SweepResult result = run_sweep(spec);
  print_summary_table(out, result.summary);
  int failures = 0;
  for (const auto &r : result.rows)
  {
    failures += r.error.empty() ? 0 : 1;
  }
  if (!spec.output.empty())
  {
    out << "rows written to " << spec.output << ", summary to " << summary_path_for(spec.output)
        << '\n';
  }
  else
  {
    write_sweep_csv(out, result.rows);
  }
  if (failures > 0)
  {
    out << failures << " run(s) failed:\n";
    for (const auto &r : result.rows)
    {
      if (!r.error.empty())
      {
        out << "  k=" << r.k << " alpha=" << r.alpha << " " << r.precon << " seed " << r.seed
            << ": " << r.error << '\n';
      }
    }
  }
  return 0;
}

void add_solve_flags(CLI::App &cmd, SolveFlags &f)
{
  cmd.add_option("--config", f.config_file, "key = value configuration file");
  cmd.add_option("--dim", f.dim, "2 or 3");
  cmd.add_option("--k", f.k, "wavenumber");
  cmd.add_option("--alpha", f.alpha, "subdomain diameter ~ k^-alpha");
  cmd.add_option("--alpha-prime", f.alpha_prime, "coarse mesh diameter ~ k^-alpha'");
  cmd.add_option("--beta", f.beta, "epsilon_prec = k^beta, or 'none' for 0");
  cmd.add_option("--precon", f.precon, "none, one_level, grid or dtn");
  cmd.add_option("--mode", f.mode, "hybrid or additive");
  cmd.add_option("--selection", f.selection, "automatic, fixed:<m> or capped:<m>");
  cmd.add_option("--pou", f.pou, "ramp or multiplicity");
  cmd.add_option("--overlap", f.overlap, "cell layers added to each subdomain");
  cmd.add_option("--subdomains", f.subdomains, "subdomains per dimension");
  cmd.add_option("--fine-intervals", f.fine_intervals, "fine mesh intervals per edge");
  cmd.add_option("--coarse-intervals", f.coarse_intervals, "coarse mesh intervals per edge");
  cmd.add_option("--coarse-size", f.coarse_size, "grid coarse space sized to about n_CS dofs");
  cmd.add_option("--seed", f.seed, "initial guess seed");
  cmd.add_option("--tol", f.tol, "relative residual tolerance");
  cmd.add_option("--max-iter", f.max_iter, "GMRES iteration limit");
  cmd.add_option("--threads", f.threads, "worker threads (0: all cores)");
  cmd.add_flag("--pure-coarse", f.pure_coarse, "build E, P and Q from A_0");
  cmd.add_flag("--solve-absorptive", f.solve_absorptive, "solve the absorptive system");
  cmd.add_option("--out", f.out, "JSON report");
  cmd.add_option("--residual-csv", f.residual_csv, "residual history CSV");
  cmd.add_option("--mesh-out", f.mesh_out, "mesh dump");
  cmd.add_option("--matrix-out", f.matrix_out, "system matrix in coordinate format");
  cmd.add_option("--decomposition-out", f.decomposition_out, "decomposition JSON");
}

void add_sweep_flags(CLI::App &cmd, SweepFlags &f, bool preset)
{
  if (preset)
  {
    cmd.add_flag("--full", f.full, "full wavenumber range (slow)");
  }
  cmd.add_option("--kmax", f.kmax, "drop wavenumbers above this");
  cmd.add_option("--seeds", f.seeds, "number of seeds, starting at --seed");
  cmd.add_option("--seed", f.seed, "first seed");
  cmd.add_option("--tol", f.tol, "relative residual tolerance");
  cmd.add_option("--max-iter", f.max_iter, "GMRES iteration limit");
  cmd.add_option("--jobs", f.jobs, "configurations run concurrently");
  cmd.add_option("--threads", f.threads, "threads per configuration");
  cmd.add_option("--out", f.out, "per-seed CSV (summary goes to <stem>_summary.csv)");
}

}  // namespace

int cli_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Schwarz preconditioners for the discrete Helmholtz equation", "helmdd"};
  app.require_subcommand(1);

  SolveFlags solve_flags;
  auto *solve_cmd = app.add_subcommand("solve", "run one configuration");
  add_solve_flags(*solve_cmd, solve_flags);

  SweepFlags sweep_flags;
  auto *sweep_cmd = app.add_subcommand("sweep", "run a sweep spec file");
  sweep_cmd->add_option("spec", sweep_flags.spec_file, "sweep spec file")->required();
  add_sweep_flags(*sweep_cmd, sweep_flags, false);

  SweepFlags table_flags[3];
  CLI::App *tables[3];
  const char *names[3] = {"table1-desk", "table2-desk", "table3-desk"};
  const char *help[3] = {"2d, beta in {1, 2}, one-level / grid / DtN",
                         "2d, grid and DtN at matched coarse-space sizes",
                         "3d, k = 10, alpha' = 3/2 - alpha"};
  for (int t = 0; t < 3; t++)
  {
    tables[t] = app.add_subcommand(names[t], help[t]);
    add_sweep_flags(*tables[t], table_flags[t], true);
  }

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsageError;
  }

  try
  {
    if (solve_cmd->parsed())
    {
      return run_solve(solve_flags, out);
    }
    if (sweep_cmd->parsed())
    {
      SweepSpec spec = sweep_spec_from(read_key_value_file(sweep_flags.spec_file));
      apply_sweep_overrides(spec, sweep_flags);
      return run_sweep_command(spec, out);
    }
    for (int t = 0; t < 3; t++)
    {
      if (!tables[t]->parsed())
      {
        continue;
      }
      const SweepFlags &f = table_flags[t];
      PresetOptions options;
      options.full = f.full;
      options.kmax = f.kmax;
      SweepSpec spec = t == 0 ? table1_desk(options)
                       : t == 1 ? table2_desk(options)
                                : table3_desk(options);
      if (f.full)
      {
        err << "warning: --full runs the largest wavenumbers; expect hours and tens of GB\n";
      }
      apply_sweep_overrides(spec, f);
      return run_sweep_command(spec, out);
    }
  }
  catch (const ArgumentError &e)
  {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  catch (const std::invalid_argument &e)
  {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  catch (const std::exception &e)
  {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  }
  return 0;
}

}  // namespace helmdd
