// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "helmdd/solver.hpp"

namespace helmdd
{

// One column of a sweep. The label is what ends up in the `precon` CSV column.
struct SweepVariant
{
  std::string label;
  PreconditionerKind precon = PreconditionerKind::dtn;
  SelectionPolicy selection = SelectionPolicy::automatic();
  // Grid only: size the coarse mesh to the n_CS reached by the variant with
  // this label at the same (k, alpha, alpha', beta).
  std::string match_size_of;

  // "one_level", "grid", "dtn", "dtn:fixed:2", "dtn:capped:20", "grid=dtn".
  static SweepVariant parse(const std::string &text);
};

struct AlphaPair
{
  double alpha = 1.0;
  std::optional<double> alpha_prime;
};

struct SweepSpec
{
  int dim = 2;
  std::vector<double> k_values;
  std::vector<AlphaPair> alphas;
  // nullopt: epsilon_prec = 0.
  std::vector<std::optional<double>> betas{1.0};
  std::vector<SweepVariant> variants;
  std::vector<std::uint64_t> seeds{0, 1, 2};
  // mode, tol, max_iter, overlap, partition of unity and threads of every run.
  SolveConfig base;
  // Per-seed CSV; the summary is written to <stem>_summary.csv next to it.
  std::string output;
  unsigned jobs = 1;

  // Throws ArgumentError on an empty axis, an unknown match target or an
  // invalid generated config.
  void validate() const;
};

struct SweepRow
{
  double k = 0.0;
  int dim = 2;
  double alpha = 0.0;
  double alpha_prime = 0.0;
  std::optional<double> beta;
  std::string precon;
  std::string mode;
  std::uint64_t seed = 0;
  std::optional<Index> num_subdomains;
  std::optional<Index> n;
  std::optional<Index> coarse_size;
  std::optional<int> iterations;
  bool converged = false;
  std::optional<double> solve_seconds;
  double true_residual = 0.0;
  // Empty unless the run failed.
  std::string error;
};

struct SummaryRow
{
  double k = 0.0;
  int dim = 2;
  double alpha = 0.0;
  double alpha_prime = 0.0;
  std::optional<double> beta;
  std::string precon;
  std::string mode;
  std::optional<Index> num_subdomains;
  std::optional<Index> n;
  std::optional<Index> coarse_size;
  std::optional<double> median_iterations;
  int converged_runs = 0;
  int runs = 0;
  std::optional<double> median_solve_seconds;
};

struct SweepResult
{
  std::vector<SweepRow> rows;
  std::vector<SummaryRow> summary;
};

// Called once per (config, seed) with the full report, from worker threads but
// never concurrently.
using ReportCallback = std::function<void(const SweepRow &, const SolveReport &)>;

// Runs every (k, alpha pair, beta, variant) point for every seed on a pool of
// `spec.jobs` workers. Variants with a size match run after the ones they
// depend on. A failing point is recorded in its rows and the sweep continues.
SweepResult run_sweep(const SweepSpec &spec, const ReportCallback &on_report = {});

inline constexpr const char *kSweepCsvHeader =
  "k,d,alpha,alpha_prime,beta,precon,mode,N_sub,n,n_CS,iterations,converged,solve_seconds";
inline constexpr const char *kSummaryCsvHeader =
  "k,d,alpha,alpha_prime,beta,precon,mode,N_sub,n,n_CS,median_iterations,converged_runs,runs,"
  "median_solve_seconds";

void write_sweep_csv_row(std::ostream &os, const SweepRow &row);
void write_sweep_csv(std::ostream &os, const std::vector<SweepRow> &rows);
void write_summary_csv(std::ostream &os, const std::vector<SummaryRow> &rows);
// Parses a file written by write_sweep_csv (header checked).
std::vector<SweepRow> read_sweep_csv(std::istream &is);
std::vector<SummaryRow> summarize(const std::vector<SweepRow> &rows);
// Blocks per (beta, alpha pair), one line per k, "iterations (n_CS)" per variant.
void print_summary_table(std::ostream &os, const std::vector<SummaryRow> &summary);
std::string summary_path_for(const std::string &csv_path);

// `key = value` lines, '#' comments, blank lines ignored. Throws ArgumentError
// with the line number on malformed input or a repeated key.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(std::istream &is);
KeyValues read_key_value_file(const std::string &path);
// "a, b, c" or "[a, b, c]".
std::vector<std::string> split_list(const std::string &value);

// Sets one SolveConfig field from its key-value spelling without validating the
// whole config; false if `key` is not a solve key.
bool apply_config_key(SolveConfig &config, const std::string &key, const std::string &value);
// Unknown keys are an error.
SolveConfig solve_config_from(const KeyValues &kv, SolveConfig base = {});
SweepSpec sweep_spec_from(const KeyValues &kv);

struct PresetOptions
{
  std::optional<double> kmax;
  bool full = false;
  std::vector<std::uint64_t> seeds{0, 1, 2};
  unsigned jobs = 1;
  std::string output;
};

// d = 2; k in {10, 20, 40} (full: up to 80); alpha in {0.6, 0.8, 1}; beta in {1, 2};
// one-level, grid and DtN.
SweepSpec table1_desk(const PresetOptions &options);
// d = 2, beta = 1: grid against DtN with two eigenvectors per subdomain, and DtN
// against a grid coarse space sized like the automatic DtN space.
SweepSpec table2_desk(const PresetOptions &options);
// d = 3, k = 10 (full: up to 40), alpha' = 3/2 - alpha, DtN capped at 20 per subdomain.
SweepSpec table3_desk(const PresetOptions &options);

}  // namespace helmdd
