// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion.
// Exit status is nonzero if a criterion fails that is not listed with
// --known-failure, or if a listed one passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "helmdd/assembly.hpp"
#include "helmdd/decomposition.hpp"
#include "helmdd/eigensolver.hpp"
#include "helmdd/factorization.hpp"
#include "helmdd/harness.hpp"
#include "helmdd/preconditioner.hpp"
#include "helmdd/solver.hpp"
#include "oracles.hpp"

using namespace helmdd;

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome
{
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string &what)
  {
    if (!ok)
    {
      pass = false;
    }
    notes.push_back(std::string(ok ? "ok    " : "FAIL  ") + what);
  }
};

std::string fmt(const char *f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char *f, ...)
{
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// Reference iteration counts and coarse sizes, d = 2, beta = 1.
struct Table1Entry
{
  int one_level;
  int grid;
  int grid_ncs;
  int dtn;
  int dtn_ncs;
};
const std::map<std::pair<int, int>, Table1Entry> kTable1 = {
  {{10, 6}, {22, 19, 16, 11, 39}},     {{20, 6}, {48, 46, 49, 26, 204}},
  {{40, 6}, {78, 98, 100, 37, 531}},   {{10, 8}, {35, 19, 49, 10, 122}},
  {{20, 8}, {71, 35, 121, 13, 394}},   {{40, 8}, {158, 88, 400, 22, 1440}},
  {{10, 10}, {65, 26, 121, 11, 324}},  {{20, 10}, {122, 26, 441, 14, 1120}},
  {{40, 10}, {286, 33, 1681, 20, 4640}},
};
// beta = 2 at k = 40, alpha = 1.
constexpr int kBeta2Grid = 80;
constexpr int kBeta2Dtn = 72;
// Forced sizes at alpha = 0.8: grid vs DtN(m_i = 2), DtN vs grid sized like DtN.
struct Table2Entry
{
  int grid;
  int dtn_fixed2;
  int dtn;
  int grid_matched;
};
const std::map<int, Table2Entry> kTable2 = {{10, {19, 26, 10, 15}}, {20, {35, 61, 13, 20}}};

int alpha_key(double alpha)
{
  return static_cast<int>(std::lround(alpha * 10));
}

bool within_band(double ours, double reference)
{
  return std::abs(ours - reference) <= std::max(0.5 * reference, 5.0);
}

// Solutions collected for the correctness criterion, grouped by linear system.
struct Collected
{
  std::string label;
  std::optional<double> beta;
  SolveConfig config;
  bool converged;
  ComplexVector solution;
};
using SystemKey = std::tuple<int, double, double, std::uint64_t>;  // d, k, alpha, seed
std::map<SystemKey, std::vector<Collected>> g_solutions;

ReportCallback collector()
{
  return [](const SweepRow &row, const SolveReport &report) {
    g_solutions[{row.dim, row.k, row.alpha, row.seed}].push_back(
      {row.precon, row.beta, report.config, report.converged, report.solution});
  };
}

const SummaryRow *find(const std::vector<SummaryRow> &summary, double k, double alpha,
                       const std::string &precon, std::optional<double> beta = 1.0)
{
  for (const auto &s : summary)
  {
    if (s.k == k && s.alpha == alpha && s.precon == precon && s.beta == beta)
    {
      return &s;
    }
  }
  return nullptr;
}

double median_it(const SummaryRow *s)
{
  return s && s->median_iterations ? *s->median_iterations : 1e9;
}

void print_summary(const SweepResult &r)
{
  std::ostringstream os;
  print_summary_table(os, r.summary);
  std::istringstream lines(os.str());
  std::string line;
  while (std::getline(lines, line))
  {
    std::cout << "      " << line << '\n';
  }
  for (const auto &row : r.rows)
  {
    if (!row.error.empty())
    {
      std::cout << "      error k=" << row.k << " alpha=" << row.alpha << ' ' << row.precon
                << ": " << row.error << '\n';
    }
  }
  std::cout.flush();
}

// 1 -------------------------------------------------------------------------
Outcome criterion1()
{
  Outcome o;
  const auto t0 = Clock::now();
  const auto mesh = build_uniform_mesh(2, 40);
  for (auto pou : {PartitionOfUnity::multiplicity, PartitionOfUnity::ramp})
  {
    const auto dd = build_decomposition(mesh, 4, 2, pou);
    double worst = 0.0;
    for (unsigned seed = 0; seed < 5; seed++)
    {
      const ComplexVector v = oracle::random_vector(mesh.num_vertices(), seed);
      ComplexVector acc = ComplexVector::Zero(v.size());
      for (Index j = 0; j < dd.num_subdomains(); j++)
      {
        prolongate_weighted(dd, j, restrict_to(dd.subdomains[j], v), acc);
      }
      worst = std::max(worst, (acc - v).cwiseAbs().maxCoeff());
    }
    o.check(worst <= 1e-15, fmt("partition of unity (%s): max error %.2e",
                                pou == PartitionOfUnity::ramp ? "ramp" : "multiplicity", worst));
  }

  const HelmholtzParams params{10.0, 10.0, 10.0};
  const auto a = assemble_global(mesh, params);
  o.check(a.max_asymmetry() == 0.0, fmt("A_eps symmetric: max |a_ij - a_ji| = %g", a.max_asymmetry()));
  const auto a3 = assemble_global(build_uniform_mesh(3, 8), params);
  o.check(a3.max_asymmetry() == 0.0, "A_eps symmetric in 3d");

  const auto dd = build_decomposition(mesh, 10, 2, PartitionOfUnity::ramp);
  const std::vector<std::pair<std::string, CoarseSpace>> spaces = [&] {
    std::vector<std::pair<std::string, CoarseSpace>> s;
    s.emplace_back("grid", build_grid_cs(build_uniform_mesh(2, 10), mesh, a));
    s.emplace_back("dtn", build_dtn_cs(mesh, dd, params, a));
    return s;
  }();
  for (const auto &[name, cs] : spaces)
  {
    double worst = 0.0;
    for (unsigned seed = 0; seed < 20; seed++)
    {
      const ComplexVector w = oracle::random_vector(mesh.num_vertices(), 100 + seed);
      const ComplexVector pw = w - a * cs.correction(w);
      worst = std::max(worst, (cs.z_adjoint * pw).norm() / w.norm());
    }
    o.check(worst <= 1e-10, fmt("||Z* P w|| / ||w|| (%s, n_CS = %td): %.2e", name.c_str(),
                                cs.size(), worst));
  }
  const double t = seconds_since(t0);
  o.check(t < 10.0, fmt("runtime %.2f s (< 10 s)", t));
  return o;
}

// 2 -------------------------------------------------------------------------
Outcome criterion2()
{
  Outcome o;
  const auto mesh = build_uniform_mesh(2, 8);
  const HelmholtzParams params{5.0, 5.0, 5.0};
  const auto dd = std::make_shared<Decomposition>(build_decomposition(mesh, 2, 2));
  const auto a = std::make_shared<ComplexSparseMatrix>(assemble_global(mesh, params));
  const auto m1 = std::make_shared<OneLevelORAS>(mesh, dd, params);
  std::vector<ComplexSparseMatrix> local;
  for (const auto &s : dd->subdomains)
  {
    local.push_back(assemble_subdomain_robin(mesh, s, params));
  }
  const DenseMatrix m1_dense = oracle::one_level(*dd, local);
  const DenseMatrix a_dense = oracle::dense(*a);

  const auto rel = [](const ComplexVector &x, const ComplexVector &y) {
    return (x - y).cwiseAbs().maxCoeff() / y.cwiseAbs().maxCoeff();
  };
  double worst = 0.0;
  for (unsigned seed = 0; seed < 10; seed++)
  {
    const ComplexVector v = oracle::random_vector(mesh.num_vertices(), seed);
    worst = std::max(worst, rel(m1->apply(v), m1_dense * v));
  }
  o.check(worst <= 1e-10, fmt("one-level vs dense sum R~^T A_j^-1 R_j: %.2e", worst));

  const auto grid = std::make_shared<CoarseSpace>(build_grid_cs(build_uniform_mesh(2, 2), mesh, *a));
  const auto dtn = std::make_shared<CoarseSpace>(build_dtn_cs(mesh, *dd, params, *a));
  for (const auto &[name, cs] : {std::pair{"grid", grid}, std::pair{"dtn", dtn}})
  {
    const TwoLevelPreconditioner m2(m1, cs, a, CoarseMode::hybrid);
    const DenseMatrix ref = oracle::two_level(m1_dense, oracle::dense(cs->z), a_dense, true);
    worst = 0.0;
    for (unsigned seed = 0; seed < 10; seed++)
    {
      const ComplexVector v = oracle::random_vector(mesh.num_vertices(), 50 + seed);
      worst = std::max(worst, rel(m2.apply(v), ref * v));
    }
    o.check(worst <= 1e-10, fmt("hybrid Q M1 P + Xi vs dense (%s): %.2e", name, worst));
  }

  // Random 50x50 sparse system against the hand-written dense LU.
  {
    std::vector<Triplet> t;
    const DenseMatrix r = DenseMatrix::Random(50, 50);
    for (Index i = 0; i < 50; i++)
    {
      for (Index j = 0; j < 50; j++)
      {
        if (i == j || (i * 7 + j * 3) % 10 == 0)
        {
          t.push_back({i, j, r(i, j) + (i == j ? 4.0 : 0.0)});
        }
      }
    }
    const auto s = ComplexSparseMatrix::from_triplets(50, 50, t);
    const ComplexVector b = oracle::random_vector(50, 3);
    const double err = (factorize(s).solve(b) - oracle::DenseLU(oracle::dense(s)).solve(b))
                         .cwiseAbs()
                         .maxCoeff();
    o.check(err <= 1e-10, fmt("sparse LU vs dense LU (50x50): %.2e", err));
  }
  // Eigenvalues as roots of det(S - lambda M).
  {
    const DenseMatrix s = DenseMatrix::Random(8, 8);
    const DenseMatrix b = DenseMatrix::Random(8, 8);
    const DenseMatrix m = b * b.adjoint() + DenseMatrix::Identity(8, 8);
    const auto pairs = generalized_eig(s, m);
    const double bound = 1e-6 * std::pow(s.norm(), 8);
    double worst_det = 0.0;
    for (Index j = 0; j < 8; j++)
    {
      worst_det = std::max(worst_det,
                           std::abs(oracle::DenseLU(s - pairs.values[j] * m).determinant()));
    }
    o.check(worst_det <= bound,
            fmt("max |det(S - lambda M)| = %.2e (bound %.2e)", worst_det, bound));
  }
  return o;
}

// 3, 5 ----------------------------------------------------------------------
SweepResult g_table1;

Outcome criterion3()
{
  Outcome o;
  const auto t0 = Clock::now();
  PresetOptions opts;
  SweepSpec spec = table1_desk(opts);
  spec.betas = {1.0};
  g_table1 = run_sweep(spec, collector());
  const double t = seconds_since(t0);
  print_summary(g_table1);

  for (const auto &[key, ref] : kTable1)
  {
    const double k = key.first;
    const double alpha = key.second / 10.0;
    const double one = median_it(find(g_table1.summary, k, alpha, "one_level"));
    const double grid = median_it(find(g_table1.summary, k, alpha, "grid"));
    const double dtn = median_it(find(g_table1.summary, k, alpha, "dtn"));
    const std::string where = fmt("k=%g alpha=%g", k, alpha);
    o.check(within_band(one, ref.one_level),
            fmt("%s one-level %g (reference %d)", where.c_str(), one, ref.one_level));
    o.check(within_band(grid, ref.grid),
            fmt("%s grid %g (reference %d)", where.c_str(), grid, ref.grid));
    o.check(within_band(dtn, ref.dtn), fmt("%s DtN %g (reference %d)", where.c_str(), dtn, ref.dtn));
    if (key.second == 6)
    {
      o.check(dtn <= one, fmt("%s DtN <= one-level", where.c_str()));
    }
    else
    {
      o.check(dtn <= grid && grid <= one, fmt("%s DtN <= grid <= one-level", where.c_str()));
    }
  }
  o.check(t <= 900.0, fmt("runtime %.0f s (<= 900 s)", t));
  return o;
}

Outcome criterion5()
{
  Outcome o;
  for (const auto &[key, ref] : kTable1)
  {
    const double k = key.first;
    const double alpha = key.second / 10.0;
    const auto *grid = find(g_table1.summary, k, alpha, "grid");
    const auto *dtn = find(g_table1.summary, k, alpha, "dtn");
    const std::string where = fmt("k=%g alpha=%g", k, alpha);
    const Index expect = static_cast<Index>(std::pow(std::floor(std::pow(k, alpha) + 1e-12) + 1, 2));
    const Index grid_ncs = grid && grid->coarse_size ? *grid->coarse_size : -1;
    o.check(grid_ncs == expect && grid_ncs == ref.grid_ncs,
            fmt("%s grid n_CS %td (formula %td, reference %d)", where.c_str(), grid_ncs, expect,
                ref.grid_ncs));
    const Index dtn_ncs = dtn && dtn->coarse_size ? *dtn->coarse_size : -1;
    const double dev = double(dtn_ncs - ref.dtn_ncs) / ref.dtn_ncs;
    o.check(std::abs(dev) <= 0.25, fmt("%s DtN n_CS %td (reference %d, %+.0f%%)", where.c_str(),
                                       dtn_ncs, ref.dtn_ncs, 100 * dev));
  }
  return o;
}

// 4 -------------------------------------------------------------------------
Outcome criterion4()
{
  Outcome o;
  SweepSpec spec;
  spec.k_values = {40.0};
  spec.alphas = {{1.0, std::nullopt}};
  spec.betas = {2.0};
  spec.variants = {SweepVariant::parse("grid"), SweepVariant::parse("dtn")};
  const auto r = run_sweep(spec, collector());
  print_summary(r);
  for (const auto &[label, ref1, ref2] :
       {std::tuple{"grid", 33, kBeta2Grid}, std::tuple{"dtn", 20, kBeta2Dtn}})
  {
    const double b1 = median_it(find(g_table1.summary, 40.0, 1.0, label, 1.0));
    const double b2 = median_it(find(r.summary, 40.0, 1.0, label, 2.0));
    o.check(b2 > b1, fmt("%s: beta=2 %g > beta=1 %g (reference %d vs %d)", label, b2, b1, ref2,
                         ref1));
  }
  return o;
}

// 6 -------------------------------------------------------------------------
Outcome criterion6()
{
  Outcome o;
  PresetOptions opts;
  opts.kmax = 20.0;
  SweepSpec spec = table2_desk(opts);
  spec.alphas = {{0.8, std::nullopt}};
  const auto r = run_sweep(spec, collector());
  print_summary(r);
  for (const auto &[k, ref] : kTable2)
  {
    const double grid = median_it(find(r.summary, k, 0.8, "grid"));
    const double fixed2 = median_it(find(r.summary, k, 0.8, "dtn:fixed:2"));
    const double dtn = median_it(find(r.summary, k, 0.8, "dtn"));
    const double matched = median_it(find(r.summary, k, 0.8, "grid=dtn"));
    o.check(grid <= fixed2, fmt("k=%d grid %g <= DtN(m_i=2) %g (reference %d vs %d)", k, grid,
                                fixed2, ref.grid, ref.dtn_fixed2));
    o.check(dtn <= matched, fmt("k=%d DtN %g <= grid at DtN size %g (reference %d vs %d)", k, dtn,
                                matched, ref.dtn, ref.grid_matched));
  }
  return o;
}

// 7 -------------------------------------------------------------------------
Outcome criterion7()
{
  Outcome o;
  const auto t0 = Clock::now();
  SweepSpec spec;
  spec.dim = 3;
  spec.k_values = {10.0};
  spec.alphas = {{0.5, 1.0}};
  spec.variants = {SweepVariant::parse("grid"), SweepVariant::parse("one_level")};
  const auto r = run_sweep(spec, collector());
  const double t = seconds_since(t0);
  print_summary(r);
  const auto *grid = find(r.summary, 10.0, 0.5, "grid");
  const auto *one = find(r.summary, 10.0, 0.5, "one_level");
  o.check(grid && grid->n && *grid->n == 39304, "n = 39304");
  o.check(grid && grid->converged_runs == grid->runs && median_it(grid) <= 30,
          fmt("grid %g iterations (<= 30, reference 12)", median_it(grid)));
  o.check(one && one->converged_runs == one->runs && median_it(one) <= 60,
          fmt("one-level %g iterations (<= 60, reference 25)", median_it(one)));
  o.check(t <= 600.0, fmt("runtime %.0f s (<= 600 s)", t));
  return o;
}

// 8 -------------------------------------------------------------------------
Outcome criterion8()
{
  Outcome o;
  int verified = 0;
  int pairs = 0;
  double worst_residual = 0.0;
  double worst_pair = 0.0;
  std::string worst_pair_where;
  for (auto &[key, runs] : g_solutions)
  {
    std::vector<const Collected *> ok;
    for (const auto &c : runs)
    {
      if (c.converged)
      {
        ok.push_back(&c);
      }
    }
    if (ok.empty())
    {
      continue;
    }
    const auto problem = build_problem(ok.front()->config);
    for (const auto *c : ok)
    {
      const double res = verify_solution(c->solution, problem.system, problem.rhs);
      worst_residual = std::max(worst_residual, res);
      verified++;
      if (res > 1e-5)
      {
        o.check(false, fmt("d=%d k=%g alpha=%g seed=%llu %s: residual %.2e", std::get<0>(key),
                           std::get<1>(key), std::get<2>(key),
                           static_cast<unsigned long long>(std::get<3>(key)), c->label.c_str(), res));
      }
    }
    for (std::size_t i = 0; i < ok.size(); i++)
    {
      for (std::size_t j = i + 1; j < ok.size(); j++)
      {
        const double scale = std::max(ok[i]->solution.norm(), ok[j]->solution.norm());
        const double d = (ok[i]->solution - ok[j]->solution).norm() / scale;
        pairs++;
        if (d > worst_pair)
        {
          worst_pair = d;
          worst_pair_where = fmt("d=%d k=%g alpha=%g %s vs %s", std::get<0>(key), std::get<1>(key),
                                 std::get<2>(key), ok[i]->label.c_str(), ok[j]->label.c_str());
        }
      }
    }
  }
  o.check(verified > 0 && worst_residual <= 1e-5,
          fmt("%d converged runs, max ||f - A x|| / ||f|| = %.2e", verified, worst_residual));
  o.check(worst_pair <= 1e-4, fmt("%d pairs, max relative difference %.2e (%s)", pairs, worst_pair,
                                  worst_pair_where.c_str()));
  return o;
}

const char *kTitles[9] = {"",
                          "exact algebraic identities",
                          "dense oracle equivalence",
                          "Table 1 iteration counts and ordering",
                          "beta = 2 degrades both coarse spaces",
                          "coarse-space sizes",
                          "forced coarse-space sizes",
                          "3d smoke test",
                          "solution correctness across preconditioners"};

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"helmdd acceptance checks"};
  std::vector<int> known_failures;
  std::vector<int> only;
  app.add_option("--known-failure", known_failures,
                 "criterion expected to fail (its FAIL line is still printed)");
  app.add_option("--only", only, "run only these criteria (3 also feeds 4, 5 and 8)");
  CLI11_PARSE(app, argc, argv);

  const std::set<int> expected(known_failures.begin(), known_failures.end());
  std::set<int> selected(only.begin(), only.end());
  if (selected.empty())
  {
    selected = {1, 2, 3, 4, 5, 6, 7, 8};
  }
  const std::map<int, std::function<Outcome()>> runs = {
    {1, criterion1}, {2, criterion2}, {3, criterion3}, {5, criterion5},
    {4, criterion4}, {6, criterion6}, {7, criterion7}, {8, criterion8}};
  // 4 and 5 read the Table 1 sweep, 8 reads every solution collected before it.
  const int order[8] = {1, 2, 3, 5, 4, 6, 7, 8};

  std::map<int, Outcome> results;
  for (int id : order)
  {
    if (!selected.count(id))
    {
      continue;
    }
    std::cout << "criterion " << id << ": " << kTitles[id] << '\n' << std::flush;
    const auto t0 = Clock::now();
    Outcome out;
    try
    {
      out = runs.at(id)();
    }
    catch (const std::exception &e)
    {
      out.check(false, std::string("exception: ") + e.what());
    }
    for (const auto &n : out.notes)
    {
      std::cout << "    " << n << '\n';
    }
    std::cout << "    (" << std::fixed << std::setprecision(1) << seconds_since(t0) << " s)\n"
              << std::defaultfloat << std::flush;
    results[id] = out;
  }

  std::cout << '\n';
  int unexpected = 0;
  for (const auto &[id, out] : results)
  {
    const bool known = expected.count(id) > 0;
    std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << kTitles[id];
    if (known)
    {
      std::cout << (out.pass ? " (listed as known failure, now passes)" : " (known failure)");
    }
    std::cout << '\n';
    if (out.pass == known)
    {
      unexpected++;
    }
  }
  return unexpected == 0 ? 0 : 1;
}
