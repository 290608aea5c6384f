// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helmdd/harness.hpp"
#ifdef HELMDD_HAVE_CLI
#include "helmdd/cli.hpp"
#endif

using namespace helmdd;

namespace
{

SweepSpec small_spec()
{
  SweepSpec spec;
  spec.k_values = {5.0};
  spec.alphas = {{1.0, std::nullopt}};
  spec.variants = {SweepVariant::parse("one_level"), SweepVariant::parse("grid"),
                   SweepVariant::parse("dtn"), SweepVariant::parse("grid=dtn")};
  spec.seeds = {0, 1};
  return spec;
}

std::filesystem::path temp_path(const std::string &name)
{
  return std::filesystem::temp_directory_path() / ("helmdd_test_" + name);
}

#ifdef HELMDD_HAVE_CLI
int run_cli(std::vector<const char *> args, std::string &out, std::string &err)
{
  args.insert(args.begin(), "helmdd");
  std::ostringstream o;
  std::ostringstream e;
  const int code = cli_main(static_cast<int>(args.size()), args.data(), o, e);
  out = o.str();
  err = e.str();
  return code;
}
#endif

}  // namespace

TEST_CASE("sweep variants", "[harness]")
{
  const auto fixed = SweepVariant::parse("dtn:fixed:2");
  CHECK(fixed.precon == PreconditionerKind::dtn);
  CHECK(fixed.selection.kind == SelectionPolicy::Kind::fixed);
  CHECK(fixed.selection.count == 2);
  CHECK(fixed.label == "dtn:fixed:2");
  const auto matched = SweepVariant::parse("grid=dtn");
  CHECK(matched.precon == PreconditionerKind::grid);
  CHECK(matched.match_size_of == "dtn");
  CHECK_THROWS_AS(SweepVariant::parse("dtn=grid"), ArgumentError);
  CHECK_THROWS_AS(SweepVariant::parse("multigrid"), ArgumentError);

  SweepSpec spec = small_spec();
  spec.variants = {SweepVariant::parse("grid=dtn")};
  CHECK_THROWS_AS(spec.validate(), ArgumentError);
  spec.variants = {SweepVariant::parse("dtn"), SweepVariant::parse("dtn")};
  CHECK_THROWS_AS(spec.validate(), ArgumentError);
  spec = small_spec();
  spec.k_values.clear();
  CHECK_THROWS_AS(spec.validate(), ArgumentError);
}

TEST_CASE("key-value parsing", "[harness]")
{
  std::istringstream in("# comment\n k = 10, 20 \n\nalpha = [0.6, 1]  # trailing\noutput = \"a b.csv\"\n");
  const auto kv = parse_key_values(in);
  CHECK(kv.at("k") == "10, 20");
  CHECK(kv.at("output") == "a b.csv");
  CHECK(split_list(kv.at("alpha")) == std::vector<std::string>{"0.6", "1"});

  std::istringstream missing_eq("k = 1\nalpha 2\n");
  CHECK_THROWS_WITH(parse_key_values(missing_eq), Catch::Matchers::ContainsSubstring("line 2"));
  std::istringstream repeated("k = 1\nk = 2\n");
  CHECK_THROWS_AS(parse_key_values(repeated), ArgumentError);
  CHECK_THROWS_WITH(read_key_value_file("/nonexistent/helmdd.toml"),
                    Catch::Matchers::ContainsSubstring("cannot open"));

  const auto config = solve_config_from({{"k", "20"}, {"beta", "none"}, {"precon", "grid"},
                                         {"pou", "multiplicity"}, {"tol", "1e-8"}});
  CHECK(config.k == 20.0);
  CHECK_FALSE(config.beta.has_value());
  CHECK(config.precon == PreconditionerKind::grid);
  CHECK(config.pou == PartitionOfUnity::multiplicity);
  CHECK(config.tol == 1e-8);
  CHECK_THROWS_AS(solve_config_from({{"wavenumber", "3"}}), ArgumentError);
  CHECK_THROWS_AS(solve_config_from({{"k", "ten"}}), ArgumentError);
  CHECK_THROWS_AS(solve_config_from({{"alpha", "2"}}), ArgumentError);

  const auto spec = sweep_spec_from({{"k", "10, 20"},
                                     {"alpha", "0.6, 0.8"},
                                     {"alpha_prime", "0.9, 0.7"},
                                     {"beta", "1, none"},
                                     {"precon", "grid, dtn"},
                                     {"selection", "capped:20"},
                                     {"seeds", "3"}});
  CHECK(spec.k_values == std::vector<double>{10.0, 20.0});
  REQUIRE(spec.alphas.size() == 2u);
  CHECK(spec.alphas[1].alpha_prime == 0.7);
  CHECK(spec.betas.size() == 2u);
  CHECK_FALSE(spec.betas[1].has_value());
  CHECK(spec.variants[1].selection.kind == SelectionPolicy::Kind::capped);
  CHECK(spec.seeds == std::vector<std::uint64_t>{3});
  CHECK_THROWS_AS(sweep_spec_from({{"k", "10"}, {"alpha", "1"}, {"precon", "dtn"}, {"x", "1"}}),
                  ArgumentError);
}

TEST_CASE("CSV rows round-trip exactly", "[harness]")
{
  SweepRow a;
  a.k = 20.0;
  a.alpha = 0.6;
  a.alpha_prime = 0.1 + 0.2;
  a.beta = 2.0;
  a.precon = "dtn:fixed:2";
  a.mode = "hybrid";
  a.seed = 4;
  a.num_subdomains = 36;
  a.n = 8281;
  a.coarse_size = 72;
  a.iterations = 57;
  a.converged = true;
  a.solve_seconds = 1.0 / 3.0;
  SweepRow b = a;
  b.beta.reset();
  b.iterations.reset();
  b.solve_seconds.reset();
  b.converged = false;
  b.precon = "grid=dtn";

  std::ostringstream out;
  write_sweep_csv(out, {a, b});
  CHECK(out.str().rfind(std::string(kSweepCsvHeader) + "\n", 0) == 0);
  std::istringstream in(out.str());
  const auto rows = read_sweep_csv(in);
  REQUIRE(rows.size() == 2u);
  CHECK(rows[0].alpha_prime == a.alpha_prime);
  CHECK(rows[0].beta == a.beta);
  CHECK(rows[0].solve_seconds == a.solve_seconds);
  CHECK(rows[0].iterations == 57);
  CHECK(rows[0].coarse_size == 72);
  CHECK(rows[0].precon == "dtn:fixed:2");
  CHECK_FALSE(rows[1].beta.has_value());
  CHECK_FALSE(rows[1].iterations.has_value());
  CHECK_FALSE(rows[1].converged);

  std::istringstream bad("k,d\n1,2\n");
  CHECK_THROWS_AS(read_sweep_csv(bad), ArgumentError);
}

TEST_CASE("summaries take medians per configuration", "[harness]")
{
  std::vector<SweepRow> rows;
  for (int it : {30, 10, 20})
  {
    SweepRow r;
    r.k = 10.0;
    r.alpha = 1.0;
    r.alpha_prime = 1.0;
    r.beta = 1.0;
    r.precon = "grid";
    r.mode = "hybrid";
    r.iterations = it;
    r.converged = it < 30;
    r.solve_seconds = it / 10.0;
    rows.push_back(r);
  }
  rows.push_back(rows[0]);
  rows.back().precon = "dtn";
  const auto summary = summarize(rows);
  REQUIRE(summary.size() == 2u);
  CHECK(summary[0].precon == "grid");
  CHECK(summary[0].median_iterations == 20.0);
  CHECK(summary[0].runs == 3);
  CHECK(summary[0].converged_runs == 2);
  CHECK(summary[0].median_solve_seconds == 2.0);
  CHECK(summary[1].runs == 1);

  std::ostringstream table;
  print_summary_table(table, summary);
  // No n_CS in these rows; the star marks the unconverged seed.
  CHECK(table.str().find("20*") != std::string::npos);
  CHECK(table.str().find("did not converge") != std::string::npos);
  CHECK(summary_path_for("out/run.csv") == "out/run_summary.csv");
}

TEST_CASE("a small sweep", "[harness]")
{
  SweepSpec spec = small_spec();
  spec.jobs = 2;
  spec.output = temp_path("sweep.csv").string();
  int callbacks = 0;
  const auto result = run_sweep(spec, [&](const SweepRow &row, const SolveReport &report) {
    callbacks++;
    CHECK(row.iterations == report.iterations);
  });
  CHECK(callbacks == 8);
  REQUIRE(result.rows.size() == 8u);
  REQUIRE(result.summary.size() == 4u);
  for (const auto &r : result.rows)
  {
    CHECK(r.error.empty());
    CHECK(r.converged);
  }
  const auto &dtn = result.summary[2];
  const auto &matched = result.summary[3];
  CHECK(dtn.precon == "dtn");
  CHECK(matched.precon == "grid=dtn");
  const int mc = static_cast<int>(std::lround(std::sqrt(double(*dtn.coarse_size)))) - 1;
  CHECK(*matched.coarse_size == (mc + 1) * (mc + 1));

  std::ifstream file(spec.output);
  const auto back = read_sweep_csv(file);
  REQUIRE(back.size() == result.rows.size());
  for (std::size_t i = 0; i < back.size(); i++)
  {
    CHECK(back[i].precon == result.rows[i].precon);
    CHECK(back[i].iterations == result.rows[i].iterations);
  }
  CHECK(std::filesystem::exists(summary_path_for(spec.output)));
  std::filesystem::remove(spec.output);
  std::filesystem::remove(summary_path_for(spec.output));
}

TEST_CASE("a failing point is recorded and the sweep continues", "[harness]")
{
  SweepSpec spec = small_spec();
  spec.variants = {SweepVariant::parse("grid")};
  spec.base.max_iter = 1;
  spec.seeds = {0};
  const auto result = run_sweep(spec);
  REQUIRE(result.rows.size() == 1u);
  CHECK_FALSE(result.rows[0].converged);
  CHECK(result.summary[0].converged_runs == 0);
}

TEST_CASE("presets", "[harness]")
{
  PresetOptions o;
  const auto t1 = table1_desk(o);
  CHECK(t1.k_values.size() * t1.alphas.size() * t1.betas.size() * t1.variants.size() == 54u);
  o.kmax = 20.0;
  CHECK(table1_desk(o).k_values == std::vector<double>{10.0, 20.0});
  const auto t2 = table2_desk(o);
  CHECK(t2.variants.size() == 4u);
  CHECK(t2.variants[3].match_size_of == "dtn");
  const auto t3 = table3_desk(o);
  CHECK(t3.dim == 3);
  for (const auto &p : t3.alphas)
  {
    CHECK(*p.alpha_prime == Catch::Approx(1.5 - p.alpha));
  }
  o.kmax = 5.0;
  CHECK_THROWS_AS(table1_desk(o), ArgumentError);
  o.kmax.reset();
  o.full = true;
  CHECK(table1_desk(o).k_values.back() == 80.0);
}

#ifdef HELMDD_HAVE_CLI
TEST_CASE("command line", "[harness]")
{
  std::string out;
  std::string err;
  CHECK(run_cli({"solve", "--k", "5", "--precon", "dtn"}, out, err) == 0);
  CHECK(out.find("iterations") != std::string::npos);
  CHECK(out.find("n_CS") != std::string::npos);
  CHECK(out.find("converged   yes") != std::string::npos);

  const auto json_path = temp_path("report.json").string();
  CHECK(run_cli({"solve", "--k", "5", "--precon", "grid", "--beta", "none", "--out",
                 json_path.c_str()},
                out, err) == 0);
  CHECK(std::filesystem::file_size(json_path) > 0);
  std::filesystem::remove(json_path);

  CHECK(run_cli({"sweep", "missing.toml"}, out, err) == 2);
  CHECK(err.find("missing.toml") != std::string::npos);
  CHECK(run_cli({"solve", "--wavenumber", "5"}, out, err) == 2);
  CHECK(run_cli({"solve", "--k", "-1"}, out, err) == 2);
  CHECK(run_cli({"table1-desk", "--kmax", "5"}, out, err) == 2);
  CHECK(run_cli({}, out, err) == 2);
  CHECK(run_cli({"--help"}, out, err) == 0);

  const auto spec_path = temp_path("spec.toml").string();
  {
    std::ofstream spec(spec_path);
    spec << "k = 5\nalpha = 1\nprecon = grid, dtn\nseeds = 0\n";
  }
  CHECK(run_cli({"sweep", spec_path.c_str()}, out, err) == 0);
  CHECK(out.find(kSweepCsvHeader) != std::string::npos);
  std::filesystem::remove(spec_path);
}
#endif
