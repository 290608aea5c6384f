// SPDX-License-Identifier: Apache-2.0

#include "helmdd/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>

#include "helmdd/parallel.hpp"

namespace helmdd
{

namespace
{

std::string trim(const std::string &s)
{
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos)
  {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string format_double(double v)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string &text, const std::string &what)
{
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
  {
    throw ArgumentError("bad number '" + text + "' for " + what);
  }
  return v;
}

template <typename Int>
Int parse_int(const std::string &text, const std::string &what)
{
  const std::string t = trim(text);
  Int v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
  {
    throw ArgumentError("bad integer '" + text + "' for " + what);
  }
  return v;
}

bool parse_bool(const std::string &text, const std::string &what)
{
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes")
  {
    return true;
  }
  if (t == "false" || t == "0" || t == "no")
  {
    return false;
  }
  throw ArgumentError("bad boolean '" + text + "' for " + what);
}

std::optional<double> parse_beta(const std::string &text)
{
  const std::string t = trim(text);
  if (t == "none")
  {
    return std::nullopt;
  }
  return parse_double(t, "beta");
}

PartitionOfUnity parse_pou(const std::string &text)
{
  const std::string t = trim(text);
  if (t == "multiplicity")
  {
    return PartitionOfUnity::multiplicity;
  }
  if (t == "ramp")
  {
    return PartitionOfUnity::ramp;
  }
  throw ArgumentError("unknown partition of unity '" + text + "'");
}

template <typename T>
std::string optional_field(const std::optional<T> &v)
{
  if (!v)
  {
    return {};
  }
  if constexpr (std::is_floating_point_v<T>)
  {
    return format_double(*v);
  }
  else
  {
    return std::to_string(*v);
  }
}

double median(std::vector<double> values)
{
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

struct SweepPoint
{
  double k;
  AlphaPair alphas;
  std::optional<double> beta;
};

// Depth in the chain of size matches; 0 for independent variants.
std::vector<int> variant_depths(const std::vector<SweepVariant> &variants)
{
  std::map<std::string, std::size_t> by_label;
  for (std::size_t v = 0; v < variants.size(); v++)
  {
    if (!by_label.emplace(variants[v].label, v).second)
    {
      throw ArgumentError("duplicate sweep variant '" + variants[v].label + "'");
    }
  }
  std::vector<int> depth(variants.size(), 0);
  for (std::size_t v = 0; v < variants.size(); v++)
  {
    std::size_t cur = v;
    int d = 0;
    while (!variants[cur].match_size_of.empty())
    {
      const auto it = by_label.find(variants[cur].match_size_of);
      if (it == by_label.end())
      {
        throw ArgumentError("variant '" + variants[cur].label + "' matches unknown variant '" +
                            variants[cur].match_size_of + "'");
      }
      if (variants[cur].precon != PreconditionerKind::grid)
      {
        throw ArgumentError("only grid variants can match a coarse-space size");
      }
      cur = it->second;
      if (++d > static_cast<int>(variants.size()))
      {
        throw ArgumentError("cyclic size matches among sweep variants");
      }
    }
    depth[v] = d;
  }
  return depth;
}

SolveConfig config_for(const SweepSpec &spec, const SweepPoint &p, const SweepVariant &variant)
{
  SolveConfig c = spec.base;
  c.dim = spec.dim;
  c.k = p.k;
  c.alpha = p.alphas.alpha;
  c.alpha_prime = p.alphas.alpha_prime;
  c.beta = p.beta;
  c.precon = variant.precon;
  c.selection = variant.selection;
  return c;
}

SweepRow row_for(const SweepSpec &spec, const SweepPoint &p, const SweepVariant &variant,
                 std::uint64_t seed)
{
  SweepRow r;
  r.k = p.k;
  r.dim = spec.dim;
  r.alpha = p.alphas.alpha;
  r.alpha_prime = p.alphas.alpha_prime.value_or(p.alphas.alpha);
  r.beta = p.beta;
  r.precon = variant.label;
  r.mode = to_string(spec.base.mode);
  r.seed = seed;
  return r;
}

// Writes finished tasks to the CSV in task order, whatever order they finish in.
class OrderedWriter
{
public:
  OrderedWriter(std::ostream *os, std::size_t tasks) : os_(os), done_(tasks, false) {}

  void finish(std::size_t task, const std::vector<SweepRow> &rows)
  {
    std::lock_guard lock(mutex_);
    pending_[task] = rows;
    done_[task] = true;
    while (next_ < done_.size() && done_[next_])
    {
      if (os_)
      {
        for (const auto &r : pending_[next_])
        {
          write_sweep_csv_row(*os_, r);
        }
        os_->flush();
      }
      pending_.erase(next_);
      next_++;
    }
  }

private:
  std::ostream *os_;
  std::vector<bool> done_;
  std::map<std::size_t, std::vector<SweepRow>> pending_;
  std::size_t next_ = 0;
  std::mutex mutex_;
};

}  // namespace

SweepVariant SweepVariant::parse(const std::string &text)
{
  SweepVariant v;
  v.label = trim(text);
  const auto eq = v.label.find('=');
  std::string head = v.label;
  if (eq != std::string::npos)
  {
    head = trim(v.label.substr(0, eq));
    v.match_size_of = trim(v.label.substr(eq + 1));
    if (v.match_size_of.empty())
    {
      throw ArgumentError("empty size match in variant '" + text + "'");
    }
  }
  const auto colon = head.find(':');
  v.precon = parse_preconditioner(head.substr(0, colon));
  if (colon != std::string::npos)
  {
    if (v.precon != PreconditionerKind::dtn)
    {
      throw ArgumentError("selection policies apply to dtn only: '" + text + "'");
    }
    v.selection = parse_selection(head.substr(colon + 1));
  }
  if (!v.match_size_of.empty() && v.precon != PreconditionerKind::grid)
  {
    throw ArgumentError("only grid variants can match a coarse-space size: '" + text + "'");
  }
  return v;
}

void SweepSpec::validate() const
{
  if (k_values.empty() || alphas.empty() || betas.empty() || variants.empty() || seeds.empty())
  {
    throw ArgumentError("sweep needs at least one k, alpha, beta, variant and seed");
  }
  if (jobs < 1)
  {
    throw ArgumentError("sweep needs at least one job");
  }
  variant_depths(variants);
  for (const double k : k_values)
  {
    for (const auto &a : alphas)
    {
      for (const auto &b : betas)
      {
        for (const auto &v : variants)
        {
          SolveConfig c = config_for(*this, {k, a, b}, v);
          if (!v.match_size_of.empty())
          {
            // The matched size is only known at run time.
            c.coarse_intervals = 1;
          }
          c.validate();
        }
      }
    }
  }
}

SweepResult run_sweep(const SweepSpec &spec, const ReportCallback &on_report)
{
  spec.validate();
  const auto depth = variant_depths(spec.variants);
  const int max_depth = *std::max_element(depth.begin(), depth.end());

  std::vector<SweepPoint> points;
  for (const double k : spec.k_values)
  {
    for (const auto &a : spec.alphas)
    {
      for (const auto &b : spec.betas)
      {
        points.push_back({k, a, b});
      }
    }
  }

  struct Task
  {
    std::size_t point;
    std::size_t variant;
  };
  std::vector<std::vector<Task>> phases(static_cast<std::size_t>(max_depth) + 1);
  for (std::size_t p = 0; p < points.size(); p++)
  {
    for (std::size_t v = 0; v < spec.variants.size(); v++)
    {
      phases[static_cast<std::size_t>(depth[v])].push_back({p, v});
    }
  }

  std::ofstream file;
  if (!spec.output.empty())
  {
    file.open(spec.output);
    if (!file)
    {
      throw ArgumentError("cannot write '" + spec.output + "'");
    }
    file << kSweepCsvHeader << '\n';
  }
  const std::size_t total = points.size() * spec.variants.size();
  OrderedWriter writer(file.is_open() ? &file : nullptr, total);
  std::mutex callback_mutex;

  // Coarse-space size per (point, variant) for size matching.
  std::map<std::pair<std::size_t, std::size_t>, std::optional<Index>> sizes;
  std::map<std::string, std::size_t> by_label;
  for (std::size_t v = 0; v < spec.variants.size(); v++)
  {
    by_label[spec.variants[v].label] = v;
  }

  const unsigned jobs = spec.jobs;
  const unsigned inner_threads =
    spec.base.threads != 0 ? spec.base.threads : std::max(1u, default_thread_count() / jobs);

  std::vector<std::vector<SweepRow>> task_rows;
  std::size_t task_offset = 0;
  for (const auto &phase : phases)
  {
    std::vector<std::vector<SweepRow>> rows(phase.size());
    std::vector<std::optional<Index>> phase_sizes(phase.size());
    parallel_for(
      phase.size(),
      [&](std::size_t t) {
        const Task &task = phase[t];
        const SweepPoint &p = points[task.point];
        const SweepVariant &variant = spec.variants[task.variant];
        std::vector<SweepRow> &out = rows[t];
        for (const auto seed : spec.seeds)
        {
          out.push_back(row_for(spec, p, variant, seed));
        }
        try
        {
          SolveConfig c = config_for(spec, p, variant);
          c.threads = inner_threads;
          if (!variant.match_size_of.empty())
          {
            const auto target = sizes.at({task.point, by_label.at(variant.match_size_of)});
            if (!target)
            {
              throw NumericalError("size source '" + variant.match_size_of + "' failed");
            }
            c.coarse_size_target = *target;
          }
          const PreparedSolve prepared(c);
          for (std::size_t s = 0; s < spec.seeds.size(); s++)
          {
            const SolveReport report = prepared.run(spec.seeds[s]);
            SweepRow &r = out[s];
            r.num_subdomains = report.num_subdomains;
            r.n = report.n;
            r.coarse_size = report.coarse_size;
            r.iterations = report.iterations;
            r.converged = report.converged;
            r.solve_seconds = report.timings.solve_seconds;
            r.true_residual = report.true_residual;
            phase_sizes[t] = report.coarse_size;
            if (on_report)
            {
              std::lock_guard lock(callback_mutex);
              on_report(r, report);
            }
          }
        }
        catch (const std::exception &e)
        {
          for (auto &r : out)
          {
            if (!r.iterations)
            {
              r.error = e.what();
            }
          }
          if (on_report)
          {
            std::lock_guard lock(callback_mutex);
            for (const auto &r : out)
            {
              if (!r.error.empty())
              {
                on_report(r, SolveReport{});
              }
            }
          }
        }
        writer.finish(task_offset + t, out);
      },
      jobs);
    for (std::size_t t = 0; t < phase.size(); t++)
    {
      sizes[{phase[t].point, phase[t].variant}] = phase_sizes[t];
      task_rows.push_back(std::move(rows[t]));
    }
    task_offset += phase.size();
  }

  SweepResult result;
  for (auto &rows : task_rows)
  {
    for (auto &r : rows)
    {
      result.rows.push_back(std::move(r));
    }
  }
  result.summary = summarize(result.rows);
  if (!spec.output.empty())
  {
    std::ofstream summary(summary_path_for(spec.output));
    if (!summary)
    {
      throw ArgumentError("cannot write '" + summary_path_for(spec.output) + "'");
    }
    write_summary_csv(summary, result.summary);
  }
  return result;
}

void write_sweep_csv_row(std::ostream &os, const SweepRow &r)
{
  os << format_double(r.k) << ',' << r.dim << ',' << format_double(r.alpha) << ','
     << format_double(r.alpha_prime) << ',' << optional_field(r.beta) << ',' << r.precon << ','
     << r.mode << ',' << optional_field(r.num_subdomains) << ',' << optional_field(r.n) << ','
     << optional_field(r.coarse_size) << ',' << optional_field(r.iterations) << ','
     << (r.converged ? 1 : 0) << ',' << optional_field(r.solve_seconds) << '\n';
}

void write_sweep_csv(std::ostream &os, const std::vector<SweepRow> &rows)
{
  os << kSweepCsvHeader << '\n';
  for (const auto &r : rows)
  {
    write_sweep_csv_row(os, r);
  }
}

void write_summary_csv(std::ostream &os, const std::vector<SummaryRow> &rows)
{
  os << kSummaryCsvHeader << '\n';
  for (const auto &r : rows)
  {
    os << format_double(r.k) << ',' << r.dim << ',' << format_double(r.alpha) << ','
       << format_double(r.alpha_prime) << ',' << optional_field(r.beta) << ',' << r.precon << ','
       << r.mode << ',' << optional_field(r.num_subdomains) << ',' << optional_field(r.n) << ','
       << optional_field(r.coarse_size) << ',' << optional_field(r.median_iterations) << ','
       << r.converged_runs << ',' << r.runs << ',' << optional_field(r.median_solve_seconds)
       << '\n';
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream &is)
{
  std::string line;
  if (!std::getline(is, line) || trim(line) != kSweepCsvHeader)
  {
    throw ArgumentError("not a sweep CSV: unexpected header");
  }
  std::vector<SweepRow> rows;
  int line_no = 1;
  while (std::getline(is, line))
  {
    line_no++;
    if (trim(line).empty())
    {
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
    {
      f.push_back(cell);
    }
    if (!line.empty() && line.back() == ',')
    {
      f.emplace_back();
    }
    if (f.size() != 13)
    {
      throw ArgumentError("line " + std::to_string(line_no) + ": expected 13 fields");
    }
    auto opt_index = [](const std::string &s) -> std::optional<Index> {
      if (s.empty())
      {
        return std::nullopt;
      }
      return parse_int<Index>(s, "count");
    };
    SweepRow r;
    r.k = parse_double(f[0], "k");
    r.dim = parse_int<int>(f[1], "d");
    r.alpha = parse_double(f[2], "alpha");
    r.alpha_prime = parse_double(f[3], "alpha_prime");
    r.beta = f[4].empty() ? std::nullopt : std::optional<double>(parse_double(f[4], "beta"));
    r.precon = f[5];
    r.mode = f[6];
    r.num_subdomains = opt_index(f[7]);
    r.n = opt_index(f[8]);
    r.coarse_size = opt_index(f[9]);
    if (!f[10].empty())
    {
      r.iterations = parse_int<int>(f[10], "iterations");
    }
    r.converged = parse_int<int>(f[11], "converged") != 0;
    if (!f[12].empty())
    {
      r.solve_seconds = parse_double(f[12], "solve_seconds");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SummaryRow> summarize(const std::vector<SweepRow> &rows)
{
  using Key = std::tuple<double, int, double, double, std::optional<double>, std::string,
                         std::string>;
  std::vector<Key> order;
  std::map<Key, std::vector<const SweepRow *>> groups;
  for (const auto &r : rows)
  {
    Key key{r.k, r.dim, r.alpha, r.alpha_prime, r.beta, r.precon, r.mode};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted)
    {
      order.push_back(key);
    }
    it->second.push_back(&r);
  }

  std::vector<SummaryRow> out;
  for (const auto &key : order)
  {
    const auto &group = groups[key];
    SummaryRow s;
    std::tie(s.k, s.dim, s.alpha, s.alpha_prime, s.beta, s.precon, s.mode) = key;
    std::vector<double> iterations;
    std::vector<double> seconds;
    for (const SweepRow *r : group)
    {
      s.runs++;
      if (!r->error.empty() || !r->iterations)
      {
        continue;
      }
      s.num_subdomains = r->num_subdomains;
      s.n = r->n;
      s.coarse_size = r->coarse_size;
      iterations.push_back(*r->iterations);
      if (r->solve_seconds)
      {
        seconds.push_back(*r->solve_seconds);
      }
      s.converged_runs += r->converged ? 1 : 0;
    }
    if (!iterations.empty())
    {
      s.median_iterations = median(iterations);
    }
    if (!seconds.empty())
    {
      s.median_solve_seconds = median(seconds);
    }
    out.push_back(std::move(s));
  }
  return out;
}

void print_summary_table(std::ostream &os, const std::vector<SummaryRow> &summary)
{
  using Block = std::tuple<int, std::optional<double>, double, double>;
  std::vector<Block> blocks;
  std::map<Block, std::vector<const SummaryRow *>> by_block;
  for (const auto &s : summary)
  {
    Block b{s.dim, s.beta, s.alpha, s.alpha_prime};
    auto [it, inserted] = by_block.try_emplace(b);
    if (inserted)
    {
      blocks.push_back(b);
    }
    it->second.push_back(&s);
  }

  for (const auto &b : blocks)
  {
    const auto &rows = by_block[b];
    std::vector<std::string> labels;
    std::vector<double> ks;
    for (const SummaryRow *s : rows)
    {
      if (std::find(labels.begin(), labels.end(), s->precon) == labels.end())
      {
        labels.push_back(s->precon);
      }
      if (std::find(ks.begin(), ks.end(), s->k) == ks.end())
      {
        ks.push_back(s->k);
      }
    }
    const auto &[dim, beta, alpha, alpha_prime] = b;
    os << "d=" << dim << "  beta=" << (beta ? format_double(*beta) : std::string("none"))
       << "  alpha=" << format_double(alpha) << "  alpha'=" << format_double(alpha_prime)
       << '\n';
    os << std::setw(6) << "k" << std::setw(10) << "n" << std::setw(7) << "N_sub";
    for (const auto &l : labels)
    {
      os << "  " << std::left << std::setw(18) << l << std::right;
    }
    os << '\n';
    for (const double k : ks)
    {
      std::optional<Index> n;
      std::optional<Index> nsub;
      std::vector<std::string> cells;
      for (const auto &l : labels)
      {
        std::string cell = "-";
        for (const SummaryRow *s : rows)
        {
          if (s->k != k || s->precon != l)
          {
            continue;
          }
          if (s->n)
          {
            n = s->n;
          }
          if (s->num_subdomains && *s->num_subdomains > 0)
          {
            nsub = s->num_subdomains;
          }
          if (!s->median_iterations)
          {
            cell = "error";
            break;
          }
          std::ostringstream c;
          c << format_double(*s->median_iterations);
          if (s->converged_runs < s->runs)
          {
            c << '*';
          }
          if (s->coarse_size && *s->coarse_size > 0)
          {
            c << " (" << *s->coarse_size << ')';
          }
          cell = c.str();
        }
        cells.push_back(cell);
      }
      os << std::setw(6) << format_double(k) << std::setw(10) << optional_field(n) << std::setw(7)
         << optional_field(nsub);
      for (const auto &c : cells)
      {
        os << "  " << std::left << std::setw(18) << c << std::right;
      }
      os << '\n';
    }
    os << '\n';
  }
  const bool partial = std::any_of(summary.begin(), summary.end(), [](const SummaryRow &s) {
    return s.converged_runs < s.runs;
  });
  if (partial)
  {
    os << "* some seeds did not converge\n";
  }
}

std::string summary_path_for(const std::string &csv_path)
{
  std::filesystem::path p(csv_path);
  const std::string stem = p.stem().string() + "_summary.csv";
  return (p.parent_path() / stem).string();
}

KeyValues parse_key_values(std::istream &is)
{
  KeyValues kv;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line))
  {
    line_no++;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
    {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty())
    {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
    {
      throw ArgumentError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
    {
      throw ArgumentError("line " + std::to_string(line_no) + ": empty key");
    }
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
    {
      value = value.substr(1, value.size() - 2);
    }
    if (!kv.emplace(key, value).second)
    {
      throw ArgumentError("line " + std::to_string(line_no) + ": repeated key '" + key + "'");
    }
  }
  return kv;
}

KeyValues read_key_value_file(const std::string &path)
{
  std::ifstream is(path);
  if (!is)
  {
    throw ArgumentError("cannot open '" + path + "': file not found or unreadable");
  }
  try
  {
    return parse_key_values(is);
  }
  catch (const ArgumentError &e)
  {
    throw ArgumentError(path + ": " + e.what());
  }
}

std::vector<std::string> split_list(const std::string &value)
{
  std::string v = trim(value);
  if (!v.empty() && v.front() == '[')
  {
    if (v.back() != ']')
    {
      throw ArgumentError("unterminated list '" + value + "'");
    }
    v = v.substr(1, v.size() - 2);
  }
  std::vector<std::string> items;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
  {
    item = trim(item);
    if (item.size() >= 2 && item.front() == '"' && item.back() == '"')
    {
      item = item.substr(1, item.size() - 2);
    }
    if (item.empty())
    {
      throw ArgumentError("empty entry in list '" + value + "'");
    }
    items.push_back(item);
  }
  return items;
}

namespace
{

// Applies one solve-level key; false if the key is not a solve key.
bool apply_solve_key_impl(SolveConfig &c, const std::string &key, const std::string &value)
{
  if (key == "dim")
    c.dim = parse_int<int>(value, key);
  else if (key == "k")
    c.k = parse_double(value, key);
  else if (key == "alpha")
    c.alpha = parse_double(value, key);
  else if (key == "alpha_prime")
    c.alpha_prime = parse_double(value, key);
  else if (key == "beta")
    c.beta = parse_beta(value);
  else if (key == "precon")
    c.precon = parse_preconditioner(trim(value));
  else if (key == "mode")
    c.mode = parse_mode(trim(value));
  else if (key == "selection")
    c.selection = parse_selection(trim(value));
  else if (key == "tol")
    c.tol = parse_double(value, key);
  else if (key == "max_iter")
    c.max_iter = parse_int<int>(value, key);
  else if (key == "seed")
    c.seed = parse_int<std::uint64_t>(value, key);
  else if (key == "overlap_layers")
    c.overlap_layers = parse_int<int>(value, key);
  else if (key == "pou")
    c.pou = parse_pou(value);
  else if (key == "subdomains_1d")
    c.subdomains_1d = parse_int<int>(value, key);
  else if (key == "fine_intervals")
    c.fine_intervals = parse_int<int>(value, key);
  else if (key == "coarse_intervals")
    c.coarse_intervals = parse_int<int>(value, key);
  else if (key == "coarse_size_target")
    c.coarse_size_target = parse_int<Index>(value, key);
  else if (key == "coarse_operator")
  {
    const std::string v = trim(value);
    if (v != "absorptive" && v != "pure")
    {
      throw ArgumentError("coarse_operator must be 'absorptive' or 'pure'");
    }
    c.coarse_operator_absorptive = v == "absorptive";
  }
  else if (key == "dtn_absorption")
    c.dtn_with_absorption = parse_bool(value, key);
  else if (key == "solve_absorptive")
    c.solve_absorptive = parse_bool(value, key);
  else if (key == "relative_to_rhs")
    c.relative_to_rhs = parse_bool(value, key);
  else if (key == "threads")
    c.threads = parse_int<unsigned>(value, key);
  else
    return false;
  return true;
}

}  // namespace

bool apply_config_key(SolveConfig &config, const std::string &key, const std::string &value)
{
  return apply_solve_key_impl(config, key, value);
}

SolveConfig solve_config_from(const KeyValues &kv, SolveConfig base)
{
  for (const auto &[key, value] : kv)
  {
    if (!apply_config_key(base, key, value))
    {
      throw ArgumentError("unknown configuration key '" + key + "'");
    }
  }
  base.validate();
  return base;
}

SweepSpec sweep_spec_from(const KeyValues &kv)
{
  SweepSpec spec;
  std::vector<double> alphas;
  std::vector<double> alpha_primes;
  std::vector<std::string> variants;
  std::optional<SelectionPolicy> dtn_selection;
  for (const auto &[key, value] : kv)
  {
    if (key == "dim")
      spec.dim = parse_int<int>(value, key);
    else if (key == "k")
    {
      for (const auto &item : split_list(value))
        spec.k_values.push_back(parse_double(item, key));
    }
    else if (key == "alpha")
    {
      for (const auto &item : split_list(value))
        alphas.push_back(parse_double(item, key));
    }
    else if (key == "alpha_prime")
    {
      for (const auto &item : split_list(value))
        alpha_primes.push_back(parse_double(item, key));
    }
    else if (key == "beta")
    {
      spec.betas.clear();
      for (const auto &item : split_list(value))
        spec.betas.push_back(parse_beta(item));
    }
    else if (key == "precon" || key == "variants")
      variants = split_list(value);
    else if (key == "seeds")
    {
      spec.seeds.clear();
      for (const auto &item : split_list(value))
        spec.seeds.push_back(parse_int<std::uint64_t>(item, key));
    }
    else if (key == "output")
      spec.output = trim(value);
    else if (key == "jobs")
      spec.jobs = parse_int<unsigned>(value, key);
    else if (key == "selection")
      dtn_selection = parse_selection(trim(value));
    else if (key == "mode" || key == "tol" || key == "max_iter" || key == "overlap_layers" ||
             key == "pou" || key == "threads" || key == "coarse_operator" ||
             key == "dtn_absorption" || key == "relative_to_rhs")
      apply_config_key(spec.base, key, value);
    else
      throw ArgumentError("unknown sweep key '" + key + "'");
  }
  if (!alpha_primes.empty() && alpha_primes.size() != alphas.size() && alpha_primes.size() != 1)
  {
    throw ArgumentError("alpha_prime needs one entry or one per alpha");
  }
  for (std::size_t i = 0; i < alphas.size(); i++)
  {
    AlphaPair p{alphas[i], std::nullopt};
    if (!alpha_primes.empty())
    {
      p.alpha_prime = alpha_primes[alpha_primes.size() == 1 ? 0 : i];
    }
    spec.alphas.push_back(p);
  }
  for (const auto &text : variants)
  {
    SweepVariant v = SweepVariant::parse(text);
    if (dtn_selection && v.precon == PreconditionerKind::dtn && text.find(':') == std::string::npos)
    {
      v.selection = *dtn_selection;
    }
    spec.variants.push_back(std::move(v));
  }
  spec.validate();
  return spec;
}

namespace
{

std::vector<double> filter_k(std::vector<double> ks, const PresetOptions &options)
{
  if (options.kmax)
  {
    std::erase_if(ks, [&](double k) { return k > *options.kmax; });
  }
  if (ks.empty())
  {
    throw ArgumentError("--kmax leaves no wavenumbers in the preset");
  }
  return ks;
}

SweepSpec preset_base(const PresetOptions &options)
{
  SweepSpec spec;
  spec.seeds = options.seeds;
  spec.jobs = options.jobs;
  spec.output = options.output;
  return spec;
}

}  // namespace

SweepSpec table1_desk(const PresetOptions &options)
{
  SweepSpec spec = preset_base(options);
  spec.dim = 2;
  spec.k_values = filter_k(options.full ? std::vector<double>{10, 20, 40, 60, 80}
                                        : std::vector<double>{10, 20, 40},
                           options);
  spec.alphas = {{0.6, std::nullopt}, {0.8, std::nullopt}, {1.0, std::nullopt}};
  spec.betas = {1.0, 2.0};
  spec.variants = {SweepVariant::parse("one_level"), SweepVariant::parse("grid"),
                   SweepVariant::parse("dtn")};
  return spec;
}

SweepSpec table2_desk(const PresetOptions &options)
{
  SweepSpec spec = preset_base(options);
  spec.dim = 2;
  spec.k_values = filter_k(options.full ? std::vector<double>{10, 20, 40, 60, 80}
                                        : std::vector<double>{10, 20, 40},
                           options);
  spec.alphas = {{0.6, std::nullopt}, {0.8, std::nullopt}, {1.0, std::nullopt}};
  spec.betas = {1.0};
  spec.variants = {SweepVariant::parse("grid"), SweepVariant::parse("dtn:fixed:2"),
                   SweepVariant::parse("dtn"), SweepVariant::parse("grid=dtn")};
  return spec;
}

SweepSpec table3_desk(const PresetOptions &options)
{
  SweepSpec spec = preset_base(options);
  spec.dim = 3;
  spec.k_values = filter_k(options.full ? std::vector<double>{10, 20, 30, 40}
                                        : std::vector<double>{10},
                           options);
  for (const double a : {0.5, 0.6, 0.7, 0.8})
  {
    spec.alphas.push_back({a, 1.5 - a});
  }
  spec.betas = {1.0};
  spec.variants = {SweepVariant::parse("one_level"), SweepVariant::parse("grid"),
                   SweepVariant::parse("dtn:capped:20")};
  return spec;
}

}  // namespace helmdd
