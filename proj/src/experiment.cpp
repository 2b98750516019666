// qlouvain - experiment.cpp
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>
#include <tuple>
#include <unordered_map>

#include "qlouvain/harness.hpp"
#include "text.hpp"

namespace qlouvain {

namespace {

const char* const kResultColumns[] = {
    "family", "graph", "n", "edges", "seed", "algo", "levels", "moves", "move_budget",
    "budget_exceeded", "timed_out", "modularity", "classical_calls", "est_ql", "est_qlsg",
    "est_sql", "est_sqlsg", "est_eql"};

struct Job {
  GraphSpec spec;
  std::uint64_t seed;
};

std::vector<Job> jobs_of(const ExperimentConfig& cfg) {
  std::vector<Job> jobs;
  for (const GraphSpec& spec : graph_specs(cfg)) {
    if (spec.fcs) {
      jobs.push_back({spec, spec.fcs->seed});
    } else {
      for (std::size_t s = 0; s < cfg.seeds; ++s) jobs.push_back({spec, cfg.first_seed + s});
    }
  }
  return jobs;
}

SimOptions sim_options(const ExperimentConfig& cfg) {
  SimOptions opt;
  opt.params = cfg.params;
  opt.use_cache = cfg.use_cache;
  opt.deterministic_nsamples = cfg.deterministic_nsamples;
  opt.keep_records = cfg.write_ledgers;
  opt.timeout = std::chrono::duration_cast<std::chrono::milliseconds>(cfg.timeout);
  return opt;
}

std::string run_stem(const std::string& graph, Algorithm a, std::uint64_t seed) {
  return graph + "_" + std::string(to_string(a)) + "_s" + std::to_string(seed);
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : xs) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

}  // namespace

std::string family_name(const GeneratorSweep& sweep) {
  return "fcs_d" + text::format_double(sweep.avg_degree) + "_S" +
         std::to_string(sweep.community_size) + "_mu" + text::format_double(sweep.mu);
}

std::vector<GraphSpec> graph_specs(const ExperimentConfig& cfg) {
  std::vector<GraphSpec> specs;
  if (cfg.generator) {
    const auto& sw = *cfg.generator;
    const std::string family = family_name(sw);
    for (std::size_t n : sw.n_grid) {
      for (std::size_t s = 0; s < cfg.seeds; ++s) {
        GraphSpec spec;
        spec.family = family;
        spec.fcs = FcsConfig{n, sw.avg_degree, sw.community_size, sw.mu, cfg.first_seed + s};
        spec.name = "fcs_n" + std::to_string(n) + "_d" + text::format_double(sw.avg_degree) +
                    "_S" + std::to_string(sw.community_size) + "_mu" +
                    text::format_double(sw.mu) + "_s" + std::to_string(spec.fcs->seed);
        specs.push_back(std::move(spec));
      }
    }
  }
  for (const auto& path : cfg.graph_files) {
    GraphSpec spec;
    spec.family = "files";
    spec.name = path.stem().string();
    spec.file = path;
    specs.push_back(std::move(spec));
  }
  return specs;
}

Graph materialise(const GraphSpec& spec) {
  if (spec.fcs) return generate_fcs(*spec.fcs);
  return load_edge_list(spec.file);
}

ResultRow make_row(const GraphSpec& spec, const Graph& g, const RunResult& r) {
  ResultRow row;
  row.family = spec.family;
  row.graph = spec.name;
  row.n = g.num_vertices();
  row.edges = g.num_edges();
  row.seed = r.seed;
  row.algorithm = r.algorithm;
  row.levels = r.levels;
  row.moves = r.moves;
  row.move_budget = r.move_budget;
  row.budget_exceeded = r.budget_exceeded;
  row.timed_out = r.timed_out;
  row.modularity = r.modularity;
  row.classical_calls = r.ledger.classical_calls();
  for (std::size_t i = 0; i < kVariantCount; ++i) {
    row.estimates[i] = r.ledger.total(static_cast<Variant>(i));
  }
  return row;
}

std::vector<std::pair<std::string, double>> row_queries(const ResultRow& row) {
  std::vector<std::pair<std::string, double>> out;
  switch (row.algorithm) {
    case Algorithm::ol:
      out.emplace_back("OL", static_cast<double>(row.classical_calls));
      break;
    case Algorithm::ol_replace:
      out.emplace_back("OLR", static_cast<double>(row.classical_calls));
      break;
    default:
      for (Variant v : variants_of(row.algorithm)) {
        out.emplace_back(std::string(to_string(v)), row.estimates[static_cast<std::size_t>(v)]);
      }
  }
  return out;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const std::vector<Job> jobs = jobs_of(cfg);
  const SimOptions opt = sim_options(cfg);
  const std::size_t per_job = cfg.algorithms.size();
  std::vector<ResultRow> rows(jobs.size() * per_job);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      try {
        const Job& job = jobs[j];
        const Graph g = materialise(job.spec);
        for (std::size_t a = 0; a < per_job; ++a) {
          const RunResult r = run_algorithm(cfg.algorithms[a], g, job.seed, opt);
          rows[j * per_job + a] = make_row(job.spec, g, r);
          const std::string stem = run_stem(job.spec.name, r.algorithm, job.seed);
          if (cfg.write_ledgers) {
            std::ofstream out(cfg.out_dir / ("ledger_" + stem + ".csv"));
            r.ledger.write_csv(out);
          }
          if (cfg.write_partitions) {
            std::ofstream out(cfg.out_dir / ("partition_" + stem + ".txt"));
            write_partition(out, r.partition);
          }
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };
  const std::size_t workers = std::min(cfg.threads, jobs.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  bool first = true;
  for (const char* c : kResultColumns) {
    out << (first ? "" : ",") << c;
    first = false;
  }
  out << '\n';
  for (const ResultRow& r : rows) {
    out << r.family << ',' << r.graph << ',' << r.n << ',' << r.edges << ',' << r.seed << ','
        << to_string(r.algorithm) << ',' << r.levels << ',' << r.moves << ','
        << text::format_double(r.move_budget) << ',' << (r.budget_exceeded ? 1 : 0) << ','
        << (r.timed_out ? 1 : 0) << ',' << text::format_double(r.modularity) << ','
        << r.classical_calls;
    for (double e : r.estimates) out << ',' << text::format_double(e);
    out << '\n';
  }
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("results CSV is empty");
  std::unordered_map<std::string, std::size_t> col;
  {
    const auto header = text::split(text::trim(line), ',');
    for (std::size_t i = 0; i < header.size(); ++i) col[std::string(header[i])] = i;
    for (const char* c : kResultColumns) {
      if (!col.count(c)) throw ConfigError(std::string("results CSV lacks column ") + c);
    }
  }
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::trim(line);
    if (body.empty()) continue;
    const auto f = text::split(body, ',');
    if (f.size() < col.size()) {
      throw ConfigError("results CSV line " + std::to_string(line_no) + ": too few fields");
    }
    auto get = [&](const char* name) { return f[col.at(name)]; };
    auto num = [&](const char* name, auto& out) {
      if (!text::parse_number(get(name), out)) {
        throw ConfigError("results CSV line " + std::to_string(line_no) + ": bad " + name);
      }
    };
    auto opt_num = [&](const char* name) {
      double x = kNoEstimate;
      if (!get(name).empty()) num(name, x);
      return x;
    };
    ResultRow r;
    r.family = std::string(get("family"));
    r.graph = std::string(get("graph"));
    num("n", r.n);
    num("edges", r.edges);
    num("seed", r.seed);
    auto a = parse_algorithm(get("algo"));
    if (!a) throw ConfigError("results CSV line " + std::to_string(line_no) + ": bad algo");
    r.algorithm = *a;
    num("levels", r.levels);
    num("moves", r.moves);
    num("move_budget", r.move_budget);
    int flag = 0;
    num("budget_exceeded", flag);
    r.budget_exceeded = flag != 0;
    num("timed_out", flag);
    r.timed_out = flag != 0;
    num("modularity", r.modularity);
    num("classical_calls", r.classical_calls);
    r.estimates[0] = opt_num("est_ql");
    r.estimates[1] = opt_num("est_qlsg");
    r.estimates[2] = opt_num("est_sql");
    r.estimates[3] = opt_num("est_sqlsg");
    r.estimates[4] = opt_num("est_eql");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<VariantSummary> summarize(const std::vector<ResultRow>& rows) {
  struct Samples {
    std::vector<double> queries, modularity, moves;
  };
  std::map<std::tuple<std::string, std::size_t, std::string>, Samples> groups;
  for (const ResultRow& r : rows) {
    if (r.timed_out) continue;
    for (const auto& [variant, q] : row_queries(r)) {
      auto& s = groups[{r.family, r.n, variant}];
      s.queries.push_back(q);
      s.modularity.push_back(r.modularity);
      s.moves.push_back(static_cast<double>(r.moves));
    }
  }
  std::vector<VariantSummary> out;
  for (const auto& [key, s] : groups) {
    VariantSummary v;
    std::tie(v.family, v.n, v.variant) = key;
    v.runs = s.queries.size();
    v.mean_queries = mean_of(s.queries);
    v.std_queries = sample_std(s.queries, v.mean_queries);
    v.mean_modularity = mean_of(s.modularity);
    v.std_modularity = sample_std(s.modularity, v.mean_modularity);
    v.mean_moves = mean_of(s.moves);
    v.std_moves = sample_std(s.moves, v.mean_moves);
    out.push_back(std::move(v));
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<VariantSummary>& rows) {
  out << "family,n,variant,runs,mean_queries,std_queries,mean_modularity,std_modularity,"
         "mean_moves,std_moves\n";
  for (const auto& v : rows) {
    out << v.family << ',' << v.n << ',' << v.variant << ',' << v.runs << ','
        << text::format_double(v.mean_queries) << ',' << text::format_double(v.std_queries)
        << ',' << text::format_double(v.mean_modularity) << ','
        << text::format_double(v.std_modularity) << ',' << text::format_double(v.mean_moves)
        << ',' << text::format_double(v.std_moves) << '\n';
  }
}

}  // namespace qlouvain
