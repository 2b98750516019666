// qlouvain - command line front end.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qlouvain/graph.hpp"
#include "qlouvain/harness.hpp"

namespace fs = std::filesystem;
using namespace qlouvain;

namespace {

enum Exit { ok = 0, usage = 1, data = 2, timeout = 3 };

// Flags shared by the subcommands that describe an experiment; applied on
// top of --config.
struct CommonFlags {
  std::string config;
  std::vector<std::string> graphs;
  std::string algo;
  std::size_t seeds = 0;
  std::uint64_t first_seed = 0;
  std::string n_grid;
  double d = 0.0;
  std::size_t S = 0;
  double mu = -1.0;
  std::string out;
  bool no_cache = false;
  bool deterministic = false;
  std::size_t threads = 0;
  long timeout = -1;
};

void add_common(CLI::App* app, CommonFlags& f, bool with_algo) {
  app->add_option("--config", f.config, "key = value configuration file");
  app->add_option("--graph", f.graphs, "edge-list file (repeatable)");
  if (with_algo) {
    app->add_option("--algo", f.algo, "comma list of ol, ol-replace, ql, sql, eql");
    app->add_flag("--no-cache", f.no_cache, "OL without community adjacency lists");
    app->add_flag("--deterministic-nsamples", f.deterministic,
                  "switch classical sampling off by threshold instead of draws");
    app->add_option("--threads", f.threads, "worker threads");
    app->add_option("--timeout", f.timeout, "per-run wall-clock cap in seconds");
  }
  app->add_option("--seeds", f.seeds, "seeds per graph point");
  app->add_option("--first-seed", f.first_seed, "first seed value");
  app->add_option("--n-grid", f.n_grid, "comma list of generator sizes");
  app->add_option("--d", f.d, "generator edges per vertex");
  app->add_option("--S", f.S, "generator community size");
  app->add_option("--mu", f.mu, "generator mixing parameter");
  app->add_option("--out", f.out, "output directory");
}

ExperimentConfig build_config(const CommonFlags& f) {
  ExperimentConfig cfg;
  if (!f.config.empty()) apply_config_file(f.config, cfg);
  for (const auto& g : f.graphs) cfg.graph_files.emplace_back(g);
  if (!f.algo.empty()) cfg.algorithms = parse_algorithm_list(f.algo);
  if (f.seeds) cfg.seeds = f.seeds;
  if (f.first_seed) cfg.first_seed = f.first_seed;
  auto sweep = [&]() -> GeneratorSweep& {
    if (!cfg.generator) cfg.generator.emplace();
    return *cfg.generator;
  };
  if (!f.n_grid.empty()) sweep().n_grid = parse_size_list(f.n_grid);
  if (f.d > 0.0) sweep().avg_degree = f.d;
  if (f.S > 0) sweep().community_size = f.S;
  if (f.mu >= 0.0) sweep().mu = f.mu;
  if (!f.out.empty()) cfg.out_dir = f.out;
  if (f.no_cache) cfg.use_cache = false;
  if (f.deterministic) cfg.deterministic_nsamples = true;
  if (f.threads) cfg.threads = f.threads;
  if (f.timeout >= 0) cfg.timeout = std::chrono::seconds(f.timeout);
  return cfg;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GraphError(GraphErrorKind::io, "cannot write " + path.string());
  out << content;
}

int cmd_generate(const CommonFlags& f) {
  ExperimentConfig cfg = build_config(f);
  if (!cfg.generator) throw ConfigError("generate needs --n-grid or a config with n_grid");
  cfg.graph_files.clear();
  validate(cfg);
  // Build everything first so a failing configuration leaves no files.
  std::vector<std::pair<fs::path, std::string>> files;
  for (const GraphSpec& spec : graph_specs(cfg)) {
    const Graph g = generate_fcs(*spec.fcs);
    std::ostringstream text;
    write_edge_list(text, g, fcs_header(*spec.fcs));
    files.emplace_back(cfg.out_dir / (spec.name + ".txt"), text.str());
  }
  fs::create_directories(cfg.out_dir);
  for (const auto& [path, content] : files) write_file(path, content);
  std::cout << "wrote " << files.size() << " graphs to " << cfg.out_dir.string() << '\n';
  return ok;
}

int cmd_run(const CommonFlags& f, bool ledgers, bool partitions) {
  ExperimentConfig cfg = build_config(f);
  cfg.write_ledgers = cfg.write_ledgers || ledgers;
  cfg.write_partitions = cfg.write_partitions || partitions;
  validate(cfg);
  fs::create_directories(cfg.out_dir);
  const auto rows = run_experiment(cfg);
  std::ostringstream results, summary;
  write_results_csv(results, rows);
  write_summary_csv(summary, summarize(rows));
  write_file(cfg.out_dir / "results.csv", results.str());
  write_file(cfg.out_dir / "summary.csv", summary.str());
  std::size_t timed_out = 0, over_budget = 0;
  for (const auto& r : rows) {
    timed_out += r.timed_out ? 1 : 0;
    over_budget += r.budget_exceeded ? 1 : 0;
  }
  std::cout << "runs: " << rows.size() << ", over move budget: " << over_budget
            << ", timed out: " << timed_out << '\n';
  return timed_out ? timeout : ok;
}

std::vector<ResultRow> read_rows(const std::string& csv) {
  std::ifstream in(csv);
  if (!in) throw GraphError(GraphErrorKind::io, "cannot open " + csv);
  return read_results_csv(in);
}

void emit(const std::string& out_file, const std::string& content) {
  if (out_file.empty()) {
    std::cout << content;
  } else {
    write_file(out_file, content);
  }
}

int cmd_fit(const std::string& csv, const std::string& out_file) {
  std::ostringstream text;
  write_fits_csv(text, fit_variants(summarize(read_rows(csv))));
  emit(out_file, text.str());
  return ok;
}

int cmd_moves_report(const std::string& csv, const std::string& out_file) {
  std::ostringstream text;
  write_fits_csv(text, fit_moves(read_rows(csv)));
  emit(out_file, text.str());
  return ok;
}

int cmd_bench(const CommonFlags& f, std::size_t repeats) {
  ExperimentConfig cfg = build_config(f);
  const BenchReport report = bench_ds(cfg, repeats);
  std::ostringstream text;
  write_bench_csv(text, report);
  if (f.out.empty()) {
    std::cout << text.str();
  } else {
    fs::create_directories(cfg.out_dir);
    write_file(cfg.out_dir / "bench_ds.csv", text.str());
  }
  std::cerr << "mean seconds cached " << report.mean_cached_seconds << " uncached "
            << report.mean_uncached_seconds << "; mean bytes cached " << report.mean_cached_bytes
            << " uncached " << report.mean_uncached_bytes << "; partitions "
            << (report.all_partitions_equal ? "identical" : "DIFFER") << '\n';
  return report.all_partitions_equal ? ok : data;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Louvain query-count simulator"};
  app.require_subcommand(1);

  CommonFlags gen_flags, run_flags, bench_flags;
  auto* gen = app.add_subcommand("generate", "write FCS benchmark graphs");
  add_common(gen, gen_flags, false);

  auto* run = app.add_subcommand("run", "run algorithms and write results.csv and summary.csv");
  add_common(run, run_flags, true);
  bool ledgers = false, partitions = false;
  run->add_flag("--ledgers", ledgers, "write per-move ledger CSVs");
  run->add_flag("--partitions", partitions, "write final partitions");

  std::string fit_csv, fit_out;
  auto* fit = app.add_subcommand("fit", "weighted log-log fits of a results CSV");
  fit->add_option("csv", fit_csv, "results.csv")->required();
  fit->add_option("--out", fit_out, "output file (default stdout)");

  std::string moves_csv, moves_out;
  auto* moves = app.add_subcommand("moves-report", "fit of move count against n");
  moves->add_option("csv", moves_csv, "results.csv")->required();
  moves->add_option("--out", moves_out, "output file (default stdout)");

  auto* bench = app.add_subcommand("bench-ds", "time OL with and without community lists");
  add_common(bench, bench_flags, false);
  std::size_t repeats = 1;
  bench->add_option("--repeats", repeats, "timings per run, fastest kept");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    if (*gen) return cmd_generate(gen_flags);
    if (*run) return cmd_run(run_flags, ledgers, partitions);
    if (*fit) return cmd_fit(fit_csv, fit_out);
    if (*moves) return cmd_moves_report(moves_csv, moves_out);
    if (*bench) return cmd_bench(bench_flags, repeats);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const GraphError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return data;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return data;
  }
  return usage;
}
