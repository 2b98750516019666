// qlouvain - harness.hpp
// Experiment sweeps over generated or loaded graphs, tidy CSV output,
// weighted log-log fits and the community-list benchmark.
#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qlouvain/graph.hpp"
#include "qlouvain/qcost.hpp"
#include "qlouvain/sim.hpp"

namespace qlouvain {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GeneratorSweep {
  double avg_degree = 5.0;
  std::size_t community_size = 50;
  double mu = 0.3;
  std::vector<std::size_t> n_grid;
};

struct ExperimentConfig {
  std::vector<std::filesystem::path> graph_files;
  std::optional<GeneratorSweep> generator;
  std::vector<Algorithm> algorithms{Algorithm::ol};
  std::size_t seeds = 1;
  std::uint64_t first_seed = 1;
  CostParams params;
  bool use_cache = true;
  bool deterministic_nsamples = false;
  std::size_t threads = 1;
  std::chrono::seconds timeout{3600};
  std::filesystem::path out_dir = ".";
  bool write_ledgers = false;
  bool write_partitions = false;
};

// Flat "key = value" lines; '#' starts a comment. Keys: alpha, cq,
// eps_total, lswitch, nsamples_init, move_budget_log_base, timeout, threads,
// seeds, first_seed, algorithms, graphs, n_grid, d, S, mu, out, use_cache,
// deterministic_nsamples, ledgers, partitions.
void apply_config(std::istream& in, ExperimentConfig& cfg, std::string_view source = "<config>");
void apply_config_file(const std::filesystem::path& path, ExperimentConfig& cfg);
void validate(const ExperimentConfig& cfg);

std::vector<std::size_t> parse_size_list(std::string_view text);
std::vector<Algorithm> parse_algorithm_list(std::string_view text);

// One graph of a sweep, before it is materialised.
struct GraphSpec {
  std::string family;
  std::string name;
  std::optional<FcsConfig> fcs;
  std::filesystem::path file;
};

std::vector<GraphSpec> graph_specs(const ExperimentConfig& cfg);
std::string family_name(const GeneratorSweep& sweep);
Graph materialise(const GraphSpec& spec);

struct ResultRow {
  std::string family;
  std::string graph;
  std::size_t n = 0;
  std::size_t edges = 0;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::ol;
  std::size_t levels = 0;
  std::uint64_t moves = 0;
  double move_budget = 0.0;
  bool budget_exceeded = false;
  bool timed_out = false;
  double modularity = 0.0;
  std::uint64_t classical_calls = 0;
  double estimates[kVariantCount] = {kNoEstimate, kNoEstimate, kNoEstimate, kNoEstimate,
                                     kNoEstimate};
};

ResultRow make_row(const GraphSpec& spec, const Graph& g, const RunResult& r);

// Query totals a row contributes, as (variant name, queries). OL rows give
// "OL", ol-replace rows "OLR", the quantum algorithms their estimates.
std::vector<std::pair<std::string, double>> row_queries(const ResultRow& row);

// Runs every (graph, seed, algorithm) job. Rows come back in job order
// regardless of the thread count.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results_csv(std::istream& in);

struct VariantSummary {
  std::string family;
  std::size_t n = 0;
  std::string variant;
  std::size_t runs = 0;
  double mean_queries = 0.0;
  double std_queries = 0.0;
  double mean_modularity = 0.0;
  double std_modularity = 0.0;
  double mean_moves = 0.0;
  double std_moves = 0.0;
};

// Mean and sample standard deviation per (family, n, variant).
std::vector<VariantSummary> summarize(const std::vector<ResultRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<VariantSummary>& rows);

struct FitResult {
  std::string family;
  std::string variant;
  std::size_t points = 0;
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> residuals;
  std::optional<double> speedup;  // baseline slope / this slope
};

// Least squares of ln y against ln n with weights ln n. Needs at least three
// distinct n; throws std::invalid_argument otherwise.
FitResult weighted_loglog_fit(const std::vector<double>& n, const std::vector<double>& y);

// Fits mean queries against n for every (family, variant) and attaches the
// speedup against the OL slope of the same family.
std::vector<FitResult> fit_variants(const std::vector<VariantSummary>& summary);
void write_fits_csv(std::ostream& out, const std::vector<FitResult>& fits);

// Fits mean moves against n for every (family, algorithm).
std::vector<FitResult> fit_moves(const std::vector<ResultRow>& rows);

struct BenchRow {
  std::string graph;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double cached_seconds = 0.0;
  double uncached_seconds = 0.0;
  std::size_t cached_bytes = 0;
  std::size_t uncached_bytes = 0;
  bool same_partition = false;
  std::uint64_t moves = 0;
  double modularity = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  double mean_cached_seconds = 0.0;
  double mean_uncached_seconds = 0.0;
  double mean_cached_bytes = 0.0;
  double mean_uncached_bytes = 0.0;
  bool all_partitions_equal = true;
};

// Times run_ol with and without community adjacency lists on the same
// graphs and seeds. `repeats` timings per run, the fastest is kept.
BenchReport bench_ds(const ExperimentConfig& cfg, std::size_t repeats = 1);
void write_bench_csv(std::ostream& out, const BenchReport& report);

}  // namespace qlouvain
