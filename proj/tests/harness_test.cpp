#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "qlouvain/harness.hpp"

using namespace qlouvain;

namespace {

ExperimentConfig small_sweep() {
  ExperimentConfig cfg;
  cfg.generator = GeneratorSweep{3.0, 20, 0.3, {200, 400, 800}};
  cfg.algorithms = {Algorithm::ol, Algorithm::ql, Algorithm::sql, Algorithm::eql};
  cfg.seeds = 2;
  return cfg;
}

std::string results_text(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_results_csv(out, rows);
  return out.str();
}

}  // namespace

TEST(Config, ParsesAllKeys) {
  std::istringstream in(R"(# sweep
alpha = 9.5
cq = 3
eps_total = 1e-4
lswitch = 64
nsamples_init = 50
move_budget_log_base = 2
timeout = 10
threads = 2
seeds = 4
first_seed = 7
algorithms = ol, ql,eql
n_grid = 1e3, 3000, 10000
d = 4
S = 25
mu = 0.7
out = /tmp/x
use_cache = false
deterministic_nsamples = yes
ledgers = on
partitions = 0
graphs = a.txt, b.txt
)");
  ExperimentConfig cfg;
  apply_config(in, cfg);
  EXPECT_EQ(cfg.params.alpha, 9.5);
  EXPECT_EQ(cfg.params.cq, 3.0);
  EXPECT_EQ(cfg.params.eps_total, 1e-4);
  EXPECT_EQ(cfg.params.lswitch, 64u);
  EXPECT_EQ(cfg.params.nsamples_init, 50u);
  EXPECT_EQ(cfg.params.move_budget_log_base, 2.0);
  EXPECT_EQ(cfg.timeout.count(), 10);
  EXPECT_EQ(cfg.threads, 2u);
  EXPECT_EQ(cfg.seeds, 4u);
  EXPECT_EQ(cfg.first_seed, 7u);
  EXPECT_EQ(cfg.algorithms, (std::vector<Algorithm>{Algorithm::ol, Algorithm::ql, Algorithm::eql}));
  ASSERT_TRUE(cfg.generator);
  EXPECT_EQ(cfg.generator->n_grid, (std::vector<std::size_t>{1000, 3000, 10000}));
  EXPECT_EQ(cfg.generator->avg_degree, 4.0);
  EXPECT_EQ(cfg.generator->community_size, 25u);
  EXPECT_EQ(cfg.generator->mu, 0.7);
  EXPECT_EQ(cfg.out_dir, "/tmp/x");
  EXPECT_FALSE(cfg.use_cache);
  EXPECT_TRUE(cfg.deterministic_nsamples);
  EXPECT_TRUE(cfg.write_ledgers);
  EXPECT_FALSE(cfg.write_partitions);
  EXPECT_EQ(cfg.graph_files.size(), 2u);
}

TEST(Config, Rejections) {
  auto fails = [](const std::string& text) {
    std::istringstream in(text);
    ExperimentConfig cfg;
    try {
      apply_config(in, cfg);
    } catch (const ConfigError&) {
      return true;
    }
    return false;
  };
  EXPECT_TRUE(fails("bogus = 1\n"));
  EXPECT_TRUE(fails("alpha\n"));
  EXPECT_TRUE(fails("alpha = x\n"));
  EXPECT_TRUE(fails("algorithms = ol, louvain\n"));
  EXPECT_TRUE(fails("n_grid = 10, 2.5\n"));
  EXPECT_TRUE(fails("use_cache = maybe\n"));
}

TEST(Config, Validation) {
  ExperimentConfig cfg = small_sweep();
  EXPECT_NO_THROW(validate(cfg));
  cfg.generator->n_grid = {400, 200};
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = small_sweep();
  cfg.seeds = 0;
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = small_sweep();
  cfg.algorithms = {Algorithm::ol, Algorithm::ol};
  EXPECT_THROW(validate(cfg), ConfigError);
  ExperimentConfig none;
  EXPECT_THROW(validate(none), ConfigError);
}

TEST(Experiment, GraphSpecCount) {
  ExperimentConfig cfg;
  cfg.generator = GeneratorSweep{5.0, 50, 0.3, {1000, 10000}};
  cfg.seeds = 10;
  EXPECT_EQ(graph_specs(cfg).size(), 20u);
  EXPECT_EQ(graph_specs(cfg)[0].name, "fcs_n1000_d5_S50_mu0.3_s1");
  EXPECT_EQ(graph_specs(cfg)[0].family, "fcs_d5_S50_mu0.3");
}

TEST(Experiment, RowsCarryBothEstimatesOfOnePass) {
  ExperimentConfig cfg = small_sweep();
  const auto rows = run_experiment(cfg);
  ASSERT_EQ(rows.size(), 3u * 2u * 4u);
  for (const auto& r : rows) {
    const double* e = r.estimates;
    switch (r.algorithm) {
      case Algorithm::ql:
        EXPECT_GT(e[0], 0.0);
        EXPECT_GT(e[1], 0.0);
        EXPECT_TRUE(std::isnan(e[2]));
        break;
      case Algorithm::sql:
        EXPECT_GT(e[2], 0.0);
        EXPECT_GT(e[3], 0.0);
        break;
      case Algorithm::eql:
        EXPECT_GT(e[4], 0.0);
        break;
      default:
        for (double x : r.estimates) EXPECT_TRUE(std::isnan(x));
    }
    EXPECT_GT(r.modularity, 0.0);
  }
}

TEST(Experiment, OutputIndependentOfThreadCountAndRerun) {
  ExperimentConfig cfg = small_sweep();
  const std::string one = results_text(run_experiment(cfg));
  cfg.threads = 3;
  const std::string three = results_text(run_experiment(cfg));
  const std::string again = results_text(run_experiment(cfg));
  EXPECT_EQ(one, three);
  EXPECT_EQ(three, again);
}

TEST(Experiment, CsvRoundTrip) {
  const auto rows = run_experiment(small_sweep());
  std::istringstream in(results_text(rows));
  const auto back = read_results_csv(in);
  EXPECT_EQ(results_text(back), results_text(rows));
}

TEST(Experiment, MissingGraphFileIsDataError) {
  ExperimentConfig cfg;
  cfg.graph_files = {"/nonexistent/g.txt"};
  EXPECT_THROW(run_experiment(cfg), GraphError);
}

TEST(Summary, MatchesIndependentRecomputation) {
  const auto rows = run_experiment(small_sweep());
  const auto summary = summarize(rows);
  for (const auto& s : summary) {
    std::vector<double> q;
    for (const auto& r : rows) {
      if (r.family != s.family || r.n != s.n) continue;
      for (const auto& [name, value] : row_queries(r)) {
        if (name == s.variant) q.push_back(value);
      }
    }
    ASSERT_EQ(q.size(), s.runs);
    double mean = 0.0;
    for (double x : q) mean += x;
    mean /= static_cast<double>(q.size());
    double var = 0.0;
    for (double x : q) var += (x - mean) * (x - mean);
    const double sd = q.size() > 1 ? std::sqrt(var / static_cast<double>(q.size() - 1)) : 0.0;
    EXPECT_NEAR(s.mean_queries, mean, 1e-12 * mean);
    EXPECT_NEAR(s.std_queries, sd, 1e-12 * std::max(1.0, mean));
  }
}

TEST(Fit, ExactPowerLaw) {
  const std::vector<double> n{1e3, 3e3, 1e4, 3e4, 1e5};
  std::vector<double> y;
  for (double x : n) y.push_back(std::pow(x, 1.5));
  const FitResult f = weighted_loglog_fit(n, y);
  EXPECT_NEAR(f.slope, 1.5, 1e-9);
  EXPECT_NEAR(f.intercept, 0.0, 1e-9);
  for (double r : f.residuals) EXPECT_NEAR(r, 0.0, 1e-9);
}

TEST(Fit, ScalingShiftsOnlyTheIntercept) {
  const std::vector<double> n{1e3, 2e3, 5e3, 1e4};
  const std::vector<double> y{10.0, 25.0, 51.0, 130.0};
  std::vector<double> scaled;
  for (double v : y) scaled.push_back(7.0 * v);
  const FitResult a = weighted_loglog_fit(n, y);
  const FitResult b = weighted_loglog_fit(n, scaled);
  EXPECT_NEAR(a.slope, b.slope, 1e-12);
  EXPECT_NEAR(b.intercept - a.intercept, std::log(7.0), 1e-12);
}

TEST(Fit, WeightsFavourLargeN) {
  // An independent closed form of the weighted normal equations.
  const std::vector<double> n{10.0, 100.0, 1000.0};
  const std::vector<double> y{5.0, 20.0, 1000.0};
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double x = std::log(n[i]), v = std::log(y[i]), w = x;
    sw += w, sx += w * x, sy += w * v, sxx += w * x * x, sxy += w * x * v;
  }
  const double slope = (sw * sxy - sx * sy) / (sw * sxx - sx * sx);
  EXPECT_NEAR(weighted_loglog_fit(n, y).slope, slope, 1e-12);
}

TEST(Fit, RefusesDegenerateGrids) {
  EXPECT_THROW(weighted_loglog_fit({1e3, 1e4}, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(weighted_loglog_fit({1e3, 1e3, 1e4}, {1.0, 1.0, 2.0}), std::invalid_argument);
}

TEST(Fit, SpeedupAgainstOriginal) {
  std::vector<VariantSummary> summary;
  for (double n : {1e3, 1e4, 1e5}) {
    VariantSummary ol, eql;
    ol.family = eql.family = "f";
    ol.n = eql.n = static_cast<std::size_t>(n);
    ol.variant = "OL";
    eql.variant = "EQL";
    ol.mean_queries = std::pow(n, 1.5);
    eql.mean_queries = 3.0 * n;
    summary.push_back(ol);
    summary.push_back(eql);
  }
  const auto fits = fit_variants(summary);
  ASSERT_EQ(fits.size(), 2u);
  for (const auto& f : fits) {
    ASSERT_TRUE(f.speedup);
    if (f.variant == "EQL") EXPECT_NEAR(*f.speedup, 1.5, 1e-9);
    if (f.variant == "OL") EXPECT_NEAR(*f.speedup, 1.0, 1e-12);
  }
}

TEST(MovesReport, SyntheticSeries) {
  auto rows_for = [](auto moves_of) {
    std::vector<ResultRow> rows;
    for (double n : {1e3, 3e3, 1e4, 3e4, 1e5}) {
      ResultRow r;
      r.family = "f";
      r.n = static_cast<std::size_t>(n);
      r.moves = static_cast<std::uint64_t>(std::llround(moves_of(n)));
      rows.push_back(r);
    }
    return rows;
  };
  const auto nlogn = fit_moves(rows_for([](double n) { return n * std::log(n); }));
  ASSERT_EQ(nlogn.size(), 1u);
  // Local exponent of n ln n is 1 + 1/ln n, so the fit lies between the
  // values at the grid ends.
  EXPECT_GE(nlogn[0].slope, 1.0 + 1.0 / std::log(1e5));
  EXPECT_LE(nlogn[0].slope, 1.0 + 1.0 / std::log(1e3));
  const auto flat = fit_moves(rows_for([](double) { return 500.0; }));
  EXPECT_NEAR(flat[0].slope, 0.0, 1e-12);
}

TEST(Bench, PartitionsMatchAndCacheUsesMoreMemory) {
  ExperimentConfig cfg;
  cfg.generator = GeneratorSweep{5.0, 50, 0.3, {500}};
  cfg.seeds = 2;
  const BenchReport report = bench_ds(cfg);
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_TRUE(report.all_partitions_equal);
  EXPECT_GT(report.mean_cached_bytes, report.mean_uncached_bytes);
}
