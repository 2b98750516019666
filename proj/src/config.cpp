// qlouvain - config.cpp
#include <fstream>
#include <istream>
#include <set>

#include "qlouvain/harness.hpp"
#include "text.hpp"

namespace qlouvain {

namespace {

template <class T>
T number(std::string_view key, std::string_view value) {
  T out{};
  if (!text::parse_number(value, out)) {
    throw ConfigError("bad value for " + std::string(key) + ": '" + std::string(value) + "'");
  }
  return out;
}

bool boolean(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("bad boolean for " + std::string(key) + ": '" + std::string(value) + "'");
}

GeneratorSweep& sweep(ExperimentConfig& cfg) {
  if (!cfg.generator) cfg.generator.emplace();
  return *cfg.generator;
}

}  // namespace

std::vector<std::size_t> parse_size_list(std::string_view list) {
  std::vector<std::size_t> out;
  for (auto item : text::split(list, ',')) {
    item = text::trim(item);
    if (item.empty()) continue;
    double x = 0.0;  // accepts 1e3 style entries
    if (!text::parse_number(item, x) || x < 0 || x != static_cast<double>(static_cast<std::size_t>(x))) {
      throw ConfigError("bad size in list: '" + std::string(item) + "'");
    }
    out.push_back(static_cast<std::size_t>(x));
  }
  return out;
}

std::vector<Algorithm> parse_algorithm_list(std::string_view list) {
  std::vector<Algorithm> out;
  for (auto item : text::split(list, ',')) {
    item = text::trim(item);
    if (item.empty()) continue;
    auto a = parse_algorithm(item);
    if (!a) throw ConfigError("unknown algorithm '" + std::string(item) + "'");
    out.push_back(*a);
  }
  return out;
}

void apply_config(std::istream& in, ExperimentConfig& cfg, std::string_view source) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(source) + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    const auto key = text::trim(body.substr(0, eq));
    const auto value = text::trim(body.substr(eq + 1));
    try {
      if (key == "alpha") cfg.params.alpha = number<double>(key, value);
      else if (key == "cq") cfg.params.cq = number<double>(key, value);
      else if (key == "eps_total") cfg.params.eps_total = number<double>(key, value);
      else if (key == "lswitch") cfg.params.lswitch = number<std::size_t>(key, value);
      else if (key == "nsamples_init") cfg.params.nsamples_init = number<std::size_t>(key, value);
      else if (key == "move_budget_log_base") cfg.params.move_budget_log_base = number<double>(key, value);
      else if (key == "timeout") cfg.timeout = std::chrono::seconds(number<std::int64_t>(key, value));
      else if (key == "threads") cfg.threads = number<std::size_t>(key, value);
      else if (key == "seeds") cfg.seeds = number<std::size_t>(key, value);
      else if (key == "first_seed") cfg.first_seed = number<std::uint64_t>(key, value);
      else if (key == "algorithms") cfg.algorithms = parse_algorithm_list(value);
      else if (key == "graphs") {
        cfg.graph_files.clear();
        for (auto item : text::split(value, ',')) {
          if (!text::trim(item).empty()) cfg.graph_files.emplace_back(std::string(text::trim(item)));
        }
      }
      else if (key == "n_grid") sweep(cfg).n_grid = parse_size_list(value);
      else if (key == "d") sweep(cfg).avg_degree = number<double>(key, value);
      else if (key == "S") sweep(cfg).community_size = number<std::size_t>(key, value);
      else if (key == "mu") sweep(cfg).mu = number<double>(key, value);
      else if (key == "out") cfg.out_dir = std::string(value);
      else if (key == "use_cache") cfg.use_cache = boolean(key, value);
      else if (key == "deterministic_nsamples") cfg.deterministic_nsamples = boolean(key, value);
      else if (key == "ledgers") cfg.write_ledgers = boolean(key, value);
      else if (key == "partitions") cfg.write_partitions = boolean(key, value);
      else throw ConfigError("unknown key '" + std::string(key) + "'");
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void apply_config_file(const std::filesystem::path& path, ExperimentConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  apply_config(in, cfg, path.string());
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.seeds < 1) throw ConfigError("need at least one seed");
  if (cfg.algorithms.empty()) throw ConfigError("no algorithms selected");
  if (cfg.threads < 1) throw ConfigError("threads must be at least 1");
  if (cfg.graph_files.empty() && !cfg.generator) throw ConfigError("no graphs: give files or a generator grid");
  if (cfg.generator) {
    const auto& grid = cfg.generator->n_grid;
    if (grid.empty()) throw ConfigError("generator needs an n grid");
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (grid[i] <= grid[i - 1]) throw ConfigError("n grid must be strictly increasing");
    }
  }
  const auto& p = cfg.params;
  if (!(p.eps_total > 0.0 && p.eps_total < 1.0)) throw ConfigError("eps_total must lie in (0, 1)");
  if (!(p.alpha > 0.0) || !(p.cq > 0.0)) throw ConfigError("alpha and cq must be positive");
  std::set<Algorithm> seen(cfg.algorithms.begin(), cfg.algorithms.end());
  if (seen.size() != cfg.algorithms.size()) throw ConfigError("algorithm listed twice");
}

}  // namespace qlouvain
