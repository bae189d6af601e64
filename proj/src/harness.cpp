#include "debunkd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace debunkd {

namespace fs = std::filesystem;

double test_metric(const std::vector<double>& rewards) {
  if (rewards.empty()) return 0.0;
  const std::size_t window = std::min<std::size_t>(100, rewards.size());
  double sum = 0.0;
  for (std::size_t i = rewards.size() - window; i < rewards.size(); ++i) sum += rewards[i];
  return sum / static_cast<double>(window);
}

double sample_std(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

int worker_threads() {
  if (const char* env = std::getenv("DEBUNKD_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("DEBUNKD_THREADS must be a positive integer");
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

namespace {

std::string format6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// Run `jobs` callables over a bounded pool; each job owns its slot, so the
// merged output is deterministic regardless of scheduling.
void run_jobs(std::vector<std::function<void()>>& jobs) {
  const int threads = std::min<int>(worker_threads(), static_cast<int>(jobs.size()));
  if (threads <= 1) {
    for (auto& job : jobs) job();
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= jobs.size()) return;
        jobs[i]();
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

void write_rewards_csv(const std::string& path, const std::vector<double>& rewards) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_rewards_csv: cannot write " + path);
  out << "episode,reward\n";
  for (std::size_t i = 0; i < rewards.size(); ++i)
    out << i << ',' << format6(rewards[i]) << '\n';
  if (!out) throw std::runtime_error("write_rewards_csv: write failed " + path);
}

RunRecord run_single(const ExperimentConfig& config, const PolicySpec& policy,
                     std::uint64_t seed, const std::string& out_dir) {
  RunRecord rec;
  rec.policy = policy.name;
  rec.seed = seed;
  rec.config_hash = config.hash();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const SocialGraph graph = build_network(config.net());
    const MitigationConfig env_cfg = config.mitigation();
    const int episodes = config.get_int("episodes");
    if (policy.learned) {
      TrainConfig train_cfg = config.train_config(policy);
      if (train_cfg.checkpoint_every > 0 && !out_dir.empty())
        train_cfg.checkpoint_dir =
            (fs::path(out_dir) /
             ("ckpt_" + policy.name + "_seed" + std::to_string(seed)))
                .string();
      Trainer trainer(graph, env_cfg, train_cfg, seed);
      rec.rewards = trainer.train();
      if (!train_cfg.checkpoint_dir.empty())
        trainer.save_checkpoints(train_cfg.checkpoint_dir, "_final");
    } else {
      rec.rewards = run_heuristic(graph, env_cfg, policy.heuristic, episodes, seed);
    }
    rec.metric = test_metric(rec.rewards);
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config,
                                      const std::string& out_dir) {
  fs::create_directories(out_dir);
  const PolicySpec policy = config.policy();
  const auto seeds = config.seeds();

  std::vector<RunRecord> records(seeds.size());
  std::vector<std::function<void()>> jobs;
  for (std::size_t i = 0; i < seeds.size(); ++i)
    jobs.emplace_back([&, i] { records[i] = run_single(config, policy, seeds[i], out_dir); });
  run_jobs(jobs);

  for (const auto& rec : records) {
    if (!rec.ok) continue;
    const std::string path = (fs::path(out_dir) /
                              ("rewards_" + rec.policy + "_seed" + std::to_string(rec.seed) +
                               ".csv"))
                                 .string();
    write_rewards_csv(path, rec.rewards);
  }

  std::ofstream summary(fs::path(out_dir) / "summary.csv");
  if (!summary) throw std::runtime_error("run_experiment: cannot write summary.csv");
  summary << "policy,seed,metric,wall_seconds,status\n";
  std::vector<double> metrics;
  for (const auto& rec : records) {
    summary << rec.policy << ',' << rec.seed << ','
            << (rec.ok ? format6(rec.metric) : "nan") << ',' << format6(rec.wall_seconds)
            << ',' << (rec.ok ? "ok" : "error: " + rec.error) << '\n';
    if (rec.ok) metrics.push_back(rec.metric);
  }
  if (!metrics.empty()) {
    double mean = 0.0;
    for (double m : metrics) mean += m;
    mean /= static_cast<double>(metrics.size());
    summary << policy.name << ",mean," << format6(mean) << ",," << "ok\n";
    summary << policy.name << ",std," << format6(sample_std(metrics)) << ",," << "ok\n";
  }
  return records;
}

ExperimentConfig config_with_sweep_value(const ExperimentConfig& base,
                                         const std::string& parameter,
                                         const std::string& value) {
  ExperimentConfig cfg = base;
  if (parameter == "budget" || parameter == "stage_length" || parameter == "n") {
    cfg.set(parameter == "n" ? "n" : parameter, value);
  } else if (parameter == "beta") {
    // keep gamma = 3*alpha with alpha + beta + gamma = 1
    const double beta = std::stod(value);
    if (beta < 0.0 || beta > 1.0)
      throw std::invalid_argument("sweep: beta must lie in [0, 1]");
    const double alpha = (1.0 - beta) / 4.0;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", beta);
    cfg.set("beta", buf);
    std::snprintf(buf, sizeof(buf), "%.12g", alpha);
    cfg.set("alpha", buf);
    std::snprintf(buf, sizeof(buf), "%.12g", 3.0 * alpha);
    cfg.set("gamma", buf);
  } else if (parameter == "policy") {
    cfg.set("policy", value);
  } else {
    throw std::invalid_argument("sweep: unknown parameter '" + parameter + "'");
  }
  return cfg;
}

std::string run_sweep(const ExperimentConfig& config, const std::string& parameter,
                      const std::vector<std::string>& values, const std::string& out_dir) {
  if (values.empty()) throw std::invalid_argument("sweep: no values");
  fs::create_directories(out_dir);

  const auto seeds = config.seeds();
  std::vector<PolicySpec> policies =
      parameter == "policy" ? std::vector<PolicySpec>{} : config.policies();

  struct Cell {
    std::string policy;
    std::string value;
    std::uint64_t seed;
    ExperimentConfig cfg;
    PolicySpec spec;
    RunRecord rec;
  };
  std::vector<Cell> cells;
  for (const auto& value : values) {
    const ExperimentConfig swept = config_with_sweep_value(config, parameter, value);
    if (parameter == "policy") {
      for (const auto seed : seeds)
        cells.push_back({value, value, seed, swept, policy_from_string(value), {}});
    } else {
      for (const auto& pol : policies)
        for (const auto seed : seeds) cells.push_back({pol.name, value, seed, swept, pol, {}});
    }
  }

  std::vector<std::function<void()>> jobs;
  for (auto& cell : cells)
    jobs.emplace_back([&cell] { cell.rec = run_single(cell.cfg, cell.spec, cell.seed); });
  run_jobs(jobs);

  const std::string csv_path = (fs::path(out_dir) / ("sweep_" + parameter + ".csv")).string();
  std::ofstream out(csv_path);
  if (!out) throw std::runtime_error("sweep: cannot write " + csv_path);
  out << "policy,parameter,value,seed,metric,status\n";
  for (const auto& cell : cells) {
    out << cell.policy << ',' << parameter << ',' << cell.value << ',' << cell.seed << ','
        << (cell.rec.ok ? format6(cell.rec.metric) : "nan") << ','
        << (cell.rec.ok ? "ok" : "error") << '\n';
  }
  return csv_path;
}

void emit_plot_data(const std::string& sweep_csv, const std::string& out_dir) {
  std::ifstream in(sweep_csv);
  if (!in) throw std::runtime_error("emit_plot_data: cannot open " + sweep_csv);
  fs::create_directories(out_dir);

  std::string line;
  if (!std::getline(in, line)) return;  // empty input: nothing to emit

  struct Key {
    std::string parameter, policy;
    bool operator<(const Key& o) const {
      return std::tie(parameter, policy) < std::tie(o.parameter, o.policy);
    }
  };
  // value -> metrics, in first-appearance order per (parameter, policy)
  std::map<Key, std::vector<std::pair<std::string, std::vector<double>>>> groups;

  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string policy, parameter, value, seed, metric, status;
    if (!std::getline(ls, policy, ',') || !std::getline(ls, parameter, ',') ||
        !std::getline(ls, value, ',') || !std::getline(ls, seed, ',') ||
        !std::getline(ls, metric, ',') || !std::getline(ls, status))
      throw std::runtime_error("emit_plot_data: malformed line " + std::to_string(line_no));
    if (status != "ok") continue;
    auto& series = groups[{parameter, policy}];
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const auto& p) { return p.first == value; });
    if (it == series.end()) {
      series.emplace_back(value, std::vector<double>{});
      it = std::prev(series.end());
    }
    it->second.push_back(std::stod(metric));
  }

  for (const auto& [key, series] : groups) {
    const std::string path =
        (fs::path(out_dir) / ("fig_" + key.parameter + "_" + key.policy + ".dat")).string();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_plot_data: cannot write " + path);
    out << "# value mean std (" << key.policy << " over " << key.parameter << ")\n";
    for (const auto& [value, metrics] : series) {
      double mean = 0.0;
      for (double m : metrics) mean += m;
      mean /= static_cast<double>(metrics.size());
      out << value << ' ' << format6(mean) << ' ' << format6(sample_std(metrics)) << '\n';
    }
  }
}

}  // namespace debunkd
