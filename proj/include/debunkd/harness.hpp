#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "debunkd/config.hpp"

namespace debunkd {

struct RunRecord {
  std::string policy;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::vector<double> rewards;
  double metric = 0.0;  // mean reward of the final 100 episodes
  double wall_seconds = 0.0;
  bool ok = true;
  std::string error;
};

// Mean of the last 100 entries (all of them when the series is shorter).
double test_metric(const std::vector<double>& rewards);

// Unbiased (n-1) standard deviation.
double sample_std(const std::vector<double>& values);

// Worker-slot cap: DEBUNKD_THREADS, defaulting to the hardware concurrency.
int worker_threads();

void write_rewards_csv(const std::string& path, const std::vector<double>& rewards);

// One reward series per (policy, seed) cell; per-seed rewards CSVs and a
// summary CSV are written under out_dir. Failed cells are recorded, not
// fatal.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config,
                                      const std::string& out_dir);

// Run one (config, policy, seed) cell in-process. When `out_dir` is nonempty
// and checkpointing is enabled, checkpoints land under
// <out_dir>/ckpt_<policy>_seed<seed>/.
RunRecord run_single(const ExperimentConfig& config, const PolicySpec& policy,
                     std::uint64_t seed, const std::string& out_dir = "");

// The sweep parameters of the experiment protocol. `beta` rederives
// alpha/gamma under the gamma = 3*alpha constraint.
ExperimentConfig config_with_sweep_value(const ExperimentConfig& base,
                                         const std::string& parameter,
                                         const std::string& value);

// Cross product of values x seeds x policies; emits a tidy CSV
// (policy,parameter,value,seed,metric,status) at <out_dir>/sweep_<param>.csv.
std::string run_sweep(const ExperimentConfig& config, const std::string& parameter,
                      const std::vector<std::string>& values, const std::string& out_dir);

// Per-(parameter, policy) whitespace-delimited files: value, mean, std over
// the ok seeds of each value.
void emit_plot_data(const std::string& sweep_csv, const std::string& out_dir);

}  // namespace debunkd
