#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "debunkd/config.hpp"
#include "debunkd/harness.hpp"

namespace fs = std::filesystem;
using namespace debunkd;

namespace {

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string seeds;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "key=value configuration file");
  cmd->add_option("--set", opts.overrides, "override one key (key=value, repeatable)");
  cmd->add_option("--seeds", opts.seeds, "comma-separated seed list");
  cmd->add_option("--out", opts.out, "output directory");
}

ExperimentConfig resolve_config(const CommonOpts& opts) {
  ExperimentConfig cfg = opts.config_path.empty()
                             ? ExperimentConfig{}
                             : ExperimentConfig::from_file(opts.config_path);
  for (const auto& kv : opts.overrides) cfg.set_pair(kv);
  if (!opts.seeds.empty()) cfg.set("seeds", opts.seeds);
  if (!opts.out.empty()) cfg.set("out", opts.out);
  return cfg;
}

int cmd_generate_net(const CommonOpts& opts) {
  const ExperimentConfig cfg = resolve_config(opts);
  const NetSpec spec = cfg.net();
  const SocialGraph g = build_network(spec);
  const fs::path out_dir = cfg.get("out");
  fs::create_directories(out_dir);
  save_edge_list(g, (out_dir / "network.edges").string());
  save_metadata((out_dir / "network.meta").string(),
                {{"n", std::to_string(g.n)},
                 {"edges", std::to_string(g.edge_count())},
                 {"kind", spec.kind},
                 {"seed", std::to_string(spec.net_seed)},
                 {"alpha", cfg.get("alpha")},
                 {"beta", cfg.get("beta")},
                 {"gamma", cfg.get("gamma")},
                 {"delta_in", cfg.get("delta_in")},
                 {"delta_out", cfg.get("delta_out")}});
  std::cout << "wrote " << (out_dir / "network.edges").string() << " (" << g.n << " nodes, "
            << g.edge_count() << " edges)\n";
  return 0;
}

int cmd_simulate(const CommonOpts& opts) {
  const ExperimentConfig cfg = resolve_config(opts);
  const SocialGraph g = build_network(cfg.net());
  const MitigationConfig env_cfg = cfg.mitigation();
  const fs::path out_dir = cfg.get("out");
  fs::create_directories(out_dir);
  for (const auto seed : cfg.seeds()) {
    SimState sim(g, seed);
    sim.seed_fake_spreaders(env_cfg.initial_spreaders, env_cfg.prop);
    std::vector<DeliveryRecord> log;
    sim.run_until(cfg.get_double("sim_time"), env_cfg.prop, &log);
    const std::string path =
        (out_dir / ("events_seed" + std::to_string(seed) + ".csv")).string();
    write_event_log_csv(path, log);
    int infected = 0, recovered = 0;
    for (int i = 0; i < g.n; ++i) {
      infected += sim.user(i).e_state == EState::Infected;
      recovered += sim.user(i).e_state == EState::Recovered;
    }
    std::cout << "seed " << seed << ": " << log.size() << " deliveries, " << infected
              << " infected, " << recovered << " recovered -> " << path << '\n';
  }
  return 0;
}

int cmd_train(const CommonOpts& opts) {
  const ExperimentConfig cfg = resolve_config(opts);
  const auto records = run_experiment(cfg, cfg.get("out"));
  for (const auto& rec : records) {
    if (rec.ok)
      std::printf("%s seed %llu: test metric %.6f (%.1fs)\n", rec.policy.c_str(),
                  static_cast<unsigned long long>(rec.seed), rec.metric, rec.wall_seconds);
    else
      std::printf("%s seed %llu: FAILED (%s)\n", rec.policy.c_str(),
                  static_cast<unsigned long long>(rec.seed), rec.error.c_str());
  }
  std::cout << "summary: " << (fs::path(cfg.get("out")) / "summary.csv").string() << '\n';
  return 0;
}

int cmd_evaluate(const CommonOpts& opts) {
  const ExperimentConfig cfg = resolve_config(opts);
  const SocialGraph g = build_network(cfg.net());
  const MitigationConfig env_cfg = cfg.mitigation();
  const PolicySpec policy = cfg.policy();
  const int episodes = cfg.get_int("eval_episodes");
  const fs::path out_dir = cfg.get("out");
  fs::create_directories(out_dir);

  for (const auto seed : cfg.seeds()) {
    std::vector<double> rewards;
    std::vector<EpisodeTrace> traces;
    if (policy.learned) {
      Trainer trainer(g, env_cfg, cfg.train_config(policy), seed);
      const std::string ckpt = cfg.get("checkpoint");
      if (ckpt.empty())
        throw std::runtime_error("evaluate: a learned policy needs checkpoint=PATH");
      load_params_file(trainer.mutable_policy(), "policy", ckpt);
      for (int ep = 0; ep < episodes; ++ep) {
        traces.push_back(trainer.evaluation_rollout(
            mix_seed(seed, static_cast<std::uint64_t>(ep))));
        rewards.push_back(traces.back().reward);
      }
    } else {
      RngStream rng(seed, Stream::Heuristic);
      for (int ep = 0; ep < episodes; ++ep) {
        MitigationEnv env(g, env_cfg, mix_seed(seed, static_cast<std::uint64_t>(ep)));
        traces.push_back(rollout_heuristic(env, policy.heuristic, rng));
        rewards.push_back(traces.back().reward);
      }
    }
    const std::string tag = policy.name + "_seed" + std::to_string(seed);
    write_rewards_csv((out_dir / ("eval_rewards_" + tag + ".csv")).string(), rewards);
    write_trace_csv((out_dir / ("eval_traces_" + tag + ".csv")).string(), traces, g,
                    env_cfg.budget);
    std::printf("%s seed %llu: mean reward %.6f over %d episodes\n", policy.name.c_str(),
                static_cast<unsigned long long>(seed), test_metric(rewards), episodes);
  }
  return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::string& parameter,
              const std::string& values_csv) {
  const ExperimentConfig cfg = resolve_config(opts);
  std::vector<std::string> values;
  {
    std::string tok;
    std::istringstream ss(values_csv);
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) values.push_back(tok);
  }
  const std::string csv = run_sweep(cfg, parameter, values, cfg.get("out"));
  std::cout << "wrote " << csv << '\n';
  return 0;
}

int cmd_plot_data(const CommonOpts& opts, const std::string& input) {
  const ExperimentConfig cfg = resolve_config(opts);
  emit_plot_data(input, cfg.get("out"));
  std::cout << "wrote plot data under " << cfg.get("out") << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-stage fake-news mitigation sandbox"};
  app.require_subcommand(1);

  CommonOpts gen_opts, sim_opts, train_opts, eval_opts, sweep_opts, plot_opts;

  auto* gen = app.add_subcommand("generate-net", "generate or load a network and dump it");
  add_common(gen, gen_opts);

  auto* sim = app.add_subcommand("simulate", "propagation only, no mitigation");
  add_common(sim, sim_opts);

  auto* train = app.add_subcommand("train", "train the configured policy over the seed list");
  add_common(train, train_opts);

  auto* eval = app.add_subcommand("evaluate", "frozen-policy rollouts");
  add_common(eval, eval_opts);

  std::string sweep_param, sweep_values;
  auto* sweep = app.add_subcommand("sweep", "grid sweep over one parameter");
  add_common(sweep, sweep_opts);
  sweep->add_option("--param", sweep_param, "budget | stage_length | beta | n | policy")
      ->required();
  sweep->add_option("--values", sweep_values, "comma-separated values")->required();

  std::string plot_input;
  auto* plot = app.add_subcommand("plot-data", "aggregate a sweep CSV into plot files");
  add_common(plot, plot_opts);
  plot->add_option("--input", plot_input, "sweep CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate_net(gen_opts);
    if (sim->parsed()) return cmd_simulate(sim_opts);
    if (train->parsed()) return cmd_train(train_opts);
    if (eval->parsed()) return cmd_evaluate(eval_opts);
    if (sweep->parsed()) return cmd_sweep(sweep_opts, sweep_param, sweep_values);
    if (plot->parsed()) return cmd_plot_data(plot_opts, plot_input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
