#include "debunkd/env.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace debunkd {

AugmentedState augment(const std::vector<std::pair<Observation, int>>& history,
                       double psi, int n) {
  if (psi < 0.0 || psi > 1.0) throw std::invalid_argument("augment: psi outside [0, 1]");
  AugmentedState out;
  out.v.assign(6 * n, 0.0);
  const int i = static_cast<int>(history.size());
  if (i == 0) return out;
  for (int m = 1; m <= i; ++m) {
    const auto& [s, a] = history[m - 1];
    const double w = std::pow(psi, static_cast<double>(i - m));
    for (int j = 0; j < 5 * n; ++j) out.v[j] += w * s.s[j];
    out.v[5 * n + a] += w;
  }
  for (double& v : out.v) v /= static_cast<double>(i);
  return out;
}

void AugmentAccumulator::push(const Observation& s, int action, double psi) {
  for (double& v : weighted_sum_) v *= psi;
  for (int j = 0; j < 5 * n_; ++j) weighted_sum_[j] += s.s[j];
  weighted_sum_[5 * n_ + action] += 1.0;
  ++count_;
}

AugmentedState AugmentAccumulator::current() const {
  AugmentedState out;
  out.v.assign(6 * n_, 0.0);
  if (count_ == 0) return out;
  for (int j = 0; j < 6 * n_; ++j)
    out.v[j] = weighted_sum_[j] / static_cast<double>(count_);
  return out;
}

double reward_from_infected_count(double c, int n) {
  return -std::log((c + 1.0) / (static_cast<double>(n) + 1.0));
}

MitigationEnv::MitigationEnv(const SocialGraph& graph, const MitigationConfig& config,
                             std::uint64_t seed)
    : graph_(&graph),
      cfg_(config),
      sim_(graph, seed),
      terminal_rng_(seed, Stream::Terminal),
      aug_(graph.n),
      used_(graph.n, 0),
      remaining_(config.budget) {
  if (cfg_.budget <= 0.0) throw std::invalid_argument("MitigationEnv: budget must be positive");
  if (cfg_.stage_length <= 0.0)
    throw std::invalid_argument("MitigationEnv: stage length must be positive");
  if (cfg_.psi < 0.0 || cfg_.psi > 1.0)
    throw std::invalid_argument("MitigationEnv: psi outside [0, 1]");
  sim_.seed_fake_spreaders(cfg_.initial_spreaders, cfg_.prop);
  sim_.run_until(cfg_.t_start, cfg_.prop);
  base_fake_.resize(graph.n);
  base_true_.resize(graph.n);
  for (int i = 0; i < graph.n; ++i) {
    base_fake_[i] = sim_.posts_fake(i);
    base_true_[i] = sim_.posts_true(i);
  }
  done_ = !any_affordable();
}

Observation MitigationEnv::observe() const {
  const int n = graph_->n;
  Observation obs;
  obs.n = n;
  obs.s.assign(5 * n, 0.0);
  for (int i = 0; i < n; ++i) {
    const UserDynamics& u = sim_.user(i);
    obs.s[i] = u.e_state == EState::Infected ? 1.0 : 0.0;
    obs.s[n + i] = static_cast<double>(sim_.posts_fake(i) - base_fake_[i]);
    obs.s[2 * n + i] = u.e_state == EState::Recovered ? 1.0 : 0.0;
    obs.s[3 * n + i] = static_cast<double>(sim_.posts_true(i) - base_true_[i]);
    obs.s[4 * n + i] = graph_->e[i];
  }
  return obs;
}

FullState MitigationEnv::full_state() const {
  const int n = graph_->n;
  FullState fs;
  fs.n = n;
  fs.s_e.assign(8 * n, 0.0);
  for (int i = 0; i < n; ++i) {
    const UserDynamics& u = sim_.user(i);
    const auto [p_infect, p_recover] = transition_probs(u, graph_->x[i], cfg_.prop.delta);
    const bool spreading =
        u.e_state == EState::Infected || u.e_state == EState::Recovered;
    fs.s_e[i] = p_infect;
    fs.s_e[n + i] = u.e_state == EState::Infected ? 1.0 : 0.0;
    fs.s_e[2 * n + i] = static_cast<double>(sim_.posts_fake(i) - base_fake_[i]);
    fs.s_e[3 * n + i] = p_recover;
    fs.s_e[4 * n + i] = u.e_state == EState::Recovered ? 1.0 : 0.0;
    fs.s_e[5 * n + i] = static_cast<double>(sim_.posts_true(i) - base_true_[i]);
    fs.s_e[6 * n + i] = spreading ? intensity_at(u, sim_.clock(), cfg_.prop.omega) : 0.0;
    fs.s_e[7 * n + i] = graph_->e[i];
  }
  return fs;
}

std::vector<char> MitigationEnv::action_mask() const {
  std::vector<char> mask(graph_->n, 0);
  for (int i = 0; i < graph_->n; ++i)
    mask[i] = graph_->c[i] <= remaining_ && (cfg_.reuse_debunkers || !used_[i]);
  return mask;
}

bool MitigationEnv::any_affordable() const {
  for (int i = 0; i < graph_->n; ++i)
    if (graph_->c[i] <= remaining_ && (cfg_.reuse_debunkers || !used_[i])) return true;
  return false;
}

MitigationEnv::StepResult MitigationEnv::step(int action) {
  if (action < 0 || action >= graph_->n)
    throw std::invalid_argument("step: action out of range");
  if (done_) throw std::logic_error("step: campaign already over");
  if (!(graph_->c[action] <= remaining_ && (cfg_.reuse_debunkers || !used_[action])))
    throw std::logic_error("step: masked action");

  aug_.push(observe(), action, cfg_.psi);
  sim_.deploy_debunker(action, cfg_.prop);
  remaining_ -= graph_->c[action];
  spent_ += graph_->c[action];
  used_[action] = 1;
  sim_.run_until(sim_.clock() + cfg_.stage_length, cfg_.prop);
  done_ = !any_affordable();
  return {observe(), remaining_, done_};
}

void MitigationEnv::finish() {
  if (!done_) throw std::logic_error("finish: campaign still running");
  if (finished_) throw std::logic_error("finish: already finished");
  sim_.run_until(sim_.clock() + cfg_.t_tail, cfg_.prop);
  finished_ = true;

  // Gauge the terminal infected count once; repeated reads must not consume
  // further draws in sampled mode.
  double c = 0.0;
  for (int i = 0; i < graph_->n; ++i) {
    const UserDynamics& u = sim_.user(i);
    if (u.e_state == EState::Infected) {
      c += 1.0;
    } else if (u.e_state == EState::Recovered) {
      // counts as zero
    } else {
      const double p = transition_probs(u, graph_->x[i], cfg_.prop.delta).first;
      if (cfg_.terminal_sampled)
        c += terminal_rng_.bernoulli(p) ? 1.0 : 0.0;
      else
        c += p;
    }
  }
  terminal_infected_ = c;
}

double MitigationEnv::expected_infected() {
  if (!finished_) throw std::logic_error("expected_infected: campaign tail not run");
  return terminal_infected_;
}

double MitigationEnv::episodic_reward() {
  return reward_from_infected_count(expected_infected(), graph_->n);
}

void write_trace_csv(const std::string& path, const std::vector<EpisodeTrace>& episodes,
                     const SocialGraph& graph, double budget) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trace_csv: cannot write " + path);
  out << "episode,stage,action,cost,remaining_budget\n";
  char buf[128];
  for (std::size_t ep = 0; ep < episodes.size(); ++ep) {
    double remaining = budget;
    for (std::size_t t = 0; t < episodes[ep].steps.size(); ++t) {
      const int a = episodes[ep].steps[t].action;
      remaining -= graph.c[a];
      std::snprintf(buf, sizeof(buf), "%zu,%zu,%d,%.6f,%.6f", ep, t, a, graph.c[a],
                    remaining);
      out << buf << '\n';
    }
  }
}

}  // namespace debunkd
