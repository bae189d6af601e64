#include "debunkd/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace debunkd {

char estate_letter(EState s) {
  switch (s) {
    case EState::Susceptible: return 'S';
    case EState::Exposed: return 'E';
    case EState::Infected: return 'I';
    case EState::Recovered: return 'R';
  }
  return '?';
}

IntensityDistribution::IntensityDistribution(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(lo <= hi)) throw std::invalid_argument("IntensityDistribution: lo > hi");
}

IntensityDistribution IntensityDistribution::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("IntensityDistribution: cannot open " + path);
  IntensityDistribution d;
  double v = 0.0;
  while (in >> v) {
    if (!(v >= 0.0)) throw std::runtime_error("IntensityDistribution: negative value in " + path);
    d.values_.push_back(v);
  }
  if (d.values_.empty())
    throw std::runtime_error("IntensityDistribution: no values in " + path);
  return d;
}

double IntensityDistribution::sample(RngStream& rng) const {
  if (!values_.empty()) return values_[rng.below(values_.size())];
  return rng.uniform(lo_, hi_);
}

double logistic(double x, double midpoint, double delta) {
  return 1.0 / (1.0 + std::exp(-delta * (x - midpoint)));
}

std::pair<double, double> transition_probs(const UserDynamics& u, double midpoint,
                                           double delta) {
  const long long diff = u.n_fake - u.n_true;
  if (diff > 0) return {logistic(static_cast<double>(diff), midpoint, delta), 0.0};
  if (diff < 0) return {0.0, logistic(static_cast<double>(-diff), midpoint, delta)};
  return {0.0, 0.0};
}

double intensity_at(const UserDynamics& u, double t, double omega) {
  if (u.e_state != EState::Infected && u.e_state != EState::Recovered)
    throw std::logic_error("intensity_at: user is not spreading");
  if (t < u.t_c) throw std::invalid_argument("intensity_at: t precedes t_c");
  return u.xi * std::exp(-omega * (t - u.t_c));
}

void write_event_log_csv(const std::string& path,
                         const std::vector<DeliveryRecord>& log) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_event_log_csv: cannot write " + path);
  out << "tick_time,poster,kind,receiver,new_estate\n";
  char buf[64];
  for (const auto& r : log) {
    std::snprintf(buf, sizeof(buf), "%.6f", r.time);
    out << buf << ',' << r.poster << ',' << (r.fake ? 'F' : 'M') << ','
        << r.receiver << ',' << estate_letter(r.new_estate) << '\n';
  }
}

SimState::SimState(const SocialGraph& graph, std::uint64_t seed)
    : graph_(&graph),
      users_(graph.n),
      posts_fake_(graph.n, 0),
      posts_true_(graph.n, 0),
      post_rng_(seed, Stream::Posting),
      trans_rng_(seed, Stream::Transition),
      xi_rng_(seed, Stream::Intensity),
      pick_rng_(seed, Stream::Seeding) {}

void SimState::seed_fake_spreaders(int k, const PropagationParams& params) {
  if (k < 0 || k > n())
    throw std::invalid_argument("seed_fake_spreaders: k out of range");
  for (int u : pick_rng_.sample_distinct(k, n())) {
    users_[u].e_state = EState::Infected;
    users_[u].xi = params.intensity.sample(xi_rng_);
    users_[u].t_c = 0.0;
  }
}

void SimState::deploy_debunker(int user, const PropagationParams& params) {
  if (user < 0 || user >= n())
    throw std::invalid_argument("deploy_debunker: user id out of range");
  enter_spreading(user, EState::Recovered, params);
}

void SimState::set_user_state(int user, EState s, double xi, double t_c) {
  users_.at(user).e_state = s;
  users_.at(user).xi = xi;
  users_.at(user).t_c = t_c;
}

void SimState::enter_spreading(int user, EState target,
                               const PropagationParams& params) {
  users_[user].e_state = target;
  users_[user].xi = params.intensity.sample(xi_rng_);
  users_[user].t_c = clock_;
}

void SimState::deliver(int receiver, int poster, bool fake,
                       const PropagationParams& params,
                       std::vector<DeliveryRecord>* log) {
  UserDynamics& u = users_[receiver];
  if (fake)
    ++u.n_fake;
  else
    ++u.n_true;
  if (u.e_state == EState::Susceptible) u.e_state = EState::Exposed;

  // One transition roll per receipt, driven by the updated counts. The two
  // branches are mutually exclusive; a user already in the target e-state
  // does not re-roll.
  const auto [p_infect, p_recover] = transition_probs(u, graph_->x[receiver], params.delta);
  if (p_infect > 0.0 && u.e_state != EState::Infected) {
    if (trans_rng_.bernoulli(p_infect)) enter_spreading(receiver, EState::Infected, params);
  } else if (p_recover > 0.0 && u.e_state != EState::Recovered) {
    if (trans_rng_.bernoulli(p_recover)) enter_spreading(receiver, EState::Recovered, params);
  }
  if (log) log->push_back({clock_, poster, fake, receiver, u.e_state});
}

std::vector<PostEvent> SimState::tick(const PropagationParams& params) {
  return tick(params, params.dt, nullptr);
}

std::vector<PostEvent> SimState::tick(const PropagationParams& params, double dt,
                                      std::vector<DeliveryRecord>* log) {
  if (dt <= 0.0) throw std::invalid_argument("tick: dt must be positive");

  // Snapshot the spreader set: users entering Infected/Recovered during this
  // tick start posting from the next tick.
  std::vector<PostEvent> events;
  for (int i = 0; i < n(); ++i) {
    const EState s = users_[i].e_state;
    if (s != EState::Infected && s != EState::Recovered) continue;
    const double p = std::min(1.0, intensity_at(users_[i], clock_, params.omega) * dt);
    if (post_rng_.bernoulli(p)) events.push_back({clock_, i, s == EState::Infected});
  }

  for (const auto& ev : events) {
    if (ev.fake)
      ++posts_fake_[ev.poster];
    else
      ++posts_true_[ev.poster];
    for (int v : graph_->out_edges[ev.poster]) deliver(v, ev.poster, ev.fake, params, log);
  }

  clock_ += dt;
  return events;
}

void SimState::run_until(double t_end, const PropagationParams& params,
                         std::vector<DeliveryRecord>* log) {
  if (t_end < clock_ - 1e-9)
    throw std::invalid_argument("run_until: t_end precedes the clock");
  if (t_end <= clock_) return;

  // Integer step arithmetic plus a final clock snap keeps tick boundaries
  // stable, so splitting a run at an intermediate time consumes the same
  // draw sequence as running straight through.
  const double base = clock_;
  const long long full = static_cast<long long>((t_end - base) / params.dt + 1e-9);
  for (long long k = 0; k < full; ++k) {
    tick(params, params.dt, log);
    clock_ = base + static_cast<double>(k + 1) * params.dt;
  }
  const double rem = t_end - clock_;
  if (rem > 1e-9) tick(params, rem, log);
  clock_ = t_end;
}

}  // namespace debunkd
