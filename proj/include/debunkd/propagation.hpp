#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "debunkd/graph.hpp"
#include "debunkd/rng.hpp"

namespace debunkd {

enum class EState : std::uint8_t { Susceptible, Exposed, Infected, Recovered };

char estate_letter(EState s);

struct UserDynamics {
  EState e_state = EState::Susceptible;
  long long n_fake = 0;  // fake news items received
  long long n_true = 0;  // true news items received
  double xi = 0.0;       // initial posting intensity, set on entering Infected/Recovered
  double t_c = 0.0;      // time of the last transition into Infected/Recovered
};

// How xi is drawn when a user starts spreading. Default is U[0.5, 1.5]; an
// empirical value file (one number per line, resampled with replacement) can
// stand in for corpus-derived posting intensities.
class IntensityDistribution {
 public:
  IntensityDistribution() = default;
  IntensityDistribution(double lo, double hi);
  static IntensityDistribution from_file(const std::string& path);
  double sample(RngStream& rng) const;

 private:
  double lo_ = 0.5;
  double hi_ = 1.5;
  std::vector<double> values_;  // empirical mode when non-empty
};

struct PropagationParams {
  double delta = 1.0;  // logistic growth rate
  double omega = 1.0;  // intensity decay rate
  double dt = 0.1;     // tick length
  IntensityDistribution intensity;
};

// 1 / (1 + exp(-delta * (x - midpoint))).
double logistic(double x, double midpoint, double delta);

// (p_infect, p_recover) from the received-news counts. The branches are
// disjoint: at most one of the two is nonzero.
std::pair<double, double> transition_probs(const UserDynamics& u, double midpoint,
                                           double delta);

// xi * exp(-omega * (t - t_c)). Only spreading users (Infected/Recovered)
// have an intensity.
double intensity_at(const UserDynamics& u, double t, double omega);

struct PostEvent {
  double time;
  int poster;
  bool fake;
};

struct DeliveryRecord {
  double time;
  int poster;
  bool fake;
  int receiver;
  EState new_estate;
};

void write_event_log_csv(const std::string& path,
                         const std::vector<DeliveryRecord>& log);

// Full epidemic state of one simulation run. Mutated sequentially by a single
// owner; the graph is shared read-only.
class SimState {
 public:
  SimState(const SocialGraph& graph, std::uint64_t seed);

  const SocialGraph& graph() const { return *graph_; }
  int n() const { return graph_->n; }
  double clock() const { return clock_; }
  const UserDynamics& user(int i) const { return users_.at(i); }
  long long posts_fake(int i) const { return posts_fake_.at(i); }
  long long posts_true(int i) const { return posts_true_.at(i); }

  // k distinct users become Infected at t = 0 with a fresh intensity draw.
  void seed_fake_spreaders(int k, const PropagationParams& params);

  // Force the user to Recovered with a fresh intensity and t_c = clock, so
  // true news spreads immediately.
  void deploy_debunker(int user, const PropagationParams& params);

  // Direct override for tests and debugging.
  void set_user_state(int user, EState s, double xi, double t_c);

  // One simulation step of params.dt (or an explicit dt for the final
  // partial step). Posting decisions are taken from a snapshot of the
  // spreader set at tick start; each delivery increments the receiver's
  // counters and resolves its transitions immediately.
  std::vector<PostEvent> tick(const PropagationParams& params);
  std::vector<PostEvent> tick(const PropagationParams& params, double dt,
                              std::vector<DeliveryRecord>* log);

  void run_until(double t_end, const PropagationParams& params,
                 std::vector<DeliveryRecord>* log = nullptr);

 private:
  void enter_spreading(int user, EState target, const PropagationParams& params);
  void deliver(int receiver, int poster, bool fake, const PropagationParams& params,
               std::vector<DeliveryRecord>* log);

  const SocialGraph* graph_;
  std::vector<UserDynamics> users_;
  std::vector<long long> posts_fake_, posts_true_;
  double clock_ = 0.0;
  RngStream post_rng_, trans_rng_, xi_rng_, pick_rng_;
};

}  // namespace debunkd
