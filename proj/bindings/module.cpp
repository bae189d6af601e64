#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "debunkd/baselines.hpp"
#include "debunkd/config.hpp"
#include "debunkd/env.hpp"
#include "debunkd/graph.hpp"
#include "debunkd/trainer.hpp"

namespace py = pybind11;
using namespace debunkd;

PYBIND11_MODULE(_core, m) {
  m.doc() = "SEIR fake-news propagation, budgeted debunker selection, and "
            "adversarial self-imitation training";

  py::class_<SocialGraph>(m, "SocialGraph")
      .def_readonly("n", &SocialGraph::n)
      .def_readonly("follower_counts", &SocialGraph::e)
      .def_readonly("costs", &SocialGraph::c)
      .def_readonly("midpoints", &SocialGraph::x)
      .def("out_edges", [](const SocialGraph& g, int u) { return g.out_edges.at(u); })
      .def("edge_count", &SocialGraph::edge_count)
      .def("in_degrees", &SocialGraph::in_degrees)
      .def("__repr__", [](const SocialGraph& g) {
        return "SocialGraph(n=" + std::to_string(g.n) +
               ", edges=" + std::to_string(g.edge_count()) + ")";
      });

  m.def(
      "generate_scale_free",
      [](int n, double alpha, double beta, double gamma, std::uint64_t seed,
         double delta_in, double delta_out) {
        return generate_scale_free(n, alpha, beta, gamma, seed, delta_in, delta_out);
      },
      py::arg("n"), py::arg("alpha"), py::arg("beta"), py::arg("gamma"), py::arg("seed"),
      py::arg("delta_in") = 0.2, py::arg("delta_out") = 0.0);
  m.def("load_edge_list", &load_edge_list, py::arg("path"), py::arg("undirected"));
  m.def("ego_subgraph", &ego_subgraph, py::arg("graph"), py::arg("center"),
        py::arg("radius"));
  m.def("logistic", &logistic, py::arg("x"), py::arg("midpoint"), py::arg("delta"));

  py::class_<MitigationConfig>(m, "MitigationConfig")
      .def(py::init([](double budget, double stage_length, double t_start, double t_tail,
                       double psi, int spreaders, bool reuse_debunkers,
                       bool terminal_sampled, double delta, double omega, double dt,
                       double xi_min, double xi_max) {
             MitigationConfig c;
             c.budget = budget;
             c.stage_length = stage_length;
             c.t_start = t_start;
             c.t_tail = t_tail;
             c.psi = psi;
             c.initial_spreaders = spreaders;
             c.reuse_debunkers = reuse_debunkers;
             c.terminal_sampled = terminal_sampled;
             c.prop.delta = delta;
             c.prop.omega = omega;
             c.prop.dt = dt;
             c.prop.intensity = IntensityDistribution(xi_min, xi_max);
             return c;
           }),
           py::arg("budget") = 20.0, py::arg("stage_length") = 1.0,
           py::arg("t_start") = 5.0, py::arg("t_tail") = 5.0, py::arg("psi") = 0.9,
           py::arg("spreaders") = 20, py::arg("reuse_debunkers") = false,
           py::arg("terminal_sampled") = false, py::arg("delta") = 1.0,
           py::arg("omega") = 1.0, py::arg("dt") = 0.1, py::arg("xi_min") = 0.5,
           py::arg("xi_max") = 1.5)
      .def_readwrite("budget", &MitigationConfig::budget)
      .def_readwrite("stage_length", &MitigationConfig::stage_length)
      .def_readwrite("t_start", &MitigationConfig::t_start)
      .def_readwrite("t_tail", &MitigationConfig::t_tail)
      .def_readwrite("psi", &MitigationConfig::psi)
      .def_readwrite("initial_spreaders", &MitigationConfig::initial_spreaders)
      .def_readwrite("reuse_debunkers", &MitigationConfig::reuse_debunkers)
      .def_readwrite("terminal_sampled", &MitigationConfig::terminal_sampled);

  py::class_<Observation>(m, "Observation")
      .def_readonly("n", &Observation::n)
      .def_readonly("s", &Observation::s);

  py::class_<AugmentedState>(m, "AugmentedState").def_readonly("v", &AugmentedState::v);

  py::class_<TraceStep>(m, "TraceStep")
      .def_readonly("s", &TraceStep::s)
      .def_readonly("s_prime", &TraceStep::s_prime)
      .def_readonly("mask", &TraceStep::mask)
      .def_readonly("action", &TraceStep::action);

  py::class_<EpisodeTrace>(m, "EpisodeTrace")
      .def_readonly("steps", &EpisodeTrace::steps)
      .def_readonly("reward", &EpisodeTrace::reward);

  py::class_<MitigationEnv>(m, "MitigationEnv")
      .def(py::init<const SocialGraph&, const MitigationConfig&, std::uint64_t>(),
           py::arg("graph"), py::arg("config"), py::arg("seed"),
           py::keep_alive<1, 2>())
      .def("observe", &MitigationEnv::observe)
      .def("augmented", &MitigationEnv::augmented)
      .def("action_mask",
           [](const MitigationEnv& env) {
             std::vector<bool> mask;
             for (char m : env.action_mask()) mask.push_back(m != 0);
             return mask;
           })
      .def("step",
           [](MitigationEnv& env, int action) {
             const auto r = env.step(action);
             return py::make_tuple(r.obs, r.remaining_budget, r.done);
           },
           py::arg("action"))
      .def("finish", &MitigationEnv::finish)
      .def("episodic_reward", &MitigationEnv::episodic_reward)
      .def("expected_infected", &MitigationEnv::expected_infected)
      .def_property_readonly("done", &MitigationEnv::done)
      .def_property_readonly("remaining_budget", &MitigationEnv::remaining_budget)
      .def_property_readonly("clock", &MitigationEnv::clock);

  m.def("augment", &augment, py::arg("history"), py::arg("psi"), py::arg("n"));
  m.def(
      "negative_regularizer",
      [](const std::vector<double>& pi, const std::vector<double>& mdl) {
        return negative_regularizer(pi, mdl);
      },
      py::arg("pi"), py::arg("m"));

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("iterations", &TrainConfig::iterations)
      .def_readwrite("batch_good", &TrainConfig::batch_good)
      .def_readwrite("batch_bad", &TrainConfig::batch_bad)
      .def_readwrite("disc_updates", &TrainConfig::disc_updates)
      .def_readwrite("policy_updates", &TrainConfig::policy_updates)
      .def_readwrite("gamma_r", &TrainConfig::gamma_r)
      .def_readwrite("lambda_entropy", &TrainConfig::lambda)
      .def_readwrite("lambda1", &TrainConfig::lambda1)
      .def_readwrite("use_augmented_state", &TrainConfig::use_augmented_state)
      .def_readwrite("use_negative_samples", &TrainConfig::use_negative_samples)
      .def_readwrite("good_capacity", &TrainConfig::good_capacity)
      .def_readwrite("bad_fraction", &TrainConfig::bad_fraction)
      .def_readwrite("bad_cap", &TrainConfig::bad_cap)
      .def_readwrite("hidden", &TrainConfig::hidden)
      .def_readwrite("lr_policy", &TrainConfig::lr_policy)
      .def_readwrite("lr_disc", &TrainConfig::lr_disc)
      .def_readwrite("lr_neg", &TrainConfig::lr_neg);

  m.def(
      "train",
      [](const SocialGraph& graph, const MitigationConfig& env_cfg, const TrainConfig& cfg,
         std::uint64_t seed) {
        Trainer trainer(graph, env_cfg, cfg, seed);
        return trainer.train();
      },
      py::arg("graph"), py::arg("config"), py::arg("train_config"), py::arg("seed"),
      "Run the self-imitation training loop; returns the per-episode rewards.");

  m.def(
      "heuristic_select",
      [](const std::string& kind, const Observation& obs, const std::vector<bool>& mask,
         std::uint64_t seed) {
        std::vector<char> m8(mask.begin(), mask.end());
        RngStream rng(seed, Stream::Heuristic);
        return heuristic_select(heuristic_from_string(kind), obs, m8, rng);
      },
      py::arg("kind"), py::arg("observation"), py::arg("mask"), py::arg("seed") = 0);

  m.def(
      "run_heuristic",
      [](const SocialGraph& graph, const MitigationConfig& cfg, const std::string& kind,
         int episodes, std::uint64_t seed) {
        return run_heuristic(graph, cfg, heuristic_from_string(kind), episodes, seed);
      },
      py::arg("graph"), py::arg("config"), py::arg("kind"), py::arg("episodes"),
      py::arg("seed"));
}
