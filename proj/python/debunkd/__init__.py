"""Multi-stage fake-news mitigation sandbox: SEIR propagation on directed
social networks, budgeted debunker selection, and adversarial self-imitation
training, all backed by the C++ core."""

from debunkd._core import (  # noqa: F401
    AugmentedState,
    EpisodeTrace,
    MitigationConfig,
    MitigationEnv,
    Observation,
    SocialGraph,
    TraceStep,
    TrainConfig,
    augment,
    ego_subgraph,
    generate_scale_free,
    heuristic_select,
    load_edge_list,
    logistic,
    negative_regularizer,
    run_heuristic,
    train,
)

__all__ = [
    "AugmentedState",
    "EpisodeTrace",
    "MitigationConfig",
    "MitigationEnv",
    "Observation",
    "SocialGraph",
    "TraceStep",
    "TrainConfig",
    "augment",
    "ego_subgraph",
    "generate_scale_free",
    "heuristic_select",
    "load_edge_list",
    "logistic",
    "negative_regularizer",
    "run_heuristic",
    "train",
]
