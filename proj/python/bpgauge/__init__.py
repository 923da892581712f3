"""Belief propagation gauging of tensor network states."""

from ._core import (
    Error,
    GaugeReport,
    Graph,
    InvalidSpec,
    TensorNetworkState,
    TooLarge,
    VidalState,
    bp_gauge,
    cubic,
    eager_gauge,
    exact_expectation,
    hexagonal,
    ising_sqrt_partition_state,
    load_tns,
    neel_state,
    path,
    random_regular,
    random_tns,
    random_tree,
    rank_one_expectation,
    relative_amplitude_error,
    run_cli,
    save_tns,
    simple_update_gauge,
    spectrum_distance,
    square,
    vidal_distance,
    vidal_from_plain,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
