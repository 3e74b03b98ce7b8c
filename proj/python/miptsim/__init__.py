"""Quantum-trajectory simulator for a monitored noisy, disordered Heisenberg chain."""

from ._core import (
    Gate4,
    RngStream,
    SimParams,
    StateVector,
    __version__,
    apply_two_site_gate,
    build_bond_gate,
    data_collapse,
    entanglement_entropy,
    extrapolate_linear,
    fit_exp_poly,
    half_chain_mask,
    make_neel,
    page_entropy,
    run_ensemble,
    run_trajectory,
    sigma_z_expectation,
    sweep,
    tripartite_mutual_information,
    up_probability,
    weak_measure_site,
)

__all__ = [
    "Gate4",
    "RngStream",
    "SimParams",
    "StateVector",
    "__version__",
    "apply_two_site_gate",
    "build_bond_gate",
    "data_collapse",
    "entanglement_entropy",
    "extrapolate_linear",
    "fit_exp_poly",
    "half_chain_mask",
    "make_neel",
    "page_entropy",
    "run_ensemble",
    "run_trajectory",
    "sigma_z_expectation",
    "sweep",
    "tripartite_mutual_information",
    "up_probability",
    "weak_measure_site",
]
