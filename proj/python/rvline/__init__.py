"""Deterministic rendezvous on labeled lines.

Thin python surface over the C++ core: exact numerics (tower / log* /
suffix-free Cole-Vishkin choice), the EarlyStopCV 3-colouring runner, the
phase/epoch arithmetic of the rendezvous algorithms, and the two-agent
round simulator.
"""

from rvline._core import (
    DEFAULT_KAPPA,
    binary_rep,
    canon_bound,
    canon_colour,
    colour_in_window,
    cv_choice,
    d_crit,
    encode_sf,
    epoch_length,
    first_epochs,
    i_crit,
    int_val,
    known_d_bound,
    log_star,
    nod_envelope,
    phase_length,
    run_local,
    run_rendezvous,
    s_string,
    tower,
)

__all__ = [
    "DEFAULT_KAPPA",
    "binary_rep",
    "canon_bound",
    "canon_colour",
    "colour_in_window",
    "cv_choice",
    "d_crit",
    "encode_sf",
    "epoch_length",
    "first_epochs",
    "i_crit",
    "int_val",
    "known_d_bound",
    "log_star",
    "nod_envelope",
    "phase_length",
    "run_local",
    "run_rendezvous",
    "s_string",
    "tower",
]
