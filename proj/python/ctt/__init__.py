"""Exact arithmetic for tori over close local fields."""

from ._core import (
    ClosePair,
    Certificate,
    ScenarioError,
    Torus,
    Tower,
    certify,
    close_pair,
    explain,
    herbrand,
    l_one,
    laurent,
    norm_one,
    psi,
    qp,
    root_of_pi,
    run_scenario,
    split_torus,
    standard_iso,
    unramified,
    weil_restriction,
)

__all__ = [
    "ClosePair",
    "Certificate",
    "ScenarioError",
    "Torus",
    "Tower",
    "certify",
    "close_pair",
    "explain",
    "herbrand",
    "l_one",
    "laurent",
    "norm_one",
    "psi",
    "qp",
    "root_of_pi",
    "run_scenario",
    "split_torus",
    "standard_iso",
    "unramified",
    "weil_restriction",
]
