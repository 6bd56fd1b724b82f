"""Exact verification of the 33-direction, 40-triple Kochen-Specker configuration
and a simulator for the twin-particle refutation protocol."""

from .coloring import (
    Assignment,
    SearchReport,
    export_dimacs,
    first_violated_basis,
    max_satisfiable,
    pattern_valid,
    prove_noncolorable,
)
from .geometry import Basis, Ray, RaySystem, build_ray_system, enumerate_bases
from .protocol import Predictor, refute, run_campaign, run_trial, spacelike_separated
from .quadring import QuadInt

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "Basis",
    "Predictor",
    "QuadInt",
    "Ray",
    "RaySystem",
    "SearchReport",
    "build_ray_system",
    "enumerate_bases",
    "export_dimacs",
    "first_violated_basis",
    "max_satisfiable",
    "pattern_valid",
    "prove_noncolorable",
    "refute",
    "run_campaign",
    "run_trial",
    "spacelike_separated",
]
