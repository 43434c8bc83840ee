"""Simulation and verification toolkit for bonus-penalty peer prediction.

Covers pairwise-comparison models with Bayesian stochastic transitivity,
uniform-dominance checks, the bonus-penalty payment and its equilibrium
structure, Ising-networked signals, the affine-payment characterization,
and dataset-level experiment pipelines with a CLI front end.
"""
from bppsim.kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
