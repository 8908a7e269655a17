"""Computational-basis dephasing of stored clusters."""

from __future__ import annotations

import math

import numpy as np

from .cluster_states import ClusterChain
from .densmat import DensityMatrix, apply_local_kraus


def check_strength(p: float, name: str = "p") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise ValueError(f"dephasing strength {name}={p!r} outside [0, 1]")
    return p


def dephasing_kraus(p: float) -> list[np.ndarray]:
    """``K1 = diag(1, sqrt(1-p))``, ``K2 = diag(0, sqrt(p))``."""
    p = check_strength(p)
    return [
        np.diag([1.0, math.sqrt(1.0 - p)]).astype(complex),
        np.diag([0.0, math.sqrt(p)]).astype(complex),
    ]


def dephase_state(rho: DensityMatrix, p: float) -> DensityMatrix:
    """Apply the single-qubit channel to every qubit, one qubit at a time."""
    ops = dephasing_kraus(p)
    if p == 0.0:
        return rho
    for k in range(1, rho.qubits + 1):
        rho = apply_local_kraus(rho, ops, k)
    return rho


def dephase_all(chain: ClusterChain, p: float) -> ClusterChain:
    if chain.is_empty:
        check_strength(p)
        return chain
    return ClusterChain(chain.labels, dephase_state(chain.state, p), chain.parents)


def compose_strengths(*ps: float) -> float:
    """Single strength equivalent to applying each of ``ps`` in turn."""
    keep = 1.0
    for p in ps:
        keep *= 1.0 - check_strength(p)
    return 1.0 - keep


def time_to_strength(kappa: float, tau: float) -> float:
    """``1 - exp(-kappa * tau)``."""
    if kappa < 0 or tau < 0:
        raise ValueError(f"kappa and tau must be non-negative (got {kappa}, {tau})")
    x = kappa * tau
    if math.isinf(x):
        return 1.0
    return -math.expm1(-x)
