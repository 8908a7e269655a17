"""Type I fusion of two chain ends as a three-outcome measurement.

Outcomes on the two edge qubits ``(x, y)``:

* success ``K_s = |0><00| + |1><11|`` keeps one qubit carrying the common value;
* failure ``<01|`` and ``<10|`` remove both qubits. A measured edge qubit that
  gave 1 leaves a Z byproduct on its chain neighbour, which is undone.

On canonical cluster inputs the success branch is the canonical chain of
length ``m + n - 1`` with probability 1/2, and each failure branch leaves the
canonical chains of length ``m - 1`` and ``n - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .cluster_states import ClusterChain, LabelCounter
from .densmat import ATOL_STRUCT, DensityMatrix, apply_local, partial_trace, tensor

K_SUCCESS = np.array([[1, 0, 0, 0], [0, 0, 0, 1]], dtype=complex)
K_FAIL_01 = np.array([[0, 1, 0, 0]], dtype=complex)
K_FAIL_10 = np.array([[0, 0, 1, 0]], dtype=complex)

_completeness = sum(k.conj().T @ k for k in (K_SUCCESS, K_FAIL_01, K_FAIL_10))
assert np.allclose(_completeness, np.eye(4), atol=ATOL_STRUCT, rtol=0)

PAULI_Z = np.diag([1.0, -1.0]).astype(complex)


class FusionError(ValueError):
    pass


class OutcomeKind(str, Enum):
    SUCCESS = "success"
    FAILURE = "failure"


@dataclass(frozen=True, eq=False)
class FusionOutcome:
    """One measurement branch of a fusion attempt.

    ``chains`` has one entry on success and two (remnant of ``a``, remnant of
    ``b``) on failure. ``joint`` is the normalized post-measurement state of
    all surviving qubits (the two remnants' labels concatenated on failure).
    """

    kind: OutcomeKind
    probability: float
    chains: tuple[ClusterChain, ...]
    bits: tuple[int, int] | None
    fuse_id: tuple[int, int]
    joint: DensityMatrix | None = field(default=None, repr=False)

    @property
    def is_success(self) -> bool:
        return self.kind is OutcomeKind.SUCCESS


def _orient(chain: ClusterChain, edge: int, *, last: bool) -> ClusterChain:
    if edge not in chain.endpoints():
        raise FusionError(f"label {edge} is not an endpoint of chain {chain.labels}")
    at_end = chain.labels[-1] == edge
    if at_end != last and len(chain) > 1:
        return chain.reversed()
    return chain


def _split(rho: np.ndarray, m: int, n: int) -> np.ndarray:
    # rows/cols -> (left, x, y, right) with x, y the measured qubits
    left, right = 1 << (m - 1), 1 << (n - 1)
    return rho.reshape(left, 2, 2, right, left, 2, 2, right)


def fuse(
    a: ClusterChain,
    b: ClusterChain,
    edge_a: int,
    edge_b: int,
    counter: LabelCounter | None = None,
) -> list[FusionOutcome]:
    """Fuse ``edge_a`` (an end of ``a``) with ``edge_b`` (an end of ``b``).

    Returns the success branch followed by the ``01`` and ``10`` failure
    branches, each with its Born probability and renormalized state.
    Zero-probability branches are reported with ``joint=None``.
    """
    if a.is_empty or b.is_empty:
        raise FusionError("cannot fuse an empty chain")
    if set(a.labels) & set(b.labels):
        raise FusionError("chains share labels")
    a = _orient(a, edge_a, last=True)
    b = _orient(b, edge_b, last=False)
    m, n = len(a), len(b)
    counter = counter or LabelCounter(max(a.labels + b.labels) + 1)
    fuse_id = (edge_a, edge_b)

    rho = tensor(a.state, b.state).data
    t = _split(rho, m, n)
    left, right = 1 << (m - 1), 1 << (n - 1)
    outcomes: list[FusionOutcome] = []

    # success: keep the x == y block on both sides
    diag = np.arange(2)
    succ = t[:, diag, diag, :, :, :, :, :]  # (L, 2, R, L, 2, 2, R)
    succ = succ[:, :, :, :, diag, diag, :]  # (L, 2, R, L, 2, R)
    d = left * 2 * right
    succ = succ.reshape(d, d)
    p_succ = float(np.trace(succ).real)
    fused = counter()
    labels = a.labels[:-1] + (fused,) + b.labels[1:]
    parents = {**a.parents, **b.parents, fused: (edge_a, edge_b)}
    if p_succ > ATOL_STRUCT:
        state = DensityMatrix(succ / p_succ)
        chain = ClusterChain(labels, state, parents)
        outcomes.append(
            FusionOutcome(OutcomeKind.SUCCESS, p_succ, (chain,), None, fuse_id, state)
        )
    else:
        outcomes.append(FusionOutcome(OutcomeKind.SUCCESS, 0.0, (), None, fuse_id, None))

    for bx, by in ((0, 1), (1, 0)):
        block = t[:, bx, by, :, :, bx, by, :].reshape(left * right, left * right)
        prob = float(np.trace(block).real)
        if prob <= ATOL_STRUCT:
            outcomes.append(
                FusionOutcome(OutcomeKind.FAILURE, max(prob, 0.0), (), (bx, by), fuse_id, None)
            )
            continue
        joint = DensityMatrix(block / prob)
        # byproduct corrections on the neighbours of measured qubits
        if bx == 1 and m >= 2:
            joint = DensityMatrix(apply_local(joint, PAULI_Z, m - 1))
        if by == 1 and n >= 2:
            joint = DensityMatrix(apply_local(joint, PAULI_Z, m))
        rem_a, rem_b = _remnants(joint, a.labels[:-1], b.labels[1:], a.parents, b.parents)
        outcomes.append(
            FusionOutcome(OutcomeKind.FAILURE, prob, (rem_a, rem_b), (bx, by), fuse_id, joint)
        )

    total = sum(o.probability for o in outcomes)
    if abs(total - 1.0) > 1e-10:
        raise FusionError(f"branch probabilities sum to {total}")
    return outcomes


def _remnants(joint, labels_a, labels_b, parents_a, parents_b):
    ma, nb = len(labels_a), len(labels_b)
    if ma == 0:
        rem_a = ClusterChain.empty()
    else:
        rem_a = ClusterChain(
            labels_a, partial_trace(joint, range(ma + 1, ma + nb + 1)), parents_a
        )
    if nb == 0:
        rem_b = ClusterChain.empty()
    else:
        rem_b = ClusterChain(labels_b, partial_trace(joint, range(1, ma + 1)), parents_b)
    return rem_a, rem_b


def success(outcomes: list[FusionOutcome]) -> FusionOutcome:
    return next(o for o in outcomes if o.is_success)


def aggregate_failure(
    outcomes: list[FusionOutcome],
) -> tuple[tuple[ClusterChain, ClusterChain], float]:
    """Mix both failure branches of one fusion into a pair of remnant chains.

    Returns ``((remnant_a, remnant_b), total_failure_probability)``.
    """
    fails = [o for o in outcomes if not o.is_success]
    if len(fails) != 2 or {o.bits for o in fails} != {(0, 1), (1, 0)}:
        raise FusionError("need exactly the 01 and 10 failure branches")
    if fails[0].fuse_id != fails[1].fuse_id:
        raise FusionError("failure branches come from different fusion calls")
    total = fails[0].probability + fails[1].probability
    live = [o for o in fails if o.joint is not None]
    if not live:
        raise FusionError("fusion cannot fail for these inputs")
    ref = live[0]
    mix = sum(o.probability * o.joint.data for o in live) / sum(o.probability for o in live)
    joint = DensityMatrix(mix)
    rem_a, rem_b = ref.chains
    remnants = _remnants(
        joint, rem_a.labels, rem_b.labels, rem_a.parents, rem_b.parents
    )
    return remnants, total
