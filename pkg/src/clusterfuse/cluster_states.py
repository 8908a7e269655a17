"""Canonical linear cluster states and chain bookkeeping."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .densmat import MAX_QUBITS, DensityMatrix, PureState


def linear_cluster(n: int) -> PureState:
    """CZ gates between neighbours applied to ``|+>^n``.

    The amplitude of ``|b1...bn>`` is ``(-1)^(sum b_i b_{i+1}) / 2^(n/2)``.
    """
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"chain length must be in 1..{MAX_QUBITS}, got {n}")
    idx = np.arange(1 << n)
    bits = (idx[:, None] >> np.arange(n - 1, -1, -1)) & 1
    parity = np.sum(bits[:, :-1] & bits[:, 1:], axis=1) & 1
    amps = np.where(parity == 1, -1.0, 1.0) / np.sqrt(1 << n)
    return PureState(amps.astype(complex))


class LabelCounter:
    """Monotonic label source; one per simulation run."""

    def __init__(self, start: int = 0):
        self._it = itertools.count(start)

    def __call__(self) -> int:
        return next(self._it)

    def take(self, k: int) -> list[int]:
        return [next(self._it) for _ in range(k)]


@dataclass(frozen=True, eq=False)
class ClusterChain:
    """Qubit labels in chain order, and the state with qubits in that same order.

    ``parents`` maps a fused qubit's label to the two labels it replaced.
    """

    labels: tuple[int, ...]
    state: DensityMatrix
    parents: dict = field(default_factory=dict)

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate labels in chain {labels}")
        if self.state.qubits != len(labels) and not (len(labels) == 0 and self.state.dim == 1):
            raise ValueError(
                f"chain has {len(labels)} labels but state has {self.state.qubits} qubits"
            )

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def is_empty(self) -> bool:
        return len(self.labels) == 0

    def position(self, label: int) -> int:
        """1-based qubit index of ``label`` in the state."""
        try:
            return self.labels.index(label) + 1
        except ValueError:
            raise KeyError(f"label {label} not in chain {self.labels}") from None

    def endpoints(self) -> tuple[int, ...]:
        if not self.labels:
            return ()
        return (self.labels[0], self.labels[-1])

    def reversed(self) -> "ClusterChain":
        from .densmat import permute_qubits

        q = len(self.labels)
        if q <= 1:
            return self
        return ClusterChain(
            self.labels[::-1], permute_qubits(self.state, list(range(q, 0, -1))), self.parents
        )

    @classmethod
    def empty(cls) -> "ClusterChain":
        return cls((), DensityMatrix(np.ones((1, 1))))


def canonical_chain(labels: Sequence[int]) -> ClusterChain:
    return ClusterChain(tuple(labels), DensityMatrix.from_pure(linear_cluster(len(labels))))


def fresh_primitive(counter: LabelCounter | None = None) -> ClusterChain:
    """Two-qubit cluster ``(|00> + |01> + |10> - |11>)/2`` with fresh labels."""
    counter = counter or _default_counter
    return canonical_chain(counter.take(2))


_default_counter = LabelCounter()
