"""Per-qubit coherence bookkeeping for dephased linear clusters.

Computational-basis dephasing of strength ``p`` multiplies every off-diagonal
element by ``sqrt(1-p)`` per differing bit, which is the same as an
independent Z error on each qubit. Z errors on a cluster map it onto
orthogonal graph-basis states, fusion and edge measurements commute with
them, and a fused qubit inherits the errors of both parents. A chain is then
fully described by the surviving coherence ``c_j`` of each qubit and its
fidelity with the ideal chain is ``prod_j (1 + sqrt(c_j)) / 2``.

This is exact for the operations used here and is the fast engine behind the
Monte Carlo runs; the density-matrix path is the reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .noise import check_strength


@dataclass(frozen=True)
class CoherenceChain:
    coherences: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.coherences)

    @classmethod
    def fresh(cls, n: int = 2) -> "CoherenceChain":
        return cls((1.0,) * n)

    def dephase(self, p: float) -> "CoherenceChain":
        keep = 1.0 - check_strength(p)
        return CoherenceChain(tuple(c * keep for c in self.coherences))

    def reversed(self) -> "CoherenceChain":
        return CoherenceChain(self.coherences[::-1])

    def fidelity(self) -> float:
        return math.prod((1.0 + math.sqrt(c)) / 2.0 for c in self.coherences)


def fuse_success(a: CoherenceChain, b: CoherenceChain) -> CoherenceChain:
    """Join the last qubit of ``a`` to the first qubit of ``b``."""
    c = a.coherences
    d = b.coherences
    return CoherenceChain(c[:-1] + (c[-1] * d[0],) + d[1:])


def fuse_failure(a: CoherenceChain, b: CoherenceChain) -> tuple[CoherenceChain, CoherenceChain]:
    return CoherenceChain(a.coherences[:-1]), CoherenceChain(b.coherences[1:])
