"""Analytic fidelity and negativity expressions for fused dephased clusters.

Arguments ``p*`` are dephasing strengths; internally every expression is
written in the surviving-coherence variables ``t = 1 - p``.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Callable

from .noise import check_strength

SQRT = math.sqrt


def chain_fidelity(q: int, p: float) -> float:
    """Fidelity of a q-qubit chain fused from primitives each dephased by ``p``."""
    if not 2 <= q <= 10:
        raise ValueError(f"q must be in 2..10, got {q}")
    p = check_strength(p)
    return abs((2 + 2 * SQRT(1 - p) - p) * (p - 2) ** (q - 2) / 2**q)


def rho2_fidelity(p: float) -> float:
    return (2 + 2 * SQRT(1 - p) - p) / 4


def rho2_purity(p: float) -> float:
    return (p - 2) ** 2 / 4


def rho2_negativity(p: float) -> float:
    return (-2 * SQRT(1 - p) + p) / 4


def rho3_fidelity(p: float) -> float:
    return abs((2 + 2 * SQRT(1 - p) - p) * (p - 2) / 8)


def rho3_negativity_edge(p: float) -> float:
    """Partial transpose on qubit 1 (or 3) of the fused 3-chain."""
    return (-2 * (1 + (1 - p) ** 1.5) + p * (4 - p)) / 8


def rho3_negativity_middle(p: float) -> float:
    """Partial transpose on qubit 2; square root taken over ``(1-p)(p-2)^2``."""
    return (-2 * SQRT((1 - p) * (p - 2) ** 2) + 2 * p - p * p) / 8


def rho3_negativity_middle_literal(p: float) -> float:
    """Alternate reading with the root on ``(1-p)`` alone.

    Gives -1 at p=0, below the -1/2 bound for any two-qubit-like cut, and is
    kept only to document why the other grouping was chosen.
    """
    return (-2 * SQRT(1 - p) * (p - 2) ** 2 + 2 * p - p * p) / 8


def rho2_metrics(p: float) -> tuple[float, float, float]:
    """(fidelity, purity, min partial-transpose eigenvalue) of a dephased primitive."""
    p = check_strength(p)
    return rho2_fidelity(p), rho2_purity(p), rho2_negativity(p)


def rho3_metrics(p: float) -> tuple[float, float, float]:
    """(fidelity, edge negativity, middle negativity) of the fused 3-chain."""
    p = check_strength(p)
    return rho3_fidelity(p), rho3_negativity_edge(p), rho3_negativity_middle(p)


def bisect_root(f: Callable[[float], float], lo: float = 0.0, hi: float = 1.0, tol: float = 1e-10) -> float:
    """Sign-change root of ``f`` on ``[lo, hi]`` by bisection."""
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValueError("no sign change on the interval")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


# --- five-qubit construction, no failures --------------------------------------


class Method(str, Enum):
    M33 = "M33"
    M24 = "M24"


def f33(p1: float, p2: float) -> float:
    """Two 3-chains (primitives at ``p1``) stored at ``p2`` then fused.

    The printed expression lacks its final closing parenthesis; it is closed
    at the end, which is the only grouping with F = 1 at zero dephasing.
    """
    a, b = 1 - check_strength(p1), 1 - check_strength(p2)
    s = SQRT
    return (
        1
        + 2 * a**3.5 * b**2.5
        + a**4 * b**3
        + 2 * s(a * b)
        + 2 * a**2.5 * (b**1.5 + b**2)
        + 2 * a**3 * (b**2 + b**2.5)
        + 2 * a * (s(b) + b) * (1 + s(a * b))
        + a**2 * b * (1 + b + 2 * s(a) * b)
        + 2 * a**1.5 * (b + 2 * s(a) * b**1.5)
    ) / 32


def f24(p1: float, p2: float, p3: float) -> float:
    """3-chain at ``p2`` + primitive, then 4-chain at ``p3`` + primitive; primitives at ``p1``."""
    a = 1 - check_strength(p1)
    b = 1 - check_strength(p2)
    c = 1 - check_strength(p3)
    s = SQRT
    inner = (
        a**1.5 * (s(b) + b) * c
        + a * (2 * b + s(a * b)) * c
        + a**3 * b**1.5 * c**2
        + s(a * c)
        + s(a * b * c)
        + s(a) * (s(a * b) * c + s(b * c))
        + a**2 * b * c * (2 * s(c) + s(a * c) + s(b * c))
    )
    return (1 + s(a)) * (1 + s(a * b * c) + s(a) * inner) / 32


def construction_fidelity(method: Method | str, p1: float, p2: float, p3: float = 0.0) -> float:
    method = Method(method)
    if method is Method.M33:
        return f33(p1, p2)
    return f24(p1, p2, p3)


# --- five-qubit construction with one failure (primitives undephased) ----------


class FailureScenario(str, Enum):
    WAIT33 = "Wait33"
    FAIL_FRESH = "FailFresh"
    FAIL_FAIL = "FailFail"
    FAIL3 = "Fail3"
    FAIL4 = "Fail4"


def f33_wait(p2: float, p_wait: float) -> float:
    b, w = 1 - check_strength(p2), 1 - check_strength(p_wait)
    s = SQRT
    return (
        (1 + s(b)) ** 2
        * (1 + b * w + 2 * s(b * w) + b * s(w) + b**1.5 * w * (2 + s(b * w)))
        / 32
    )


def f_fail_fresh(p2: float, p3: float, p4: float, p_wait: float) -> float:
    b, c = 1 - check_strength(p2), 1 - check_strength(p3)
    d, w = 1 - check_strength(p4), 1 - check_strength(p_wait)
    s = SQRT
    bc = b * c
    return (
        (1 + s(d)) ** 2
        * (
            1
            + s(bc) * d
            + bc**1.5 * d * w
            + bc**2 * d**2 * w
            + (bc + s(bc)) * s(bc * w) * d**1.5
            + bc * s(d * w)
            + s(bc * d * w)
        )
        / 32
    )


def f_fail_fail(p2: float, p3: float, p4: float, p_wait: float) -> float:
    b, c = 1 - check_strength(p2), 1 - check_strength(p3)
    d, w = 1 - check_strength(p4), 1 - check_strength(p_wait)
    s = SQRT
    bc = b * c
    # the printed 1/sqrt(bc) prefactor is distributed so bc = 0 stays finite
    body = (
        bc**3.5 * (1 + s(bc * d)) * d**2.5 * w**2
        + bc**2.5 * d**2 * w * (1 + 2 * s(bc * w) + (2 + s(bc)) * s(bc * d * w))
        + bc**1.5 * d * s(w) * (2 + s(d) + s(d * w) + 2 * s(bc * d * w))
        + (
            1
            + s(bc * d)
            + 2 * bc * s(d * w)
            + s(bc * d * w)
            + 2 * bc * d * s(w)
            + bc**1.5 * d * w
            + bc**2
            * d
            * w
            * (
                1
                + s(bc)
                + 2 * s(bc * d)
                + s(bc) * d * (1 + s(bc * w))
                + bc * s(d) * (1 + s(w))
                + bc * d * (1 + s(w))
            )
        )
    )
    return body / 32


def f_fail_fail_corrected(p2: float, p3: float, p4: float, p_wait: float) -> float:
    """Product form for two recycled 3-chains matching the density-matrix replay.

    The printed expression does not factor into per-qubit terms, which every
    fidelity under pure dephasing must. This version agrees with it on the
    constant, low-order and top-degree terms.
    Qubit coherences (in chain order): ``bcdw, b^2c^2dw, b^2c^2d^2w, b^2c^2dw, bcd``
    with ``b, c, d, w = 1 - p2, 1 - p3, 1 - p4, 1 - p_wait``.
    """
    b, c = 1 - check_strength(p2), 1 - check_strength(p3)
    d, w = 1 - check_strength(p4), 1 - check_strength(p_wait)
    waited_end = b * c * d * w
    middle = b * b * c * c * d * w
    plain_end = b * c * d
    cohs = (waited_end, middle, plain_end * waited_end, middle, plain_end)
    return math.prod((1 + SQRT(x)) / 2 for x in cohs)


def f_3fail(p2: float, p3: float, p4: float, p5: float) -> float:
    b, c = 1 - check_strength(p2), 1 - check_strength(p3)
    d, e = 1 - check_strength(p4), 1 - check_strength(p5)
    s = SQRT
    bc = b * c
    return (
        (16 * bc + 5 * s(bc)) * d * e**1.5
        + 8 * bc * d**1.5 * e**2
        + 2 * s(e) * (8 + d * s(bc * e))
        + 2 * (8 + 8 * s(d * e) + 16 * s(bc * d * e) + s(bc * d) * e + s(bc) * d * e)
        + e
        * (
            16 * s(d)
            + 2 * (15 * s(bc * d) + s(bc) * d + 2 * s(bc * e) * d)
            + d * (26 * s(bc) + 23 * s(bc * e) + 8 * bc * (2 + 2 * s(d * e) + s(d) * e))
        )
    ) / 256


def f_4fail(p2: float, p3: float, p4: float, p5: float) -> float:
    b, c = 1 - check_strength(p2), 1 - check_strength(p3)
    d, e = 1 - check_strength(p4), 1 - check_strength(p5)
    s = SQRT
    cd = c * d
    return (
        8
        + 8 * s(e)
        + (3 * s(b) + 8 * b) * cd * e**1.5
        + 4 * b * cd**1.5 * e**2
        + 8 * s(cd * e)
        + 16 * s(b * cd * e)
        + s(b * cd) * e
        + e
        * (
            8 * s(cd)
            + 15 * s(b * cd)
            + cd * (16 * s(b) + 13 * s(b * e) + 4 * b * (2 + 2 * s(cd * e) + s(cd) * e))
        )
    ) / 128


def failure_fidelity(
    scenario: FailureScenario | str,
    p2: float = 0.0,
    p3: float = 0.0,
    p4: float = 0.0,
    p5: float = 0.0,
    p_wait: float = 0.0,
) -> float:
    """Printed failure-scenario fidelities; unused strengths are ignored."""
    scenario = FailureScenario(scenario)
    if scenario is FailureScenario.WAIT33:
        return f33_wait(p2, p_wait)
    if scenario is FailureScenario.FAIL_FRESH:
        return f_fail_fresh(p2, p3, p4, p_wait)
    if scenario is FailureScenario.FAIL_FAIL:
        return f_fail_fail(p2, p3, p4, p_wait)
    if scenario is FailureScenario.FAIL3:
        return f_3fail(p2, p3, p4, p5)
    return f_4fail(p2, p3, p4, p5)
