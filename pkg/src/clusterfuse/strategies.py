"""Five-qubit construction scenarios and a seeded Monte Carlo engine.

Scenario storylines (``D(p)`` = store every qubit of a cluster at strength p,
``+`` = fusion, fresh primitives are stored at ``p1`` first):

Method 1 (fuse two 3-chains)
    AllSuccess  two 3-chains, each D(p2), fused.
    Wait        one 3-chain D(p_wait) then both D(p2), fused.
    FailFresh   the Wait pair fails; the two 2-chain remnants D(p3) are fused
                into a recycled 3-chain (waited half first), which after D(p4)
                has its other end fused with a fresh 3-chain stored D(p4).
    FailFail    two recycled 3-chains built as in FailFresh, both D(p4),
                fused tail (non-waited end) to head (waited end).

Method 2 (grow one chain by primitives, always at the newest end)
    AllSuccess  3-chain D(p2) + primitive, 4-chain D(p3) + primitive.
    Fail3       second fusion fails; the 2-chain remnant is regrown.
                The main chain is stored D(p1) ... D(p5) before the five
                attempts.
    Fail4       third fusion, tried at the chain's older end, fails; the
                3-chain remnant is regrown at its newest end.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from . import closed_forms as cf
from .cluster_states import ClusterChain, LabelCounter, fresh_primitive, linear_cluster
from .coherence import CoherenceChain, fuse_failure, fuse_success
from .densmat import DensityMatrix, fidelity_pure
from .fusion import aggregate_failure, fuse, success
from .noise import check_strength, dephase_all

INTERVALS = ("p1", "p2", "p3", "p4", "p5", "p_wait")


class ScenarioName(str, Enum):
    METHOD1_ALL_SUCCESS = "Method1AllSuccess"
    METHOD2_ALL_SUCCESS = "Method2AllSuccess"
    METHOD1_WAIT = "Method1Wait"
    METHOD1_FAIL_FRESH = "Method1FailFresh"
    METHOD1_FAIL_FAIL = "Method1FailFail"
    METHOD2_FAIL3 = "Method2Fail3"
    METHOD2_FAIL4 = "Method2Fail4"


REQUIRED: dict[ScenarioName, tuple[str, ...]] = {
    ScenarioName.METHOD1_ALL_SUCCESS: ("p1", "p2"),
    ScenarioName.METHOD2_ALL_SUCCESS: ("p1", "p2", "p3"),
    ScenarioName.METHOD1_WAIT: ("p1", "p2", "p_wait"),
    ScenarioName.METHOD1_FAIL_FRESH: ("p1", "p2", "p3", "p4", "p_wait"),
    ScenarioName.METHOD1_FAIL_FAIL: ("p1", "p2", "p3", "p4", "p_wait"),
    ScenarioName.METHOD2_FAIL3: ("p1", "p2", "p3", "p4", "p5"),
    ScenarioName.METHOD2_FAIL4: ("p1", "p2", "p3", "p4", "p5"),
}


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    name: ScenarioName
    strengths: Mapping[str, float]

    def __post_init__(self):
        try:
            name = ScenarioName(self.name)
        except ValueError:
            raise ScenarioError(f"unknown scenario {self.name!r}") from None
        object.__setattr__(self, "name", name)
        strengths = dict(self.strengths)
        unknown = set(strengths) - set(INTERVALS)
        if unknown:
            raise ScenarioError(f"unknown strength names {sorted(unknown)}")
        missing = [k for k in REQUIRED[name] if strengths.get(k) is None]
        if missing:
            raise ScenarioError(f"{name.value} needs strengths {missing}")
        clean = {k: check_strength(strengths[k], k) for k in REQUIRED[name]}
        object.__setattr__(self, "strengths", clean)

    @classmethod
    def uniform(cls, name: ScenarioName | str, p: float, p1: float | None = None) -> "Scenario":
        """Every required strength equal to ``p`` (``p1`` overridable)."""
        name = ScenarioName(name)
        s = {k: p for k in REQUIRED[name]}
        if p1 is not None:
            s["p1"] = p1
        return cls(name, s)


@dataclass(frozen=True, eq=False)
class ScenarioResult:
    chain: ClusterChain
    fidelity: float
    branch_probability: float

    @property
    def state(self) -> DensityMatrix:
        return self.chain.state


class _Builder:
    """Tracks labels and the product of followed branch probabilities."""

    def __init__(self, strengths: Mapping[str, float]):
        self.s = strengths
        self.counter = LabelCounter()
        self.prob = 1.0

    def primitive(self) -> ClusterChain:
        return dephase_all(fresh_primitive(self.counter), self.s["p1"])

    def store(self, chain: ClusterChain, *keys: str) -> ClusterChain:
        for k in keys:
            chain = dephase_all(chain, self.s[k])
        return chain

    def join(self, a: ClusterChain, b: ClusterChain, edge_a=None, edge_b=None) -> ClusterChain:
        edge_a = a.labels[-1] if edge_a is None else edge_a
        edge_b = b.labels[0] if edge_b is None else edge_b
        out = success(fuse(a, b, edge_a, edge_b, self.counter))
        self.prob *= out.probability
        expected = len(a) + len(b) - 1
        if len(out.chains[0]) != expected:
            raise ScenarioError(f"fused length {len(out.chains[0])} != {expected}")
        return out.chains[0]

    def fail(self, a: ClusterChain, b: ClusterChain, edge_a=None, edge_b=None):
        edge_a = a.labels[-1] if edge_a is None else edge_a
        edge_b = b.labels[0] if edge_b is None else edge_b
        (ra, rb), prob = aggregate_failure(fuse(a, b, edge_a, edge_b, self.counter))
        self.prob *= prob
        if (len(ra), len(rb)) != (len(a) - 1, len(b) - 1):
            raise ScenarioError("failure remnants have the wrong lengths")
        return ra, rb

    def three(self) -> ClusterChain:
        return self.join(self.primitive(), self.primitive())

    def recycled_three(self) -> ClusterChain:
        x = self.store(self.three(), "p_wait", "p2")
        y = self.store(self.three(), "p2")
        rx, ry = self.fail(x, y)
        # labels run from x's surviving end to y's, so the waited half comes first
        return self.join(self.store(rx, "p3"), self.store(ry, "p3"))


def _build(name: ScenarioName, b: _Builder) -> ClusterChain:
    if name is ScenarioName.METHOD1_ALL_SUCCESS:
        return b.join(b.store(b.three(), "p2"), b.store(b.three(), "p2"))
    if name is ScenarioName.METHOD1_WAIT:
        return b.join(b.store(b.three(), "p_wait", "p2"), b.store(b.three(), "p2"))
    if name is ScenarioName.METHOD1_FAIL_FRESH:
        r = b.store(b.recycled_three(), "p4")
        return b.join(r, b.store(b.three(), "p4"))
    if name is ScenarioName.METHOD1_FAIL_FAIL:
        r1 = b.store(b.recycled_three(), "p4")
        r2 = b.store(b.recycled_three(), "p4")
        return b.join(r1, r2)
    if name is ScenarioName.METHOD2_ALL_SUCCESS:
        c = b.join(b.store(b.three(), "p2"), b.primitive())
        return b.join(b.store(c, "p3"), b.primitive())
    if name is ScenarioName.METHOD2_FAIL3:
        main = b.three()
        main, _ = b.fail(b.store(main, "p2"), b.primitive())
        for k in ("p3", "p4", "p5"):
            main = b.join(b.store(main, k), b.primitive())
        return main
    if name is ScenarioName.METHOD2_FAIL4:
        main = b.join(b.store(b.three(), "p2"), b.primitive())
        main = b.store(main, "p3")
        _, main = b.fail(b.primitive(), main, edge_b=main.labels[0])
        for k in ("p4", "p5"):
            main = b.join(b.store(main, k), b.primitive())
        return main
    raise ScenarioError(f"no storyline for {name}")


def run_scenario(s: Scenario) -> ScenarioResult:
    """Replay a scenario with density matrices; fidelity is against the 5-chain."""
    b = _Builder(s.strengths)
    chain = _build(s.name, b)
    if len(chain) != 5:
        raise ScenarioError(f"{s.name.value} produced a chain of length {len(chain)}")
    fid = fidelity_pure(chain.state, linear_cluster(5))
    return ScenarioResult(chain, fid, b.prob)


def scenario_closed_form(s: Scenario, corrected: bool = True) -> float | None:
    """Matching analytic fidelity, or None where none exists.

    Failure-scenario expressions assume undephased primitives and return None
    when ``p1 != 0``. With ``corrected=False`` the printed FailFail expression
    is returned instead of the product form that matches simulation.
    """
    st = s.strengths
    n = s.name
    if n is ScenarioName.METHOD1_ALL_SUCCESS:
        return cf.f33(st["p1"], st["p2"])
    if n is ScenarioName.METHOD2_ALL_SUCCESS:
        return cf.f24(st["p1"], st["p2"], st["p3"])
    if st["p1"] != 0:
        return None
    if n is ScenarioName.METHOD1_WAIT:
        return cf.f33_wait(st["p2"], st["p_wait"])
    if n is ScenarioName.METHOD1_FAIL_FRESH:
        return cf.f_fail_fresh(st["p2"], st["p3"], st["p4"], st["p_wait"])
    if n is ScenarioName.METHOD1_FAIL_FAIL:
        f = cf.f_fail_fail_corrected if corrected else cf.f_fail_fail
        return f(st["p2"], st["p3"], st["p4"], st["p_wait"])
    if n is ScenarioName.METHOD2_FAIL3:
        return cf.f_3fail(st["p2"], st["p3"], st["p4"], st["p5"])
    return cf.f_4fail(st["p2"], st["p3"], st["p4"], st["p5"])


# --- Monte Carlo -----------------------------------------------------------------


@dataclass(frozen=True)
class McPolicy:
    """``p1`` stores each fresh primitive once; ``p_store`` hits every pooled
    cluster before each fusion attempt."""

    method: int = 1
    recycle: bool = True
    max_attempts: int = 50
    p1: float = 0.0
    p_store: float = 0.0

    def __post_init__(self):
        if self.method not in (1, 2):
            raise ValueError(f"method must be 1 or 2, got {self.method}")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be positive")
        check_strength(self.p1, "p1")
        check_strength(self.p_store, "p_store")


@dataclass
class McReport:
    samples: int
    seed: int
    successes: int
    success_rate: float
    mean_fidelity: float
    fidelity_histogram: list[int]
    histogram_edges: list[float]
    primitives_consumed: dict[int, int]
    fusion_attempts: int
    fusion_successes: int
    per_fusion_success_rate: float
    aborted: int
    engine: str
    policy: McPolicy = field(repr=False, default=None)

    def success_rate_stderr(self) -> float:
        r = self.success_rate
        return math.sqrt(r * (1 - r) / self.samples)


class _CoherenceOps:
    def __init__(self, policy: McPolicy):
        self.policy = policy

    def primitive(self):
        return CoherenceChain.fresh(2).dephase(self.policy.p1)

    def store(self, chain, p):
        return chain.dephase(p)

    def fuse(self, a, b):
        return fuse_success(a, b), fuse_failure(a, b), 0.5

    def fidelity(self, chain):
        return chain.fidelity()


class _DensityOps:
    def __init__(self, policy: McPolicy):
        self.policy = policy
        self.counter = LabelCounter()

    def primitive(self):
        return dephase_all(fresh_primitive(self.counter), self.policy.p1)

    def store(self, chain, p):
        return dephase_all(chain, p)

    def fuse(self, a, b):
        outs = fuse(a, b, a.labels[-1], b.labels[0], self.counter)
        remnants, _ = aggregate_failure(outs)
        ok = success(outs)
        return ok.chains[0], remnants, ok.probability

    def fidelity(self, chain):
        return fidelity_pure(chain.state, linear_cluster(len(chain)))


@dataclass
class _Tally:
    attempts: int = 0
    successes: int = 0
    primitives: int = 0


def _attempt(ops, rng, tally, a, b):
    tally.attempts += 1
    ok, remnants, p_ok = ops.fuse(a, b)
    if rng.random() < p_ok:
        tally.successes += 1
        return ok, None
    return None, remnants


def _sample_method1(policy, ops, rng, tally):
    pool: list = []  # 3-chains and recycled 2-chains, oldest first

    def prim():
        tally.primitives += 1
        return ops.primitive()

    while tally.attempts < policy.max_attempts:
        pool = [ops.store(c, policy.p_store) for c in pool]
        threes = [c for c in pool if len(c) == 3]
        twos = [c for c in pool if len(c) == 2]
        if len(threes) >= 2:
            x, y = threes[:2]
            pool = [c for c in pool if c is not x and c is not y]
            ok, rem = _attempt(ops, rng, tally, x, y)
            if ok is not None:
                return ok
            if not policy.recycle:
                return None
            pool.extend(rem)
        elif len(twos) >= 2:
            x, y = twos[:2]
            pool = [c for c in pool if c is not x and c is not y]
            ok, _ = _attempt(ops, rng, tally, x, y)
            if ok is not None:
                pool.append(ok)
        else:
            ok, _ = _attempt(ops, rng, tally, prim(), prim())
            if ok is not None:
                pool.append(ok)
            elif not policy.recycle:
                return None
    return None


def _sample_method2(policy, ops, rng, tally):
    main = None

    def prim():
        tally.primitives += 1
        return ops.primitive()

    while tally.attempts < policy.max_attempts:
        if main is None:
            ok, _ = _attempt(ops, rng, tally, prim(), prim())
            if ok is None and not policy.recycle:
                return None
            main = ok
            continue
        main = ops.store(main, policy.p_store)
        ok, rem = _attempt(ops, rng, tally, main, prim())
        if ok is not None:
            if len(ok) == 5:
                return ok
            main = ok
        elif not policy.recycle:
            return None
        else:
            main = rem[0] if len(rem[0]) >= 2 else None
    return None


def sample_streams(seed: int, samples: int) -> list[np.random.Generator]:
    """Sample ``i`` draws from child ``i`` of ``SeedSequence(seed)``."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(samples)]


def monte_carlo(
    policy: McPolicy,
    samples: int,
    seed: int,
    *,
    engine: str = "coherence",
    bins: int = 20,
) -> McReport:
    """Replay ``samples`` constructions with fair-coin fusion outcomes.

    ``engine="density"`` replays full density matrices; ``"coherence"`` uses
    the exact per-qubit bookkeeping and is much faster.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if engine == "coherence":
        ops = _CoherenceOps(policy)
    elif engine == "density":
        ops = _DensityOps(policy)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    run = _sample_method1 if policy.method == 1 else _sample_method2

    fids: list[float] = []
    consumed: Counter[int] = Counter()
    attempts = fusion_ok = aborted = 0
    for rng in sample_streams(seed, samples):
        tally = _Tally()
        chain = run(policy, ops, rng, tally)
        attempts += tally.attempts
        fusion_ok += tally.successes
        consumed[tally.primitives] += 1
        if chain is None:
            if tally.attempts >= policy.max_attempts:
                aborted += 1
            continue
        fids.append(ops.fidelity(chain))

    hist, edges = np.histogram(fids, bins=bins, range=(0.0, 1.0))
    return McReport(
        samples=samples,
        seed=seed,
        successes=len(fids),
        success_rate=len(fids) / samples,
        mean_fidelity=float(np.mean(fids)) if fids else float("nan"),
        fidelity_histogram=[int(h) for h in hist],
        histogram_edges=[float(e) for e in edges],
        primitives_consumed=dict(sorted(consumed.items())),
        fusion_attempts=attempts,
        fusion_successes=fusion_ok,
        per_fusion_success_rate=fusion_ok / attempts if attempts else float("nan"),
        aborted=aborted,
        engine=engine,
        policy=policy,
    )


# --- method comparison --------------------------------------------------------------


class Binding(str, Enum):
    EQUAL = "equal"
    FRESH_PRIMITIVES = "fresh-primitives"


def compare_methods(p_grid: Sequence[float], binding: Binding | str = Binding.EQUAL) -> list[dict]:
    """Simulated all-success fidelities of both methods per grid point.

    ``equal``: p1 = p2 = p3 = p. ``fresh-primitives``: p1 = 0, p2 = p3 = p.
    """
    binding = Binding(binding)
    rows = []
    for p in p_grid:
        p = check_strength(p)
        p1 = p if binding is Binding.EQUAL else 0.0
        m1 = run_scenario(Scenario(ScenarioName.METHOD1_ALL_SUCCESS, {"p1": p1, "p2": p}))
        m2 = run_scenario(
            Scenario(ScenarioName.METHOD2_ALL_SUCCESS, {"p1": p1, "p2": p, "p3": p})
        )
        rows.append(
            {
                "p": p,
                "F33_sim": m1.fidelity,
                "F24_sim": m2.fidelity,
                "difference": m1.fidelity - m2.fidelity,
                "F33_formula": cf.f33(p1, p),
                "F24_formula": cf.f24(p1, p, p),
            }
        )
    return rows
