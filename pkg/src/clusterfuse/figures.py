"""Tabulated data behind the fidelity/negativity figures and parameter sweeps.

Each table is a list of row dicts keyed by column name, first column ``p``.
Columns ending in ``_sim`` come from density-matrix replay, ``_formula``
from the closed forms.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable

import numpy as np

from . import closed_forms as cf
from .cluster_states import ClusterChain, LabelCounter, fresh_primitive, linear_cluster
from .densmat import fidelity_pure, min_pt_eigenvalue, purity
from .fusion import fuse, success
from .noise import check_strength, dephase_all
from .strategies import Binding, Scenario, ScenarioName, compare_methods, run_scenario, scenario_closed_form

FIGURES = ("fig1", "fig2", "fig3-left", "fig3-right", "fig4-left", "fig4-right")

# (chain length, partial-transpose cut) for each negativity curve
NEGATIVITY_CURVES = (
    (2, (1,)),
    (3, (1,)),
    (3, (2,)),
    (4, (1,)),
    (4, (2,)),
    (4, (1, 2)),
    (5, (1,)),
)


def p_grid(p_min: float = 0.0, p_max: float = 1.0, steps: int = 11) -> list[float]:
    check_strength(p_min, "p_min")
    check_strength(p_max, "p_max")
    if p_min > p_max:
        raise ValueError("p_min must not exceed p_max")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if steps == 1:
        return [p_min]
    return [float(x) for x in np.linspace(p_min, p_max, steps)]


@lru_cache(maxsize=256)
def primitive_chain(q: int, p: float) -> ClusterChain:
    """Chain of length ``q`` fused (always successfully) from primitives dephased by ``p``."""
    counter = LabelCounter()
    chain = dephase_all(fresh_primitive(counter), p)
    while len(chain) < q:
        prim = dephase_all(fresh_primitive(counter), p)
        chain = success(fuse(chain, prim, chain.labels[-1], prim.labels[0], counter)).chains[0]
    return chain


def _cut_name(cut) -> str:
    return "".join(str(k) for k in cut)


def fig1(grid) -> list[dict]:
    rows = []
    for p in grid:
        row = {"p": p}
        for q in range(2, 8):
            ch = primitive_chain(q, p)
            row[f"F{q}_sim"] = fidelity_pure(ch.state, linear_cluster(q))
            row[f"F{q}_formula"] = cf.chain_fidelity(q, p)
        rows.append(row)
    return rows


_NEG_FORMULAS: dict[tuple, Callable[[float], float]] = {
    (2, (1,)): cf.rho2_negativity,
    (3, (1,)): cf.rho3_negativity_edge,
    (3, (2,)): cf.rho3_negativity_middle,
}


def fig2(grid) -> list[dict]:
    rows = []
    for p in grid:
        row = {"p": p}
        for q, cut in NEGATIVITY_CURVES:
            key = f"N{q}_pt{_cut_name(cut)}"
            row[f"{key}_sim"] = min_pt_eigenvalue(primitive_chain(q, p).state, cut)
            if (q, cut) in _NEG_FORMULAS:
                row[f"{key}_formula"] = _NEG_FORMULAS[(q, cut)](p)
        rows.append(row)
    return rows


def _scenario_cols(row, tag, scenario, corrected_too=False):
    row[f"{tag}_sim"] = run_scenario(scenario).fidelity
    row[f"{tag}_formula"] = scenario_closed_form(scenario, corrected=False)
    if corrected_too:
        row[f"{tag}_formula_corrected"] = scenario_closed_form(scenario, corrected=True)


def fig4_left(grid) -> list[dict]:
    rows = []
    for p in grid:
        row = {"p": p}
        for tag, name in (
            ("AllSuccess", ScenarioName.METHOD1_ALL_SUCCESS),
            ("Wait", ScenarioName.METHOD1_WAIT),
            ("FailFresh", ScenarioName.METHOD1_FAIL_FRESH),
            ("FailFail", ScenarioName.METHOD1_FAIL_FAIL),
        ):
            _scenario_cols(row, tag, Scenario.uniform(name, p, p1=0.0), tag == "FailFail")
        rows.append(row)
    return rows


def fig4_right(grid) -> list[dict]:
    rows = []
    for p in grid:
        row = {"p": p}
        for tag, name in (
            ("AllSuccess", ScenarioName.METHOD2_ALL_SUCCESS),
            ("Fail3", ScenarioName.METHOD2_FAIL3),
            ("Fail4", ScenarioName.METHOD2_FAIL4),
        ):
            _scenario_cols(row, tag, Scenario.uniform(name, p, p1=0.0))
        row["Fail3_minus_Fail4"] = row["Fail3_sim"] - row["Fail4_sim"]
        rows.append(row)
    return rows


def figure_rows(fig_id: str, grid=None) -> list[dict]:
    grid = p_grid() if grid is None else list(grid)
    if fig_id == "fig1":
        return fig1(grid)
    if fig_id == "fig2":
        return fig2(grid)
    if fig_id == "fig3-left":
        return compare_methods(grid, Binding.EQUAL)
    if fig_id == "fig3-right":
        return compare_methods(grid, Binding.FRESH_PRIMITIVES)
    if fig_id == "fig4-left":
        return fig4_left(grid)
    if fig_id == "fig4-right":
        return fig4_right(grid)
    raise ValueError(f"unknown figure {fig_id!r}; choose from {', '.join(FIGURES)}")


# --- sweep quantities -----------------------------------------------------------------
#
# Spelled ``name`` or ``name:key=value,key=value``. Every scenario strength not
# given explicitly is set to the swept p.


def parse_quantity(spec: str) -> tuple[str, dict[str, str]]:
    name, _, rest = spec.partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            if not eq or not key:
                raise ValueError(f"bad parameter {item!r} in quantity {spec!r}")
            params[key.strip()] = value.strip()
    return name.strip(), params


def _q(params, default=None) -> int:
    if "q" not in params and default is None:
        raise ValueError("quantity needs q=<chain length>")
    return int(params.get("q", default))


def _cut(params) -> tuple[int, ...]:
    return tuple(int(c) for c in params.get("cut", "1").split("+"))


def _scenario(params, p) -> Scenario:
    name = params.get("name")
    if name is None:
        raise ValueError("scenario quantity needs name=<scenario>")
    p1 = float(params["p1"]) if "p1" in params else None
    s = Scenario.uniform(name, p, p1=p1)
    overrides = {k: float(v) for k, v in params.items() if k.startswith("p") and k != "p1"}
    if overrides:
        s = Scenario(s.name, {**s.strengths, **overrides})
    return s


def _scenario_formula(params, p):
    v = scenario_closed_form(_scenario(params, p), corrected=params.get("corrected", "1") != "0")
    return float("nan") if v is None else v


QUANTITIES: dict[str, Callable[[dict, float], float]] = {
    "chain-fidelity-formula": lambda k, p: cf.chain_fidelity(_q(k), p),
    "eq2": lambda k, p: cf.chain_fidelity(_q(k), p),  # short alias of the line above
    "chain-fidelity": lambda k, p: fidelity_pure(
        primitive_chain(_q(k), p).state, linear_cluster(_q(k))
    ),
    "chain-purity": lambda k, p: purity(primitive_chain(_q(k), p).state),
    "chain-negativity": lambda k, p: min_pt_eigenvalue(primitive_chain(_q(k), p).state, _cut(k)),
    "rho2-fidelity": lambda k, p: cf.rho2_metrics(p)[0],
    "rho2-purity": lambda k, p: cf.rho2_metrics(p)[1],
    "rho2-negativity": lambda k, p: cf.rho2_metrics(p)[2],
    "rho3-fidelity": lambda k, p: cf.rho3_metrics(p)[0],
    "rho3-negativity-edge": lambda k, p: cf.rho3_metrics(p)[1],
    "rho3-negativity-middle": lambda k, p: cf.rho3_metrics(p)[2],
    "scenario": lambda k, p: run_scenario(_scenario(k, p)).fidelity,
    "scenario-formula": _scenario_formula,
}


def sweep_rows(grid, quantities: list[str]) -> list[dict]:
    if not quantities:
        raise ValueError("no quantities requested")
    parsed = []
    for spec in quantities:
        name, params = parse_quantity(spec)
        if name not in QUANTITIES:
            raise ValueError(f"unknown quantity {name!r}; choose from {', '.join(QUANTITIES)}")
        parsed.append((spec, QUANTITIES[name], params))
    rows = []
    for p in grid:
        row = {"p": p}
        for spec, fn, params in parsed:
            row[spec] = fn(params, p)
        rows.append(row)
    return rows
