"""Command-line front end: figure data, scenarios, sweeps and Monte Carlo runs."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import sys
from pathlib import Path

import click

from . import __version__
from .figures import FIGURES, figure_rows, p_grid, sweep_rows
from .strategies import (
    INTERVALS,
    Binding,
    McPolicy,
    Scenario,
    ScenarioName,
    compare_methods,
    monte_carlo,
    run_scenario,
    scenario_closed_form,
)

SIG_DIGITS = 12


def _num(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    return float(f"{float(x):.{SIG_DIGITS}g}")


def _csv_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return f"{x:.{SIG_DIGITS}g}"
    return str(x)


def _json_value(x):
    if isinstance(x, (list, tuple)):
        return [_json_value(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _json_value(v) for k, v in x.items()}
    x = _num(x)
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def render(rows: list[dict], fmt: str, metadata: dict) -> str:
    if fmt == "json":
        doc = {"metadata": _json_value(metadata), "rows": [_json_value(r) for r in rows]}
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    fields = list(rows[0]) if rows else []
    for r in rows[1:]:
        fields += [k for k in r if k not in fields]
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for r in rows:
        writer.writerow([_csv_cell(r.get(k)) for k in fields])
    return buf.getvalue()


def emit(rows: list[dict], out: str, fmt: str, metadata: dict) -> None:
    text = render(rows, fmt, {"tool": "clusterfuse", "version": __version__, **metadata})
    if out == "-":
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise click.ClickException(f"cannot write {out}: {exc}") from exc


def scenario_name(raw: str) -> ScenarioName:
    """Accept ``Method1FailFresh`` or ``method1-fail-fresh``."""
    try:
        return ScenarioName(raw)
    except ValueError:
        pass
    camel = "".join(part[:1].upper() + part[1:] for part in raw.split("-"))
    try:
        return ScenarioName(camel)
    except ValueError:
        raise click.BadParameter(
            f"unknown scenario {raw!r}; choose from {', '.join(n.value for n in ScenarioName)}"
        ) from None


out_option = click.option("--out", default="-", show_default=True, help="Output path, - for stdout.")
format_option = click.option(
    "--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True
)


def grid_options(f):
    f = click.option("--steps", type=click.IntRange(min=1), default=11, show_default=True)(f)
    f = click.option("--p-max", type=float, default=1.0, show_default=True)(f)
    f = click.option("--p-min", type=float, default=0.0, show_default=True)(f)
    return f


def _domain(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc


@click.group()
@click.version_option(__version__, prog_name="clusterfuse")
def main():
    """Fidelity and entanglement of linear clusters fused from dephased primitives."""


@main.command()
@click.argument("fig_id", type=click.Choice(FIGURES))
@grid_options
@out_option
@format_option
def figure(fig_id, p_min, p_max, steps, out, fmt):
    """Write the data behind one figure, one row per grid point."""
    grid = _domain(p_grid, p_min, p_max, steps)
    rows = _domain(figure_rows, fig_id, grid)
    emit(rows, out, fmt, {"command": "figure", "figure": fig_id})


def strength_options(f):
    for name in reversed(INTERVALS):
        flag = "--" + name.replace("_", "-")
        f = click.option(flag, name, type=float, default=None, help=f"Dephasing strength {name}.")(f)
    return f


@main.command()
@click.option("--name", "name", required=True, help="Scenario, e.g. method1-all-success.")
@strength_options
@out_option
@format_option
def scenario(name, out, fmt, **strengths):
    """Replay one five-qubit construction and compare with its closed form."""
    sname = scenario_name(name)
    given = {k: v for k, v in strengths.items() if v is not None}
    s = _domain(Scenario, sname, given)
    result = run_scenario(s)
    row = {"scenario": sname.value, **s.strengths}
    row["fidelity_sim"] = result.fidelity
    row["fidelity_formula"] = scenario_closed_form(s, corrected=False)
    if sname is ScenarioName.METHOD1_FAIL_FAIL:
        row["fidelity_formula_corrected"] = scenario_closed_form(s, corrected=True)
    row["branch_probability"] = result.branch_probability
    emit([row], out, fmt, {"command": "scenario", "scenario": sname.value})


@main.command()
@grid_options
@click.option(
    "--quantities",
    "quantities",
    multiple=True,
    required=True,
    help="Quantity spec such as eq2:q=5; repeat the flag or separate with ';'.",
)
@out_option
@format_option
def sweep(p_min, p_max, steps, quantities, out, fmt):
    """Evaluate named quantities over a grid of dephasing strengths."""
    specs = [q for raw in quantities for q in raw.split(";") if q.strip()]
    grid = _domain(p_grid, p_min, p_max, steps)
    rows = _domain(sweep_rows, grid, specs)
    emit(rows, out, fmt, {"command": "sweep", "quantities": specs})


@main.command()
@click.option("--method", type=click.IntRange(1, 2), default=1, show_default=True)
@click.option("--recycle/--no-recycle", default=False, show_default=True)
@click.option("--samples", type=click.IntRange(min=1), default=10000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--max-attempts", type=click.IntRange(min=1), default=50, show_default=True)
@click.option("--p1", type=float, default=0.0, show_default=True, help="Fresh-primitive dephasing.")
@click.option(
    "--p-store", type=float, default=0.0, show_default=True,
    help="Dephasing of every stored cluster before each fusion attempt.",
)
@click.option("--engine", type=click.Choice(["coherence", "density"]), default="coherence", show_default=True)
@out_option
@format_option
def mc(method, recycle, samples, seed, max_attempts, p1, p_store, engine, out, fmt):
    """Monte Carlo over fusion outcomes for one construction policy."""
    policy = _domain(McPolicy, method, recycle, max_attempts, p1, p_store)
    report = monte_carlo(policy, samples, seed, engine=engine)
    row = {k: v for k, v in dataclasses.asdict(report).items() if k != "policy"}
    if fmt == "csv":
        hist = row.pop("fidelity_histogram")
        edges = row.pop("histogram_edges")
        consumed = row.pop("primitives_consumed")
        for i, h in enumerate(hist):
            row[f"hist_{edges[i]:.2f}_{edges[i + 1]:.2f}"] = h
        for k, v in consumed.items():
            row[f"primitives_{k}"] = v
    row["success_rate_stderr"] = report.success_rate_stderr()
    meta = {"command": "mc", "seed": seed, "policy": dataclasses.asdict(policy)}
    emit([row], out, fmt, meta)


@main.command("compare-methods")
@click.option(
    "--binding", type=click.Choice([b.value for b in Binding]), default="equal", show_default=True
)
@grid_options
@out_option
@format_option
def compare_methods_cmd(binding, p_min, p_max, steps, out, fmt):
    """Both construction methods with all fusions successful."""
    grid = _domain(p_grid, p_min, p_max, steps)
    rows = _domain(compare_methods, grid, binding)
    emit(rows, out, fmt, {"command": "compare-methods", "binding": binding})


if __name__ == "__main__":
    main()
