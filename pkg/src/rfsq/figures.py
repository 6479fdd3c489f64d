"""Bundled figure datasets: named presets over the interesting regions.

Each preset evaluates a metric on a fixed grid and is written as a
versioned CSV plus a JSON sidecar recording axes, fixed parameters, the
artifact version and any per-node errors, so a dataset is reproducible
from its metadata alone. An optional gnuplot script renders the CSV.

Presets 2, 3 and 6 are two-axis surfaces stored in long form (axis1
outer); presets 4 and 7 sweep the drive strength for three photon
numbers; preset 5 compares the pure-state output variance with the
squeezed-vacuum input variance over the photon number.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from ._version import __version__
from .errors import ValidationError
from .io import write_csv, write_json
from .metrics import input_vacuum_variance, pure_state_variance
from .params import AtomFieldParams
from .scan import AxisSpec, ScanSpec, scan

#: photon numbers of the three-panel presets
PANEL_NS = (0.05, 0.125, 0.5)


def _surface(metric, axis1, axis2, fixed):
    spec = ScanSpec(axis1=axis1, axis2=axis2, fixed=fixed, metric=metric)
    result = scan(spec)
    g1, g2 = np.meshgrid(axis1.values, axis2.values, indexing="ij")
    columns = {
        axis1.name: g1.ravel(),
        axis2.name: g2.ravel(),
        metric: result.values.ravel(),
    }
    return columns, result.errors, spec


def _panels(metric, axis, fixed_template):
    columns = {axis.name: axis.values}
    errors = []
    for n in PANEL_NS:
        fixed = AtomFieldParams(
            gamma=fixed_template.gamma, n_sq=n, eta=fixed_template.eta,
            phi=fixed_template.phi, omega=fixed_template.omega,
            delta=fixed_template.delta,
        )
        for m in (metric, "sigma"):
            result = scan(ScanSpec(axis1=axis, fixed=fixed, metric=m))
            columns[f"{m}_N{n:g}"] = result.values
            errors.extend(result.errors)
    return columns, errors


def build_figure(n: int):
    """Columns and metadata of preset n (2..7)."""
    if n == 2:
        fixed = AtomFieldParams(n_sq=0.1, delta=10.0)
        columns, errors, spec = _surface(
            "s_x",
            AxisSpec("omega", 0.0, 30.0, 301),
            AxisSpec("phi", 0.0, math.pi, 181),
            fixed,
        )
        meta = _meta(n, spec=spec, errors=errors)
    elif n == 3:
        fixed = AtomFieldParams(n_sq=0.125, phi=math.pi)
        columns, errors, spec = _surface(
            "s_x",
            AxisSpec("omega", 0.0, 40.0, 301),
            AxisSpec("delta", 0.0, 25.0, 181),
            fixed,
        )
        meta = _meta(n, spec=spec, errors=errors)
    elif n == 4:
        template = AtomFieldParams(phi=math.pi, delta=12.5)
        axis = AxisSpec("omega", 0.0, 40.0, 601)
        columns, errors = _panels("s_x", axis, template)
        meta = _meta(n, axes=[axis], fixed=template, errors=errors,
                     panels=list(PANEL_NS), metric="s_x")
    elif n == 5:
        ns = np.linspace(0.001, 1.5, 600)
        columns = {
            "n_sq": ns,
            "s_ps": np.array([pure_state_variance(v) for v in ns]),
            "s_sv": np.array([input_vacuum_variance(v) for v in ns]),
        }
        axis = AxisSpec("n_sq", 0.001, 1.5, 600)
        meta = _meta(n, axes=[axis], fixed=AtomFieldParams(), errors=[],
                     metric="s_ps,s_sv")
    elif n == 6:
        fixed = AtomFieldParams(n_sq=0.125, phi=math.pi / 2.0)
        columns, errors, spec = _surface(
            "s_pi4",
            AxisSpec("omega", 0.0, 3.0, 301),
            AxisSpec("delta", 0.0, 1.0, 181),
            fixed,
        )
        meta = _meta(n, spec=spec, errors=errors)
    elif n == 7:
        template = AtomFieldParams(phi=math.pi / 2.0, delta=0.25)
        axis = AxisSpec("omega", 0.0, 3.0, 601)
        columns, errors = _panels("s_pi4", axis, template)
        meta = _meta(n, axes=[axis], fixed=template, errors=errors,
                     panels=list(PANEL_NS), metric="s_pi4")
    else:
        raise ValidationError(f"no figure preset {n}; expected 2..7")
    meta["columns"] = list(columns)
    return columns, meta


def _meta(n, spec=None, axes=None, fixed=None, errors=(), panels=None,
          metric=None):
    if spec is not None:
        axes = [spec.axis1] + ([spec.axis2] if spec.axis2 else [])
        fixed = spec.fixed
        metric = spec.metric
    meta = {
        "figure": n,
        "version": __version__,
        "metric": metric,
        "axes": [
            {"name": a.name, "start": a.start, "stop": a.stop, "count": a.count}
            for a in axes
        ],
        "fixed": {
            "gamma": fixed.gamma, "n_sq": fixed.n_sq, "eta": fixed.eta,
            "phi": fixed.phi, "omega": fixed.omega, "delta": fixed.delta,
        },
        "errors": [list(e) for e in errors],
    }
    if panels is not None:
        meta["panels"] = panels
    return meta


def _gnuplot_script(csv_path: Path, meta: dict) -> str:
    lines = [
        "set datafile separator ','",
        f"csv = '{csv_path.name}'",
    ]
    axes = meta["axes"]
    if len(axes) == 2:
        lines += [
            f"set xlabel '{axes[0]['name']}'",
            f"set ylabel '{axes[1]['name']}'",
            f"set dgrid3d {axes[1]['count']},{axes[0]['count']}",
            "set hidden3d",
            f"splot csv skip 2 using 1:2:3 with lines title '{meta['metric']}'",
        ]
    else:
        plots = ", ".join(
            f"csv skip 2 using 1:{k} with lines title '{name}'"
            for k, name in enumerate(meta["columns"][1:], start=2)
        )
        lines += [f"set xlabel '{axes[0]['name']}'", f"plot {plots}"]
    lines.append("pause -1")
    return "\n".join(lines) + "\n"


def emit_figure(n: int, out, script: bool = False) -> dict[str, Path]:
    """Write preset n as CSV + metadata JSON (+ optional gnuplot script).

    Returns the paths written, keyed 'csv', 'meta' and optionally
    'script'.
    """
    columns, meta = build_figure(n)
    out = Path(out)
    paths = {"csv": write_csv(out, columns)}
    paths["meta"] = write_json(out.with_suffix(out.suffix + ".meta.json"), meta)
    if script:
        gp = out.with_suffix(".gp")
        gp.write_text(_gnuplot_script(out, meta), encoding="utf-8")
        paths["script"] = gp
    return paths
