"""Sweep orchestration: grids, records, concordance runs, and file output.

A sweep evaluates one robustness record per grid point.  Records are pure
functions of (model, structure, delta), so grid points may be evaluated by a
process pool; output ordering is by grid index either way, making concurrent
and serial runs byte-identical.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import analysis, model, stats
from .analysis import NominalBundle, RobustnessRecord
from .errors import ConfigError, RangeViolationError

ARTIFACT_VERSION = "0.1.0"

# Emitted column order is fixed so downstream plotting stays stable.
ALL_MEASURES = ("purity", "E_C", "E_F", "G", "T_norm0", "z1", "z1_bound")

MEASURE_FIELDS = {
    "purity": "purity",
    "E_C": "concurrence_error",
    "E_F": "fidelity_error",
    "G": "stability_margin",
    "T_norm0": "transfer_norm0",
    "z1": "z1_distance",
    "z1_bound": "z1_bound",
}

CATALOG_IDS = ("S2", "S4", "S5", "S7", "S9", "S10")


@dataclass(frozen=True)
class GridSpec:
    """Per-axis sweep grid, linear or log-spaced."""

    lo: float
    hi: float
    count: int
    scale: str = "linear"

    def __post_init__(self):
        if self.count < 2:
            raise ConfigError(f"grid count must be >= 2, got {self.count}")
        if not self.lo < self.hi:
            raise ConfigError(f"grid needs lo < hi, got [{self.lo}, {self.hi}]")
        if self.scale not in ("linear", "log"):
            raise ConfigError(f"grid scale must be 'linear' or 'log', got {self.scale!r}")
        if self.scale == "log" and self.lo <= 0:
            raise ConfigError(f"log grid needs lo > 0, got {self.lo}")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.lo, self.hi, self.count)
        return np.linspace(self.lo, self.hi, self.count)


# Defaults follow the plotting conventions for each structure: linear axes
# over the admissible ranges, log axes for the one-sided rate perturbations.
DEFAULT_GRIDS = {
    "S2": GridSpec(-0.2, 0.2, 81),
    "S4": GridSpec(-0.1, 0.1, 81),
    "S5": GridSpec(-1.0, 1.0, 81),
    "S7": GridSpec(1e-3, 1.0, 61, "log"),
    "S9": GridSpec(1e-3, 1.0, 61, "log"),
    "S10": GridSpec(-1.0, 1.0, 81),
}


@dataclass(frozen=True)
class SweepSpec:
    """Everything needed to reproduce one sweep."""

    model: model.ModelParams = field(default_factory=model.ModelParams)
    perturbation: str = ""
    grid: GridSpec | None = None
    measures: tuple = ALL_MEASURES
    output_path: str | None = None
    output_format: str = "csv"
    allow_range_override: bool = False
    workers: int = 0  # 0 -> machine parallelism

    def __post_init__(self):
        if self.perturbation and self.perturbation not in model.PERTURBATIONS:
            raise ConfigError(
                f"unknown perturbation {self.perturbation!r}; "
                f"choose one of {', '.join(CATALOG_IDS)}"
            )
        bad = [m for m in self.measures if m not in ALL_MEASURES]
        if bad:
            raise ConfigError(f"unknown measures {bad}; known: {ALL_MEASURES}")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"format must be 'csv' or 'json', got {self.output_format!r}")

    def resolved_grid(self) -> GridSpec:
        return self.grid if self.grid is not None else DEFAULT_GRIDS[self.perturbation]

    def resolved_workers(self) -> int:
        return self.workers if self.workers > 0 else (os.cpu_count() or 1)


def _compute_record(task) -> RobustnessRecord:
    params, structure, delta, nominal, override = task
    return analysis.steady_state_shift_and_bound(
        params, structure, delta, allow_range_override=override, nominal=nominal
    )


def sweep_records(
    params: model.ModelParams,
    structure: model.PerturbationStructure,
    deltas,
    *,
    allow_range_override: bool = False,
    workers: int = 1,
    nominal: NominalBundle | None = None,
) -> list:
    """Evaluate one record per delta, in grid order.

    Range membership is checked up front so a violation names the offending
    delta before any work is done.
    """
    deltas = [float(d) for d in deltas]
    if not allow_range_override:
        for d in deltas:
            if not structure.contains(d):
                lo, hi = structure.delta_range
                raise RangeViolationError(
                    f"delta = {d} outside [{lo}, {hi}] for {structure.id}; "
                    "pass allow_range_override to sweep anyway"
                )
    if nominal is None:
        nominal = analysis.nominal_bundle(params)
    tasks = [(params, structure, d, nominal, allow_range_override) for d in deltas]
    if workers <= 1 or len(tasks) < 2:
        return [_compute_record(t) for t in tasks]
    chunk = max(1, len(tasks) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_compute_record, tasks, chunksize=chunk))


def run_sweep(spec: SweepSpec) -> list:
    if not spec.perturbation:
        raise ConfigError("sweep needs a perturbation (S2|S4|S5|S7|S9|S10)")
    structure = model.PERTURBATIONS[spec.perturbation]
    deltas = spec.resolved_grid().values()
    return sweep_records(
        spec.model,
        structure,
        deltas,
        allow_range_override=spec.allow_range_override,
        workers=spec.resolved_workers(),
    )


def run_concordance(specs) -> stats.ConcordanceReport:
    """Run each spec's sweep and rank-correlate the measures."""
    specs = list(specs)
    if not specs:
        raise ConfigError("concordance needs at least one sweep spec")
    records = {spec.perturbation: run_sweep(spec) for spec in specs}
    return stats.concordance_suite(records)


def steady_state_report(params: model.ModelParams) -> dict:
    """One-shot summary of the model at a parameter point.

    Reports the steady state, purity, concurrence, fidelity against the bare
    operating point, stability margin, and the generator spectrum.
    """
    gen = model.build_bloch(params)
    ss = analysis.steady_state(gen)
    bare_ss = analysis.nominal_bundle(model.BARE_PARAMS).steady
    evals = analysis.spectrum(gen.A)
    return {
        "params": _params_to_json(params),
        "purity": analysis.purity(ss.rho),
        "concurrence": analysis.concurrence(ss.rho),
        "fidelity_vs_bare": float(ss.r @ bare_ss.r),
        "stability_margin": analysis.stability_margin(gen.A),
        "residual": ss.residual,
        "steady_state_bloch": [float(v) for v in ss.r],
        "spectrum": [[float(z.real), float(z.imag)] for z in evals],
    }


# ---------------------------------------------------------------------------
# serialization

def _fmt(value: float) -> str:
    return "%.12e" % value


def write_sweep_csv(records, fh, measures=ALL_MEASURES) -> None:
    cols = [m for m in ALL_MEASURES if m in measures]
    fh.write(",".join(["delta", *cols, "flags"]) + "\n")
    for rec in records:
        row = [_fmt(rec.delta)]
        row += [_fmt(getattr(rec, MEASURE_FIELDS[m])) for m in cols]
        row.append(rec.flags)
        fh.write(",".join(row) + "\n")


def read_sweep_csv(fh) -> list:
    header = fh.readline().strip().split(",")
    if not header or header[0] != "delta" or header[-1] != "flags":
        raise ConfigError(f"unrecognized sweep CSV header: {header}")
    rows = []
    for line in fh:
        line = line.strip()
        if not line:
            continue
        parts = line.split(",")
        row = {"flags": parts[-1]}
        for name, value in zip(header[:-1], parts[:-1]):
            row[name] = float(value)
        rows.append(row)
    return rows


def _record_to_json(rec: RobustnessRecord) -> dict:
    out = {}
    for key, value in asdict(rec).items():
        if isinstance(value, float) and math.isnan(value):
            value = None
        out[key] = value
    return out


def _params_to_json(params: model.ModelParams) -> dict:
    out = {}
    for name in model.PARAM_FIELDS:
        value = getattr(params, name)
        if isinstance(value, complex):
            value = value.real if value.imag == 0 else [value.real, value.imag]
        out[name] = value
    return out


def sweep_metadata(spec: SweepSpec) -> dict:
    grid = spec.resolved_grid()
    return {
        "artifact_version": ARTIFACT_VERSION,
        "model": _params_to_json(spec.model),
        "perturbation": spec.perturbation,
        "grid": {"lo": grid.lo, "hi": grid.hi, "count": grid.count, "scale": grid.scale},
        "measures": list(spec.measures),
        "allow_range_override": spec.allow_range_override,
        "workers": spec.resolved_workers(),
    }


def write_sweep_json(records, fh, metadata: dict) -> None:
    payload = {
        "metadata": metadata,
        "records": [_record_to_json(r) for r in records],
    }
    json.dump(payload, fh, indent=2, allow_nan=False)
    fh.write("\n")


def write_concordance_csv(report: stats.ConcordanceReport, fh) -> None:
    fh.write(",".join(["perturbation", *report.pairs]) + "\n")
    for pid, row in report.taus.items():
        cells = [pid] + [_fmt(row[p]) if not math.isnan(row[p]) else "nan" for p in report.pairs]
        fh.write(",".join(cells) + "\n")
    means = [
        _fmt(report.mean_per_pair[p]) if not math.isnan(report.mean_per_pair[p]) else "nan"
        for p in report.pairs
    ]
    fh.write(",".join(["mean", *means]) + "\n")


def write_concordance_json(report: stats.ConcordanceReport, fh, metadata: dict) -> None:
    drop_nan = lambda v: None if isinstance(v, float) and math.isnan(v) else v
    payload = {
        "metadata": metadata,
        "pairs": list(report.pairs),
        "taus": {
            pid: {k: drop_nan(v) for k, v in row.items()}
            for pid, row in report.taus.items()
        },
        "mean_per_pair": {k: drop_nan(v) for k, v in report.mean_per_pair.items()},
    }
    json.dump(payload, fh, indent=2, allow_nan=False)
    fh.write("\n")
