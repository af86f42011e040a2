"""Rank-correlation analysis of sweep measures.

Kendall's tau quantifies how concordantly two robustness measures move
across a sweep.  The tie-corrected (tau-b) variant is used because sweep
measures contain exact ties (clamped concurrence, flat segments); sequences
that are entirely tied -- or flat to within a noise floor -- have no defined
rank correlation and are reported as NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

# (a, b) measure pairs analysed per perturbation, keyed by short labels.
PAIRS = (
    ("G", "E_C"),
    ("G", "E_F"),
    ("E_C", "E_F"),
    ("E_C", "z1"),
    ("E_F", "z1"),
)

MEASURE_FIELDS = {
    "G": "stability_margin",
    "E_C": "concurrence_error",
    "E_F": "fidelity_error",
    "z1": "z1_distance",
}

# Variation at or below this level carries no rank information: concurrence
# of a near-pure state has an O(sqrt(machine eps)) ~ 1e-8 noise floor (square
# roots of near-zero spin-flip eigenvalues), and 1e-6 is the flatness level
# the acceptance checks treat as "completely flat".
FLAT_TOL = 1e-6


def pair_label(a: str, b: str) -> str:
    return f"{a}~{b}"


def kendall_tau(x, y) -> float:
    """Tie-corrected Kendall rank correlation (tau-b) by direct pair counting.

    tau = (concordant - discordant) / sqrt((n0 - ties_x) * (n0 - ties_y))
    with n0 = n(n-1)/2.  Returns NaN when all of x or all of y are tied.
    Quadratic in n, which is fine for sweep grids (<= 1e3 points) and keeps
    the counting auditable.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or y.ndim != 1:
        raise ValueError("inputs must be one-dimensional sequences")
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.size} vs {y.size}")
    n = x.size
    if n < 2:
        raise ValueError(f"need at least 2 observations, got {n}")
    iu = np.triu_indices(n, k=1)
    sx = np.sign(x[:, None] - x[None, :])[iu]
    sy = np.sign(y[:, None] - y[None, :])[iu]
    n0 = n * (n - 1) // 2
    ties_x = int(np.count_nonzero(sx == 0))
    ties_y = int(np.count_nonzero(sy == 0))
    if ties_x == n0 or ties_y == n0:
        return math.nan
    return float(np.sum(sx * sy)) / math.sqrt((n0 - ties_x) * (n0 - ties_y))


@dataclass(frozen=True)
class ConcordanceReport:
    """Per-perturbation taus for the five measure pairs, plus their means.

    `taus` maps perturbation id -> {pair label -> tau (NaN if undefined)};
    `mean_per_pair` averages each pair across perturbations, skipping
    undefined entries.
    """

    pairs: tuple
    taus: dict
    mean_per_pair: dict


def concordance_suite(
    records,
    *,
    flat_tol: float = FLAT_TOL,
) -> ConcordanceReport:
    """Compute the pairwise taus for one or more sweeps.

    `records` is either a mapping from perturbation id to its record list or
    a single record list.  Flagged records are excluded.  A measure sequence
    whose total variation is <= flat_tol carries no rank information (it is
    flat up to solver noise), so pairs involving it are reported as NaN and
    skipped in the means, exactly like fully tied sequences.
    """
    if not isinstance(records, Mapping):
        records = {"sweep": records}
    if not records:
        raise ValueError("no sweeps supplied")
    taus: dict = {}
    for pid, recs in records.items():
        valid = [r for r in recs if not r.flags]
        if len(valid) < 2:
            raise ValueError(
                f"{pid}: need >= 2 unflagged records, got {len(valid)}"
            )
        series = {
            label: np.array([getattr(r, field) for r in valid])
            for label, field in MEASURE_FIELDS.items()
        }
        flat = {
            label: bool(np.ptp(values) <= flat_tol)
            for label, values in series.items()
        }
        row = {}
        for a, b in PAIRS:
            if flat[a] or flat[b]:
                row[pair_label(a, b)] = math.nan
            else:
                row[pair_label(a, b)] = kendall_tau(series[a], series[b])
        taus[pid] = row
    means = {}
    for a, b in PAIRS:
        label = pair_label(a, b)
        defined = [row[label] for row in taus.values() if not math.isnan(row[label])]
        means[label] = sum(defined) / len(defined) if defined else math.nan
    return ConcordanceReport(
        pairs=tuple(pair_label(a, b) for a, b in PAIRS),
        taus=taus,
        mean_per_pair=means,
    )
