"""Two driven qubits dissipatively coupled through a lossy cavity mode.

The cavity has been adiabatically eliminated, leaving a two-qubit Lindblad
model: each qubit is driven with complex Rabi amplitude alpha and detuning
delta (units: one unit = 10 MHz), and couples to a collective decay channel
s1*sigma1- + s2*sigma2-.  Independent single-qubit decay (sigma-) and
dephasing (sigma_z) channels act as disturbances with amplitudes gamma; a
channel's rate is the square of its amplitude, with the jump operators kept
unit-normalized so the strength is never counted twice.

Computational basis ordering is |q1 q2> with qubit 1 the left tensor factor
and the ground state first; sigma+ = [[0,0],[1,0]] raises it.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

import numpy as np

from . import bloch
from .bloch import (
    IDENTITY_2,
    PAULI_Z,
    SIGMA_MINUS,
    SIGMA_PLUS,
    BlochGenerator,
    HermitianBasis,
)
from .errors import RangeViolationError

SIGMA1_MINUS = np.kron(SIGMA_MINUS, IDENTITY_2)
SIGMA2_MINUS = np.kron(IDENTITY_2, SIGMA_MINUS)
SIGMA1_PLUS = np.kron(SIGMA_PLUS, IDENTITY_2)
SIGMA2_PLUS = np.kron(IDENTITY_2, SIGMA_PLUS)
SIGMA1_Z = np.kron(PAULI_Z, IDENTITY_2)
SIGMA2_Z = np.kron(IDENTITY_2, PAULI_Z)

TWO_QUBIT_BASIS: HermitianBasis = bloch.build_basis(4)


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters; defaults are the bare operating point."""

    alpha1: complex = 1.0
    alpha2: complex = 1.0
    delta1: float = 0.1
    delta2: float = -0.1
    s1: float = 1.0
    s2: float = 1.0
    gamma1_r: float = 0.0
    gamma2_r: float = 0.0
    gamma1_phi: float = 0.0
    gamma2_phi: float = 0.0

    def __post_init__(self):
        for name in ("gamma1_r", "gamma2_r", "gamma1_phi", "gamma2_phi"):
            if getattr(self, name) < 0:
                raise ValueError(
                    f"{name} = {getattr(self, name)} is negative; decay and "
                    "decoherence amplitudes must be >= 0"
                )


BARE_PARAMS = ModelParams()

PARAM_FIELDS = tuple(f.name for f in fields(ModelParams))


@dataclass(frozen=True)
class PerturbationStructure:
    """A fixed direction in parameter space with an admissible strength range."""

    id: str
    direction: tuple
    delta_range: tuple

    def contains(self, delta: float) -> bool:
        lo, hi = self.delta_range
        return lo <= delta <= hi


def _dir(**nonzero) -> tuple:
    return tuple(float(nonzero.get(name, 0.0)) for name in PARAM_FIELDS)


# Catalog of structured perturbations.  S5/S10 move the collective-coupling
# weights together/oppositely; S7/S9 are one-sided because the perturbed
# amplitudes must stay nonnegative.  The S4 range is the magnitude of the
# bare detuning delta2.
PERTURBATIONS = {
    "S2": PerturbationStructure("S2", _dir(alpha2=1), (-0.2, 0.2)),
    "S4": PerturbationStructure("S4", _dir(delta2=1), (-0.1, 0.1)),
    "S5": PerturbationStructure("S5", _dir(s1=1, s2=1), (-1.0, 1.0)),
    "S7": PerturbationStructure("S7", _dir(gamma2_r=1), (0.0, 1.0)),
    "S9": PerturbationStructure("S9", _dir(gamma2_phi=1), (0.0, 1.0)),
    "S10": PerturbationStructure("S10", _dir(s1=1, s2=-1), (-1.0, 1.0)),
}


def hamiltonian(p: ModelParams) -> np.ndarray:
    """H = sum over qubits of (alpha sigma+ + alpha* sigma- + delta sigma+sigma-)."""
    H = np.zeros((4, 4), dtype=complex)
    for alpha, delta, s_plus, s_minus in (
        (p.alpha1, p.delta1, SIGMA1_PLUS, SIGMA1_MINUS),
        (p.alpha2, p.delta2, SIGMA2_PLUS, SIGMA2_MINUS),
    ):
        H += alpha * s_plus + np.conj(alpha) * s_minus + delta * (s_plus @ s_minus)
    return H


def jump_operators(p: ModelParams):
    """The five dissipation channels as (operator, rate) pairs.

    The collective channel carries its whole strength in the weights s1, s2
    (rate 1, and quadratic in s -- not additive); the single-qubit channels
    carry unit operators with rate gamma**2.
    """
    V_c = p.s1 * SIGMA1_MINUS + p.s2 * SIGMA2_MINUS
    return [
        (V_c, 1.0),
        (SIGMA1_MINUS, p.gamma1_r**2),
        (SIGMA2_MINUS, p.gamma2_r**2),
        (SIGMA1_Z, p.gamma1_phi**2),
        (SIGMA2_Z, p.gamma2_phi**2),
    ]


def build_bloch(p: ModelParams, basis: HermitianBasis = TWO_QUBIT_BASIS) -> BlochGenerator:
    """Assemble the 16x16 real generator for the model."""
    A_H = bloch.hamiltonian_generator(hamiltonian(p), basis)
    A_V = [bloch.lindblad_generator(V, rate, basis) for V, rate in jump_operators(p)]
    return bloch.assemble(A_H, A_V)


def perturb(
    p: ModelParams,
    structure: PerturbationStructure,
    delta: float,
    *,
    allow_range_override: bool = False,
) -> ModelParams:
    """Shift parameters by delta along the structure direction."""
    if not allow_range_override and not structure.contains(delta):
        lo, hi = structure.delta_range
        raise RangeViolationError(
            f"delta = {delta} outside the admissible range [{lo}, {hi}] "
            f"for {structure.id}"
        )
    updates = {}
    for name, step in zip(PARAM_FIELDS, structure.direction):
        if step == 0.0:
            continue
        updates[name] = getattr(p, name) + delta * step
    for name in ("gamma1_r", "gamma2_r", "gamma1_phi", "gamma2_phi"):
        if updates.get(name, 0.0) < 0:
            raise RangeViolationError(
                f"delta = {delta} along {structure.id} drives {name} to "
                f"{updates[name]} < 0"
            )
    return replace(p, **updates)


def structure_matrix(
    p: ModelParams,
    structure: PerturbationStructure,
    delta: float,
    *,
    basis: HermitianBasis = TWO_QUBIT_BASIS,
    allow_range_override: bool = False,
) -> np.ndarray:
    """Exact generator difference A(p + delta*S) - A(p).

    Exactly linear in delta for Hamiltonian-parameter structures (S2, S4);
    for the dissipative structures the difference carries a delta**2 part
    from the quadratic dependence of the channels on their amplitudes, so it
    is rebuilt rather than scaled.
    """
    p_shifted = perturb(p, structure, delta, allow_range_override=allow_range_override)
    return build_bloch(p_shifted, basis).A - build_bloch(p, basis).A
