"""Steady states, performance measures, stability margins, and
structured-perturbation transfer matrices for Bloch-form generators.

The reduced dynamics dr1/dt = A11 r1 + c is solved algebraically for the
steady state; the block ``#``-inverse and the transfer matrix from nominal
to error dynamics quantify how far a structured perturbation moves that
steady state, with ||T(0, delta)|| * ||d|| an upper bound on the shift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import bloch, model
from .bloch import BlochGenerator, HermitianBasis
from .errors import (
    InternalConsistencyError,
    NonUniqueSteadyStateError,
    PoleError,
)

COND_LIMIT = 1e12
ZERO_EIGENVALUE_TOL = 1e-9

_YY = np.kron(bloch.PAULI_Y, bloch.PAULI_Y)

FLAG_NON_UNIQUE = "non-unique-steady-state"


@dataclass(frozen=True)
class SteadyState:
    """Fixed point of the reduced dynamics with its reconstruction."""

    r1: np.ndarray
    r: np.ndarray  # full coordinates, trace component appended
    rho: np.ndarray
    residual: float


@dataclass(frozen=True)
class TransferMatrixEval:
    """Transfer matrix from nominal to error dynamics at one Laplace point."""

    s: complex
    delta: float
    T: np.ndarray
    norm: float


@dataclass(frozen=True)
class RobustnessRecord:
    """All sweep measures at one perturbation strength.

    Steady-state measures are NaN when `flags` marks the point as having no
    unique steady state; the stability margin is always defined.
    """

    delta: float
    purity: float
    concurrence_error: float
    fidelity_error: float
    stability_margin: float
    transfer_norm0: float
    z1_distance: float
    z1_bound: float
    flags: str = ""

    @property
    def is_flagged(self) -> bool:
        return bool(self.flags)


def steady_state(
    gen: BlochGenerator,
    basis: HermitianBasis | None = None,
    *,
    cond_limit: float = COND_LIMIT,
    positivity_tol: float = 1e-8,
) -> SteadyState:
    """Solve A11 r1 = -c and reconstruct the density matrix.

    The fixed point depends only on the constant trace component, not on any
    initial condition.  Positivity of the reconstruction is checked with a
    tolerance loose enough for perturbed systems.
    """
    if basis is None:
        basis = _basis_for(gen)
    cond = np.linalg.cond(gen.A11)
    if not np.isfinite(cond) or cond > cond_limit:
        raise NonUniqueSteadyStateError(
            f"reduced generator block is singular to working precision "
            f"(condition number {cond:.3e}); the dynamics has no unique "
            "steady state"
        )
    r1 = np.linalg.solve(gen.A11, -gen.c)
    residual = float(np.linalg.norm(gen.A11 @ r1 + gen.c))
    r = np.concatenate([r1, [gen.trace_component]])
    rho = bloch.bloch_to_density(r, basis)
    bloch.validate_density_matrix(rho, positivity_tol=positivity_tol)
    return SteadyState(r1=r1, r=r, rho=rho, residual=residual)


def purity(rho: np.ndarray) -> float:
    """Tr(rho^2); 1 for pure states, 1/N for the maximally mixed state."""
    rho = np.asarray(rho)
    return float(np.real(np.trace(rho @ rho)))


def concurrence(rho: np.ndarray, *, clamp_tol: float = 1e-10, validate: bool = True) -> float:
    """Two-qubit entanglement monotone in [0, 1].

    Computed as max(0, l1 - l2 - l3 - l4) where the l_k are the decreasingly
    ordered square roots of the eigenvalues of rho @ rho_tilde, with
    rho_tilde = (sy x sy) rho* (sy x sy).  This is algebraically equal to the
    eigenvalues of sqrt(sqrt(rho) rho_tilde sqrt(rho)) but avoids matrix
    square roots of near-singular states; eigenvalue residues down to
    -clamp_tol are clamped to zero.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"concurrence needs a two-qubit state, got shape {rho.shape}")
    if validate:
        bloch.validate_density_matrix(rho, positivity_tol=1e-8)
    rho_tilde = _YY @ rho.conj() @ _YY
    evals = np.linalg.eigvals(rho @ rho_tilde).real
    if evals.min() < -1e-8:
        raise ValueError(
            f"spin-flipped spectrum has eigenvalue {evals.min():.3e}; "
            "input is not a valid state"
        )
    evals = np.where(evals < 0, np.where(evals >= -clamp_tol, 0.0, evals), evals)
    lams = np.sort(np.sqrt(evals))[::-1]
    return max(0.0, float(lams[0] - lams[1] - lams[2] - lams[3]))


def fidelity(rho_ss: np.ndarray, rho_b: np.ndarray, *, purity_tol: float = 1e-6) -> float:
    """Overlap Tr(rho_b rho_ss) against a pure reference state.

    Equals the inner product of the Bloch coordinate vectors.  Only valid as
    a fidelity when the reference is pure; mixed references need a general
    (Uhlmann) fidelity, which is out of scope here.
    """
    ref_purity = purity(rho_b)
    if abs(ref_purity - 1.0) > purity_tol:
        raise ValueError(
            f"reference state has purity {ref_purity:.8f}; this overlap is a "
            "fidelity only for pure references -- use a general mixed-state "
            "fidelity instead (unsupported)"
        )
    return float(np.real(np.trace(np.asarray(rho_b) @ np.asarray(rho_ss))))


def spectrum(A: np.ndarray) -> np.ndarray:
    """Eigenvalues of a generator, sorted by descending real part."""
    evals = np.linalg.eigvals(np.asarray(A))
    order = np.lexsort((-evals.imag, -evals.real))
    return evals[order]


def stability_margin(A: np.ndarray, *, zero_tol: float = ZERO_EIGENVALUE_TOL) -> float:
    """Distance of the rightmost nonzero pole from the imaginary axis.

    Eigenvalues with |lambda| <= zero_tol are treated as the structural zero
    mode and discarded.  Returns 0 for purely unitary dynamics (all
    remaining poles on the axis within tolerance) and for an empty spectrum.
    """
    evals = np.linalg.eigvals(np.asarray(A))
    nonzero = evals[np.abs(evals) > zero_tol]
    if nonzero.size == 0:
        return 0.0
    rightmost = float(nonzero.real.max())
    if abs(rightmost) <= zero_tol:
        return 0.0
    return abs(rightmost)


def hash_inverse(A: np.ndarray, s: complex, *, cond_limit: float = COND_LIMIT) -> np.ndarray:
    """Block pseudo-resolvent [(s I' - A11)^-1, 0; 0, 0].

    Inverts (s I - A) on the trace-preserving complement, zeroing the
    structural trace mode.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0] - 1
    M = s * np.eye(n) - A[:n, :n]
    _check_pole(M, A[:n, :n], s, cond_limit)
    out = np.zeros((n + 1, n + 1), dtype=complex)
    out[:n, :n] = np.linalg.inv(M)
    return out


def transfer_matrix(
    gen: BlochGenerator,
    delta_A: np.ndarray,
    s: complex,
    *,
    delta: float = math.nan,
    cond_limit: float = COND_LIMIT,
) -> TransferMatrixEval:
    """Transfer matrix from nominal to error dynamics at Laplace point s.

    `delta_A` is the exact generator difference (strength and any quadratic
    terms already absorbed).  With Theta = (s I' - A11 - dA11)^-1 the blocks
    are [Theta dA11, Theta dA12; 0, 0]; the last row is structurally zero,
    so the error dynamics never leaks into the trace component.  The norm is
    the largest singular value.
    """
    delta_A = np.asarray(delta_A, dtype=float)
    if delta_A.shape != (gen.dim, gen.dim):
        raise ValueError(
            f"perturbation shape {delta_A.shape} does not match generator "
            f"dimension {gen.dim}"
        )
    worst = np.abs(delta_A[-1, :]).max()
    if worst > bloch.STRUCTURAL_ZERO_TOL:
        raise InternalConsistencyError(
            f"perturbation last row should vanish, has magnitude {worst:.3e}"
        )
    n = gen.dim - 1
    dA11 = delta_A[:n, :n]
    dA12 = delta_A[:n, n]
    M = s * np.eye(n) - gen.A11 - dA11
    _check_pole(M, gen.A11 + dA11, s, cond_limit)
    theta = np.linalg.inv(M)
    T = np.zeros((gen.dim, gen.dim), dtype=complex)
    T[:n, :n] = theta @ dA11
    T[:n, n] = theta @ dA12
    norm = float(np.linalg.norm(T, 2))
    return TransferMatrixEval(s=complex(s), delta=delta, T=T, norm=norm)


def d_vector(gen: BlochGenerator, *, cond_limit: float = COND_LIMIT) -> np.ndarray:
    """Final-value vector lim_{s->0} s rhat(s) = [-A11^-1 A12; 1] / sqrt(N).

    Its leading block is the unperturbed steady state; its norm scales the
    steady-state shift bound.
    """
    cond = np.linalg.cond(gen.A11)
    if not np.isfinite(cond) or cond > cond_limit:
        raise NonUniqueSteadyStateError(
            f"reduced generator block is singular (condition number "
            f"{cond:.3e}); no finite final value"
        )
    head = -np.linalg.solve(gen.A11, gen.A12)
    return np.concatenate([head, [1.0]]) * gen.trace_component


def propagate(gen: BlochGenerator, r0: np.ndarray, t: float) -> np.ndarray:
    """Evolve coordinates by exp(A t) (scaling-and-squaring matrix
    exponential); preserves the trace component."""
    if t < 0:
        raise ValueError(f"propagation time must be >= 0, got {t}")
    r0 = np.asarray(r0, dtype=float)
    if r0.shape != (gen.dim,):
        raise ValueError(f"coordinate shape {r0.shape} does not match {gen.dim}")
    return scipy.linalg.expm(gen.A * t) @ r0


@dataclass(frozen=True)
class NominalBundle:
    """Precomputed unperturbed quantities shared across a sweep."""

    params: model.ModelParams
    gen: BlochGenerator
    steady: SteadyState
    d: np.ndarray
    d_norm: float


def nominal_bundle(
    params: model.ModelParams, basis: HermitianBasis = model.TWO_QUBIT_BASIS
) -> NominalBundle:
    gen = model.build_bloch(params, basis)
    ss = steady_state(gen, basis)
    d = d_vector(gen)
    return NominalBundle(
        params=params, gen=gen, steady=ss, d=d, d_norm=float(np.linalg.norm(d))
    )


def steady_state_shift_and_bound(
    params: model.ModelParams,
    structure: model.PerturbationStructure,
    delta: float,
    *,
    allow_range_override: bool = False,
    nominal: NominalBundle | None = None,
    basis: HermitianBasis = model.TWO_QUBIT_BASIS,
) -> RobustnessRecord:
    """Full robustness record at one perturbation strength.

    Computes both steady states, the shift z1 = ||r1(delta) - r1(0)||, the
    transfer-matrix norm at s = 0 and the resulting bound, plus purity,
    concurrence error, and fidelity error of the perturbed steady state
    against the unperturbed one.  Points without a unique steady state are
    flagged rather than raised; the margin is still reported there.

    The fidelity term is the Bloch inner product r(delta)^T r(0), which is a
    fidelity proper whenever the unperturbed steady state is pure (true at
    the bare operating point).
    """
    if nominal is None:
        nominal = nominal_bundle(params, basis)
    p_shifted = model.perturb(
        params, structure, delta, allow_range_override=allow_range_override
    )
    gen_d = model.build_bloch(p_shifted, basis)
    margin = stability_margin(gen_d.A)
    try:
        ss_d = steady_state(gen_d, basis)
    except NonUniqueSteadyStateError:
        nan = math.nan
        return RobustnessRecord(
            delta=delta,
            purity=nan,
            concurrence_error=nan,
            fidelity_error=nan,
            stability_margin=margin,
            transfer_norm0=nan,
            z1_distance=nan,
            z1_bound=nan,
            flags=FLAG_NON_UNIQUE,
        )
    delta_A = gen_d.A - nominal.gen.A
    tm = transfer_matrix(nominal.gen, delta_A, 0.0, delta=delta)
    z1 = float(np.linalg.norm(ss_d.r1 - nominal.steady.r1))
    overlap = float(ss_d.r @ nominal.steady.r)
    return RobustnessRecord(
        delta=delta,
        purity=purity(ss_d.rho),
        concurrence_error=1.0 - concurrence(ss_d.rho),
        fidelity_error=1.0 - overlap,
        stability_margin=margin,
        transfer_norm0=tm.norm,
        z1_distance=z1,
        z1_bound=tm.norm * nominal.d_norm,
        flags="",
    )


def _basis_for(gen: BlochGenerator) -> HermitianBasis:
    if gen.dim == model.TWO_QUBIT_BASIS.size:
        return model.TWO_QUBIT_BASIS
    return bloch.build_basis(gen.hilbert_dim)


def _check_pole(M: np.ndarray, block: np.ndarray, s: complex, cond_limit: float) -> None:
    cond = np.linalg.cond(M)
    if np.isfinite(cond) and cond <= cond_limit:
        return
    evals = np.linalg.eigvals(block)
    nearest = evals[np.argmin(np.abs(evals - s))]
    raise PoleError(
        f"Laplace point s = {s} is a pole: nearest generator eigenvalue is "
        f"{nearest}"
    )
