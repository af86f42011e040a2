"""Real-vector representation of quantum states and Lindblad generators.

A density matrix on an N-dimensional Hilbert space is expanded over an
orthonormal Hermitian operator basis whose last element is proportional to
the identity; all other elements are traceless.  In these coordinates the
master equation becomes a real linear system

    dr/dt = A r,      or reduced:   dr1/dt = A11 r1 + c,

where the last coordinate of r (the trace component) is the constant
1/sqrt(N) and the last row of A vanishes.  The affine vector c of the
reduced form equals A12 times that constant.

Orthonormality is under the Hilbert-Schmidt product Tr(X Y), so the
identity-proportional element is I/sqrt(N) and Parseval's identity holds:
|r|^2 = Tr(rho^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from . import superop
from .errors import InternalConsistencyError

# Tolerances for double precision at the 4x4 scale of this package: far above
# rounding noise, far below any physical effect.
HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10
IMAG_RESIDUE_TOL = 1e-12
STRUCTURAL_ZERO_TOL = 1e-10

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)
SIGMA_PLUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
SIGMA_MINUS = SIGMA_PLUS.conj().T


@dataclass(frozen=True)
class HermitianBasis:
    """Ordered orthonormal Hermitian operator basis, identity element last.

    `elements` has shape (dim**2, dim, dim).
    """

    dim: int
    elements: np.ndarray

    @property
    def size(self) -> int:
        return self.dim**2

    @property
    def trace_component(self) -> float:
        """Constant last Bloch coordinate of any unit-trace state."""
        return 1.0 / math.sqrt(self.dim)


@dataclass(frozen=True)
class BlochGenerator:
    """Real generator A with its trace-preserving block partition.

    A is (dim x dim) with dim = N^2; the last row is identically zero.  A11
    is the leading (dim-1) block, A12 the last column above it, and
    c = A12 / sqrt(N) is the affine term of the reduced dynamics.
    """

    dim: int
    A: np.ndarray
    A11: np.ndarray
    A12: np.ndarray
    c: np.ndarray

    @property
    def hilbert_dim(self) -> int:
        return math.isqrt(self.dim)

    @property
    def trace_component(self) -> float:
        return 1.0 / math.sqrt(self.hilbert_dim)


def build_basis(dim: int) -> HermitianBasis:
    """Construct the tensor-product Pauli basis for a power-of-two dimension.

    Ordering is lexicographic over per-qubit factors (x, y, z, I), which
    places the identity element last; every other element is traceless.
    Each element is normalized to unit Hilbert-Schmidt norm, so for a single
    qubit the elements are the Paulis over sqrt(2) and for two qubits the
    pairwise Kronecker products over 2.
    """
    if dim < 2:
        raise ValueError(f"basis dimension must be >= 2, got {dim}")
    n_factors = dim.bit_length() - 1
    if 2**n_factors != dim:
        raise ValueError(
            f"only power-of-two dimensions are supported, got {dim}"
        )
    singles = (PAULI_X, PAULI_Y, PAULI_Z, IDENTITY_2)
    mats = []
    for combo in product(singles, repeat=n_factors):
        m = combo[0]
        for factor in combo[1:]:
            m = np.kron(m, factor)
        mats.append(m)
    elements = np.ascontiguousarray(np.asarray(mats) / math.sqrt(dim))
    return HermitianBasis(dim=dim, elements=elements)


def validate_density_matrix(
    rho: np.ndarray,
    *,
    herm_tol: float = 1e-12,
    trace_tol: float = TRACE_TOL,
    positivity_tol: float = POSITIVITY_TOL,
) -> None:
    """Check Hermiticity, unit trace, positivity, and the purity bounds.

    Raises ValueError describing the first violated invariant.
    """
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    n = rho.shape[0]
    herm = np.abs(rho - rho.conj().T).max()
    if herm > herm_tol:
        raise ValueError(f"not Hermitian: max asymmetry {herm:.3e}")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"trace is {tr:.12g}, expected 1")
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < -positivity_tol:
        raise ValueError(f"not positive semidefinite: min eigenvalue {evals.min():.3e}")
    pur = float(np.sum(evals**2))
    if pur < 1.0 / n - 1e-10 or pur > 1.0 + 1e-10:
        raise ValueError(f"purity {pur:.12g} outside [1/{n}, 1]")


def density_to_bloch(rho: np.ndarray, basis: HermitianBasis) -> np.ndarray:
    """Coordinates r_n = Tr(nu_n rho); the tiny imaginary residue of the
    traces is checked against IMAG_RESIDUE_TOL and discarded."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (basis.dim, basis.dim):
        raise ValueError(
            f"state shape {rho.shape} does not match basis dimension {basis.dim}"
        )
    traces = np.einsum("nab,ba->n", basis.elements, rho, optimize=True)
    residue = np.abs(traces.imag).max()
    if residue > IMAG_RESIDUE_TOL:
        raise ValueError(
            f"imaginary residue {residue:.3e} in Bloch coordinates; "
            "input is not Hermitian"
        )
    return np.ascontiguousarray(traces.real)


def bloch_to_density(r: np.ndarray, basis: HermitianBasis) -> np.ndarray:
    """Inverse expansion rho = sum_n r_n nu_n.

    Positivity is not enforced; callers validate when required.
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (basis.size,):
        raise ValueError(
            f"coordinate vector length {r.shape} does not match basis size {basis.size}"
        )
    return np.einsum("n,nab->ab", r, basis.elements, optimize=True)


def hamiltonian_generator(H: np.ndarray, basis: HermitianBasis) -> np.ndarray:
    """Real antisymmetric matrix representing -i[H, .] in the basis."""
    H = np.asarray(H, dtype=complex)
    if H.shape != (basis.dim, basis.dim):
        raise ValueError(
            f"Hamiltonian shape {H.shape} does not match basis dimension {basis.dim}"
        )
    herm = np.abs(H - H.conj().T).max()
    if herm > HERMITICITY_TOL:
        raise ValueError(f"Hamiltonian is not Hermitian: max asymmetry {herm:.3e}")
    A = superop.hamiltonian_superop(H, basis.elements)
    _zero_structural(A, row=True, col=True)
    return A


def lindblad_generator(
    V: np.ndarray, rate: float, basis: HermitianBasis
) -> np.ndarray:
    """Real matrix representing the dissipation channel of jump operator V
    with the given (nonnegative) rate."""
    if rate < 0:
        raise ValueError(
            f"negative rate {rate}: decay and decoherence rates must be >= 0"
        )
    V = np.asarray(V, dtype=complex)
    if V.shape != (basis.dim, basis.dim):
        raise ValueError(
            f"jump operator shape {V.shape} does not match basis dimension {basis.dim}"
        )
    A = rate * superop.dissipator_superop(V, basis.elements)
    _zero_structural(A, row=True, col=False)
    return A


def c_vector(jump_ops, basis: HermitianBasis) -> np.ndarray:
    """Affine vector of the reduced dynamics,
    c_m = (1/N) sum_k rate_k Tr([V_k, V_k†] nu_m), over the traceless
    elements only.  Vanishes for Hermitian (dephasing-type) operators."""
    c = np.zeros(basis.size - 1)
    for V, rate in jump_ops:
        if rate < 0:
            raise ValueError(f"negative rate {rate}")
        V = np.asarray(V, dtype=complex)
        if V.shape != (basis.dim, basis.dim):
            raise ValueError(
                f"jump operator shape {V.shape} does not match basis "
                f"dimension {basis.dim}"
            )
        comm = V @ V.conj().T - V.conj().T @ V
        traces = np.einsum("nab,ba->n", basis.elements[:-1], comm, optimize=True)
        c += (rate / basis.dim) * traces.real
    return c


def assemble(A_H: np.ndarray, A_V_list) -> BlochGenerator:
    """Sum the Hamiltonian and dissipator parts into a BlochGenerator.

    The last row must vanish to STRUCTURAL_ZERO_TOL (trace preservation);
    it is then zeroed exactly and the block partition extracted.
    """
    A = np.array(A_H, dtype=float, copy=True)
    for A_V in A_V_list:
        A = A + A_V
    n2 = A.shape[0]
    if A.shape != (n2, n2):
        raise ValueError(f"generator must be square, got {A.shape}")
    worst = np.abs(A[-1, :]).max()
    if worst > STRUCTURAL_ZERO_TOL:
        raise InternalConsistencyError(
            f"last generator row should vanish (trace preservation) but has "
            f"magnitude {worst:.3e}"
        )
    A[-1, :] = 0.0
    N = math.isqrt(n2)
    A11 = np.ascontiguousarray(A[:-1, :-1])
    A12 = np.ascontiguousarray(A[:-1, -1])
    c = A12 / math.sqrt(N)
    return BlochGenerator(dim=n2, A=A, A11=A11, A12=A12, c=c)


def _zero_structural(A: np.ndarray, *, row: bool, col: bool) -> None:
    # The identity-proportional element is last, so these entries are exact
    # zeros analytically; anything larger than rounding noise is a bug.
    if row:
        worst = np.abs(A[-1, :]).max()
        if worst > STRUCTURAL_ZERO_TOL:
            raise InternalConsistencyError(
                f"structural zero row has magnitude {worst:.3e}"
            )
        A[-1, :] = 0.0
    if col:
        worst = np.abs(A[:, -1]).max()
        if worst > STRUCTURAL_ZERO_TOL:
            raise InternalConsistencyError(
                f"structural zero column has magnitude {worst:.3e}"
            )
        A[:, -1] = 0.0
