"""Shared test utilities: random states, reference states, and independent
oracle implementations kept deliberately separate from the package code."""

import numpy as np

from lindbloch.bloch import PAULI_Y

_YY = np.kron(PAULI_Y, PAULI_Y)


def random_density(rng, n):
    """Ginibre-random full-rank density matrix."""
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = x @ x.conj().T
    return rho / np.trace(rho).real


def random_pure(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def bell_state():
    """(|01> + |10>)/sqrt(2) projector."""
    v = np.zeros(4, dtype=complex)
    v[1] = v[2] = 1.0 / np.sqrt(2.0)
    return np.outer(v, v.conj())


def singlet_state():
    """(|01> - |10>)/sqrt(2) projector."""
    v = np.zeros(4, dtype=complex)
    v[1] = 1.0 / np.sqrt(2.0)
    v[2] = -1.0 / np.sqrt(2.0)
    return np.outer(v, v.conj())


def werner(p):
    """p * singlet + (1-p) * I/4; concurrence max(0, (3p-1)/2)."""
    return p * singlet_state() + (1.0 - p) * np.eye(4) / 4.0


def lindblad_rhs(H, jumps, rho):
    """Matrix-picture master-equation derivative; oracle for the real-matrix
    generator route."""
    out = -1j * (H @ rho - rho @ H)
    for V, rate in jumps:
        K = V.conj().T @ V
        out = out + rate * (V @ rho @ V.conj().T - 0.5 * (K @ rho + rho @ K))
    return out


def psd_sqrt(rho):
    w, U = np.linalg.eigh(rho)
    w = np.clip(w, 0.0, None)
    return (U * np.sqrt(w)) @ U.conj().T


def concurrence_explicit_r(rho):
    """Concurrence via the explicit R = sqrt(sqrt(rho) rho~ sqrt(rho))
    construction; oracle for the eigenvalue route."""
    rho = np.asarray(rho, dtype=complex)
    rho_tilde = _YY @ rho.conj() @ _YY
    sq = psd_sqrt(rho)
    R = psd_sqrt(sq @ rho_tilde @ sq)
    lams = np.sort(np.linalg.eigvalsh(R))[::-1]
    return max(0.0, float(lams[0] - lams[1] - lams[2] - lams[3]))


def kendall_tau_bruteforce(x, y):
    """Tie-corrected tau by explicit double-loop counting."""
    import math

    n = len(x)
    concordant = discordant = ties_x = ties_y = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = x[i] - x[j]
            dy = y[i] - y[j]
            if dx == 0:
                ties_x += 1
            if dy == 0:
                ties_y += 1
            if dx == 0 or dy == 0:
                continue
            if (dx > 0) == (dy > 0):
                concordant += 1
            else:
                discordant += 1
    n0 = n * (n - 1) // 2
    if ties_x == n0 or ties_y == n0:
        return math.nan
    return (concordant - discordant) / math.sqrt((n0 - ties_x) * (n0 - ties_y))
