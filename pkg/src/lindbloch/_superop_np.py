"""Pure-numpy kernels that map operators to their real matrix representation
over a Hermitian operator basis.

These are the hot inner loops of every parameter sweep (one generator build
per grid point).  `_superop_cy` provides a compiled drop-in replacement;
`superop` picks whichever is available.

Both kernels take the basis as a complex (n², N, N) array and return a real
(n², n²) array.  Entry conventions, with {.,.} the anticommutator:

    hamiltonian:  A[m, n] = Re Tr(i H [nu_m, nu_n])
    dissipator:   A[m, n] = Re Tr(V† nu_m V nu_n - ½ V†V {nu_m, nu_n})

The dissipator kernel is unit-rate; callers scale by the channel rate.
"""

import numpy as np


def hamiltonian_superop(H: np.ndarray, elements: np.ndarray) -> np.ndarray:
    # Tr(iH[nu_m, nu_n]) = i(Tr(H nu_m nu_n) - Tr(H nu_n nu_m)); taking the
    # real part of i*z is -Im(z).  The subtraction makes the result exactly
    # antisymmetric in floating point.
    prod = np.einsum("ab,mbc->mac", H, elements, optimize=True)
    s = np.einsum("mac,nca->mn", prod, elements, optimize=True)
    return -(s.imag - s.imag.T)


def dissipator_superop(V: np.ndarray, elements: np.ndarray) -> np.ndarray:
    Vd = V.conj().T
    sandwich = np.einsum("ab,mbc,cd->mad", Vd, elements, V, optimize=True)
    t1 = np.einsum("mac,nca->mn", sandwich, elements, optimize=True).real
    K = Vd @ V
    KM = np.einsum("ab,mbc->mac", K, elements, optimize=True)
    t2 = np.einsum("mac,nca->mn", KM, elements, optimize=True).real
    return t1 - 0.5 * (t2 + t2.T)
