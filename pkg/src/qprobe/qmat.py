"""Dense complex kernels for one- and two-qubit operators.

Everything here is fixed-size (2x2 signal/probe operators, 4x4 joint
operators) and backed by plain ndarrays. The two-qubit exponential is
evaluated in the maximally-entangled basis where its generator is
diagonal, so no iterative solver is involved.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "ID2",
    "ID4",
    "pauli",
    "kron",
    "dagger",
    "partial_trace_probe",
    "eig_h2",
    "sqrt_psd2",
    "cartan_exp",
]

ID2 = np.eye(2, dtype=complex)
ID4 = np.eye(4, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_PAULI = (ID2, SIGMA_X, SIGMA_Y, SIGMA_Z)

# eigenvalue gap below which a 2x2 Hermitian matrix is treated as
# degenerate and the computational basis is returned
DEGENERACY_ATOL = 1e-12

# eigenvalues of a notionally PSD matrix may undershoot zero by this
# much before the matrix square root refuses
PSD_CLAMP = 1e-9

# projectors onto the four maximally entangled two-qubit states; all
# entries are exactly 0 or +-1/2
_BELL_PROJECTORS = 0.5 * np.array(
    [
        [[1, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 1]],
        [[1, 0, 0, -1], [0, 0, 0, 0], [0, 0, 0, 0], [-1, 0, 0, 1]],
        [[0, 0, 0, 0], [0, 1, 1, 0], [0, 1, 1, 0], [0, 0, 0, 0]],
        [[0, 0, 0, 0], [0, 1, -1, 0], [0, -1, 1, 0], [0, 0, 0, 0]],
    ],
    dtype=complex,
)

# signs s such that (c1 XX + c2 YY + c3 ZZ)/2 has eigenvalue s.c/2 on
# the corresponding entangled state, rows ordered as the projectors
_BELL_SIGNS = np.array(
    [
        [1.0, -1.0, 1.0],
        [-1.0, 1.0, 1.0],
        [1.0, 1.0, -1.0],
        [-1.0, -1.0, -1.0],
    ]
)


def pauli(i: int) -> np.ndarray:
    """Return sigma_i for i in 0..3 (0 is the identity)."""
    if i not in (0, 1, 2, 3):
        raise ValueError(f"pauli index must be 0..3, got {i}")
    return _PAULI[i].copy()


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product with the first factor acting on the signal qubit."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conjugate(np.swapaxes(m, -1, -2))


def partial_trace_probe(m: np.ndarray) -> np.ndarray:
    """Trace out the second (probe) factor of a 4x4 operator.

    Accepts any leading batch shape; the last two axes must be 4x4 in
    the signal-tensor-probe index convention.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape[-2:] != (4, 4):
        raise ValueError(f"expected trailing 4x4 axes, got shape {m.shape}")
    blocks = m.reshape(m.shape[:-2] + (2, 2, 2, 2))
    return np.einsum("...ikjk->...ij", blocks)


def eig_h2(m: np.ndarray, atol: float = DEGENERACY_ATOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a 2x2 Hermitian matrix.

    Returns (w, v) with eigenvalues w descending and eigenvectors in the
    columns of v. A gap at or below `atol` is treated as degenerate and
    the computational basis is returned so downstream consumers get a
    deterministic choice.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    if not np.allclose(m, dagger(m), rtol=0.0, atol=1e-10):
        raise ValueError("matrix is not Hermitian")
    w, v = np.linalg.eigh(m)
    w = w[::-1].copy()
    v = v[:, ::-1].copy()
    if abs(w[0] - w[1]) <= atol:
        v = np.eye(2, dtype=complex)
    return w, v


def sqrt_psd2(m: np.ndarray) -> np.ndarray:
    """Hermitian square root of a 2x2 PSD matrix.

    Eigenvalues in [-PSD_CLAMP, 0) are clamped to zero; anything lower
    signals an invalid operator and raises.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    if not np.allclose(m, dagger(m), rtol=0.0, atol=1e-10):
        raise ValueError("matrix is not Hermitian")
    if m[0, 1] == 0 and m[1, 0] == 0:
        # diagonal shortcut keeps identity/projector roots exact
        w = np.array([m[0, 0].real, m[1, 1].real])
        if np.any(w < -PSD_CLAMP):
            raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {w.min():.3e})")
        return np.diag(np.sqrt(np.clip(w, 0.0, None))).astype(complex)
    w, v = np.linalg.eigh(m)
    if np.any(w < -PSD_CLAMP):
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {w.min():.3e})")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ dagger(v)


def cartan_exp(c1, c2, c3) -> np.ndarray:
    """exp(-i (c1 XX + c2 YY + c3 ZZ)/2) on two qubits.

    The generator is diagonal in the maximally-entangled basis, so the
    exponential is a phase sum over four exact projectors; zero
    coefficients therefore reproduce the identity exactly. Scalar
    arguments give a 4x4 array, broadcast array arguments a stacked
    (..., 4, 4) array.
    """
    coeffs = np.stack(np.broadcast_arrays(*(np.asarray(c, dtype=float) for c in (c1, c2, c3))), axis=-1)
    lam = 0.5 * (coeffs @ _BELL_SIGNS.T)
    return np.einsum("...b,bij->...ij", np.exp(-1j * lam), _BELL_PROJECTORS)
