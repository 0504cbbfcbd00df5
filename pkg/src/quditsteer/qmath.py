"""Dense complex linear algebra for small multipartite systems.

States and operators are plain ``numpy`` arrays: kets are 1-D complex
vectors, operators are square complex matrices.  Composite systems use a
single global index convention throughout the package:

    index = i_A * d_B + i_B      (row-major, first factor most significant)

which is exactly the ordering produced by ``numpy.kron(A, B)``.  Transposes
are always taken in the computational basis.

Everything here is a pure function of its inputs; no global state.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "ket",
    "projector",
    "dagger",
    "is_hermitian",
    "kron",
    "partial_trace",
    "eig_max_hermitian",
    "is_psd",
]

HERMITIAN_TOL = 1e-10


def ket(amplitudes, normalize: bool = True) -> np.ndarray:
    """Return a 1-D complex state vector, normalized unless told otherwise."""
    v = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if normalize:
        n = np.linalg.norm(v)
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        v = v / n
    return v


def projector(v) -> np.ndarray:
    """Rank-1 projector |v><v| of a (not necessarily normalized) ket."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def dagger(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).conj().T


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.abs(m - m.conj().T).max() <= tol


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product in the global index convention (first factor leading)."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(m: np.ndarray, dims, keep: int) -> np.ndarray:
    """Trace out all subsystems of ``m`` except ``dims[keep]``.

    ``dims`` lists the subsystem dimensions in the global index order; the
    product of the dims must match the side length of the square matrix.
    The trace of the result equals the trace of the input.
    """
    m = np.asarray(m, dtype=complex)
    dims = [int(d) for d in dims]
    n = int(np.prod(dims))
    if m.ndim != 2 or m.shape != (n, n):
        raise ValueError(f"matrix shape {m.shape} does not match dims {dims}")
    if not 0 <= keep < len(dims):
        raise ValueError(f"keep={keep} out of range for {len(dims)} subsystems")
    t = m.reshape(dims + dims)
    # contract every subsystem index pair except the kept one
    for sub in range(len(dims) - 1, -1, -1):
        if sub == keep:
            continue
        t = np.trace(t, axis1=sub, axis2=sub + t.ndim // 2)
    return t


def eig_max_hermitian(h: np.ndarray) -> float:
    """Largest eigenvalue of a Hermitian matrix.

    Raises ``ValueError`` when the input is not Hermitian within 1e-10.
    """
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h):
        raise ValueError("matrix is not Hermitian within tolerance")
    return float(np.linalg.eigvalsh(h)[-1])


def is_psd(m: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff the (Hermitian) matrix has minimum eigenvalue >= -tol."""
    m = np.asarray(m, dtype=complex)
    return bool(np.linalg.eigvalsh((m + m.conj().T) / 2)[0] >= -tol)
