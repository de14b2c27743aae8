"""Dense complex linear algebra for small density matrices.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The
:class:`DensityMatrix` wrapper pairs a matrix with its bipartite split
``(dim_a, dim_b)`` and checks the state invariants once on construction.
"""

from typing import Callable, NamedTuple

import numpy as np

from .exceptions import (
    BadSplitError,
    DomainError,
    InvalidStateError,
    NoConvergenceError,
    NonHermitianError,
)

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
CLAMP_TOL = 1e-10

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


class Spectrum(NamedTuple):
    """Eigen-decomposition of a Hermitian matrix.

    ``eigenvalues`` are real and sorted in descending order; column ``k`` of
    ``eigenvectors`` belongs to ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix with a bipartite split.

    Parameters
    ----------
    mat : array_like, shape (d, d)
        The matrix. It is copied and stored read-only.
    dim_a, dim_b : int, optional
        Subsystem dimensions with ``dim_a * dim_b == d``. When both are
        omitted a 4x4 matrix is read as two qubits and anything else as a
        single system ``(d, 1)``.
    check : bool
        Validate the invariants. Internal callers that already guarantee them
        pass ``False``.

    Raises
    ------
    BadSplitError
        If ``dim_a * dim_b`` differs from the matrix size.
    InvalidStateError
        If the matrix is not Hermitian, not unit trace or not PSD.
    """

    __slots__ = ("_mat", "dim_a", "dim_b")

    def __init__(self, mat, dim_a=None, dim_b=None, check=True):
        m = np.array(mat, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidStateError(f"expected a square matrix, got shape {m.shape}")
        d = m.shape[0]
        if dim_a is None and dim_b is None:
            dim_a, dim_b = (2, 2) if d == 4 else (d, 1)
        elif dim_a is None:
            dim_a = d // dim_b if dim_b else 0
        elif dim_b is None:
            dim_b = d // dim_a if dim_a else 0
        if dim_a * dim_b != d or dim_a < 1 or dim_b < 1:
            raise BadSplitError(f"split {dim_a}x{dim_b} does not match size {d}")
        if check:
            _check_state(m)
        m.setflags(write=False)
        self._mat = m
        self.dim_a = int(dim_a)
        self.dim_b = int(dim_b)

    @property
    def mat(self):
        return self._mat

    @property
    def dims(self):
        return (self.dim_a, self.dim_b)

    @property
    def dim(self):
        return self._mat.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._mat
        return self._mat.astype(dtype)

    def __repr__(self):
        return f"DensityMatrix(dims={self.dims})"

    def __eq__(self, other):
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return self.dims == other.dims and np.array_equal(self._mat, other._mat)

    __hash__ = None

    @classmethod
    def from_ket(cls, psi, dim_a=None, dim_b=None):
        """Projector onto the normalised vector ``psi``."""
        v = np.asarray(psi, dtype=complex).ravel()
        norm = np.linalg.norm(v)
        if norm == 0:
            raise InvalidStateError("zero vector")
        v = v / norm
        return cls(np.outer(v, v.conj()), dim_a, dim_b)


def _check_state(m):
    if not np.all(np.isfinite(m)):
        raise InvalidStateError("matrix has non-finite entries")
    herm = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if herm > HERMITIAN_TOL:
        raise InvalidStateError(f"not Hermitian (max deviation {herm:.3g})")
    tr = np.trace(m).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidStateError(f"trace is {tr!r}, expected 1")
    lo = np.linalg.eigvalsh(m)[0]
    if lo < -PSD_TOL:
        raise InvalidStateError(f"not positive semidefinite (min eigenvalue {lo:.3g})")


def as_matrix(rho):
    """Return the raw complex array behind a state or matrix-like."""
    if isinstance(rho, DensityMatrix):
        return rho.mat
    return np.asarray(rho, dtype=complex)


def hermitize(m):
    """Symmetrise away rounding noise: ``(m + m^dagger) / 2``."""
    return 0.5 * (m + m.conj().T)


def _require_hermitian(m, tol):
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonHermitianError(f"expected a square matrix, got shape {m.shape}")
    dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if dev > tol:
        raise NonHermitianError(f"matrix is not Hermitian (max deviation {dev:.3g})")


def jacobi_eigh(m, tol=1e-13, max_sweeps=100):
    """Cyclic Jacobi eigen-decomposition of a small Hermitian matrix.

    Sweeps over all pairs ``(p, q)``, annihilating ``m[p, q]`` with a complex
    Givens rotation, until the off-diagonal Frobenius norm drops below
    ``tol * max(1, ||m||_F)``.

    Returns
    -------
    eigenvalues : ndarray, shape (n,)
        Unsorted real eigenvalues.
    eigenvectors : ndarray, shape (n, n)
        Unitary matrix whose columns are the eigenvectors.

    Raises
    ------
    NoConvergenceError
        If the sweep budget is exhausted.
    """
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(1.0, np.linalg.norm(a))
    diag_mask = np.eye(n, dtype=bool)
    for _ in range(max_sweeps + 1):
        off = np.linalg.norm(a[~diag_mask])
        if off < tol * scale:
            return np.diag(a).real.copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                phase = apq / r
                theta = (a[q, q].real - a[p, p].real) / (2.0 * r)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ rot
    raise NoConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")


def hermitian_eig(m, method="jacobi", tol=1e-10):
    """Eigen-decomposition of a Hermitian matrix, eigenvalues descending.

    Parameters
    ----------
    m : array_like or DensityMatrix
        Square matrix, Hermitian within ``tol``.
    method : {"jacobi", "lapack"}
        ``"jacobi"`` uses :func:`jacobi_eigh`; ``"lapack"`` delegates to
        :func:`numpy.linalg.eigh`.

    Returns
    -------
    Spectrum
    """
    a = as_matrix(m)
    _require_hermitian(a, tol)
    a = hermitize(a)
    if method == "jacobi":
        w, v = jacobi_eigh(a)
    elif method == "lapack":
        w, v = np.linalg.eigh(a)
    else:
        raise ValueError(f"unknown method {method!r}")
    order = np.argsort(-w, kind="stable")
    return Spectrum(w[order], v[:, order])


def kron(a, b):
    """Kronecker product, ``(a (x) b)[i*rb + k, j*cb + l] = a[i, j] * b[k, l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def _split(rho, dim_a=None, dim_b=None):
    if isinstance(rho, DensityMatrix):
        m = rho.mat
        da, db = (rho.dim_a, rho.dim_b) if dim_a is None else (dim_a, dim_b)
    else:
        m = np.asarray(rho, dtype=complex)
        if dim_a is None:
            if m.shape[0] != 4:
                raise BadSplitError("dims are required for non two-qubit matrices")
            dim_a, dim_b = 2, 2
        da, db = dim_a, dim_b
    if da * db != m.shape[0]:
        raise BadSplitError(f"split {da}x{db} does not match size {m.shape[0]}")
    return m, da, db


def _which(subsystem):
    s = str(subsystem).upper()
    if s not in ("A", "B"):
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    return s


def partial_trace(rho, subsystem="B", dims=None):
    """Trace out one side of a bipartite state.

    Parameters
    ----------
    rho : DensityMatrix or array_like
    subsystem : {"A", "B"}
        The subsystem that is traced out.
    dims : tuple of int, optional
        Split to use instead of the one carried by ``rho``.

    Returns
    -------
    DensityMatrix
        The reduced state of the kept subsystem, with split ``(d_kept, 1)``.
    """
    m, da, db = _split(rho, *(dims or (None, None)))
    t = m.reshape(da, db, da, db)
    if _which(subsystem) == "B":
        red = np.einsum("ikjk->ij", t)
    else:
        red = np.einsum("kikj->ij", t)
    return DensityMatrix(hermitize(red), red.shape[0], 1, check=False)


def partial_transpose(rho, subsystem="B", dims=None):
    """Partial transpose on one subsystem, returned as a plain array."""
    m, da, db = _split(rho, *(dims or (None, None)))
    t = m.reshape(da, db, da, db)
    if _which(subsystem) == "B":
        t = t.transpose(0, 3, 2, 1)
    else:
        t = t.transpose(2, 1, 0, 3)
    return t.reshape(da * db, da * db).copy()


def spectral_fn(m, f: Callable[[np.ndarray], np.ndarray], clamp=True):
    """Apply a real function to a Hermitian matrix through its spectrum.

    Eigenvalues in ``[-1e-10, 0)`` are clamped to zero first when ``clamp``
    is set. Any non-finite value of ``f`` on the (clamped) spectrum raises
    :class:`DomainError`.
    """
    a = as_matrix(m)
    _require_hermitian(a, 1e-10)
    w, v = np.linalg.eigh(hermitize(a))
    if clamp:
        w = np.where((w < 0) & (w >= -CLAMP_TOL), 0.0, w)
    with np.errstate(all="ignore"):
        fw = np.asarray(f(w), dtype=float)
    if not np.all(np.isfinite(fw)):
        bad = w[~np.isfinite(fw)]
        raise DomainError(f"function undefined at eigenvalue(s) {bad}")
    return (v * fw) @ v.conj().T


def sqrtm_psd(m):
    """Principal square root of a PSD matrix."""
    return spectral_fn(m, np.sqrt)


def logm_psd(m, base=2.0):
    """Matrix logarithm of a positive definite matrix in the given base."""
    return spectral_fn(m, lambda w: np.log(w) / np.log(base))
