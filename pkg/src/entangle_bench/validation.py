"""Input checks shared by the estimator wrappers."""

import numpy as np

from .exceptions import InvalidStateError
from .linalg import DensityMatrix


def check_density_matrices(X, check_state=True):
    """Stack ``X`` into a complex array of shape ``(n, d, d)``.

    ``X`` may be a single matrix, a sequence of matrices or a sequence of
    :class:`DensityMatrix`. With ``check_state`` each matrix must satisfy
    the density-matrix invariants.

    Raises
    ------
    InvalidStateError
        On a shape mismatch or an invalid state.
    """
    if isinstance(X, DensityMatrix):
        X = [X]
    if not isinstance(X, np.ndarray):
        X = [np.asarray(x.mat if isinstance(x, DensityMatrix) else x, dtype=complex) for x in X]
        if not X:
            return np.empty((0, 0, 0), dtype=complex)
        shapes = {x.shape for x in X}
        if len(shapes) != 1:
            raise InvalidStateError(f"matrices of different shapes {sorted(shapes)}")
    arr = np.asarray(X, dtype=complex)
    if arr.ndim == 2:
        arr = arr[None]
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise InvalidStateError(f"expected shape (n, d, d), got {arr.shape}")
    if check_state:
        for m in arr:
            DensityMatrix(m, check=True)
    return arr


def infer_dims(d, dims=None):
    if dims is not None:
        return tuple(dims)
    return {4: (2, 2), 6: (2, 3)}.get(d, (2, d // 2))
