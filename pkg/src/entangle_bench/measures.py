"""Entanglement measures for two-qubit and qubit-qutrit states.

All entropies are in bits. Closed-form measures need a two-qubit input
unless noted; the negativity family also accepts a 2x3 split.
"""

from dataclasses import asdict, dataclass, fields
from typing import Optional

import numpy as np

from .exceptions import DimensionError
from .linalg import PAULI_Y, DensityMatrix, as_matrix, partial_transpose, sqrtm_psd

SPIN_FLIP = np.kron(PAULI_Y, PAULI_Y)
MAX_CONCURRENCE_VARIANTS = ("lambda3", "lambda2")


def _dims(rho):
    if isinstance(rho, DensityMatrix):
        return rho.dims
    m = as_matrix(rho)
    if m.shape == (4, 4):
        return (2, 2)
    if m.shape == (6, 6):
        return (2, 3)
    raise DimensionError(f"cannot infer a bipartite split for shape {m.shape}")


def _require_two_qubit(rho):
    if _dims(rho) != (2, 2):
        raise DimensionError(f"two-qubit input required, got split {_dims(rho)}")
    return as_matrix(rho)


def _require_negativity_dims(rho):
    dims = _dims(rho)
    if dims not in ((2, 2), (2, 3), (3, 2)):
        raise DimensionError(f"negativity needs a 2x2 or 2x3 split, got {dims}")
    return dims


def _clip01(x):
    return float(min(1.0, max(0.0, x)))


def wootters_lambdas(rho):
    """Descending square roots of the spectrum of ``sqrt(rho) rho~ sqrt(rho)``.

    ``rho~ = (Y (x) Y) rho* (Y (x) Y)`` is the spin-flipped state. The
    Hermitian form has the same spectrum as ``rho rho~``.
    """
    m = _require_two_qubit(rho)
    s = sqrtm_psd(m)
    flipped = SPIN_FLIP @ m.conj() @ SPIN_FLIP
    h = s @ flipped @ s
    w = np.linalg.eigvalsh(0.5 * (h + h.conj().T))
    return np.sqrt(np.clip(w, 0.0, None))[::-1]


def concurrence(rho):
    """Wootters concurrence ``max(0, l1 - l2 - l3 - l4)``."""
    lam = wootters_lambdas(rho)
    return _clip01(lam[0] - lam[1] - lam[2] - lam[3])


def max_concurrence(rho, variant="lambda3"):
    """Largest concurrence reachable by a global unitary, from the spectrum of ``rho``.

    With eigenvalues ``l1 >= l2 >= l3 >= l4`` of ``rho``:

    * ``"lambda3"`` (default): ``max(0, l1 - l3 - 2 sqrt(l2 l4))``
    * ``"lambda2"``: ``max(0, l1 - l2 - 2 sqrt(l2 l4))``

    Only the first is the orbit maximum; the second is kept for comparison.
    """
    m = _require_two_qubit(rho)
    lam = np.sort(np.clip(np.linalg.eigvalsh(m), 0.0, None))[::-1]
    return max_concurrence_from_spectrum(lam, variant)


def max_concurrence_from_spectrum(lam, variant="lambda3"):
    l1, l2, l3, l4 = np.sort(np.clip(np.asarray(lam, dtype=float), 0.0, None))[::-1]
    if variant == "lambda3":
        v = l1 - l3 - 2.0 * np.sqrt(l2 * l4)
    elif variant == "lambda2":
        v = l1 - l2 - 2.0 * np.sqrt(l2 * l4)
    else:
        raise ValueError(f"unknown variant {variant!r}; expected one of {MAX_CONCURRENCE_VARIANTS}")
    return _clip01(v)


def pt_spectrum(rho):
    """Ascending eigenvalues of the partial transpose on subsystem B."""
    dims = _require_negativity_dims(rho)
    return np.linalg.eigvalsh(partial_transpose(rho, "B", dims))


def negativity(rho):
    """``max(0, -2 mu_min)`` with ``mu_min`` the smallest eigenvalue of ``rho^T_B``."""
    return _clip01(-2.0 * pt_spectrum(rho)[0])


def negativity_trace_norm(rho):
    """Twice the summed magnitude of all negative partial-transpose eigenvalues.

    Coincides with :func:`negativity` whenever at most one eigenvalue is
    negative, which is always the case for two qubits.
    """
    mu = pt_spectrum(rho)
    return float(max(0.0, -2.0 * mu[mu < 0].sum()))


def log_negativity(rho=None, n=None):
    """``log2(2 N + 1)``; pass either a state or a precomputed negativity ``n``."""
    if n is None:
        n = negativity(rho)
    return float(np.log2(2.0 * n + 1.0))


def neg_eig_measure(rho):
    """Magnitude of the most negative partial-transpose eigenvalue, or 0."""
    return float(max(0.0, -pt_spectrum(rho)[0]))


def is_ppt(rho, tol=0.0):
    return bool(pt_spectrum(rho)[0] >= -tol)


def binary_entropy(x):
    """``-x log2 x - (1 - x) log2(1 - x)`` with ``0 log 0 = 0``."""
    x = float(x)
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x))


def eof_from_concurrence(c):
    c = min(1.0, max(0.0, float(c)))
    return binary_entropy(0.5 * (1.0 + np.sqrt(1.0 - c * c)))


def eof(rho):
    """Entanglement of formation of a two-qubit state, through its concurrence."""
    return eof_from_concurrence(concurrence(rho))


def von_neumann_entropy(rho):
    w = np.linalg.eigvalsh(as_matrix(rho))
    w = w[w > 1e-15]
    return float(-np.sum(w * np.log2(w)))


@dataclass
class MeasureRecord:
    """Measure values for one state.

    Fields that do not apply to the input (closed-form two-qubit measures on
    a qubit-qutrit state) or were not requested are ``None``.
    """

    concurrence: Optional[float] = None
    c_max: Optional[float] = None
    negativity: Optional[float] = None
    log_negativity: Optional[float] = None
    neg_eig: Optional[float] = None
    eof: Optional[float] = None
    ree: Optional[float] = None
    ree_gap: Optional[float] = None
    ree_converged: Optional[bool] = None
    mean_qfi: Optional[float] = None
    mqfi_max: Optional[float] = None
    mqfi_min: Optional[float] = None

    def get(self, name):
        return getattr(self, ALIASES.get(name, name))

    def as_dict(self):
        return asdict(self)


RECORD_FIELDS = tuple(f.name for f in fields(MeasureRecord))

# short names accepted wherever a measure is named
ALIASES = {
    "C": "concurrence",
    "Cmax": "c_max",
    "N": "negativity",
    "EN": "log_negativity",
    "E_N": "log_negativity",
    "EF": "eof",
    "E_F": "eof",
    "E": "ree",
    "REE": "ree",
    "F": "mean_qfi",
    "qfi": "mean_qfi",
    "MQFI": "mqfi_max",
    "MQFImin": "mqfi_min",
}


def canonical_measure(name):
    key = ALIASES.get(name, name)
    if key not in RECORD_FIELDS:
        raise KeyError(name)
    return key


def measure_all(rho, ree_config=None, rng=None, include_ree=True, include_qfi=False, c_max_variant="lambda3"):
    """Evaluate every applicable measure on ``rho``.

    Parameters
    ----------
    rho : DensityMatrix
    ree_config : ReeConfig, optional
    rng : numpy.random.Generator, optional
        Stream for the REE oracle restarts.
    include_ree : bool
        The REE is the only iterative measure; skip it when not needed.
    include_qfi : bool
        Also fill ``mean_qfi`` (two-qubit inputs only).

    Returns
    -------
    MeasureRecord
    """
    dims = _dims(rho)
    rec = MeasureRecord()
    mu = pt_spectrum(rho)
    rec.negativity = _clip01(-2.0 * mu[0])
    rec.log_negativity = log_negativity(n=rec.negativity)
    rec.neg_eig = float(max(0.0, -mu[0]))
    if dims == (2, 2):
        rec.concurrence = concurrence(rho)
        rec.c_max = max_concurrence(rho, c_max_variant)
        rec.eof = eof_from_concurrence(rec.concurrence)
        if include_qfi:
            from .qfi import qfi

            rec.mean_qfi = qfi(rho, 2).mean_qfi
    if include_ree:
        from .ree import ree

        res = ree(rho, ree_config, rng=rng)
        rec.ree, rec.ree_gap, rec.ree_converged = res.value, res.gap, res.converged
    return rec
