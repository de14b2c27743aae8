"""Single-qubit Kraus channels applied independently to every qubit.

Four families are provided, each parameterised by a strength ``p`` in
``[0, 1]``:

``ADC``
    amplitude damping, ``|1> -> |0>`` with probability ``p``.
``AAC``
    amplitude amplification, the mirror image ``|0> -> |1>``.
``DPC``
    depolarising, Kraus weights ``1 - 3p/4`` and ``p/4`` on each Pauli.
``PDC``
    phase damping in its three-operator form.
"""

from dataclasses import dataclass, field
from functools import reduce
from itertools import product
from typing import Callable, Sequence, Tuple

import numpy as np

from .exceptions import BadStrengthError, DimensionError, InvalidSpecError
from .linalg import PAULI_X, PAULI_Y, PAULI_Z, DensityMatrix, as_matrix, hermitize

CHANNELS = ("ADC", "AAC", "DPC", "PDC")
COMPLETENESS_TOL = 1e-12


def _ops(name, p):
    s, r = np.sqrt(p), np.sqrt(1.0 - p)
    if name == "ADC":
        return [np.array([[1, 0], [0, r]]), np.array([[0, s], [0, 0]])]
    if name == "AAC":
        return [np.array([[r, 0], [0, 1]]), np.array([[0, 0], [s, 0]])]
    if name == "DPC":
        return [np.sqrt(1.0 - 0.75 * p) * np.eye(2)] + [0.5 * s * sig for sig in (PAULI_X, PAULI_Y, PAULI_Z)]
    # PDC
    return [np.array([[s, 0], [0, 0]]), np.array([[0, 0], [0, s]]), r * np.eye(2)]


@dataclass(frozen=True)
class KrausChannel:
    """A named single-qubit channel at fixed strength.

    Attributes
    ----------
    name : str
        One of ``"ADC"``, ``"AAC"``, ``"DPC"``, ``"PDC"``.
    p : float
        Strength in ``[0, 1]``.
    operators : tuple of ndarray
        The 2x2 Kraus operators ``K_i`` with ``sum K_i^dagger K_i = I``.
    """

    name: str
    p: float
    operators: Tuple[np.ndarray, ...] = field(repr=False, compare=False)

    def completeness_error(self):
        s = sum(k.conj().T @ k for k in self.operators)
        return float(np.max(np.abs(s - np.eye(2))))


def kraus_set(name, p) -> KrausChannel:
    """Kraus operators of channel ``name`` at strength ``p``.

    Raises
    ------
    BadStrengthError
        If ``p`` is outside ``[0, 1]``.
    InvalidSpecError
        For an unknown channel name.
    """
    key = str(name).upper()
    if key not in CHANNELS:
        raise InvalidSpecError(f"unknown channel {name!r}; expected one of {CHANNELS}")
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise BadStrengthError(f"strength must lie in [0, 1], got {p}")
    ops = tuple(np.asarray(k, dtype=complex) for k in _ops(key, p))
    for k in ops:
        k.setflags(write=False)
    return KrausChannel(key, p, ops)


def n_qubits_of(rho):
    d = as_matrix(rho).shape[0]
    n = int(round(np.log2(d))) if d > 0 else -1
    if n < 1 or 2**n != d:
        raise DimensionError(f"dimension {d} is not a power of two")
    return n


def apply(channel: KrausChannel, rho, n_qubits=None) -> DensityMatrix:
    """Apply ``channel`` to each qubit of ``rho``.

    Computes ``sum (K_i1 (x) ... (x) K_in) rho (K_i1 (x) ... (x) K_in)^dagger``
    over all ``len(operators) ** n`` product terms.

    Parameters
    ----------
    channel : KrausChannel
    rho : DensityMatrix or array_like
    n_qubits : int, optional
        Defaults to ``log2(dim)``.

    Raises
    ------
    DimensionError
        If the dimension is not ``2 ** n_qubits`` or the split holds a qutrit.
    """
    m = as_matrix(rho)
    if n_qubits is None:
        n_qubits = n_qubits_of(m)
    if m.shape != (2**n_qubits, 2**n_qubits):
        raise DimensionError(f"expected a {2**n_qubits}x{2**n_qubits} matrix, got {m.shape}")
    if isinstance(rho, DensityMatrix) and (rho.dim_a & (rho.dim_a - 1) or rho.dim_b & (rho.dim_b - 1)):
        raise DimensionError(f"channels act on qubits only, got split {rho.dims}")
    out = np.zeros_like(m)
    for combo in product(channel.operators, repeat=n_qubits):
        k = reduce(np.kron, combo)
        out += k @ m @ k.conj().T
    out = hermitize(out)
    dims = rho.dims if isinstance(rho, DensityMatrix) else (2, 2 ** (n_qubits - 1))
    return DensityMatrix(out, *dims, check=False)


@dataclass(frozen=True)
class SweepSpec:
    """Strength sweep of one scalar quantity on a fixed input state.

    ``quantity`` is ``"mean_qfi"``, ``"concurrence"``, ``"negativity"`` or
    ``"ree"``. ``p_grid`` must be non-empty, ascending and inside ``[0, 1]``.
    """

    state: object
    channel: str
    p_grid: Sequence[float]
    quantity: str = "mean_qfi"

    def __post_init__(self):
        g = np.asarray(self.p_grid, dtype=float)
        if g.size == 0:
            raise InvalidSpecError("p_grid is empty")
        if np.any(np.diff(g) < 0):
            raise InvalidSpecError("p_grid must be ascending")
        if g[0] < 0 or g[-1] > 1:
            raise BadStrengthError("p_grid must lie in [0, 1]")
        if self.quantity not in QUANTITIES:
            raise InvalidSpecError(f"unknown quantity {self.quantity!r}")
        if str(self.channel).upper() not in CHANNELS:
            raise InvalidSpecError(f"unknown channel {self.channel!r}")


def _mean_qfi(rho):
    from .qfi import qfi

    return qfi(rho).mean_qfi


def _concurrence(rho):
    from .measures import concurrence

    return concurrence(rho)


def _negativity(rho):
    from .measures import negativity

    return negativity(rho)


def _ree(rho):
    from .ree import ree

    return ree(rho).value


QUANTITIES = {
    "mean_qfi": _mean_qfi,
    "concurrence": _concurrence,
    "negativity": _negativity,
    "ree": _ree,
}


def _resolve_state(state):
    if isinstance(state, DensityMatrix):
        return state
    from .states import StateSpec, make_state

    if isinstance(state, StateSpec):
        return make_state(state)
    return DensityMatrix(state)


def sweep(spec: SweepSpec, jobs=1):
    """Evaluate ``spec.quantity`` on the channel output at every grid strength.

    Returns
    -------
    list of (float, float)
        ``(p, value)`` rows in grid order.
    """
    rho = _resolve_state(spec.state)
    fn: Callable = QUANTITIES[spec.quantity]
    grid = [float(p) for p in spec.p_grid]
    work = [(spec.channel, p, rho, fn) for p in grid]
    if jobs == 1:
        values = [_sweep_point(w) for w in work]
    else:
        from .parallel import ordered_map

        values = ordered_map(_sweep_point, work, jobs=jobs)
    return list(zip(grid, values))


def _sweep_point(item):
    name, p, rho, fn = item
    return float(fn(apply(kraus_set(name, p), rho)))


def find_crossing(p, f, g):
    """First strength after which ``f`` exceeds ``g`` for good.

    Scans ``d = f - g`` on the grid and returns the linearly interpolated
    root of the last sign change from ``d <= 0`` to ``d > 0``, provided
    ``d > 0`` holds on every later grid point. Returns ``None`` when no such
    crossing exists inside the open grid range.
    """
    p = np.asarray(p, dtype=float)
    d = np.asarray(f, dtype=float) - np.asarray(g, dtype=float)
    pos = d > 0
    if not pos[-1] or pos.all():
        return None
    k = int(np.flatnonzero(~pos)[-1])
    lo, hi = d[k], d[k + 1]
    t = 0.0 if hi == lo else -lo / (hi - lo)
    return float(p[k] + t * (p[k + 1] - p[k]))
