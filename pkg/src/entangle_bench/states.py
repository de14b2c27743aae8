"""Named states and seeded random ensembles.

Qubit ordering: the leftmost ket symbol is subsystem A and the most
significant bit of the computational-basis index, so ``|01>`` is index 1.
"""

from dataclasses import dataclass
from functools import reduce
from typing import Iterator, Optional, Tuple

import numpy as np

from .exceptions import InvalidSpecError
from .linalg import DensityMatrix, as_matrix, hermitize, partial_trace

FAMILIES = (
    "bell",
    "ghz",
    "w",
    "wlike3",
    "superposition",
    "schmidt",
    "werner",
    "random_pure",
    "random_mixed",
)


def basis_ket(bits):
    """Computational basis vector for a bit string such as ``"010"``."""
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def ghz_ket(n):
    v = np.zeros(2**n, dtype=complex)
    v[0] = v[-1] = 1 / np.sqrt(2)
    return v


def w_ket(n):
    """Symmetric single-excitation state of ``n`` qubits."""
    v = np.zeros(2**n, dtype=complex)
    v[[1 << k for k in range(n)]] = 1 / np.sqrt(n)
    return v


def w_ket_recursive(n):
    """W state built qubit by qubit as ``(|0..0>|1> + sqrt(n-1)|W_{n-1}>|0>)/sqrt(n)``."""
    if n < 2:
        raise InvalidSpecError("W state needs n >= 2")
    if n == 2:
        return (basis_ket("01") + basis_ket("10")) / np.sqrt(2)
    zero, one = basis_ket("0"), basis_ket("1")
    zeros = basis_ket("0" * (n - 1))
    return (np.kron(zeros, one) + np.sqrt(n - 1) * np.kron(w_ket_recursive(n - 1), zero)) / np.sqrt(n)


BELL_KETS = {
    1: (basis_ket("00") + basis_ket("11")) / np.sqrt(2),
    2: (basis_ket("00") - basis_ket("11")) / np.sqrt(2),
    3: (basis_ket("10") + basis_ket("01")) / np.sqrt(2),
    4: (basis_ket("01") - basis_ket("10")) / np.sqrt(2),
}


def _qubit_split(n):
    return (2, 2 ** (n - 1))


@dataclass(frozen=True)
class StateSpec:
    """Recipe for a named state.

    Only the fields relevant to ``family`` are read: ``index`` for
    ``bell`` (1..4), ``n`` for ``ghz``/``w``/``superposition``, ``alpha`` and
    ``phase`` for ``superposition``, ``lam`` for ``schmidt``, ``w`` for
    ``werner`` and ``seed`` plus ``dims`` for the random families.
    """

    family: str
    index: int = 1
    n: int = 2
    alpha: float = 0.0
    phase: float = 0.0
    lam: float = 1.0
    w: float = 0.0
    seed: int = 0
    dims: Tuple[int, int] = (2, 2)
    field: str = "complex"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidSpecError(f"unknown family {self.family!r}")


def bell_state(index=1):
    """Bell states ``(|00>+|11>)``, ``(|00>-|11>)``, ``(|10>+|01>)``, ``(|01>-|10>)``, normalised."""
    if index not in BELL_KETS:
        raise InvalidSpecError(f"Bell index must be 1..4, got {index}")
    return DensityMatrix.from_ket(BELL_KETS[index], 2, 2)


def ghz_state(n):
    if n < 2:
        raise InvalidSpecError("GHZ state needs n >= 2")
    return DensityMatrix.from_ket(ghz_ket(n), *_qubit_split(n))


def w_state(n):
    if n < 2:
        raise InvalidSpecError("W state needs n >= 2")
    return DensityMatrix.from_ket(w_ket(n), *_qubit_split(n))


def w_like_state():
    """Three-qubit state left after discarding one qubit of ``|W_4>``.

    Equal to ``3/4 |W_3><W_3| + 1/4 |000><000|``.
    """
    w3 = w_ket(3)
    z = basis_ket("000")
    mat = 0.75 * np.outer(w3, w3.conj()) + 0.25 * np.outer(z, z.conj())
    return DensityMatrix(mat, 2, 4)


def superposition_state(n, alpha, phase=0.0):
    """``alpha |W_n> + exp(i phase) sqrt(1 - alpha^2) |GHZ_n>``."""
    if n < 2:
        raise InvalidSpecError("superposition needs n >= 2")
    if not 0.0 <= alpha <= 1.0:
        raise InvalidSpecError(f"alpha must lie in [0, 1], got {alpha}")
    beta = np.sqrt(1.0 - alpha * alpha)
    psi = alpha * w_ket(n) + np.exp(1j * phase) * beta * ghz_ket(n)
    return DensityMatrix.from_ket(psi, *_qubit_split(n))


def schmidt_state(lam):
    """Pure two-qubit state ``sqrt(lam)|00> + sqrt(1 - lam)|11>``."""
    if not 0.0 <= lam <= 1.0:
        raise InvalidSpecError(f"lambda must lie in [0, 1], got {lam}")
    psi = np.sqrt(lam) * basis_ket("00") + np.sqrt(1.0 - lam) * basis_ket("11")
    return DensityMatrix.from_ket(psi, 2, 2)


def werner_state(w):
    """``w |psi^-><psi^-| + (1 - w) I/4``."""
    if not 0.0 <= w <= 1.0:
        raise InvalidSpecError(f"Werner weight must lie in [0, 1], got {w}")
    s = BELL_KETS[4]
    return DensityMatrix(w * np.outer(s, s.conj()) + (1 - w) * np.eye(4) / 4, 2, 2)


def product_state(*kets):
    """Pure product of single-system kets; the split is (first, rest)."""
    vs = [np.asarray(k, dtype=complex) for k in kets]
    psi = reduce(np.kron, vs)
    rest = psi.size // vs[0].size
    return DensityMatrix.from_ket(psi, vs[0].size, rest)


def maximally_mixed(dim_a=2, dim_b=2):
    d = dim_a * dim_b
    return DensityMatrix(np.eye(d) / d, dim_a, dim_b)


def make_state(spec: StateSpec) -> DensityMatrix:
    """Build the density matrix described by ``spec``.

    Raises
    ------
    InvalidSpecError
        On out-of-range parameters.
    """
    f = spec.family
    if f == "bell":
        return bell_state(spec.index)
    if f == "ghz":
        return ghz_state(spec.n)
    if f == "w":
        return w_state(spec.n)
    if f == "wlike3":
        return w_like_state()
    if f == "superposition":
        return superposition_state(spec.n, spec.alpha, spec.phase)
    if f == "schmidt":
        return schmidt_state(spec.lam)
    if f == "werner":
        return werner_state(spec.w)
    measure = "pure" if f == "random_pure" else "hs"
    ens = EnsembleSpec(count=1, seed=spec.seed, field=spec.field, measure=measure, dims=spec.dims)
    return sample_state(ens, 0)


@dataclass(frozen=True)
class EnsembleSpec:
    """Seeded random ensemble.

    ``measure`` is ``"hs"`` (Hilbert-Schmidt, ``G G^dagger / Tr``) or
    ``"pure"`` (normalised Gaussian vector); ``field`` selects real or
    complex Gaussian entries.
    """

    count: int
    seed: int = 0
    field: str = "complex"
    measure: str = "hs"
    dims: Tuple[int, int] = (2, 2)

    def __post_init__(self):
        if self.count < 0:
            raise InvalidSpecError("count must be non-negative")
        if self.field not in ("real", "complex"):
            raise InvalidSpecError(f"field must be 'real' or 'complex', got {self.field!r}")
        if self.measure not in ("hs", "pure"):
            raise InvalidSpecError(f"measure must be 'hs' or 'pure', got {self.measure!r}")
        if len(self.dims) != 2 or min(self.dims) < 1:
            raise InvalidSpecError(f"bad dims {self.dims}")


def state_rng(seed, index):
    """Generator for item ``index`` of the stream keyed by ``seed``.

    The stream is counter based, so item ``k`` never depends on how many
    other items were drawn or in which order.
    """
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(index),)))


def _gaussian(rng, shape, field):
    if field == "real":
        return rng.standard_normal(shape).astype(complex)
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_density_matrix(rng, dim, field="complex", measure="hs"):
    """Raw random density matrix drawn with ``rng``."""
    if measure == "hs":
        g = _gaussian(rng, (dim, dim), field)
        m = g @ g.conj().T
        m = hermitize(m / np.trace(m).real)
    else:
        v = _gaussian(rng, dim, field)
        v = v / np.linalg.norm(v)
        m = np.outer(v, v.conj())
    return m


def sample_state(spec: EnsembleSpec, index: int) -> DensityMatrix:
    """The ``index``-th state of the ensemble."""
    da, db = spec.dims
    m = random_density_matrix(state_rng(spec.seed, index), da * db, spec.field, spec.measure)
    return DensityMatrix(m, da, db, check=False)


def sample_ensemble(spec: EnsembleSpec) -> Iterator[DensityMatrix]:
    """Yield ``spec.count`` states; item ``k`` depends only on ``(seed, k)``."""
    for k in range(spec.count):
        yield sample_state(spec, k)


def reduced_purity(rho, subsystem: Optional[str] = None):
    """Purity ``Tr(rho^2)``, optionally of the state left after tracing out ``subsystem``."""
    if subsystem is not None:
        rho = partial_trace(rho, subsystem)
    m = as_matrix(rho)
    return float(np.real(np.vdot(m, m)))


def random_local_unitary(rng, dims=(2, 2)):
    """Haar-random ``U_A (x) U_B``."""
    from scipy.stats import unitary_group

    ua = unitary_group.rvs(dims[0], random_state=rng)
    ub = unitary_group.rvs(dims[1], random_state=rng)
    return np.kron(ua, ub)


def conjugate(rho, u):
    """``u rho u^dagger`` keeping the split of ``rho``."""
    m = as_matrix(rho)
    out = hermitize(u @ m @ u.conj().T)
    if isinstance(rho, DensityMatrix):
        return DensityMatrix(out, rho.dim_a, rho.dim_b, check=False)
    return out
