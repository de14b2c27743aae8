"""Quantum Fisher information and its local-unitary grid optimiser.

For an N-qubit state with spectrum ``rho = sum_i p_i |i><i|`` and the
collective spin ``J_k = 1/2 sum_q sigma_k^(q)``, the 3x3 matrix

    C_kl = sum_ij (p_i - p_j)^2 / (p_i + p_j) (<i|J_k|j><j|J_l|i> + <i|J_l|j><j|J_k|i>)

gives the best single-direction Fisher information ``lambda_max(C)`` and the
mean QFI per particle ``lambda_max(C) / N``.

The optimiser evaluates the mean QFI of ``(U_A (x) U_B) rho (U_A (x) U_B)^dagger``
on every Euler-angle grid point of both qubits. This is a search over local
unitaries, a subset of LOCC.
"""

from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import NamedTuple, Tuple

import numpy as np

from .exceptions import DimensionError, InvalidSpecError, NonPositiveFisherError
from .linalg import PAULI_X, PAULI_Y, PAULI_Z, PAULIS, as_matrix

PAIR_CUTOFF = 1e-12
TIE_TOL = 1e-12
TWO_PI = 2.0 * np.pi


class AngularMomenta(NamedTuple):
    n_qubits: int
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray


def _embed(op, k, n):
    mats = [np.eye(2, dtype=complex)] * n
    mats[k] = op
    return reduce(np.kron, mats)


@lru_cache(maxsize=16)
def _collective(n):
    js = [sum(_embed(s, q, n) for q in range(n)) * 0.5 for s in PAULIS]
    for j in js:
        j.setflags(write=False)
    return np.array(js)


def angular_momenta(n):
    """Collective spin operators ``J_x, J_y, J_z`` of ``n`` qubits."""
    if n < 1:
        raise DimensionError("need at least one qubit")
    jx, jy, jz = _collective(n)
    return AngularMomenta(n, jx, jy, jz)


@dataclass
class QfiResult:
    """Fisher information of one state.

    Attributes
    ----------
    c_matrix : ndarray, shape (3, 3)
        Real symmetric C matrix.
    lambda_max : float
        Largest eigenvalue of ``c_matrix``, the QFI in the best direction.
    mean_qfi : float
        ``lambda_max / n_particles``.
    best_direction : ndarray, shape (3,)
        Unit eigenvector of ``lambda_max``, sign fixed so the first
        non-negligible component is positive.
    """

    c_matrix: np.ndarray
    lambda_max: float
    mean_qfi: float
    best_direction: np.ndarray


def _pair_weights(p):
    s = p[..., :, None] + p[..., None, :]
    d = (p[..., :, None] - p[..., None, :]) ** 2
    ok = s > PAIR_CUTOFF
    return np.where(ok, d / np.where(ok, s, 1.0), 0.0)


def _c_from_spectrum(p, v, js):
    # batched over leading axes of p (.., d) and v (.., d, d)
    a = np.einsum("...ji,kjl,...lm->...kim", v.conj(), js, v)
    w = _pair_weights(p)
    return 2.0 * np.real(np.einsum("...ij,...kij,...lij->...kl", w, a, a.conj()))


def _n_of(m, n_particles):
    d = m.shape[-1]
    if n_particles is None:
        n_particles = int(round(np.log2(d)))
    if 2**n_particles != d:
        raise DimensionError(f"dimension {d} does not hold {n_particles} qubits")
    return n_particles


def qfi(rho, n_particles=None) -> QfiResult:
    """C matrix, largest Fisher information and mean QFI of an N-qubit state.

    Eigen-pairs with ``p_i + p_j`` below ``1e-12`` are skipped.
    """
    m = as_matrix(rho)
    n = _n_of(m, n_particles)
    p, v = np.linalg.eigh(m)
    c = _c_from_spectrum(p, v, _collective(n))
    c = 0.5 * (c + c.T)
    w, u = np.linalg.eigh(c)
    lam = max(float(w[-1]), 0.0)
    vec = u[:, -1]
    lead = np.flatnonzero(np.abs(vec) > 1e-12)
    if lead.size and vec[lead[0]] < 0:
        vec = -vec
    return QfiResult(c, lam, lam / n, vec)


def mean_qfi_batch(rhos, n_particles=None):
    """Mean QFI of a stack of states, shape ``(..., d, d)``."""
    rhos = np.asarray(rhos, dtype=complex)
    n = _n_of(rhos, n_particles)
    p, v = np.linalg.eigh(rhos)
    c = _c_from_spectrum(p, v, _collective(n))
    return np.maximum(np.linalg.eigvalsh(c)[..., -1], 0.0) / n


def phase_bound(fisher, n_measurements=1):
    """Quantum Cramer-Rao bound ``1 / sqrt(n_measurements * F)``."""
    if not fisher > 0:
        raise NonPositiveFisherError(f"Fisher information must be positive, got {fisher}")
    if n_measurements < 1:
        raise InvalidSpecError("n_measurements must be >= 1")
    return 1.0 / np.sqrt(n_measurements * fisher)


class EulerAngles(NamedTuple):
    """Rotation ``U(alpha) about x, then beta about the middle axis, then gamma about x``."""

    alpha: float
    beta: float
    gamma: float


_AXES = {"x": PAULI_X, "y": PAULI_Y, "z": PAULI_Z}


def axis_rotation(axis, theta):
    """``exp(-i theta sigma_axis / 2)``."""
    return np.cos(theta / 2) * np.eye(2) - 1j * np.sin(theta / 2) * _AXES[axis]


def euler_rotation(angles, middle_axis="z"):
    """``U_x(alpha) U_m(beta) U_x(gamma)`` with ``m`` the middle axis (``"z"`` or ``"y"``)."""
    if middle_axis not in ("y", "z"):
        raise InvalidSpecError(f"middle axis must be 'y' or 'z', got {middle_axis!r}")
    a, b, c = angles
    return axis_rotation("x", a) @ axis_rotation(middle_axis, b) @ axis_rotation("x", c)


@dataclass(frozen=True)
class OptimizeConfig:
    """Grid-search settings.

    Attributes
    ----------
    step : float
        Angle spacing of the first grid, ``{0, step, 2 step, ...} < 2 pi``.
    refine_step : float
        Spacing of the second grid.
    refine_threshold : float
        The second grid is searched too when the first one improves the
        maximum by less than this fraction of the original value.
    middle_axis : {"z", "y"}
    method : {"generator", "direct"}
        ``"generator"`` rotates the spin operators instead of the state and
        is exact; ``"direct"`` rotates ``rho`` and re-diagonalises at every
        grid point.
    """

    step: float = np.pi / 2
    refine_step: float = np.pi / 3
    refine_threshold: float = 0.01
    middle_axis: str = "z"
    method: str = "generator"

    def __post_init__(self):
        if not 0 < self.step <= TWO_PI:
            raise InvalidSpecError("step must lie in (0, 2 pi]")
        if self.refine_step is not None and not 0 < self.refine_step <= self.step:
            raise InvalidSpecError("refine_step must lie in (0, step]")
        if self.middle_axis not in ("y", "z"):
            raise InvalidSpecError("middle_axis must be 'y' or 'z'")
        if self.method not in ("generator", "direct"):
            raise InvalidSpecError("method must be 'generator' or 'direct'")


@dataclass
class OptimizeResult:
    """Extremal mean QFI over the local-unitary grid.

    ``max_angles`` and ``min_angles`` hold one :class:`EulerAngles` per qubit.
    """

    original: float
    maximized: float
    minimized: float
    max_angles: Tuple[EulerAngles, EulerAngles]
    min_angles: Tuple[EulerAngles, EulerAngles]
    refined: bool = False


def angle_grid(step):
    """``0, step, 2 step, ...`` strictly below ``2 pi``."""
    n = int(np.floor(TWO_PI / step - 1e-9)) + 1
    g = np.arange(n) * step
    return g[g < TWO_PI - 1e-12]


@lru_cache(maxsize=8)
def _grid(step, middle_axis):
    ang = angle_grid(step)
    triples = np.array([(a, b, c) for a in ang for b in ang for c in ang])
    us = np.array([euler_rotation(t, middle_axis) for t in triples])
    # adjoint action: R[t, k, m] = Tr(sigma_m U^dagger sigma_k U) / 2
    sig = np.array(PAULIS)
    rot = 0.5 * np.real(np.einsum("mab,tcb,kcd,tda->tkm", sig, us.conj(), sig, us))
    return triples, us, rot


def _local_generator_moments(m):
    # 6x6 matrix M with C(U) = R M R^T for R = [R_A | R_B]
    p, v = np.linalg.eigh(m)
    i2 = np.eye(2)
    ops = [np.kron(s, i2) for s in PAULIS] + [np.kron(i2, s) for s in PAULIS]
    t = np.einsum("ji,kjl,lm->kim", v.conj(), np.array(ops), v)
    w = _pair_weights(p)
    mm = 0.5 * np.real(np.einsum("ij,kij,lij->kl", w, t, t.conj()))
    return 0.5 * (mm + mm.T)


def _grid_values_generator(m, step, middle_axis):
    _, _, rot = _grid(step, middle_axis)
    mm = _local_generator_moments(m)
    aa, ab, bb = mm[:3, :3], mm[:3, 3:], mm[3:, 3:]
    ra_aa = np.einsum("akm,mn,aln->akl", rot, aa, rot)
    rb_bb = np.einsum("bkm,mn,bln->bkl", rot, bb, rot)
    ra_ab = np.einsum("akm,mn->akn", rot, ab)
    cross = np.einsum("akn,bln->abkl", ra_ab, rot)
    c = ra_aa[:, None] + rb_bb[None, :] + cross + cross.transpose(0, 1, 3, 2)
    g = rot.shape[0]
    return np.maximum(np.linalg.eigvalsh(c.reshape(g * g, 3, 3))[:, -1], 0.0) / 2.0


def _grid_values_direct(m, step, middle_axis, chunk=512):
    _, us, _ = _grid(step, middle_axis)
    g = len(us)
    out = np.empty(g * g)
    for start in range(0, g * g, chunk):
        idx = np.arange(start, min(start + chunk, g * g))
        u = np.einsum("aij,akl->aikjl", us[idx // g], us[idx % g]).reshape(len(idx), 4, 4)
        out[idx] = mean_qfi_batch(u @ m @ u.conj().transpose(0, 2, 1), 2)
    return out


def grid_values(rho, step, middle_axis="z", method="generator"):
    """Mean QFI at every grid point, flattened in lexicographic angle order.

    Index ``i * G + j`` holds qubit-A triple ``i`` and qubit-B triple ``j``
    where ``G = len(angle_grid(step)) ** 3``.
    """
    m = as_matrix(rho)
    if m.shape != (4, 4):
        raise DimensionError(f"the grid optimiser needs a two-qubit state, got shape {m.shape}")
    if method == "generator":
        return _grid_values_generator(m, float(step), middle_axis)
    return _grid_values_direct(m, float(step), middle_axis)


def _pick(values, angles, best):
    # lexicographically smallest angle tuple among values within TIE_TOL of best
    cand = np.flatnonzero(np.abs(values - best) <= TIE_TOL)
    keys = angles[cand]
    order = np.lexsort(keys.T[::-1])
    return cand[order[0]]


def _extremes(stages):
    values = np.concatenate([v for v, _ in stages])
    angles = np.concatenate([a for _, a in stages])
    imax = _pick(values, angles, values.max())
    imin = _pick(values, angles, values.min())

    def to_pair(row):
        return (EulerAngles(*map(float, row[:3])), EulerAngles(*map(float, row[3:])))

    return float(values[imax]), float(values[imin]), to_pair(angles[imax]), to_pair(angles[imin])


def _stage(m, step, cfg):
    triples = _grid(float(step), cfg.middle_axis)[0]
    g = len(triples)
    vals = grid_values(m, step, cfg.middle_axis, cfg.method)
    angles = np.hstack([np.repeat(triples, g, axis=0), np.tile(triples, (g, 1))])
    return vals, angles


def optimize_qfi(rho, config: OptimizeConfig = None) -> OptimizeResult:
    """Maximise and minimise the mean QFI of a two-qubit state over local Euler rotations.

    Every grid point is evaluated. When the first grid raises the maximum by
    less than ``refine_threshold`` relative to the unrotated value, the
    ``refine_step`` grid is searched as well and the extremes are taken over
    both. Ties go to the lexicographically smallest
    ``(alpha_A, beta_A, gamma_A, alpha_B, beta_B, gamma_B)``.
    """
    cfg = config or OptimizeConfig()
    m = as_matrix(rho)
    if m.shape != (4, 4):
        raise DimensionError(f"the grid optimiser needs a two-qubit state, got shape {m.shape}")
    original = qfi(m, 2).mean_qfi
    stages = [_stage(m, cfg.step, cfg)]
    refined = False
    if cfg.refine_step is not None and cfg.refine_step != cfg.step:
        best = stages[0][0].max()
        if best - original < cfg.refine_threshold * original:
            stages.append(_stage(m, cfg.refine_step, cfg))
            refined = True
    vmax, vmin, amax, amin = _extremes(stages)
    # the identity is on every grid; keep the bracket exact against rounding
    vmax, vmin = max(vmax, original), min(vmin, original)
    return OptimizeResult(original, vmax, vmin, amax, amin, refined)


def _optimize_item(item):
    rho, cfg = item
    return optimize_qfi(rho, cfg)


def batch_optimize(states, config: OptimizeConfig = None, jobs=1):
    """:func:`optimize_qfi` over a sequence of states, results in input order."""
    cfg = config or OptimizeConfig()
    items = [(as_matrix(s), cfg) for s in states]
    if jobs == 1:
        return [_optimize_item(x) for x in items]
    from .parallel import ordered_map

    return ordered_map(_optimize_item, items, jobs=jobs)
