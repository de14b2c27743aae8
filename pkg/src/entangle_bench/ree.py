"""Relative entropy of entanglement by fully-corrective Frank-Wolfe.

The objective ``f(sigma) = Tr rho log2 rho - Tr rho log2 sigma`` is convex
in ``sigma``. The iterate is kept as an explicit mixture of pure product
states ``sum_k w_k |a_k b_k><a_k b_k|`` so it is separable by construction
and ``f`` at the iterate is a certified upper bound. Each outer step:

1. forms the gradient ``G`` of ``f``;
2. calls the linear minimisation oracle, the product vector minimising
   ``<ab|G|ab>`` (alternating smallest-eigenvector sweeps, several starts);
3. stops if the duality gap ``Tr(G sigma) - <ab|G|ab>`` is below tolerance;
4. otherwise adds the new atom and re-optimises all weights and atom
   vectors jointly with L-BFGS.

Step 4 is what makes the method converge to gaps near ``1e-8`` in a few
dozen outer steps where plain Frank-Wolfe would need thousands.
"""

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from .exceptions import DimensionError, InvalidSpecError, ReeConvergenceWarning
from .linalg import as_matrix

LN2 = np.log(2.0)


@dataclass(frozen=True)
class ReeConfig:
    """Frank-Wolfe settings.

    Attributes
    ----------
    max_iterations : int
        Outer iteration budget.
    gap_tolerance : float
        Stop once the duality gap is at or below this.
    support_epsilon : float
        ``sigma`` is replaced by ``(1 - eps) sigma + eps I/d`` inside the
        logarithm so the objective stays finite.
    oracle_restarts : int
        Starting points for the product-state oracle.
    refine_iterations : int
        L-BFGS budget of each corrective step.
    """

    max_iterations: int = 2000
    gap_tolerance: float = 1e-4
    support_epsilon: float = 1e-9
    oracle_restarts: int = 8
    refine_iterations: int = 200

    def __post_init__(self):
        if not self.gap_tolerance > 0:
            raise InvalidSpecError("gap_tolerance must be positive")
        if not 0 < self.support_epsilon <= 1e-6:
            raise InvalidSpecError("support_epsilon must lie in (0, 1e-6]")
        if self.max_iterations < 1 or self.oracle_restarts < 1:
            raise InvalidSpecError("max_iterations and oracle_restarts must be >= 1")


@dataclass
class ReeResult:
    """Outcome of :func:`ree`.

    ``value`` is an upper bound on the relative entropy of entanglement and
    ``value - gap`` a lower bound (up to oracle accuracy).
    """

    value: float
    gap: float
    converged: bool
    iterations: int
    weights: np.ndarray
    atoms_a: np.ndarray
    atoms_b: np.ndarray

    def sigma(self):
        return mixture(self.weights, self.atoms_a, self.atoms_b)


def mixture(w, a, b):
    v = np.einsum("ki,kj->kij", a, b).reshape(len(w), -1)
    return np.einsum("k,ki,kj->ij", w, v, v.conj())


def _dlog(x, u, m):
    # Frechet derivative of the natural log at U diag(x) U^dagger, applied to m
    lx = np.log(x)
    dx = x[:, None] - x[None, :]
    same = np.abs(dx) <= 1e-12 * np.maximum(x[:, None], x[None, :])
    mean = 0.5 * (x[:, None] + x[None, :])
    quot = np.where(same, 1.0 / np.where(same, mean, 1.0), (lx[:, None] - lx[None, :]) / np.where(same, 1.0, dx))
    mt = u.conj().T @ m @ u
    return u @ (quot * mt) @ u.conj().T


class _Problem:
    def __init__(self, rho, da, db, eps, rng, restarts):
        self.rho = rho
        self.da, self.db = da, db
        self.d = da * db
        self.eps = eps
        self.rng = rng
        self.restarts = restarts
        w = np.linalg.eigvalsh(rho)
        w = w[w > 1e-15]
        self.neg_entropy = float(np.sum(w * np.log2(w)))

    def _eig_reg(self, sigma):
        x, u = np.linalg.eigh((1 - self.eps) * sigma + self.eps * np.eye(self.d) / self.d)
        return np.maximum(x, 1e-300), u

    def value_grad(self, sigma):
        x, u = self._eig_reg(sigma)
        log_sigma = (u * np.log2(x)) @ u.conj().T
        val = self.neg_entropy - float(np.real(np.vdot(self.rho.conj().T, log_sigma)))
        g = -(1 - self.eps) / LN2 * _dlog(x, u, self.rho)
        return val, 0.5 * (g + g.conj().T)

    def value(self, sigma):
        x, u = self._eig_reg(sigma)
        log_sigma = (u * np.log2(x)) @ u.conj().T
        return self.neg_entropy - float(np.real(np.vdot(self.rho.conj().T, log_sigma)))

    def oracle(self, g, sweeps=50):
        """Product vector minimising ``<ab|g|ab>``: ``(a, b, value)``."""
        da, db = self.da, self.db
        t = g.reshape(da, db, da, db)
        r = self.restarts
        a = self.rng.standard_normal((r, da)) + 1j * self.rng.standard_normal((r, da))
        _, vecs = np.linalg.eigh(g)
        u, _, _ = np.linalg.svd(vecs[:, 0].reshape(da, db))
        a[0] = u[:, 0]
        a /= np.linalg.norm(a, axis=1, keepdims=True)
        prev = None
        for _ in range(sweeps):
            mb = np.einsum("ri,ikjl,rj->rkl", a.conj(), t, a)
            _, vb = np.linalg.eigh(mb)
            b = vb[:, :, 0]
            ma = np.einsum("rk,ikjl,rl->rij", b.conj(), t, b)
            va, vv = np.linalg.eigh(ma)
            a = vv[:, :, 0]
            val = va[:, 0]
            if prev is not None and np.max(np.abs(val - prev)) < 1e-13:
                break
            prev = val
        k = int(np.argmin(val))
        return a[k], b[k], float(val[k])

    def refine(self, w, a, b, iters):
        """Jointly re-optimise weights and atom vectors by L-BFGS."""
        k, da, db = len(w), self.da, self.db
        na_, nb_ = k * da, k * db

        def unpack(x):
            s = x[:k]
            o = k
            aa = x[o : o + na_].reshape(k, da) + 1j * x[o + na_ : o + 2 * na_].reshape(k, da)
            o += 2 * na_
            bb = x[o : o + nb_].reshape(k, db) + 1j * x[o + nb_ : o + 2 * nb_].reshape(k, db)
            return s, aa, bb

        def fun(x):
            s, aa, bb = unpack(x)
            na = np.linalg.norm(aa, axis=1)
            nb = np.linalg.norm(bb, axis=1)
            an, bn = aa / na[:, None], bb / nb[:, None]
            ss = np.sum(s * s)
            ww = s * s / ss
            v = np.einsum("ki,kj->kij", an, bn).reshape(k, -1)
            sigma = np.einsum("k,ki,kj->ij", ww, v, v.conj())
            val, g = self.value_grad(sigma)
            h = v @ g.T
            gk = np.real(np.einsum("ki,ki->k", v.conj(), h))
            gs = 2 * s * (gk - ww @ gk) / ss
            r = (h - gk[:, None] * v).reshape(k, da, db)
            ga = 2 * ww[:, None] * np.einsum("kil,kl->ki", r, bn.conj()) / na[:, None]
            gb = 2 * ww[:, None] * np.einsum("kil,ki->kl", r, an.conj()) / nb[:, None]
            grad = np.concatenate([gs, ga.real.ravel(), ga.imag.ravel(), gb.real.ravel(), gb.imag.ravel()])
            return val, grad

        x0 = np.concatenate([np.sqrt(w), a.real.ravel(), a.imag.ravel(), b.real.ravel(), b.imag.ravel()])
        res = minimize(fun, x0, jac=True, method="L-BFGS-B", options={"maxiter": iters, "ftol": 1e-16, "gtol": 1e-12})
        s, aa, bb = unpack(res.x)
        ww = s * s / np.sum(s * s)
        aa /= np.linalg.norm(aa, axis=1, keepdims=True)
        bb /= np.linalg.norm(bb, axis=1, keepdims=True)
        return ww, aa, bb


def _start(rho, da, db):
    # eigen-products of the marginals, i.e. rho_A (x) rho_B
    t = rho.reshape(da, db, da, db)
    xa, ua = np.linalg.eigh(np.einsum("ikjk->ij", t))
    xb, ub = np.linalg.eigh(np.einsum("kikj->ij", t))
    a = np.repeat(ua.T, db, axis=0)
    b = np.tile(ub.T, (da, 1))
    w = np.maximum(np.outer(xa, xb).ravel(), 0.0)
    return w / w.sum(), a.astype(complex), b.astype(complex)


def ree(rho, config: Optional[ReeConfig] = None, rng=None, dims=None) -> ReeResult:
    """Relative entropy of entanglement of a 2x2 or 2x3 state, in bits.

    Parameters
    ----------
    rho : DensityMatrix or array_like
    config : ReeConfig, optional
    rng : numpy.random.Generator, optional
        Source of the oracle restarts. Defaults to a fixed seed so repeated
        calls agree.
    dims : tuple of int, optional
        Split for plain arrays; read from ``rho`` otherwise.

    Returns
    -------
    ReeResult
        Non-convergence within ``max_iterations`` is reported through
        ``converged=False`` and a :class:`ReeConvergenceWarning`, never an
        exception.
    """
    cfg = config or ReeConfig()
    m = np.array(as_matrix(rho), dtype=complex)
    if dims is None:
        dims = getattr(rho, "dims", None) or ((2, 2) if m.shape == (4, 4) else (2, 3))
    da, db = dims
    if da * db != m.shape[0] or sorted(dims) not in ([2, 2], [2, 3]):
        raise DimensionError(f"REE needs a 2x2 or 2x3 state, got split {dims} for shape {m.shape}")
    if rng is None:
        rng = np.random.default_rng(0)
    prob = _Problem(m, da, db, cfg.support_epsilon, rng, cfg.oracle_restarts)
    w, a, b = _start(m, da, db)
    keep = w > 1e-14
    w, a, b = w[keep] / w[keep].sum(), a[keep], b[keep]
    gap = np.inf
    it = 0
    for it in range(1, cfg.max_iterations + 1):
        sigma = mixture(w, a, b)
        _, g = prob.value_grad(sigma)
        va, vb, lmo = prob.oracle(g)
        gap = float(np.real(np.vdot(g.conj().T, sigma))) - lmo
        if gap <= cfg.gap_tolerance:
            break
        a = np.vstack([a, va])
        b = np.vstack([b, vb])
        w = np.append(w, 1e-3)
        w /= w.sum()
        w, a, b = prob.refine(w, a, b, cfg.refine_iterations)
        keep = w > 1e-10
        w, a, b = w[keep] / w[keep].sum(), a[keep], b[keep]
    converged = gap <= cfg.gap_tolerance
    if not converged:
        warnings.warn(
            f"REE stopped after {it} iterations with gap {gap:.3g} > {cfg.gap_tolerance:.3g}",
            ReeConvergenceWarning,
            stacklevel=2,
        )
    value = max(prob.value(mixture(w, a, b)), 0.0)
    return ReeResult(value, max(gap, 0.0), converged, it, w, a, b)
