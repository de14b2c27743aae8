"""scikit-learn style wrappers around the functional core.

Each transformer takes ``X`` as a stack of density matrices, shape
``(n_states, d, d)``, so they compose in a :class:`sklearn.pipeline.Pipeline`
(noise first, then measures).
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .channels import apply, kraus_set
from .linalg import DensityMatrix
from .measures import measure_all
from .qfi import OptimizeConfig, optimize_qfi
from .ree import ReeConfig
from .states import state_rng
from .validation import check_density_matrices, infer_dims

ALL_MEASURES = ("concurrence", "c_max", "negativity", "log_negativity", "neg_eig", "eof", "ree", "ree_gap")


class _StateTransformer(TransformerMixin, BaseEstimator):
    def fit(self, X, y=None):
        X = check_density_matrices(X)
        self.n_states_seen_ = X.shape[0]
        self.dim_ = X.shape[1] if X.size else 0
        return self

    def _check(self, X):
        check_is_fitted(self, "dim_")
        X = check_density_matrices(X)
        if X.size and self.dim_ and X.shape[1] != self.dim_:
            raise ValueError(f"fitted on dimension {self.dim_}, got {X.shape[1]}")
        return X


class EntanglementMeasures(_StateTransformer):
    """Map each state to a row of entanglement measures.

    Parameters
    ----------
    measures : tuple of str
        Column order of the output; any of ``concurrence``, ``c_max``,
        ``negativity``, ``log_negativity``, ``neg_eig``, ``eof``, ``ree``,
        ``ree_gap``. Measures that do not apply (two-qubit formulas on a 2x3
        state) come out as NaN.
    ree_tol : float
        Duality-gap tolerance of the REE estimate.
    seed : int
        Seed of the per-state REE oracle streams.
    dims : tuple of int, optional
        Bipartite split; inferred from the size when omitted.
    """

    def __init__(self, measures=("concurrence", "negativity", "eof"), ree_tol=1e-4, seed=0, dims=None):
        self.measures = measures
        self.ree_tol = ree_tol
        self.seed = seed
        self.dims = dims

    def transform(self, X):
        X = self._check(X)
        unknown = set(self.measures) - set(ALL_MEASURES)
        if unknown:
            raise ValueError(f"unknown measures {sorted(unknown)}")
        need_ree = bool({"ree", "ree_gap"} & set(self.measures))
        cfg = ReeConfig(gap_tolerance=self.ree_tol)
        out = np.full((X.shape[0], len(self.measures)), np.nan)
        for k, m in enumerate(X):
            rho = DensityMatrix(m, *infer_dims(m.shape[0], self.dims))
            rec = measure_all(rho, cfg, rng=state_rng(self.seed, k), include_ree=need_ree)
            for c, name in enumerate(self.measures):
                v = getattr(rec, name)
                if v is not None:
                    out[k, c] = v
        return out

    def get_feature_names_out(self, input_features=None):
        return np.asarray(self.measures, dtype=object)


class QFIOptimizer(_StateTransformer):
    """Mean QFI of two-qubit states before and after local-rotation optimisation.

    ``transform`` returns columns ``(original, maximized, minimized)``; the
    full results of the last call are kept in ``results_``.
    """

    def __init__(self, step=np.pi / 2, refine_step=np.pi / 3, refine_threshold=0.01, middle_axis="z"):
        self.step = step
        self.refine_step = refine_step
        self.refine_threshold = refine_threshold
        self.middle_axis = middle_axis

    def transform(self, X):
        X = self._check(X)
        cfg = OptimizeConfig(self.step, self.refine_step, self.refine_threshold, self.middle_axis)
        self.results_ = [optimize_qfi(m, cfg) for m in X]
        return np.array([[r.original, r.maximized, r.minimized] for r in self.results_]).reshape(-1, 3)

    def get_feature_names_out(self, input_features=None):
        return np.asarray(["qfi", "mqfi_max", "mqfi_min"], dtype=object)


class KrausNoise(_StateTransformer):
    """Apply a single-qubit channel to every qubit of each state."""

    def __init__(self, channel="ADC", p=0.0):
        self.channel = channel
        self.p = p

    def transform(self, X):
        X = self._check(X)
        ch = kraus_set(self.channel, self.p)
        return np.array([apply(ch, m).mat for m in X]).reshape(X.shape)
