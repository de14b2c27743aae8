"""Entanglement measures, quantum Fisher information and noise sweeps for small density matrices."""

__version__ = "0.1.0"

from .channels import KrausChannel, SweepSpec, apply, find_crossing, kraus_set, sweep
from .exceptions import (
    BadSplitError,
    BadStrengthError,
    DataError,
    DimensionError,
    DomainError,
    EntangleBenchError,
    InvalidSpecError,
    InvalidStateError,
    MissingMeasureError,
    NoConvergenceError,
    NonHermitianError,
    NonPositiveFisherError,
    ReeConvergenceWarning,
)
from .linalg import DensityMatrix, Spectrum, hermitian_eig, kron, partial_trace, partial_transpose, spectral_fn
from .measures import (
    MeasureRecord,
    concurrence,
    eof,
    log_negativity,
    max_concurrence,
    measure_all,
    neg_eig_measure,
    negativity,
    negativity_trace_norm,
)
from .ordering import OrderingClass, Relation, census, classify_pair, scatter_bounds
from .qfi import (
    EulerAngles,
    OptimizeConfig,
    OptimizeResult,
    QfiResult,
    angular_momenta,
    batch_optimize,
    euler_rotation,
    optimize_qfi,
    phase_bound,
    qfi,
)
from .ree import ReeConfig, ReeResult, ree
from .states import EnsembleSpec, StateSpec, make_state, reduced_purity, sample_ensemble, sample_state

__all__ = [name for name in dir() if not name.startswith("_")]
