import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import Pipeline

from entangle_bench import EnsembleSpec, sample_ensemble
from entangle_bench.estimators import EntanglementMeasures, KrausNoise, QFIOptimizer
from entangle_bench.linalg import DensityMatrix
from entangle_bench.measures import measure_all
from entangle_bench.states import bell_state, werner_state


def _stack(states):
    return np.array([s.mat for s in states])


@pytest.fixture(scope="module")
def two_qubit():
    return _stack(sample_ensemble(EnsembleSpec(count=6, seed=3, field="complex")))


def test_measures_match_functional_core(two_qubit):
    est = EntanglementMeasures(measures=("concurrence", "negativity", "eof"))
    out = est.fit_transform(two_qubit)
    assert out.shape == (6, 3)
    assert est.n_states_seen_ == 6 and est.dim_ == 4
    for row, m in zip(out, two_qubit):
        rec = measure_all(DensityMatrix(m, 2, 2), include_ree=False)
        assert row == pytest.approx([rec.concurrence, rec.negativity, rec.eof], abs=1e-12)
    assert list(est.get_feature_names_out()) == ["concurrence", "negativity", "eof"]


def test_ree_column_on_bell():
    out = EntanglementMeasures(measures=("ree", "ree_gap")).fit_transform(bell_state(1).mat[None])
    assert out[0, 0] == pytest.approx(1.0, abs=1e-3)
    assert 0 <= out[0, 1] <= 1e-4


def test_qutrit_two_qubit_formulas_are_nan():
    rho = np.eye(6) / 6
    out = EntanglementMeasures(measures=("concurrence", "negativity"), dims=(2, 3)).fit_transform(rho[None])
    assert np.isnan(out[0, 0])
    assert out[0, 1] == pytest.approx(0.0, abs=1e-12)


def test_params_and_clone():
    est = EntanglementMeasures(measures=("negativity",), ree_tol=1e-3, seed=7)
    params = est.get_params()
    assert params["seed"] == 7 and params["measures"] == ("negativity",)
    c = clone(est).set_params(seed=9)
    assert c.seed == 9 and est.seed == 7
    assert not hasattr(c, "dim_")


def test_not_fitted_raises(two_qubit):
    for est in (EntanglementMeasures(), QFIOptimizer(), KrausNoise()):
        with pytest.raises(NotFittedError):
            est.transform(two_qubit)


def test_dimension_mismatch_after_fit(two_qubit):
    est = EntanglementMeasures().fit(two_qubit)
    with pytest.raises(ValueError):
        est.transform((np.eye(8) / 8)[None])


def test_unknown_measure_rejected(two_qubit):
    with pytest.raises(ValueError):
        EntanglementMeasures(measures=("bogus",)).fit_transform(two_qubit)


def test_qfi_optimizer_brackets_original(two_qubit):
    est = QFIOptimizer()
    out = est.fit_transform(two_qubit)
    assert out.shape == (6, 3)
    assert np.all(out[:, 2] <= out[:, 0] + 1e-12)
    assert np.all(out[:, 0] <= out[:, 1] + 1e-12)
    assert len(est.results_) == 6


def test_noise_then_measures_pipeline():
    X = np.array([bell_state(1).mat, werner_state(0.9).mat])
    pipe = Pipeline([("noise", KrausNoise("PDC", 1.0)), ("measures", EntanglementMeasures(measures=("concurrence",)))])
    out = pipe.fit_transform(X)
    # full dephasing leaves only the classical diagonal
    assert out[:, 0] == pytest.approx([0.0, 0.0], abs=1e-12)
    noiseless = Pipeline([("noise", KrausNoise("ADC", 0.0)), ("measures", EntanglementMeasures(measures=("concurrence",)))])
    assert noiseless.fit_transform(X)[0, 0] == pytest.approx(1.0, abs=1e-12)


def test_noise_preserves_trace(two_qubit):
    out = KrausNoise("DPC", 0.4).fit_transform(two_qubit)
    assert np.allclose(np.trace(out, axis1=1, axis2=2), 1.0, atol=1e-12)
