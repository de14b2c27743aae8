import numpy as np
import pytest

from entangle_bench.exceptions import InvalidSpecError
from entangle_bench.linalg import DensityMatrix, partial_transpose
from entangle_bench.states import (
    BELL_KETS,
    EnsembleSpec,
    StateSpec,
    basis_ket,
    ghz_ket,
    make_state,
    maximally_mixed,
    reduced_purity,
    sample_ensemble,
    sample_state,
    superposition_state,
    w_ket,
    w_ket_recursive,
    werner_state,
)


def test_ghz2_is_phi_plus():
    rho = make_state(StateSpec("ghz", n=2))
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert np.max(np.abs(rho.mat - np.outer(phi, phi))) <= 1e-15


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_ghz_amplitudes(n):
    v = ghz_ket(n)
    nz = np.flatnonzero(np.abs(v) > 0)
    assert list(nz) == [0, 2**n - 1]
    assert np.allclose(v[nz], 1 / np.sqrt(2))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_w_ghz_orthogonal(n):
    assert abs(np.vdot(w_ket(n), ghz_ket(n))) <= 1e-12


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_recursive_w_matches_direct(n):
    assert np.allclose(w_ket_recursive(n), w_ket(n), atol=1e-15)


def test_w3_ket_components():
    expect = (basis_ket("001") + basis_ket("010") + basis_ket("100")) / np.sqrt(3)
    assert np.allclose(w_ket(3), expect)


def test_w_like_mixture():
    rho = make_state(StateSpec("wlike3"))
    w3, z = w_ket(3), basis_ket("000")
    assert np.max(np.abs(rho.mat - 0.75 * np.outer(w3, w3.conj()) - 0.25 * np.outer(z, z.conj()))) <= 1e-15
    assert rho.dims == (2, 4)


def test_schmidt_extremes():
    rho = make_state(StateSpec("schmidt", lam=1.0))
    assert np.array_equal(rho.mat, np.diag([1, 0, 0, 0]).astype(complex))
    assert np.linalg.matrix_rank(rho.mat) == 1


@pytest.mark.parametrize(
    "spec",
    [StateSpec("bell", index=i) for i in range(1, 5)]
    + [StateSpec("ghz", n=n) for n in (2, 3, 4)]
    + [StateSpec("w", n=n) for n in (2, 3, 4)]
    + [StateSpec("superposition", n=3, alpha=0.6, phase=0.3), StateSpec("schmidt", lam=0.3)],
)
def test_pure_families_are_pure(spec):
    assert abs(reduced_purity(make_state(spec)) - 1) <= 1e-12


def test_bell_states_orthonormal():
    g = np.array([[np.vdot(BELL_KETS[i], BELL_KETS[j]) for j in range(1, 5)] for i in range(1, 5)])
    assert np.allclose(g, np.eye(4))


def test_superposition_phase_on_ghz_branch():
    psi_rho = superposition_state(3, 0.6, np.pi / 2).mat
    # <000|rho|001> carries e^{i phi} beta alpha / sqrt(2 * 3)
    beta = 0.8
    assert np.isclose(psi_rho[1, 0], 0.6 / np.sqrt(3) * np.conj(1j * beta / np.sqrt(2)))


@pytest.mark.parametrize(
    "spec",
    [
        StateSpec("bell", index=5),
        StateSpec("superposition", n=3, alpha=1.2),
        StateSpec("schmidt", lam=-0.1),
        StateSpec("werner", w=1.5),
        StateSpec("ghz", n=1),
    ],
)
def test_invalid_specs(spec):
    with pytest.raises(InvalidSpecError):
        make_state(spec)


def test_unknown_family():
    with pytest.raises(InvalidSpecError):
        StateSpec("cluster")
    with pytest.raises(InvalidSpecError):
        EnsembleSpec(3, field="quaternion")


def test_purity_examples():
    assert reduced_purity(maximally_mixed()) == pytest.approx(0.25, abs=1e-15)
    assert reduced_purity(werner_state(0.5)) == pytest.approx(0.4375, abs=1e-15)
    assert reduced_purity(make_state(StateSpec("bell")), "B") == pytest.approx(0.5)


def test_ensemble_determinism():
    spec = EnsembleSpec(1, seed=99)
    a = list(sample_ensemble(spec))[0].mat
    b = list(sample_ensemble(spec))[0].mat
    assert a.tobytes() == b.tobytes()


def test_item_independent_of_draw_order():
    spec = EnsembleSpec(10, seed=5)
    forward = [sample_state(spec, k).mat for k in range(10)]
    backward = [sample_state(spec, k).mat for k in reversed(range(10))][::-1]
    assert all(x.tobytes() == y.tobytes() for x, y in zip(forward, backward))


@pytest.mark.parametrize("field", ["complex", "real"])
@pytest.mark.parametrize("measure", ["hs", "pure"])
def test_ensemble_invariants(field, measure):
    spec = EnsembleSpec(1000, seed=3, field=field, measure=measure)
    for rho in sample_ensemble(spec):
        DensityMatrix(rho.mat, 2, 2, check=True)
        if field == "real":
            assert np.all(rho.mat.imag == 0)
        if measure == "pure":
            assert abs(reduced_purity(rho) - 1) <= 1e-12


# PPT fraction of the real d x d Ginibre ensemble, from 20000 independent draws
REAL_PPT_FRACTION = 0.306


def test_real_hs_ppt_fraction_stable():
    sigma = np.sqrt(REAL_PPT_FRACTION * (1 - REAL_PPT_FRACTION) / 1000)
    for seed in range(5):
        states = sample_ensemble(EnsembleSpec(1000, seed=seed, field="real"))
        frac = np.mean([np.linalg.eigvalsh(partial_transpose(r))[0] >= 0 for r in states])
        assert abs(frac - REAL_PPT_FRACTION) <= 4 * sigma


def test_complex_hs_ppt_fraction():
    # two-qubit HS separability probability 8/33
    states = sample_ensemble(EnsembleSpec(4000, seed=1))
    frac = np.mean([np.linalg.eigvalsh(partial_transpose(r))[0] >= 0 for r in states])
    assert abs(frac - 8 / 33) <= 4 * np.sqrt(8 / 33 * 25 / 33 / 4000)
