import numpy as np
import pytest

from fingabor.group import GroupSpec, make_group
from fingabor.operators import OperatorMatrix
from fingabor.signal import Signal, norm_l2
from fingabor.spectral import (
    DegenerateSpectrum,
    NotHermitian,
    decay_comparison,
    decay_profile,
    haar_random_unit,
    hermitian_eigen,
)


def random_hermitian(spec, seed):
    rng = np.random.default_rng(seed)
    n = spec.order
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return OperatorMatrix(spec, (Z + Z.conj().T) / 2)


# ---------------------------------------------------------------------------
# eigensolver


def test_eigen_matches_reference_solver():
    spec = make_group([8], [2])
    M = random_hermitian(spec, 0)
    pairs = hermitian_eigen(M)
    mine = sorted(p.value for p in pairs)
    ref = sorted(np.linalg.eigvalsh(M.entries))
    np.testing.assert_allclose(mine, ref, atol=1e-10 * np.linalg.norm(M.entries))


def test_eigen_pairs_satisfy_the_equation():
    spec = GroupSpec((6,), (3,), 0.5)
    M = random_hermitian(spec, 1)
    scale = np.linalg.norm(M.entries)
    for p in hermitian_eigen(M):
        res = M.entries @ p.vector.values - p.value * p.vector.values
        assert np.linalg.norm(res) < 1e-9 * scale
        # unit in the mass-weighted inner product
        assert norm_l2(p.vector) == pytest.approx(1.0, rel=1e-12)


def test_eigen_diagonal_matrix_is_exact():
    spec = make_group([4], [2])
    M = OperatorMatrix(spec, np.diag([3.0, -1.0, 0.5, 2.0]))
    pairs = hermitian_eigen(M)
    assert [p.value for p in pairs] == [3.0, 2.0, -1.0, 0.5]
    # eigenvectors are coordinate vectors with positive real phase
    for p, idx in zip(pairs, [0, 3, 1, 2]):
        vec = p.vector.values
        assert vec[idx] == pytest.approx(1.0)
        assert np.abs(vec).sum() == pytest.approx(1.0)


def test_eigen_ordering_breaks_magnitude_ties_downward():
    spec = make_group([3], [3])
    M = OperatorMatrix(spec, np.diag([-2.0, 1.0, 2.0]))
    assert [p.value for p in hermitian_eigen(M)] == [2.0, -2.0, 1.0]


def test_eigen_phase_convention():
    spec = make_group([6], [3])
    M = random_hermitian(spec, 2)
    for p in hermitian_eigen(M):
        mags = np.abs(p.vector.values)
        j = int(np.argmax(mags > 1e-12 * mags.max()))
        lead = p.vector.values[j]
        assert abs(lead.imag) < 1e-12
        assert lead.real > 0


def test_eigen_is_deterministic():
    spec = make_group([6], [2])
    M = random_hermitian(spec, 3)
    a = hermitian_eigen(M)
    b = hermitian_eigen(M)
    assert [p.value for p in a] == [p.value for p in b]
    for pa, pb in zip(a, b):
        assert np.array_equal(pa.vector.values, pb.vector.values)


def test_eigen_rejects_non_hermitian():
    spec = make_group([4], [2])
    with pytest.raises(NotHermitian):
        hermitian_eigen(OperatorMatrix(spec, np.arange(16.0).reshape(4, 4)))


# ---------------------------------------------------------------------------
# random unit vectors


def test_haar_vectors_reproducible_and_unit():
    spec = GroupSpec((8,), (2,), 0.5)
    a = haar_random_unit(spec, seed=7, trial=13)
    b = haar_random_unit(spec, seed=7, trial=13)
    assert np.array_equal(a.values, b.values)
    assert norm_l2(a) == pytest.approx(1.0, rel=1e-12)
    c = haar_random_unit(spec, seed=7, trial=14)
    assert not np.array_equal(a.values, c.values)
    d = haar_random_unit(spec, seed=8, trial=13)
    assert not np.array_equal(a.values, d.values)


# ---------------------------------------------------------------------------
# decay profiles


def test_flat_vector_ratio_closed_form():
    # trivial subgroup: |V| only sees |f|, so a flat unit vector gives
    # mixed norm n^(1/gamma) / sqrt(n) relative to gamma = 2
    spec = make_group([8], [8])
    flat = Signal(spec, np.full(8, 1 / np.sqrt(8)))
    prof = decay_profile(flat)
    for g, ratio in zip(prof.gammas, prof.ratios):
        assert ratio == pytest.approx(8.0 ** (1 / g - 0.5), rel=1e-12)


def test_delta_is_more_concentrated_than_flat():
    spec = make_group([8], [8])
    delta = Signal(spec, np.eye(8)[0])
    flat = Signal(spec, np.full(8, 1 / np.sqrt(8)))
    d = decay_profile(delta)
    f = decay_profile(flat)
    assert d.gammas == (0.5, 1.0, 2.0)
    # small gamma penalizes spreading
    assert d.ratios[0] == pytest.approx(1.0, rel=1e-12)
    assert d.ratios[0] < f.ratios[0]


# ---------------------------------------------------------------------------
# eigenfunction concentration ranking


def test_decay_comparison_reports_consistent_fields():
    spec = make_group([8], [2])
    M = random_hermitian(spec, 4)
    rep = decay_comparison(M, trials=50, seed=0, top_k=2)
    assert len(rep["eigenvalues"]) == 2
    assert len(rep["percentiles"]) == 2
    assert len(rep["ties"]) == 2
    assert rep["trials"] == 50 and rep["seed"] == 0 and rep["ref_gamma"] == 0.5
    for pct in rep["percentiles"]:
        assert 0.0 <= pct <= 100.0
    for prof in rep["profiles"]:
        gammas = [row["gamma"] for row in prof]
        assert 0.5 in gammas and 2.0 in gammas
        for row in prof:
            assert row["norm"] > 0 and row["ratio"] > 0


def test_decay_comparison_is_deterministic():
    spec = make_group([6], [3])
    M = random_hermitian(spec, 5)
    a = decay_comparison(M, trials=40, seed=11, top_k=1)
    b = decay_comparison(M, trials=40, seed=11, top_k=1)
    assert a == b


def test_decay_comparison_rejects_null_operator():
    spec = make_group([4], [2])
    Z = OperatorMatrix(spec, np.zeros((4, 4)))
    with pytest.raises(DegenerateSpectrum):
        decay_comparison(Z, trials=5, seed=0)
