import cmath

import numpy as np
import pytest

from fingabor.gabor import quasi_lattice
from fingabor.group import GroupMismatch, GroupSpec, make_group
from fingabor.norms import Weight, polynomial_weight
from fingabor.operators import (
    OperatorMatrix,
    convolution_relation_probe,
    gabor_matrix,
    gabor_matrix_closed_form,
    gabor_matrix_residual,
    kn_apply,
    kn_kernel,
    kn_kernel_pairing_residual,
    kn_matrix,
    kn_weak_residual,
    loc_kn_matrix_residual,
    loc_to_kn_symbol,
    localization_apply,
    localization_matrix,
    matrix_from_apply,
    rihaczek_continuity_probe,
)
from fingabor.signal import (
    PhaseFunction,
    Signal,
    fourier,
    inner,
    inverse_fourier,
    tf_shift,
)
from fingabor.tfa import gaussian_window


def rand_signal(spec, rng):
    return Signal(spec, rng.standard_normal(spec.order) + 1j * rng.standard_normal(spec.order))


def rand_symbol(spec, rng):
    n2 = spec.order ** 2
    return PhaseFunction(spec, rng.standard_normal(n2) + 1j * rng.standard_normal(n2))


# ---------------------------------------------------------------------------
# quantization


def test_unit_symbol_is_identity():
    spec = make_group([6], [3])
    sigma = PhaseFunction(spec, np.ones(36))
    rng = np.random.default_rng(0)
    f = rand_signal(spec, rng)
    np.testing.assert_allclose(kn_apply(sigma, f).values, f.values, atol=1e-12)
    np.testing.assert_allclose(kn_matrix(sigma).entries, np.eye(6), atol=1e-12)


def test_time_symbol_is_multiplication():
    spec = make_group([8], [2])
    rng = np.random.default_rng(1)
    u = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    sigma = PhaseFunction(spec, np.repeat(u, 8))         # sigma(x, xi) = u(x)
    f = rand_signal(spec, rng)
    np.testing.assert_allclose(kn_apply(sigma, f).values, u * f.values, atol=1e-12)


def test_frequency_symbol_is_fourier_multiplier():
    spec = make_group([8], [4])
    rng = np.random.default_rng(2)
    w = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    sigma = PhaseFunction(spec, np.tile(w, 8))           # sigma(x, xi) = w(xi)
    f = rand_signal(spec, rng)
    fhat = fourier(f)
    expected = inverse_fourier(Signal(fhat.group, w * fhat.values))
    np.testing.assert_allclose(kn_apply(sigma, f).values, expected.values, atol=1e-12)


def test_kn_matrix_matches_columnwise_application():
    spec = GroupSpec((6,), (2,), 0.5)
    rng = np.random.default_rng(3)
    sigma = rand_symbol(spec, rng)
    M = kn_matrix(sigma)
    C = matrix_from_apply(spec, lambda f: kn_apply(sigma, f))
    np.testing.assert_allclose(M.entries, C.entries, atol=1e-12)
    f = rand_signal(spec, rng)
    np.testing.assert_allclose(M.apply(f).values, kn_apply(sigma, f).values, atol=1e-12)


def test_kn_kernel_brute_force():
    spec = make_group([6], [3])
    rng = np.random.default_rng(4)
    sigma = rand_symbol(spec, rng)
    k = kn_kernel(sigma)
    S = sigma.mat
    for ix in range(6):
        for iu in range(6):
            acc = 0j
            for ixi in range(6):
                xi = spec.dual_at(ixi)
                d = (iu - ix) % 6
                t = xi.residues[0] * d / 6
                acc += S[ix, ixi] * cmath.exp(-2j * cmath.pi * t)
            assert k[ix, iu] == pytest.approx(acc * spec.mass_dual, abs=1e-12)


def test_quantization_pairing_residuals():
    spec = make_group([6, 2], [3, 1])
    rng = np.random.default_rng(5)
    for _ in range(10):
        sigma = rand_symbol(spec, rng)
        f = rand_signal(spec, rng)
        g = rand_signal(spec, rng)
        assert kn_weak_residual(sigma, f, g) < 1e-11
        assert kn_kernel_pairing_residual(sigma, f, g) < 1e-11


def test_kn_apply_rejects_mixed_groups():
    a = make_group([4], [2])
    b = make_group([6], [3])
    with pytest.raises(GroupMismatch):
        kn_apply(PhaseFunction(a, np.ones(16)), Signal(b, np.ones(6)))


# ---------------------------------------------------------------------------
# Gabor matrices


def test_gabor_matrix_of_unit_symbol_is_gram():
    spec = make_group([6], [2])
    rng = np.random.default_rng(6)
    g = rand_signal(spec, rng)
    pts = quasi_lattice(spec).points
    M = gabor_matrix(PhaseFunction(spec, np.ones(36)), g, pts)
    for i, wi in enumerate(pts):
        for j, wj in enumerate(pts):
            gram = inner(tf_shift(g, *wj), tf_shift(g, *wi))
            assert M[i, j] == pytest.approx(gram, abs=1e-12)


def test_closed_form_on_all_phase_points():
    spec = make_group([4], [2])
    rng = np.random.default_rng(7)
    sigma = rand_symbol(spec, rng)
    pts = [(spec.element_at(i), spec.dual_at(j)) for i in range(4) for j in range(4)]
    direct = gabor_matrix(sigma, gaussian_window(spec), pts)
    closed = gabor_matrix_closed_form(sigma, pts)
    np.testing.assert_allclose(closed, direct, atol=1e-12)


@pytest.mark.parametrize("factors,divisors", [([6], [3]), ([6, 2], [3, 2])])
def test_closed_form_on_lattice_points(factors, divisors):
    spec = make_group(factors, divisors)
    rng = np.random.default_rng(8)
    for _ in range(5):
        sigma = rand_symbol(spec, rng)
        assert gabor_matrix_residual(sigma, quasi_lattice(spec).points) < 1e-12


# ---------------------------------------------------------------------------
# localization operators


def test_unit_mask_reproduces_inversion_formula():
    spec = make_group([8], [2])
    rng = np.random.default_rng(9)
    psi1 = rand_signal(spec, rng)
    psi2 = rand_signal(spec, rng)
    a = PhaseFunction(spec, np.ones(64))
    M = localization_matrix(a, psi1, psi2).entries
    np.testing.assert_allclose(M, inner(psi2, psi1) * np.eye(8), atol=1e-11)


def test_localization_matrix_matches_apply():
    spec = make_group([6], [3])
    rng = np.random.default_rng(10)
    a = rand_symbol(spec, rng)
    psi1 = rand_signal(spec, rng)
    psi2 = rand_signal(spec, rng)
    M = localization_matrix(a, psi1, psi2)
    C = matrix_from_apply(spec, lambda f: localization_apply(a, psi1, psi2, f))
    np.testing.assert_allclose(M.entries, C.entries, atol=1e-10)


def test_real_mask_gives_hermitian_operator():
    spec = make_group([6], [2])
    rng = np.random.default_rng(11)
    a = PhaseFunction(spec, rng.standard_normal(36))
    psi = rand_signal(spec, rng)
    M = localization_matrix(a, psi, psi).entries
    assert np.max(np.abs(M - M.conj().T)) < 1e-10


def test_localization_adjoint_swaps_windows():
    spec = make_group([6], [3])
    rng = np.random.default_rng(12)
    a = rand_symbol(spec, rng)
    psi1 = rand_signal(spec, rng)
    psi2 = rand_signal(spec, rng)
    M = localization_matrix(a, psi1, psi2).entries
    Madj = localization_matrix(
        PhaseFunction(spec, np.conj(a.values)), psi2, psi1
    ).entries
    np.testing.assert_allclose(M.conj().T, Madj, atol=1e-11)


def test_localization_agrees_with_its_quantization():
    spec = make_group([6, 2], [3, 2])
    rng = np.random.default_rng(13)
    for _ in range(10):
        a = rand_symbol(spec, rng)
        psi1 = rand_signal(spec, rng)
        psi2 = rand_signal(spec, rng)
        assert loc_kn_matrix_residual(a, psi1, psi2) < 1e-9


def test_loc_symbol_lives_on_phase_space():
    spec = make_group([4], [2])
    rng = np.random.default_rng(14)
    sym = loc_to_kn_symbol(rand_symbol(spec, rng), rand_signal(spec, rng),
                           rand_signal(spec, rng))
    assert sym.group == spec
    assert sym.values.shape == (16,)


# ---------------------------------------------------------------------------
# operator matrices


def test_operator_matrix_validates_shape():
    spec = make_group([4], [2])
    with pytest.raises(GroupMismatch):
        OperatorMatrix(spec, np.ones((3, 3)))
    with pytest.raises(GroupMismatch):
        OperatorMatrix(spec, np.ones((4, 4))).apply(Signal(make_group([6], [3]), np.ones(6)))


# ---------------------------------------------------------------------------
# mapping-bound probes


def test_rihaczek_probe_returns_finite_pair():
    spec = make_group([4], [2])
    rng = np.random.default_rng(15)
    g = rand_signal(spec, rng)
    f = rand_signal(spec, rng)
    v = Weight.tensor(polynomial_weight(spec, 1.0), np.ones(4))
    for weight in (None, v):
        lhs, rhs = rihaczek_continuity_probe(g, f, (2, 2), (2, 2), (2, 2), weight)
        assert np.isfinite(lhs) and np.isfinite(rhs)
        assert lhs > 0 and rhs > 0


def test_convolution_probe_returns_finite_pair():
    spec = make_group([6], [3])
    rng = np.random.default_rng(16)
    f = rand_signal(spec, rng)
    g = rand_signal(spec, rng)
    lhs, rhs = convolution_relation_probe(f, g, (1, 2), (1, 4), (1, 4))
    assert np.isfinite(lhs) and np.isfinite(rhs) and lhs > 0 and rhs > 0
    lhs, rhs = convolution_relation_probe(f, g, (0.5, 1), (0.5, 2), (0.5, 2))
    assert np.isfinite(lhs) and np.isfinite(rhs)


def test_convolution_probe_rejects_bad_exponents():
    spec = make_group([6], [3])
    f = Signal(spec, np.ones(6))
    with pytest.raises(ValueError):
        convolution_relation_probe(f, f, (2, 1), (2, 4), (2, 4))   # inner split fails
    with pytest.raises(ValueError):
        convolution_relation_probe(f, f, (1, 1), (1, 4), (1, 4))   # outer split fails
    with pytest.raises(ValueError):
        convolution_relation_probe(f, f, (0.5, 1), (0.7, 2), (0.7, 2))
