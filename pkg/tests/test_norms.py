import math

import numpy as np
import pytest

from fingabor.group import (
    GroupSpec,
    annihilator_indices,
    make_group,
    phase_spec,
    residue_grid,
    subgroup_indices,
)
from fingabor.norms import (
    EmptyWindow,
    Exponents,
    NonPositiveExponent,
    Weight,
    WindowSet,
    ZeroWindow,
    canonical_window,
    check_moderate,
    check_submultiplicative,
    full_window,
    inclusion_check,
    maximal_function,
    mixed_quasi_norm,
    modulation_norm,
    polynomial_weight,
    rnorm_subadditivity_residual,
    unit_window,
    wiener_norm,
    young_verify,
)
from fingabor.signal import PhaseFunction, Signal, norm_l2
from fingabor.tfa import gaussian_window, stft

GRID = [0.5, 1.0, 2.0, math.inf]


def rand_phase(spec, rng):
    n2 = spec.order ** 2
    return PhaseFunction(spec, rng.standard_normal(n2) + 1j * rng.standard_normal(n2))


def rand_signal(spec, rng):
    return Signal(spec, rng.standard_normal(spec.order) + 1j * rng.standard_normal(spec.order))


def brute_mixed(F, p, q, m=None):
    """Reference mixed norm with explicit loops, x inner then xi outer."""
    spec = F.group
    n = spec.order
    vals = np.abs(F.values)
    if m is not None:
        vals = vals * m.values
    W = vals.reshape(n, n)
    inner = []
    for ixi in range(n):
        col = W[:, ixi]
        if math.isinf(p):
            inner.append(col.max())
        else:
            inner.append((spec.mass * sum(c ** p for c in col)) ** (1 / p))
    if math.isinf(q):
        return max(inner)
    return (spec.mass_dual * sum(v ** q for v in inner)) ** (1 / q)


# ---------------------------------------------------------------------------
# exponents and weights


def test_exponents_validation_and_r():
    assert Exponents(0.5, 2.0).r == 0.5
    assert Exponents(2.0, 3.0).r == 1.0
    assert Exponents(math.inf, 1.0).r == 1.0
    with pytest.raises(NonPositiveExponent):
        Exponents(0.0, 1.0)
    with pytest.raises(NonPositiveExponent):
        Exponents(1.0, -2.0)


def test_exponents_of_forms():
    assert Exponents.of((1, 2)) == Exponents(1.0, 2.0)
    assert Exponents.of(1, 2) == Exponents(1.0, 2.0)
    e = Exponents(0.5, math.inf)
    assert Exponents.of(e) is e


def test_weight_positivity_and_tensor():
    with pytest.raises(ValueError):
        Weight(np.array([1.0, 0.0]))
    w = Weight.tensor([1.0, 2.0], [3.0, 5.0])
    np.testing.assert_array_equal(w.values, [3.0, 5.0, 6.0, 10.0])


def test_polynomial_weight_values():
    spec = make_group([6], [3])
    # circular distance on Z_6: 0 1 2 3 2 1
    np.testing.assert_array_equal(
        polynomial_weight(spec, 1.0).values, [1.0, 2.0, 3.0, 4.0, 3.0, 2.0]
    )


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
def test_polynomial_weight_submultiplicative_and_moderate(s):
    spec = make_group([8], [2])
    v = polynomial_weight(spec, s)
    assert check_submultiplicative(spec, v)
    ok, C = check_moderate(spec, v, v)
    assert ok and C == 1.0
    # the reciprocal is moderate for the same v
    ok, C = check_moderate(spec, Weight(1.0 / v.values), v)
    assert ok and C == 1.0


def test_dipped_weight_is_not_submultiplicative():
    spec = make_group([6], [3])
    w = Weight([1.0, 0.1, 1.0, 1.0, 1.0, 1.0])   # w(2) > w(1) w(1)
    assert not check_submultiplicative(spec, w)


# ---------------------------------------------------------------------------
# window sets


def test_window_set_validation():
    spec = make_group([4], [2])
    with pytest.raises(EmptyWindow):
        WindowSet(spec, ())
    with pytest.raises(ValueError):
        WindowSet(spec, (1, 2))
    assert unit_window(spec).offsets == (0,)
    assert len(full_window(spec).offsets) == 16


def test_canonical_window_is_subgroup_tile():
    spec = make_group([6], [3])
    Q = canonical_window(spec)
    kk = subgroup_indices(spec)
    aa = annihilator_indices(spec)
    expected = sorted(int(k) * 6 + int(a) for k in kk for a in aa)
    assert sorted(Q.offsets) == expected
    assert len(Q.offsets) == spec.order  # |K| |K_perp| = |G|


# ---------------------------------------------------------------------------
# mixed quasi-norm


def test_mixed_norm_constant_function():
    spec = make_group([4], [2])
    F = PhaseFunction(spec, np.ones(16))
    assert mixed_quasi_norm(F, (2, 2)) == pytest.approx(2.0, abs=1e-14)
    assert mixed_quasi_norm(F, (math.inf, math.inf)) == 1.0


def test_mixed_norm_point_mass():
    spec = make_group([4], [2])
    vals = np.zeros(16)
    vals[0] = 1.0
    F = PhaseFunction(spec, vals)
    assert mixed_quasi_norm(F, (0.5, 2)) == pytest.approx(0.5, abs=1e-14)
    assert mixed_quasi_norm(F, (math.inf, math.inf)) == 1.0
    # mass enters through both factors
    assert mixed_quasi_norm(F, (1, 1)) == pytest.approx(spec.mass * spec.mass_dual)


@pytest.mark.parametrize("p", GRID)
@pytest.mark.parametrize("q", GRID)
def test_mixed_norm_matches_brute_force(p, q):
    spec = GroupSpec((6,), (2,), 0.5)
    rng = np.random.default_rng(10)
    F = rand_phase(spec, rng)
    m = Weight(0.5 + rng.random(36))
    assert mixed_quasi_norm(F, (p, q)) == pytest.approx(brute_mixed(F, p, q), rel=1e-12)
    assert mixed_quasi_norm(F, (p, q), m) == pytest.approx(brute_mixed(F, p, q, m), rel=1e-12)


def test_mixed_norm_homogeneous_and_solid():
    spec = make_group([6], [3])
    rng = np.random.default_rng(11)
    F = rand_phase(spec, rng)
    for e in [(0.5, 2), (1, math.inf), (2, 0.5)]:
        assert mixed_quasi_norm(PhaseFunction(spec, 3j * F.values), e) == pytest.approx(
            3 * mixed_quasi_norm(F, e), rel=1e-12
        )
    smaller = PhaseFunction(spec, F.values * rng.random(36))
    for e in [(0.5, 1), (2, 2), (math.inf, 0.5)]:
        assert mixed_quasi_norm(smaller, e) <= mixed_quasi_norm(F, e) + 1e-12


def test_mixed_norm_weight_shape_checked():
    spec = make_group([4], [2])
    F = PhaseFunction(spec, np.ones(16))
    from fingabor.group import GroupMismatch

    with pytest.raises(GroupMismatch):
        mixed_quasi_norm(F, (2, 2), Weight(np.ones(4)))


# ---------------------------------------------------------------------------
# maximal function and wiener norm


def test_maximal_function_matches_brute_force():
    spec = make_group([6], [3])
    pspec = phase_spec(spec)
    grid = residue_grid(pspec)
    mods = np.array(pspec.factors)
    rng = np.random.default_rng(12)
    F = rand_phase(spec, rng)
    mags = np.abs(F.values)
    for Q in [unit_window(spec), canonical_window(spec), full_window(spec),
              WindowSet(spec, (0, 1, 7, 35))]:
        M = maximal_function(F, Q)
        brute = np.zeros(pspec.order)
        for i in range(pspec.order):
            for o in Q.offsets:
                res = tuple(int(v) for v in (grid[i] + grid[o]) % mods)
                j = int(np.ravel_multi_index(res, pspec.factors))
                brute[i] = max(brute[i], mags[j])
        np.testing.assert_array_equal(M.values, brute)


def test_unit_window_maximal_is_identity():
    spec = make_group([8], [4])
    rng = np.random.default_rng(13)
    F = rand_phase(spec, rng)
    np.testing.assert_array_equal(
        maximal_function(F, unit_window(spec)).values, np.abs(F.values)
    )


def test_wiener_dominates_plain_norm_and_grows_with_window():
    spec = make_group([6], [2])
    rng = np.random.default_rng(14)
    F = rand_phase(spec, rng)
    small = WindowSet(spec, (0, 3))
    big = WindowSet(spec, (0, 3, 10, 20))
    for e in [(0.5, 2), (2, 1), (math.inf, 0.5)]:
        plain = mixed_quasi_norm(F, e)
        assert wiener_norm(F, unit_window(spec), e) == pytest.approx(plain, rel=1e-14)
        assert wiener_norm(F, small, e) >= plain - 1e-12
        assert wiener_norm(F, big, e) >= wiener_norm(F, small, e) - 1e-12


# ---------------------------------------------------------------------------
# modulation norm


def test_modulation_norm_energy_case():
    # p = q = 2 with the unit window set is plain L^2 of the transform
    spec = make_group([8], [2])
    rng = np.random.default_rng(15)
    f = rand_signal(spec, rng)
    g = rand_signal(spec, rng)
    got = modulation_norm(f, g, (2, 2), Q=unit_window(spec))
    assert got == pytest.approx(norm_l2(f) * norm_l2(g), rel=1e-12)


def test_modulation_norm_trivial_subgroup_collapses():
    # K = {0}: the canonical tile only moves xi and |V| does not depend on it
    spec = make_group([8], [8])
    rng = np.random.default_rng(16)
    phi = gaussian_window(spec)
    for _ in range(10):
        f = rand_signal(spec, rng)
        V = stft(f, phi)
        for p in GRID:
            for q in GRID:
                w = wiener_norm(V, canonical_window(spec), (p, q))
                plain = mixed_quasi_norm(V, (p, q))
                assert abs(w - plain) <= 1e-13 * (1.0 + plain)


def test_canonical_window_transform_is_tile_constant():
    # with the subgroup indicator as window, |V| is constant on each
    # K x K_perp tile: shifting x by K reuses identical sums, shifting xi
    # by the annihilator only rotates the phase
    for factors, divisors in [([4], [2]), ([6], [3]), ([6, 2], [3, 2])]:
        spec = make_group(factors, divisors)
        rng = np.random.default_rng(17)
        f = rand_signal(spec, rng)
        V = stft(f, gaussian_window(spec)).mat
        grid = residue_grid(spec)
        mods = np.array(spec.factors)
        for k in subgroup_indices(spec):
            perm = np.ravel_multi_index(((grid + grid[int(k)]) % mods).T, spec.factors)
            np.testing.assert_array_equal(V[perm, :], V)
        dgrid = residue_grid(spec)
        for a in annihilator_indices(spec):
            perm = np.ravel_multi_index(((dgrid + dgrid[int(a)]) % mods).T, spec.factors)
            np.testing.assert_allclose(np.abs(V[:, perm]), np.abs(V), atol=1e-13)


def test_modulation_norm_rejects_zero_window():
    spec = make_group([4], [2])
    with pytest.raises(ZeroWindow):
        modulation_norm(Signal(spec, np.ones(4)), Signal(spec, np.zeros(4)))


# ---------------------------------------------------------------------------
# inequalities


@pytest.mark.parametrize("p", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("q", [0.5, 1.0, 2.0])
def test_rnorm_subadditivity(p, q):
    spec = make_group([6], [3])
    rng = np.random.default_rng(18)
    e = Exponents(p, q)
    for _ in range(25):
        F = rand_phase(spec, rng)
        H = rand_phase(spec, rng)
        res = rnorm_subadditivity_residual(F, H, e)
        scale = mixed_quasi_norm(F, e) ** e.r + mixed_quasi_norm(H, e) ** e.r
        assert res <= 1e-10 * (1.0 + scale)


def test_inclusion_holds_and_constant_value():
    spec = make_group([4], [2])
    rng = np.random.default_rng(19)
    f = rand_signal(spec, rng)
    ok, ratio, bound = inclusion_check(f, (1, 1), (2, 2))
    assert ok
    # mass 1 kills the p factor; mass_dual = 1/4 gives (1/4)^(1/2 - 1) = 2
    assert bound == pytest.approx(2.0, abs=1e-14)
    assert ratio <= bound * (1 + 1e-10)


def test_inclusion_random_sweep():
    spec = make_group([6], [2])
    rng = np.random.default_rng(20)
    pairs = [((0.5, 0.5), (1, 2)), ((1, 1), (math.inf, math.inf)),
             ((0.5, 2), (2, 2)), ((1, 0.5), (2, 1))]
    for _ in range(20):
        f = rand_signal(spec, rng)
        for e1, e2 in pairs:
            ok, ratio, bound = inclusion_check(f, e1, e2)
            assert ok, f"{e1} -> {e2}: ratio {ratio} above {bound}"


def test_inclusion_rejects_decreasing_exponents():
    spec = make_group([4], [2])
    with pytest.raises(ValueError):
        inclusion_check(Signal(spec, np.ones(4)), (2, 2), (1, 2))


def test_young_inequality_random():
    spec = make_group([6], [3])
    rng = np.random.default_rng(21)
    triples = [(1, 1, 1), (1, 2, 2), (2, 2, math.inf), (1, math.inf, math.inf),
               (2, 1, 2), (4 / 3, 4, math.inf)]
    for _ in range(20):
        F = rand_phase(spec, rng)
        H = rand_phase(spec, rng)
        for px, qx, rx in triples:
            for py, qy, ry in triples:
                lhs, rhs = young_verify(F, H, (rx, ry), (px, py), (qx, qy))
                assert lhs <= rhs * (1 + 1e-10)


def test_young_weighted():
    spec = make_group([4], [2])
    rng = np.random.default_rng(22)
    from fingabor.group import dual_spec

    m = Weight.tensor(polynomial_weight(spec, 1.0), polynomial_weight(dual_spec(spec), 1.0))
    F = rand_phase(spec, rng)
    H = rand_phase(spec, rng)
    lhs, rhs = young_verify(F, H, (2, 2), (1, 1), (2, 2), m=m, v=m)
    assert lhs <= rhs * (1 + 1e-10)


def test_young_rejects_bad_exponents():
    spec = make_group([4], [2])
    F = PhaseFunction(spec, np.ones(16))
    with pytest.raises(ValueError):
        young_verify(F, F, (4, 4), (4, 4), (4, 4))
    with pytest.raises(ValueError):
        young_verify(F, F, (1, 1), (0.5, 1), (1, 1))
