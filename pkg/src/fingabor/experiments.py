"""Experiment drivers shared by the command line tool and the test suite.

Each driver takes a group, a seed, and a trial count, runs a batch of
randomized or structural checks, and returns a JSON-friendly summary plus
optional CSV tables.  Randomness always flows through counter-based Philox
streams keyed by (seed, stream), so reruns with the same configuration
produce identical artifacts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .gabor import (
    NotAFrame,
    dual_window,
    expansion_residual,
    frame_bounds,
    lattice_from_points,
    quasi_lattice,
    representative_independence_residual,
)
from .group import (
    GroupSpec,
    annihilator_indices,
    character,
    dual_spec,
    phase_spec,
    subgroup_indices,
)
from .norms import (
    Exponents,
    Weight,
    canonical_window,
    inclusion_check,
    mixed_quasi_norm,
    modulation_norm,
    polynomial_weight,
    rnorm_subadditivity_residual,
    unit_window,
    young_verify,
)
from .operators import (
    OperatorMatrix,
    convolution_relation_probe,
    gabor_matrix_residual,
    kn_kernel_pairing_residual,
    kn_weak_residual,
    loc_kn_matrix_residual,
    localization_apply,
    localization_matrix,
)
from .signal import (
    PhaseFunction,
    Signal,
    convolve,
    fourier,
    inner,
    inverse_fourier,
    modulate,
    norm_l2,
    translate,
)
from .spectral import decay_comparison
from .tfa import (
    gaussian_window,
    magic_formula_residual,
    moyal_residual,
    rihaczek_covariance_residual,
    stft,
    stft_shift_identity_residual,
    window_constant,
)

__all__ = [
    "IdentityCheck",
    "IDENTITY_REGISTRY",
    "identity_names",
    "run_identities",
    "run_frames",
    "run_norms",
    "run_young",
    "run_convrel",
    "run_locop",
    "run_decay",
    "bump_symbol",
    "random_signal",
    "random_phase_function",
    "stream_rng",
]


# ---------------------------------------------------------------------------
# seeded randomness


def stream_rng(seed: int, stream: int) -> np.random.Generator:
    """Independent generator for one named stream of an experiment."""
    return np.random.Generator(np.random.Philox(key=[seed & (2**64 - 1), stream]))


def random_signal(spec: GroupSpec, rng: np.random.Generator) -> Signal:
    vals = rng.standard_normal(spec.order) + 1j * rng.standard_normal(spec.order)
    return Signal(spec, vals)


def random_phase_function(spec: GroupSpec, rng: np.random.Generator) -> PhaseFunction:
    n = spec.order
    vals = rng.standard_normal(n * n) + 1j * rng.standard_normal(n * n)
    return PhaseFunction(spec, vals)


def _random_point(spec: GroupSpec, rng: np.random.Generator):
    return spec.element_at(int(rng.integers(spec.order)))


def _random_dual(spec: GroupSpec, rng: np.random.Generator):
    return spec.dual_at(int(rng.integers(spec.order)))


# ---------------------------------------------------------------------------
# identity registry


@dataclass(frozen=True)
class IdentityCheck:
    """One verifiable identity with its tolerance and cost cap."""

    name: str
    summary: str
    tolerance: float
    runner: Callable[[GroupSpec, np.random.Generator, int], float]
    max_order: int | None = None
    randomized: bool = True


def _check_commutation(spec, rng, trials):
    worst = 0.0
    for _ in range(trials):
        f = random_signal(spec, rng)
        x = _random_point(spec, rng)
        xi = _random_dual(spec, rng)
        lhs = modulate(translate(f, x), xi)
        rhs = translate(modulate(f, xi), x)
        diff = lhs.values - character(xi, x) * rhs.values
        worst = max(worst, float(np.max(np.abs(diff))))
    return worst


def _check_stft_shift(spec, rng, trials):
    worst = 0.0
    for _ in range(trials):
        f = random_signal(spec, rng)
        g = random_signal(spec, rng)
        worst = max(
            worst,
            stft_shift_identity_residual(
                f,
                g,
                _random_point(spec, rng),
                _random_dual(spec, rng),
                _random_point(spec, rng),
                _random_dual(spec, rng),
            ),
        )
    return worst


def _check_rihaczek_covariance(spec, rng, trials):
    worst = 0.0
    for _ in range(trials):
        f = random_signal(spec, rng)
        g = random_signal(spec, rng)
        worst = max(
            worst,
            rihaczek_covariance_residual(
                f,
                g,
                _random_point(spec, rng),
                _random_dual(spec, rng),
                _random_point(spec, rng),
                _random_dual(spec, rng),
            ),
        )
    return worst


def _check_window_support(spec, rng, trials):
    phi = gaussian_window(spec)
    V = stft(phi, phi).mat
    mask = np.zeros(V.shape, dtype=bool)
    kk = subgroup_indices(spec)
    aa = annihilator_indices(spec)
    mask[np.ix_(kk, aa)] = True
    c = window_constant(spec)
    on = float(np.max(np.abs(V[mask] - c)))
    off = float(np.max(np.abs(V[~mask]))) if (~mask).any() else 0.0
    return max(on, off)


def _check_magic(spec, rng, trials):
    worst = 0.0
    for _ in range(trials):
        psi = random_signal(spec, rng)
        f = random_signal(spec, rng)
        g = random_signal(spec, rng)
        worst = max(worst, magic_formula_residual(psi, f, g))
    return worst


def _check_kn_weak(spec, rng, trials):
    worst = 0.0
    for _ in range(trials):
        sigma = random_phase_function(spec, rng)
        f = random_signal(spec, rng)
        g = random_signal(spec, rng)
        worst = max(worst, kn_weak_residual(sigma, f, g))
    return worst


def _check_kn_kernel(spec, rng, trials):
    worst = 0.0
    for _ in range(trials):
        sigma = random_phase_function(spec, rng)
        f = random_signal(spec, rng)
        g = random_signal(spec, rng)
        worst = max(worst, kn_kernel_pairing_residual(sigma, f, g))
    return worst


def _check_gabor_matrix(spec, rng, trials):
    lattice = quasi_lattice(spec)
    worst = 0.0
    for _ in range(trials):
        sigma = random_phase_function(spec, rng)
        worst = max(worst, gabor_matrix_residual(sigma, lattice.points))
    return worst


def _check_loc_kn(spec, rng, trials):
    worst = 0.0
    for _ in range(trials):
        a = random_phase_function(spec, rng)
        psi1 = random_signal(spec, rng)
        psi2 = random_signal(spec, rng)
        worst = max(worst, loc_kn_matrix_residual(a, psi1, psi2))
    return worst


def _unit(f: Signal) -> Signal:
    return Signal(f.group, f.values / norm_l2(f))


def _check_moyal(spec, rng, trials):
    worst = 0.0
    for _ in range(trials):
        f = _unit(random_signal(spec, rng))
        g = _unit(random_signal(spec, rng))
        worst = max(worst, moyal_residual(f, g))
    return worst


def _check_parseval(spec, rng, trials):
    worst = 0.0
    for _ in range(trials):
        f = random_signal(spec, rng)
        g = random_signal(spec, rng)
        worst = max(worst, abs(inner(f, g) - inner(fourier(f), fourier(g))))
    return worst


def _check_inversion(spec, rng, trials):
    worst = 0.0
    for _ in range(trials):
        f = random_signal(spec, rng)
        back = inverse_fourier(fourier(f))
        worst = max(worst, float(np.max(np.abs(back.values - f.values))))
    return worst


def _check_conv_diag(spec, rng, trials):
    worst = 0.0
    for _ in range(trials):
        f = random_signal(spec, rng)
        g = random_signal(spec, rng)
        lhs = fourier(convolve(f, g)).values
        rhs = fourier(f).values * fourier(g).values
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def _check_quotient(spec, rng, trials):
    lattice = quasi_lattice(spec)
    phi = gaussian_window(spec)
    worst = 0.0
    for _ in range(trials):
        f = random_signal(spec, rng)
        worst = max(worst, representative_independence_residual(f, phi, lattice))
    return worst


def _check_pointwise_maximal(spec, rng, trials):
    """With a trivial subgroup the covering maximum reduces to |V| itself."""
    flat = GroupSpec(spec.factors, spec.factors, spec.mass)
    window = canonical_window(flat)
    grid = [Exponents.of(p, q) for p in (0.5, 1, 2, math.inf) for q in (0.5, 1, 2, math.inf)]
    worst = 0.0
    for _ in range(trials):
        f = random_signal(flat, rng)
        V = stft(f, gaussian_window(flat))
        for e in grid:
            plain = mixed_quasi_norm(V, e)
            covered = modulation_norm(f, e=e, Q=window)
            worst = max(worst, abs(covered - plain) / (1.0 + plain))
    return worst


IDENTITY_REGISTRY: tuple[IdentityCheck, ...] = (
    IdentityCheck(
        "shift-commutation",
        "modulation after translation equals the character times the swapped order",
        1e-14,
        _check_commutation,
    ),
    IdentityCheck(
        "stft-shift",
        "transforming a shifted pair shifts and twists the transform",
        1e-12,
        _check_stft_shift,
    ),
    IdentityCheck(
        "rihaczek-covariance",
        "shifting both arguments rotates the cross spectrogram on phase space",
        1e-12,
        _check_rihaczek_covariance,
    ),
    IdentityCheck(
        "window-transform-support",
        "the subgroup indicator transforms to a constant on its tile, zero off it",
        1e-12,
        _check_window_support,
        randomized=False,
    ),
    IdentityCheck(
        "stft-of-rihaczek",
        "the transform of a cross spectrogram factors into two window transforms",
        1e-10,
        _check_magic,
        max_order=16,
    ),
    IdentityCheck(
        "quantization-weak-form",
        "the operator pairing equals the symbol paired with the cross spectrogram",
        1e-11,
        _check_kn_weak,
    ),
    IdentityCheck(
        "quantization-kernel",
        "the integral kernel of the quantization reproduces the operator pairing",
        1e-11,
        _check_kn_kernel,
    ),
    IdentityCheck(
        "channel-matrix-closed-form",
        "the sampled operator matrix matches its single-sum closed form",
        1e-10,
        _check_gabor_matrix,
    ),
    IdentityCheck(
        "localization-as-quantization",
        "masking in phase space equals quantizing a smoothed symbol",
        1e-9,
        _check_loc_kn,
    ),
    IdentityCheck(
        "transform-energy",
        "the phase-space energy of the transform equals the signal energies",
        1e-12,
        _check_moyal,
    ),
    IdentityCheck(
        "fourier-parseval",
        "the Fourier transform preserves inner products",
        1e-12,
        _check_parseval,
    ),
    IdentityCheck(
        "fourier-inversion",
        "the inverse transform undoes the forward transform pointwise",
        1e-12,
        _check_inversion,
    ),
    IdentityCheck(
        "convolution-diagonalization",
        "the Fourier transform turns convolution into a pointwise product",
        1e-12,
        _check_conv_diag,
    ),
    IdentityCheck(
        "coset-representative-independence",
        "per-coset maxima of the transform do not depend on the representative",
        0.0,
        _check_quotient,
        max_order=16,
    ),
    IdentityCheck(
        "pointwise-covering-maximum",
        "with a trivial subgroup the covered norm equals the plain mixed norm",
        1e-13,
        _check_pointwise_maximal,
    ),
)


def identity_names() -> list[str]:
    return [c.name for c in IDENTITY_REGISTRY]


def run_identities(
    spec: GroupSpec,
    seed: int,
    trials: int,
    names: Sequence[str] | None = None,
    tolerances: dict[str, float] | None = None,
) -> tuple[dict, list[str]]:
    """Run the registry on one group; returns (summary, failure messages)."""
    wanted = set(names) if names is not None else None
    tolerances = tolerances or {}
    results = {}
    failures: list[str] = []
    for stream, check in enumerate(IDENTITY_REGISTRY):
        if wanted is not None and check.name not in wanted:
            continue
        tol = float(tolerances.get(check.name, check.tolerance))
        entry: dict = {"tolerance": tol, "summary": check.summary}
        if check.max_order is not None and spec.order > check.max_order:
            entry["skipped"] = True
            entry["reason"] = f"group order {spec.order} exceeds cap {check.max_order}"
        else:
            rng = stream_rng(seed, stream)
            n_trials = trials if check.randomized else 1
            residual = float(check.runner(spec, rng, n_trials))
            entry["residual"] = residual
            entry["trials"] = n_trials
            entry["passed"] = bool(residual <= tol)
            if not entry["passed"]:
                failures.append(
                    f"{check.name}: residual {residual:.3e} exceeds tolerance {tol:.3e}"
                )
        results[check.name] = entry
    summary = {
        "experiment": "identities",
        "group": spec.to_json(),
        "seed": seed,
        "trials": trials,
        "results": results,
        "failures": failures,
    }
    return summary, failures


# ---------------------------------------------------------------------------
# frames


def run_frames(spec: GroupSpec, seed: int, trials: int) -> tuple[dict, list[str]]:
    failures: list[str] = []
    lattice = quasi_lattice(spec)
    g = gaussian_window(spec)
    a, b = frame_bounds(g, lattice)
    tight = b - a <= 1e-10 * b
    summary: dict = {
        "experiment": "frames",
        "group": spec.to_json(),
        "seed": seed,
        "trials": trials,
        "lower_bound": a,
        "upper_bound": b,
        "tight": bool(tight),
        "redundancy": lattice.redundancy,
        "lattice_size": len(lattice.points),
    }
    if not tight:
        failures.append(f"subgroup window system is not tight: A={a:.6e} B={b:.6e}")

    rng = stream_rng(seed, 0)
    try:
        h = dual_window(g, lattice)
        worst = 0.0
        for _ in range(trials):
            f = random_signal(spec, rng)
            r1, r2 = expansion_residual(f, g, h, lattice)
            worst = max(worst, r1, r2)
        summary["dual_window_norm"] = norm_l2(h)
        summary["expansion_residual"] = worst
        if worst > 1e-10:
            failures.append(f"frame expansion residual {worst:.3e} exceeds 1e-10")
    except Exception as exc:  # noqa: BLE001 - reported, not swallowed
        summary["dual_window_error"] = f"{type(exc).__name__}: {exc}"
        failures.append(f"dual window failed: {exc}")

    # removing one full time coset must destroy the frame property
    drop = lattice.points[0][0]
    kept = [(x, xi) for (x, xi) in lattice.points if x.index != drop.index]
    deficient = lattice_from_points(spec, kept)
    try:
        da, db = frame_bounds(g, deficient)
        summary["deficient_bounds"] = [da, db]
        summary["deficient_raises"] = False
        failures.append(
            f"deficient system unexpectedly kept a spanning set: A={da:.3e} B={db:.3e}"
        )
    except NotAFrame as exc:
        summary["deficient_raises"] = True
        summary["deficient_bounds"] = list(exc.bounds)

    summary["failures"] = failures
    return summary, failures


# ---------------------------------------------------------------------------
# norms


_NORM_GRID = (0.5, 1.0, 2.0, math.inf)


def _fmt_p(p: float) -> str:
    return "inf" if math.isinf(p) else (f"{p:g}")


def run_norms(spec: GroupSpec, seed: int, trials: int) -> tuple[dict, list[str], dict]:
    """Covered-vs-plain norm comparison, subadditivity, and inclusion fuzzing."""
    failures: list[str] = []
    phi = gaussian_window(spec)
    Q = canonical_window(spec)
    rng = stream_rng(seed, 0)
    grid = [Exponents.of(p, q) for p in _NORM_GRID for q in _NORM_GRID]

    ratios = {f"{_fmt_p(e.p)}x{_fmt_p(e.q)}": [math.inf, 0.0] for e in grid}
    for _ in range(trials):
        f = random_signal(spec, rng)
        V = stft(f, phi)
        for e in grid:
            plain = mixed_quasi_norm(V, e)
            covered = modulation_norm(f, e=e, Q=Q)
            key = f"{_fmt_p(e.p)}x{_fmt_p(e.q)}"
            if plain > 0:
                r = covered / plain
                ratios[key][0] = min(ratios[key][0], r)
                ratios[key][1] = max(ratios[key][1], r)

    rng = stream_rng(seed, 1)
    sub_viol = 0
    sub_worst = 0.0
    for _ in range(trials):
        F = random_phase_function(spec, rng)
        H = random_phase_function(spec, rng)
        for e in grid:
            if math.isinf(e.p) or math.isinf(e.q):
                continue
            res = rnorm_subadditivity_residual(F, H, e)
            sub_worst = max(sub_worst, res)
            if res > 1e-10 * (1.0 + mixed_quasi_norm(F, e) ** e.r):
                sub_viol += 1
    if sub_viol:
        failures.append(f"r-norm subadditivity violated {sub_viol} times")

    rng = stream_rng(seed, 2)
    incl_viol = 0
    pairs = [
        (Exponents.of(0.5, 0.5), Exponents.of(1, 1)),
        (Exponents.of(1, 1), Exponents.of(2, 2)),
        (Exponents.of(2, 2), Exponents.of(math.inf, math.inf)),
        (Exponents.of(0.5, 2), Exponents.of(1, math.inf)),
    ]
    for _ in range(trials):
        f = random_signal(spec, rng)
        for e1, e2 in pairs:
            ok, _, _ = inclusion_check(f, e1, e2)
            if not ok:
                incl_viol += 1
    if incl_viol:
        failures.append(f"norm inclusion violated {incl_viol} times")

    # deterministic sweep table for one fixed signal
    rows: list[tuple] = []
    f0 = random_signal(spec, stream_rng(seed, 3))
    weights = {
        "flat": None,
        "poly1": Weight.tensor(polynomial_weight(spec, 1.0), polynomial_weight(dual_spec(spec), 1.0)),
    }
    windows = {"tile": Q, "unit": unit_window(spec)}
    for wid, m in weights.items():
        for gid, win in windows.items():
            for e in grid:
                val = modulation_norm(f0, e=e, m=m, Q=win)
                rows.append((_fmt_p(e.p), _fmt_p(e.q), wid, gid, f"{val!r}"))

    summary = {
        "experiment": "norms",
        "group": spec.to_json(),
        "seed": seed,
        "trials": trials,
        "covered_over_plain": {k: v for k, v in ratios.items()},
        "subadditivity_violations": sub_viol,
        "subadditivity_worst_excess": sub_worst if sub_worst > 0 else 0.0,
        "inclusion_violations": incl_viol,
        "failures": failures,
    }
    tables = {"norm_sweep": [("p", "q", "weight", "window", "value")] + rows}
    return summary, failures, tables


# ---------------------------------------------------------------------------
# convolution inequalities


_YOUNG_AXIS = (
    (1.0, 1.0, 1.0),
    (1.0, 2.0, 2.0),
    (2.0, 1.0, 2.0),
    (1.0, math.inf, math.inf),
    (math.inf, 1.0, math.inf),
    (2.0, 2.0, math.inf),
    (4.0 / 3.0, 4.0 / 3.0, 2.0),
    (4.0 / 3.0, 4.0, math.inf),
    (4.0, 4.0 / 3.0, math.inf),
    (1.0, 4.0, 4.0),
    (4.0, 1.0, 4.0),
    (4.0 / 3.0, 2.0, 4.0),
    (2.0, 4.0 / 3.0, 4.0),
)


def run_young(spec: GroupSpec, seed: int, trials: int) -> tuple[dict, list[str], dict]:
    failures: list[str] = []
    rng = stream_rng(seed, 0)
    combos = [
        (ax1, ax2)
        for ax1 in _YOUNG_AXIS
        for ax2 in _YOUNG_AXIS
    ]
    worst = {i: 0.0 for i in range(len(combos))}
    violations = 0
    for _ in range(trials):
        F = random_phase_function(spec, rng)
        H = random_phase_function(spec, rng)
        for i, ((p1, p2, p3), (q1, q2, q3)) in enumerate(combos):
            lhs, rhs = young_verify(
                F,
                H,
                Exponents.of(p3, q3),
                Exponents.of(p1, q1),
                Exponents.of(p2, q2),
            )
            if rhs > 0:
                worst[i] = max(worst[i], lhs / rhs)
            if lhs > rhs * (1.0 + 1e-10):
                violations += 1
    if violations:
        failures.append(f"convolution inequality violated {violations} times")
    rows = [("p_left", "q_left", "p_right", "q_right", "p_out", "q_out", "max_ratio")]
    for i, ((p1, p2, p3), (q1, q2, q3)) in enumerate(combos):
        rows.append(
            (_fmt_p(p1), _fmt_p(q1), _fmt_p(p2), _fmt_p(q2), _fmt_p(p3), _fmt_p(q3),
             f"{worst[i]!r}")
        )
    summary = {
        "experiment": "young",
        "group": spec.to_json(),
        "seed": seed,
        "trials": trials,
        "combos": len(combos),
        "violations": violations,
        "max_ratio": max(worst.values()) if worst else 0.0,
        "failures": failures,
    }
    return summary, failures, {"young_ratios": rows}


_CONVREL_CASES = (
    # (p_out, q_out), (p_f, q_f), (p_g, q_g): outer axis needs 1/u + 1/t = 1/q_out,
    # inner axis needs either the classical relation with r >= 1 or p = q = r < 1.
    ((1.0, 1.0), (1.0, 2.0), (1.0, 2.0)),
    ((0.5, 0.5), (0.5, 1.0), (0.5, 1.0)),
    ((1.0, 0.5), (1.0, 1.0), (1.0, 1.0)),
    ((2.0, 1.0), (2.0, 2.0), (1.0, 2.0)),
)


def run_convrel(spec: GroupSpec, seed: int, trials: int) -> tuple[dict, list[str], dict]:
    failures: list[str] = []
    rng = stream_rng(seed, 0)
    px = polynomial_weight(spec, 1.0)
    pxi = polynomial_weight(dual_spec(spec), 1.0)
    m = Weight.tensor(px, pxi)
    v = m
    nu = np.sqrt(pxi.values)
    stats = {i: [math.inf, 0.0] for i in range(len(_CONVREL_CASES))}
    for _ in range(trials):
        f = random_signal(spec, rng)
        g = random_signal(spec, rng)
        for i, (eo, ef, eg) in enumerate(_CONVREL_CASES):
            lhs, rhs = convolution_relation_probe(
                f,
                g,
                Exponents.of(*eo),
                Exponents.of(*ef),
                Exponents.of(*eg),
                m=m,
                v=v,
                nu=nu,
            )
            if not (math.isfinite(lhs) and math.isfinite(rhs)) or rhs <= 0:
                failures.append(f"case {i}: degenerate sides lhs={lhs} rhs={rhs}")
                continue
            c = lhs / rhs
            stats[i][0] = min(stats[i][0], c)
            stats[i][1] = max(stats[i][1], c)
    rows = [("case", "p_out", "q_out", "p_f", "q_f", "p_g", "q_g", "min_c", "max_c", "spread")]
    spread_bad = []
    for i, (eo, ef, eg) in enumerate(_CONVREL_CASES):
        lo, hi = stats[i]
        spread = hi / lo if lo > 0 else math.inf
        if spread > 10.0:
            spread_bad.append(i)
        rows.append(
            (str(i), _fmt_p(eo[0]), _fmt_p(eo[1]), _fmt_p(ef[0]), _fmt_p(ef[1]),
             _fmt_p(eg[0]), _fmt_p(eg[1]), f"{lo!r}", f"{hi!r}", f"{spread!r}")
        )
    if spread_bad:
        failures.append(f"constant spread above 10 for cases {spread_bad}")
    summary = {
        "experiment": "convrel",
        "group": spec.to_json(),
        "seed": seed,
        "trials": trials,
        "cases": len(_CONVREL_CASES),
        "spreads": {str(i): stats[i][1] / stats[i][0] if stats[i][0] > 0 else math.inf
                    for i in range(len(_CONVREL_CASES))},
        "failures": failures,
    }
    return summary, failures, {"convrel_constants": rows}


# ---------------------------------------------------------------------------
# localization operators


def run_locop(spec: GroupSpec, seed: int, trials: int) -> tuple[dict, list[str]]:
    failures: list[str] = []
    rng = stream_rng(seed, 0)
    worst_kn = 0.0
    worst_herm = 0.0
    worst_apply = 0.0
    for _ in range(trials):
        a = random_phase_function(spec, rng)
        psi1 = random_signal(spec, rng)
        psi2 = random_signal(spec, rng)
        f = random_signal(spec, rng)
        worst_kn = max(worst_kn, loc_kn_matrix_residual(a, psi1, psi2))
        M = localization_matrix(a, psi1, psi2)
        out = localization_apply(a, psi1, psi2, f)
        worst_apply = max(
            worst_apply, float(np.max(np.abs(M.entries @ f.values - out.values)))
        )
        real_a = PhaseFunction(spec, np.abs(a.values).astype(np.complex128))
        Mh = localization_matrix(real_a, psi1, psi1).entries
        worst_herm = max(worst_herm, float(np.max(np.abs(Mh - Mh.conj().T))))
    if worst_kn > 1e-9:
        failures.append(f"localization-as-quantization residual {worst_kn:.3e} exceeds 1e-9")
    if worst_apply > 1e-10:
        failures.append(f"matrix application residual {worst_apply:.3e} exceeds 1e-10")
    if worst_herm > 1e-10:
        failures.append(f"hermitian residual {worst_herm:.3e} exceeds 1e-10")
    summary = {
        "experiment": "locop",
        "group": spec.to_json(),
        "seed": seed,
        "trials": trials,
        "quantization_residual": worst_kn,
        "apply_residual": worst_apply,
        "hermitian_residual": worst_herm,
        "failures": failures,
    }
    return summary, failures


# ---------------------------------------------------------------------------
# spectral decay


def bump_symbol(spec: GroupSpec) -> PhaseFunction:
    """Smooth mask over one subgroup tile anchored at the phase-space origin.

    A raised-cosine profile over the first |K| points of the group in
    canonical order and the first |K_perp| points of the dual, normalized
    to peak value one.
    """
    n = spec.order
    nk = spec.subgroup_order
    na = spec.annihilator_order
    wx = np.sin(np.pi * (np.arange(nk) + 0.5) / nk) ** 2
    wf = np.sin(np.pi * (np.arange(na) + 0.5) / na) ** 2
    box = np.outer(wx, wf)
    box = box / box.max()
    vals = np.zeros((n, n), dtype=np.complex128)
    vals[:nk, :na] = box
    return PhaseFunction(spec, vals.reshape(-1))


def _control_matrix(order: int, seed: int) -> np.ndarray:
    """Dense Hermitian matrix with independent Gaussian entries."""
    rng = stream_rng(seed, 2**32)
    z = rng.standard_normal((order, order)) + 1j * rng.standard_normal((order, order))
    return (z + z.conj().T) / 2.0


def run_decay(
    spec: GroupSpec,
    seed: int,
    trials: int = 500,
    gammas: Sequence[float] = (0.5, 1.0, 2.0),
    top_k: int = 3,
    control_seeds: Sequence[int] = tuple(range(10)),
) -> tuple[dict, list[str]]:
    failures: list[str] = []
    a = bump_symbol(spec)
    phi = gaussian_window(spec)
    A = localization_matrix(a, phi, phi)
    report = decay_comparison(
        A, phi, gammas=tuple(gammas), trials=trials, seed=seed, top_k=top_k
    )
    controls = []
    for cs in control_seeds:
        B = OperatorMatrix(spec, _control_matrix(spec.order, cs))
        crep = decay_comparison(
            B, phi, gammas=tuple(gammas), trials=trials, seed=cs, top_k=1
        )
        controls.append(
            {
                "seed": cs,
                "percentile": crep["percentiles"][0],
                "top_ratio": crep["profiles"][0][0]["ratio"],
            }
        )
    summary = {
        "experiment": "decay",
        "group": spec.to_json(),
        "seed": seed,
        "trials": trials,
        "localization": report,
        "controls": controls,
        "failures": failures,
    }
    return summary, failures
