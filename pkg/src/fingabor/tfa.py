"""Short-time Fourier transform and Rihaczek distribution.

Conventions, with mass factors written out:

    V_g f(x, xi) = sum_y f(y) conj(g(y - x)) conj(<xi, y>) * mass
    R(f, g)(x, xi) = f(x) conj(Fg(xi)) conj(<xi, x>)

The canonical window is the indicator of the subgroup K; its STFT against
itself is supported exactly on K x K_perp with constant value
``subgroup_order * mass``, and that constant is always read off the
computed transform rather than hard-coded.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .group import (
    DualElement,
    GroupElement,
    GroupMismatch,
    GroupSpec,
    character_row,
    character_table,
    diff_table,
    dual_spec,
    phase_spec,
    residue_grid,
    translation_perm,
)
from .signal import (
    PhaseFunction,
    Signal,
    convolve,
    fourier,
    modulate,
    phase_from_signal,
    subgroup_indicator,
    tf_shift,
    translate,
)


def gaussian_window(spec: GroupSpec) -> Signal:
    """Indicator of the subgroup K (the degenerate-Euclidean Gaussian)."""
    return subgroup_indicator(spec)


def gaussian_circ(spec: GroupSpec) -> Signal:
    """Self-convolution of the canonical window; equals |K| * mass on K."""
    phi = gaussian_window(spec)
    return convolve(phi, phi)


def stft(f: Signal, g: Signal) -> PhaseFunction:
    """Full STFT of f against window g over every phase-space point."""
    if f.group != g.group:
        raise GroupMismatch("stft needs signal and window on the same group")
    spec = f.group
    win = np.conj(g.values[diff_table(spec).T])   # win[x, y] = conj(g(y - x))
    prod = win * f.values[None, :]
    V = prod @ np.conj(character_table(spec)).T * spec.mass
    return PhaseFunction(spec, V.reshape(-1))


def stft_point(f: Signal, g: Signal, x: GroupElement, xi: DualElement) -> complex:
    """Single STFT sample <f, pi(x, xi) g>."""
    from .signal import inner

    return inner(f, tf_shift(g, x, xi))


def window_constant(spec: GroupSpec) -> complex:
    """c(K) = V_phi phi at the origin of phase space."""
    phi = gaussian_window(spec)
    return stft_point(phi, phi, spec.identity, spec.dual_identity)


def rihaczek(f: Signal, g: Signal) -> PhaseFunction:
    """R(f, g)(x, xi) = f(x) conj(Fg(xi)) conj(<xi, x>)."""
    if f.group != g.group:
        raise GroupMismatch("rihaczek needs both signals on the same group")
    spec = f.group
    ghat = fourier(g)
    R = f.values[:, None] * np.conj(ghat.values)[None, :] * np.conj(character_table(spec).T)
    return PhaseFunction(spec, R.reshape(-1))


# ---------------------------------------------------------------------------
# the phase-space rotation


def jmap(x: GroupElement, xi: DualElement) -> tuple[DualElement, GroupElement]:
    """J(x, xi) = (-xi, x), mapping G x G^ onto G^ x G."""
    if x.group != xi.group:
        raise GroupMismatch("jmap arguments belong to different groups")
    return (-xi, x)

def jmap_inverse(omega: DualElement, u: GroupElement) -> tuple[GroupElement, DualElement]:
    """J^{-1}(omega, u) = (u, -omega)."""
    if omega.group != u.group:
        raise GroupMismatch("jmap_inverse arguments belong to different groups")
    return (u, -omega)


def phase_element(spec: GroupSpec, x: GroupElement, xi: DualElement) -> GroupElement:
    """(x, xi) as a point of the phase-space group."""
    return phase_spec(spec).element(x.residues + xi.residues)


def phase_dual_element(spec: GroupSpec, omega: DualElement, u: GroupElement) -> DualElement:
    """(omega, u) as a character of the phase-space group.

    The product character of the phase space realizes
    <(omega, u), (x, xi)> = <omega, x> <xi, u>.
    """
    return phase_spec(spec).dual(omega.residues + u.residues)


# ---------------------------------------------------------------------------
# residuals of the exact identities


def stft_shift_identity_residual(
    f: Signal,
    g: Signal,
    u: GroupElement,
    omega: DualElement,
    y: GroupElement,
    eta: DualElement,
) -> float:
    """Residual of the STFT covariance rule under shifts of signal and window.

    Compares V_{pi(y, eta) g}(pi(u, omega) f) against the phase-corrected
    translate of V_g f over every phase-space point.
    """
    spec = f.group
    lhs = stft(tf_shift(f, u, omega), tf_shift(g, y, eta)).mat
    V = stft(f, g).mat
    row = translation_perm(spec, tuple(a - b for a, b in zip(y.residues, u.residues)))
    col = translation_perm(spec, tuple(a - b for a, b in zip(eta.residues, omega.residues)))
    shifted = V[row][:, col]
    xi_shift = translation_perm(spec, tuple(-r for r in omega.residues))
    c1 = np.conj(character_row(spec, u.index)[xi_shift])       # conj<xi - omega, u>
    x_shift = translation_perm(spec, tuple(-r for r in u.residues))
    c2 = character_row(spec, eta.index)[x_shift]               # <eta, x - u>
    rhs = c2[:, None] * c1[None, :] * shifted
    return float(np.max(np.abs(lhs - rhs)))


def rihaczek_covariance_residual(
    f: Signal,
    g: Signal,
    x: GroupElement,
    xi: DualElement,
    y: GroupElement,
    eta: DualElement,
) -> float:
    """Residual of the Rihaczek covariance rule under time-frequency shifts."""
    from .group import character
    from .signal import modulate as sig_modulate, translate as sig_translate

    spec = f.group
    lhs = rihaczek(tf_shift(f, x, xi), tf_shift(g, y, eta))
    base = rihaczek(f, g).as_signal()
    shift = phase_element(spec, x, eta)
    mod = phase_dual_element(spec, xi - eta, y - x)            # J(y - x, eta - xi)
    rhs = sig_modulate(sig_translate(base, shift), mod)
    scale = character(eta, x - y)
    return float(np.max(np.abs(lhs.values - scale * rhs.values)))


def magic_formula_residual(psi: Signal, f: Signal, g: Signal) -> float:
    """Residual of the product formula for the STFT of a Rihaczek distribution.

    The outer STFT lives on the phase-space group; its dual variable
    (omega, u) runs over G^ x G.  Both sides are compared on the full
    four-index grid, so this is meant for small groups only.
    """
    spec = f.group
    n = spec.order
    sigma = rihaczek(g, f).as_signal()
    Phi = rihaczek(psi, psi).as_signal()
    lhs = stft(sigma, Phi).values.reshape(n, n, n, n)          # [x, xi, omega, u]

    T = character_table(spec)
    Vg = stft(g, psi).mat
    Vf = stft(f, psi).mat
    add = (residue_grid(spec)[:, None, :] + residue_grid(spec)[None, :, :]) % np.asarray(
        spec.factors
    )
    add_idx = np.ravel_multi_index(np.moveaxis(add, 2, 0), spec.factors)
    phase = np.conj(T)                                          # conj<xi, u>
    A = Vg[:, add_idx]                                          # [x, xi, omega] -> Vg(x, xi+omega)
    B = np.conj(Vf[add_idx, :])                                 # [x, u, xi] -> conj Vf(x+u, xi)
    rhs = (
        phase[None, :, None, :]
        * A[:, :, :, None]
        * np.transpose(B, (0, 2, 1))[:, :, None, :]
    )
    return float(np.max(np.abs(lhs - rhs)))


# ---------------------------------------------------------------------------
# finite linear combinations of shifted windows


@dataclass(frozen=True)
class TestFunction:
    """Finite sum  sum_k a_k pi(x_k, xi_k) phi  with phi the canonical window."""

    group: GroupSpec
    terms: tuple[tuple[complex, GroupElement, DualElement], ...]

    def materialize(self) -> Signal:
        phi = gaussian_window(self.group)
        vals = np.zeros(self.group.order, dtype=np.complex128)
        for a, x, xi in self.terms:
            vals = vals + a * tf_shift(phi, x, xi).values
        return Signal(self.group, vals)


def testfunction_stft(F: TestFunction, G: TestFunction) -> PhaseFunction:
    """STFT of one window combination against another, by the closed form.

    Expands V_G F as a double sum of phase-corrected translates of
    V_phi phi; no full transform of the materialized signals is taken.
    """
    if F.group != G.group:
        raise GroupMismatch("both combinations must live on the same group")
    spec = F.group
    n = spec.order
    phi = gaussian_window(spec)
    V0 = stft(phi, phi).mat
    out = np.zeros((n, n), dtype=np.complex128)
    for a, u, omega in F.terms:
        xi_shift = translation_perm(spec, tuple(-r for r in omega.residues))
        c1 = np.conj(character_row(spec, u.index)[xi_shift])   # conj<xi - omega, u>
        x_shift = translation_perm(spec, tuple(-r for r in u.residues))
        for b, y, eta in G.terms:
            c2 = character_row(spec, eta.index)[x_shift]       # <eta, x - u>
            row = translation_perm(spec, tuple(p - q for p, q in zip(y.residues, u.residues)))
            col = translation_perm(spec, tuple(p - q for p, q in zip(eta.residues, omega.residues)))
            out += a * np.conj(b) * c2[:, None] * c1[None, :] * V0[row][:, col]
    return PhaseFunction(spec, out.reshape(-1))


def moyal_residual(f: Signal, g: Signal) -> float:
    """|  ||V_g f||^2_{phase} - ||f||^2 ||g||^2  |."""
    from .signal import norm_l2

    spec = f.group
    V = stft(f, g)
    lhs = float(np.sum(np.abs(V.values) ** 2) * spec.mass * spec.mass_dual)
    rhs = norm_l2(f) ** 2 * norm_l2(g) ** 2
    return abs(lhs - rhs)
