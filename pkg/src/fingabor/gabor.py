"""Gabor systems over the canonical quasi-lattice.

The quasi-lattice is D1 x D2 with D1 a transversal of G/K and D2 a
transversal of G^/K_perp; its translates of the tile U = K x K_perp
partition phase space.  The lattice has exactly ``order`` points, so the
canonical window produces an orthogonal system with a single frame
constant.  Lattice-indexed sequences are stored flat with D1 outer and D2
inner, both lexicographic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .group import (
    DualElement,
    GroupElement,
    GroupMismatch,
    GroupSpec,
    annihilator_indices,
    coset_representatives,
    phase_spec,
    residue_grid,
    subgroup_indices,
)
from .norms import Exponents
from .operators import OperatorMatrix
from .signal import Signal, inner, norm_l2, tf_shift
from .tfa import stft


class NotAFrame(ValueError):
    """System whose lower frame bound vanishes relative to the upper one."""

    def __init__(self, message: str, bounds: tuple[float, float] | None = None):
        super().__init__(message)
        self.bounds = bounds


@dataclass(frozen=True, eq=False)
class QuasiLattice:
    """Finite family of phase-space points with the canonical tile attached."""

    group: GroupSpec
    points: tuple[tuple[GroupElement, DualElement], ...]

    @property
    def flat_indices(self) -> np.ndarray:
        n = self.group.order
        return np.asarray([x.index * n + xi.index for x, xi in self.points])

    @property
    def tile_offsets(self) -> np.ndarray:
        """Flat phase indices of U = K x K_perp."""
        n = self.group.order
        k = subgroup_indices(self.group)
        a = annihilator_indices(self.group)
        return (k[:, None] * n + a[None, :]).reshape(-1)

    @property
    def redundancy(self) -> float:
        return len(self.points) / self.group.order


@lru_cache(maxsize=16)
def quasi_lattice(spec: GroupSpec) -> QuasiLattice:
    """Canonical quasi-lattice D1 x D2, with the tiling property verified."""
    d1, d2 = coset_representatives(spec)
    points = tuple((w, mu) for w in d1 for mu in d2)
    lattice = QuasiLattice(spec, points)
    pspec = phase_spec(spec)
    mods = np.asarray(pspec.factors)
    grid = residue_grid(pspec)
    pts = grid[lattice.flat_indices]
    offs = grid[lattice.tile_offsets]
    covered = (pts[:, None, :] + offs[None, :, :]) % mods
    flat = np.ravel_multi_index(np.moveaxis(covered, 2, 0), pspec.factors)
    counts = np.bincount(flat.reshape(-1), minlength=spec.order ** 2)
    if not np.all(counts == 1):
        raise GroupMismatch("quasi-lattice translates of the tile do not partition")
    return lattice


def lattice_from_points(
    spec: GroupSpec, points: Sequence[tuple[GroupElement, DualElement]]
) -> QuasiLattice:
    """Lattice with arbitrary points; no tiling check (for deficient systems)."""
    return QuasiLattice(spec, tuple(points))


def _vector_stack(g: Signal, lattice: QuasiLattice) -> np.ndarray:
    return np.stack([tf_shift(g, x, xi).values for x, xi in lattice.points])


# ---------------------------------------------------------------------------
# analysis / synthesis / frame operator


def analysis(g: Signal, lattice: QuasiLattice, f: Signal) -> np.ndarray:
    """Coefficients <f, pi(w) g> over the lattice, flat in lattice order."""
    V = _vector_stack(g, lattice)
    return np.conj(V) @ f.values * f.group.mass


def synthesis(g: Signal, lattice: QuasiLattice, coeffs: np.ndarray) -> Signal:
    """sum_w c_w pi(w) g."""
    V = _vector_stack(g, lattice)
    return Signal(g.group, np.asarray(coeffs, dtype=np.complex128) @ V)


def frame_operator(h: Signal, g: Signal, lattice: QuasiLattice) -> OperatorMatrix:
    """S_{h,g} f = sum_w <f, pi(w) g> pi(w) h."""
    if h.group != g.group:
        raise GroupMismatch("both windows must live on the same group")
    H = _vector_stack(h, lattice)
    G = _vector_stack(g, lattice)
    return OperatorMatrix(h.group, H.T @ np.conj(G) * g.group.mass)


def frame_bounds(g: Signal, lattice: QuasiLattice) -> tuple[float, float]:
    """(A, B) = extreme eigenvalues of S_{g,g}; raises NotAFrame when A
    vanishes relative to B."""
    from .spectral import hermitian_eigen

    S = frame_operator(g, g, lattice)
    pairs = hermitian_eigen(S)
    values = [p.value for p in pairs]
    A, B = float(min(values)), float(max(values))
    if A <= 1e-10 * B:
        raise NotAFrame(f"lower frame bound {A} vanishes against {B}", (A, B))
    return A, B


def is_tight(g: Signal, lattice: QuasiLattice, slack: float = 1e-10) -> bool:
    A, B = frame_bounds(g, lattice)
    return bool(B / A - 1.0 <= slack)


class DualWindowMismatch(ValueError):
    """S^{-1} g fails to generate the dual system on this lattice."""


def dual_window(g: Signal, lattice: QuasiLattice, slack: float = 1e-10) -> Signal:
    """Canonical dual window h = S_{g,g}^{-1} g, verified to invert the frame.

    The mixed frame operators S_{h,g} and S_{g,h} are checked against the
    identity; on a quasi-lattice this can genuinely fail for windows whose
    frame operator does not commute with the lattice shifts, in which case
    DualWindowMismatch is raised.
    """
    A, B = frame_bounds(g, lattice)   # raises NotAFrame if deficient
    S = frame_operator(g, g, lattice)
    h = Signal(g.group, np.linalg.solve(S.entries, g.values))
    eye = np.eye(g.group.order)
    r1 = np.max(np.abs(frame_operator(h, g, lattice).entries - eye))
    r2 = np.max(np.abs(frame_operator(g, h, lattice).entries - eye))
    if max(r1, r2) > slack * max(1.0, B):
        raise DualWindowMismatch(
            f"mixed frame operators deviate from identity by {max(r1, r2):.3e}"
        )
    return h


def expansion_residual(
    f: Signal, g: Signal, h: Signal, lattice: QuasiLattice
) -> tuple[float, float]:
    """Reconstruction errors with (analysis g, synthesis h) and swapped."""
    c_g = analysis(g, lattice, f)
    c_h = analysis(h, lattice, f)
    r1 = norm_l2(Signal(f.group, synthesis(h, lattice, c_g).values - f.values))
    r2 = norm_l2(Signal(f.group, synthesis(g, lattice, c_h).values - f.values))
    return float(r1), float(r2)


# ---------------------------------------------------------------------------
# lattice sequence norms


def discrete_modnorm(
    f: Signal,
    g: Signal,
    lattice: QuasiLattice,
    e: Exponents | Sequence[float],
    m: np.ndarray | None = None,
) -> float:
    """Unweighted-mass l^{p,q} norm of the lattice STFT samples.

    Samples are grouped with D1 inner (exponent p) and D2 outer (exponent
    q); masses are 1, as for sequence spaces.
    """
    import math

    e = Exponents.of(e)
    c = np.abs(analysis(g, lattice, f))
    if m is not None:
        c = c * np.asarray(m, dtype=float)
    d1, d2 = coset_representatives(lattice.group)
    if len(lattice.points) != len(d1) * len(d2):
        raise GroupMismatch("sequence norm needs the full canonical lattice")
    cmat = c.reshape(len(d1), len(d2))
    if math.isinf(e.p):
        inner_part = cmat.max(axis=0)
    else:
        inner_part = ((cmat ** e.p).sum(axis=0)) ** (1.0 / e.p)
    if math.isinf(e.q):
        return float(inner_part.max())
    return float(((inner_part ** e.q).sum()) ** (1.0 / e.q))


# ---------------------------------------------------------------------------
# quotient (coset-level) coefficients


def quotient_coefficients(f: Signal, g: Signal, lattice: QuasiLattice) -> np.ndarray:
    """Per-coset maxima of |V_g f| over the tile around each lattice point."""
    spec = f.group
    pspec = phase_spec(spec)
    V = np.abs(stft(f, g).values)
    grid = residue_grid(pspec)
    mods = np.asarray(pspec.factors)
    pts = grid[lattice.flat_indices]
    offs = grid[lattice.tile_offsets]
    covered = (pts[:, None, :] + offs[None, :, :]) % mods
    flat = np.ravel_multi_index(np.moveaxis(covered, 2, 0), pspec.factors)
    return V[flat].max(axis=1)


def representative_independence_residual(
    f: Signal, g: Signal, lattice: QuasiLattice
) -> float:
    """Worst change of the quotient coefficients under re-representation.

    Every lattice point is replaced by every other representative of its
    coset; the sweep set is the same, so the residual is exactly zero.
    """
    spec = f.group
    pspec = phase_spec(spec)
    V = np.abs(stft(f, g).values)
    grid = residue_grid(pspec)
    mods = np.asarray(pspec.factors)
    offs = grid[lattice.tile_offsets]
    base = quotient_coefficients(f, g, lattice)
    worst = 0.0
    for i, flat_idx in enumerate(lattice.flat_indices):
        shifted = (grid[flat_idx][None, :] + offs) % mods            # all reps
        for rep in shifted:
            covered = (rep[None, :] + offs) % mods
            flat = np.ravel_multi_index(covered.T, pspec.factors)
            worst = max(worst, abs(float(V[flat].max()) - float(base[i])))
    return worst
