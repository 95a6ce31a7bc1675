"""Signals on a finite abelian group and functions on its phase space.

All transforms carry their Haar mass factors explicitly: sums over the
group are weighted by ``spec.mass``, sums over the dual by
``spec.mass_dual``.  Nothing here assumes mass 1, so the same code runs on
base groups and on phase spaces (see :func:`fingabor.group.phase_spec`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .group import (
    DualElement,
    GroupElement,
    GroupMismatch,
    GroupSpec,
    _TABLE_LIMIT,
    character_row,
    character_table,
    diff_rows,
    diff_table,
    dual_spec,
    neg_index,
    phase_spec,
    product_spec,
    residue_grid,
    subgroup_indices,
    translation_perm,
)

_CHUNK = 512


@dataclass(frozen=True, eq=False)
class Signal:
    """Complex-valued function on a group, values in canonical order."""

    group: GroupSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=np.complex128)
        if vals.shape != (self.group.order,):
            raise GroupMismatch(
                f"expected {self.group.order} values, got shape {vals.shape}"
            )
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True, eq=False)
class PhaseFunction:
    """Function on the phase space G x G^ of a base group.

    Values are stored flat in canonical (x, xi) order: the flat index is
    ``x.index * |G| + xi.index``, which coincides with the canonical order
    of the phase space viewed as a group.
    """

    group: GroupSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        n = self.group.order
        vals = np.array(self.values, dtype=np.complex128).reshape(-1)
        if vals.shape != (n * n,):
            raise GroupMismatch(f"expected {n * n} phase values, got {vals.shape[0]}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def mat(self) -> np.ndarray:
        """View of the values as an (x, xi) matrix."""
        return self.values.reshape(self.group.order, self.group.order)

    def as_signal(self) -> Signal:
        return Signal(phase_spec(self.group), self.values)


def phase_from_signal(base: GroupSpec, sig: Signal) -> PhaseFunction:
    if sig.group != phase_spec(base):
        raise GroupMismatch("signal does not live on the phase space of the base group")
    return PhaseFunction(base, sig.values)


# ---------------------------------------------------------------------------
# constructors


def zeros(spec: GroupSpec) -> Signal:
    return Signal(spec, np.zeros(spec.order, dtype=np.complex128))


def delta(spec: GroupSpec, x: GroupElement | None = None) -> Signal:
    vals = np.zeros(spec.order, dtype=np.complex128)
    vals[0 if x is None else x.index] = 1.0
    return Signal(spec, vals)


def constant(spec: GroupSpec, value: complex = 1.0) -> Signal:
    return Signal(spec, np.full(spec.order, value, dtype=np.complex128))


def indicator(spec: GroupSpec, indices: Sequence[int] | np.ndarray) -> Signal:
    vals = np.zeros(spec.order, dtype=np.complex128)
    vals[np.asarray(indices, dtype=np.int64)] = 1.0
    return Signal(spec, vals)


def subgroup_indicator(spec: GroupSpec) -> Signal:
    return indicator(spec, subgroup_indices(spec))


# ---------------------------------------------------------------------------
# shifts


def _element_index(spec: GroupSpec, x: GroupElement | DualElement | int) -> int:
    if isinstance(x, (GroupElement, DualElement)):
        if x.group != spec:
            raise GroupMismatch("element belongs to a different group")
        return x.index
    return int(x)


def translate(f: Signal, x: GroupElement | int) -> Signal:
    """(T_x f)(y) = f(y - x)."""
    idx = _element_index(f.group, x)
    res = residue_grid(f.group)[idx]
    perm = translation_perm(f.group, [-r for r in res])
    return Signal(f.group, f.values[perm])


def modulate(f: Signal, xi: DualElement | int) -> Signal:
    """(M_xi f)(y) = <xi, y> f(y)."""
    idx = _element_index(f.group, xi)
    return Signal(f.group, character_row(f.group, idx) * f.values)


def tf_shift(f: Signal, x: GroupElement | int, xi: DualElement | int) -> Signal:
    """pi(x, xi) f = M_xi T_x f."""
    return modulate(translate(f, x), xi)


# ---------------------------------------------------------------------------
# Fourier transform


def fourier(f: Signal) -> Signal:
    """F f(xi) = sum_x f(x) conj(<xi, x>) * mass; lives on the dual group."""
    spec = f.group
    out_spec = dual_spec(spec)
    n = spec.order
    if n <= _TABLE_LIMIT:
        vals = np.conj(character_table(spec)) @ f.values * spec.mass
    else:
        vals = np.empty(n, dtype=np.complex128)
        for start in range(0, n, _CHUNK):
            rows = range(start, min(start + _CHUNK, n))
            block = np.stack([np.conj(character_row(spec, i)) for i in rows])
            vals[start : start + block.shape[0]] = block @ f.values * spec.mass
    return Signal(out_spec, vals)


def inverse_fourier(F: Signal) -> Signal:
    """Inverse transform; lives on the dual of F's group (the bidual)."""
    spec = F.group
    out_spec = dual_spec(spec)
    n = spec.order
    if n <= _TABLE_LIMIT:
        vals = character_table(spec).T @ F.values * spec.mass
    else:
        vals = np.empty(n, dtype=np.complex128)
        for start in range(0, n, _CHUNK):
            rows = range(start, min(start + _CHUNK, n))
            block = np.stack([character_row(spec, i) for i in rows])
            vals[start : start + block.shape[0]] = block @ F.values * spec.mass
    return Signal(out_spec, vals)


# ---------------------------------------------------------------------------
# algebra


def convolve(f: Signal, g: Signal) -> Signal:
    """(f * g)(x) = sum_y f(y) g(x - y) * mass, by direct summation."""
    if f.group != g.group:
        raise GroupMismatch("convolution needs both signals on the same group")
    spec = f.group
    n = spec.order
    out = np.empty(n, dtype=np.complex128)
    if n <= _TABLE_LIMIT:
        table = diff_table(spec)
        for start in range(0, n, _CHUNK):
            rows = table[start : start + _CHUNK]
            out[start : start + rows.shape[0]] = g.values[rows] @ f.values
    else:
        for start in range(0, n, _CHUNK):
            rows = diff_rows(spec, np.arange(start, min(start + _CHUNK, n)))
            out[start : start + rows.shape[0]] = g.values[rows] @ f.values
    return Signal(spec, out * spec.mass)


def convolve_phase(F: PhaseFunction, H: PhaseFunction) -> PhaseFunction:
    """Convolution over phase space, weighted by mass * mass_dual per point."""
    if F.group != H.group:
        raise GroupMismatch("phase convolution needs a common base group")
    return phase_from_signal(F.group, convolve(F.as_signal(), H.as_signal()))


def involution(f: Signal) -> Signal:
    """f*(x) = conj(f(-x))."""
    return Signal(f.group, np.conj(f.values[neg_index(f.group)]))


def inner(f: Signal, g: Signal) -> complex:
    """<f, g> = sum f conj(g) * mass; antilinear in the second slot."""
    if f.group != g.group:
        raise GroupMismatch("inner product needs both signals on the same group")
    return complex(np.vdot(g.values, f.values) * f.group.mass)


def inner_phase(F: PhaseFunction, H: PhaseFunction) -> complex:
    """Phase-space pairing with mass * mass_dual per point."""
    return inner(F.as_signal(), H.as_signal())


def norm_l2(f: Signal) -> float:
    return float(np.sqrt(f.group.mass) * np.linalg.norm(f.values))


def tensor(f: Signal, g: Signal) -> Signal:
    """(f x g)(s, t) = f(s) g(t) on the direct product group."""
    spec = product_spec(f.group, g.group)
    return Signal(spec, np.kron(f.values, g.values))


# ---------------------------------------------------------------------------
# serialization


def signal_to_json(f: Signal) -> str:
    import json

    pairs = [[float(v.real), float(v.imag)] for v in f.values]
    return json.dumps({"group": f.group.to_json(), "values": pairs}, sort_keys=True)


def signal_from_json(text: str) -> Signal:
    import json

    data = json.loads(text)
    spec = GroupSpec.from_json(data["group"])
    vals = np.array([complex(re, im) for re, im in data["values"]])
    return Signal(spec, vals)


def signal_to_csv_rows(f: Signal) -> list[tuple[int, float, float]]:
    """Rows (index, re, im) in canonical order."""
    return [(i, float(v.real), float(v.imag)) for i, v in enumerate(f.values)]


def phase_to_csv_rows(F: PhaseFunction) -> list[tuple[int, int, float, float, float]]:
    """Rows (x index, xi index, re, im, abs) in canonical order."""
    n = F.group.order
    out = []
    for flat, v in enumerate(F.values):
        out.append((flat // n, flat % n, float(v.real), float(v.imag), float(abs(v))))
    return out
