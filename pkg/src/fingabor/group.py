"""Finite abelian groups with a distinguished compact-open subgroup.

A group is a product of cyclic factors Z_N1 x ... x Z_Nk; the subgroup
K = d1 Z_N1 x ... x dk Z_Nk is fixed by choosing one divisor d_j | N_j per
factor.  The dual group is identified with the group itself through

    xi(x) = exp(2 pi i sum_j xi_j x_j / N_j),

so dual-indexed data uses the same canonical (lexicographic) element order
as group-indexed data.  Under this identification the annihilator of K is
K_perp = (N1/d1) Z_N1 x ... x (Nk/dk) Z_Nk.

Haar normalization: each point of the group carries ``mass`` and each point
of the dual carries ``1 / (mass * order)``.  The product of the two masses
times the order is 1, which is exactly what makes the Fourier transform
unitary.  Groups constructed by :func:`make_group` use ``mass = 1``; the
phase space G x G^ built by :func:`phase_spec` inherits the product mass
``mass * mass_dual`` so that all pairings on it agree with the plain
mass-weighted sums.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from math import prod
from typing import Iterable, Sequence

import numpy as np

# Full index/character tables are cached only up to this many elements;
# larger groups fall back to chunked, on-demand rows.
_TABLE_LIMIT = 4096


class GroupError(ValueError):
    """Base class for group construction and usage errors."""


class EmptyGroup(GroupError):
    """Group built from an empty factor list."""


class NonDivisor(GroupError):
    """Subgroup divisor does not divide its cyclic order."""


class GroupMismatch(GroupError):
    """Elements of different groups combined in one operation."""


@dataclass(frozen=True)
class GroupSpec:
    """Product of cyclic groups with a chosen compact-open subgroup.

    ``factors[j]`` is the order of the j-th cyclic factor and
    ``subgroup_divisors[j]`` the step of the subgroup inside it.  ``mass``
    is the Haar mass of a single point of the group.
    """

    factors: tuple[int, ...]
    subgroup_divisors: tuple[int, ...]
    mass: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "factors", tuple(int(n) for n in self.factors))
        object.__setattr__(
            self, "subgroup_divisors", tuple(int(d) for d in self.subgroup_divisors)
        )
        if len(self.factors) == 0:
            raise EmptyGroup("group needs at least one cyclic factor")
        if len(self.subgroup_divisors) != len(self.factors):
            raise NonDivisor("one subgroup divisor is required per factor")
        for n, d in zip(self.factors, self.subgroup_divisors):
            if n <= 0:
                raise EmptyGroup(f"cyclic factor order must be positive, got {n}")
            if d <= 0 or n % d != 0:
                raise NonDivisor(f"divisor {d} does not divide factor order {n}")
        if not self.mass > 0:
            raise GroupError(f"point mass must be positive, got {self.mass}")

    # -- sizes and masses ------------------------------------------------

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def mass_dual(self) -> float:
        return 1.0 / (self.mass * self.order)

    @property
    def subgroup_order(self) -> int:
        """Number of points of K."""
        return prod(n // d for n, d in zip(self.factors, self.subgroup_divisors))

    @property
    def annihilator_order(self) -> int:
        """Number of points of K_perp."""
        return prod(self.subgroup_divisors)

    # -- element construction --------------------------------------------

    def element(self, residues: Sequence[int] | int) -> "GroupElement":
        return GroupElement(self, _as_residues(self, residues))

    def dual(self, residues: Sequence[int] | int) -> "DualElement":
        return DualElement(self, _as_residues(self, residues))

    @property
    def identity(self) -> "GroupElement":
        return self.element([0] * len(self.factors))

    @property
    def dual_identity(self) -> "DualElement":
        return self.dual([0] * len(self.factors))

    def element_at(self, index: int) -> "GroupElement":
        return GroupElement(self, _residues_at(self, index))

    def dual_at(self, index: int) -> "DualElement":
        return DualElement(self, _residues_at(self, index))

    def elements(self) -> list["GroupElement"]:
        return [self.element_at(i) for i in range(self.order)]

    def dual_elements(self) -> list["DualElement"]:
        return [self.dual_at(i) for i in range(self.order)]

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "factors": list(self.factors),
            "subgroup_divisors": list(self.subgroup_divisors),
            "mass": self.mass,
        }

    @staticmethod
    def from_json(data: "str | dict") -> "GroupSpec":
        if isinstance(data, str):
            data = json.loads(data)
        return GroupSpec(
            tuple(data["factors"]),
            tuple(data["subgroup_divisors"]),
            float(data.get("mass", 1.0)),
        )


def make_group(factors: Iterable[int], subgroup_divisors: Iterable[int]) -> GroupSpec:
    """Build a group from cyclic factor orders and per-factor divisors."""
    return GroupSpec(tuple(factors), tuple(subgroup_divisors))


def _as_residues(spec: GroupSpec, residues: Sequence[int] | int) -> tuple[int, ...]:
    if isinstance(residues, int):
        residues = (residues,)
    residues = tuple(int(r) for r in residues)
    if len(residues) != len(spec.factors):
        raise GroupMismatch(
            f"expected {len(spec.factors)} residues, got {len(residues)}"
        )
    return tuple(r % n for r, n in zip(residues, spec.factors))


def _residues_at(spec: GroupSpec, index: int) -> tuple[int, ...]:
    index = int(index)
    if not 0 <= index < spec.order:
        raise GroupMismatch(f"index {index} out of range for group of order {spec.order}")
    return tuple(int(r) for r in np.unravel_index(index, spec.factors))


@dataclass(frozen=True)
class _Element:
    group: GroupSpec
    residues: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "residues", _as_residues(self.group, self.residues))

    @property
    def index(self) -> int:
        return int(np.ravel_multi_index(self.residues, self.group.factors))

    def _check(self, other: "_Element") -> None:
        if type(other) is not type(self):
            raise GroupMismatch(
                f"cannot combine {type(self).__name__} with {type(other).__name__}"
            )
        if other.group != self.group:
            raise GroupMismatch("elements belong to different groups")

    def __add__(self, other):
        self._check(other)
        return type(self)(
            self.group, tuple(a + b for a, b in zip(self.residues, other.residues))
        )

    def __sub__(self, other):
        self._check(other)
        return type(self)(
            self.group, tuple(a - b for a, b in zip(self.residues, other.residues))
        )

    def __neg__(self):
        return type(self)(self.group, tuple(-a for a in self.residues))


class GroupElement(_Element):
    """Point of the group, stored as a reduced residue tuple."""


class DualElement(_Element):
    """Character index, i.e. a point of the dual group."""


# ---------------------------------------------------------------------------
# characters


def character(xi: DualElement, x: GroupElement) -> complex:
    """Value <xi, x> = exp(2 pi i sum_j xi_j x_j / N_j).

    The exponent is reduced factor by factor before exponentiation, so the
    value is exactly 1.0 whenever every xi_j x_j is divisible by N_j.
    """
    if xi.group != x.group:
        raise GroupMismatch("character arguments belong to different groups")
    t = 0.0
    for a, b, n in zip(xi.residues, x.residues, x.group.factors):
        t += ((a * b) % n) / n
    return complex(np.exp(2j * np.pi * t))


@lru_cache(maxsize=32)
def residue_grid(spec: GroupSpec) -> np.ndarray:
    """(order, k) int64 array of residue tuples in canonical order."""
    idx = np.arange(spec.order)
    grid = np.stack(np.unravel_index(idx, spec.factors), axis=1).astype(np.int64)
    grid.setflags(write=False)
    return grid


def character_row(spec: GroupSpec, xi_index: int) -> np.ndarray:
    """<xi, x> for a fixed xi over all x in canonical order."""
    grid = residue_grid(spec)
    xi_res = _residues_at(spec, xi_index)
    t = np.zeros(spec.order)
    for j, n in enumerate(spec.factors):
        t += ((xi_res[j] * grid[:, j]) % n) / n
    return np.exp(2j * np.pi * t)


@lru_cache(maxsize=8)
def character_table(spec: GroupSpec) -> np.ndarray:
    """Full character table T[xi, x] = <xi, x>; only for small groups."""
    n = spec.order
    if n > _TABLE_LIMIT:
        raise GroupError(f"character table of order {n} exceeds the cached-table limit")
    grid = residue_grid(spec)
    t = np.zeros((n, n))
    for j, nj in enumerate(spec.factors):
        t += ((grid[:, j][:, None] * grid[:, j][None, :]) % nj) / nj
    table = np.exp(2j * np.pi * t)
    table.setflags(write=False)
    return table


# ---------------------------------------------------------------------------
# index arithmetic


def translation_perm(spec: GroupSpec, shift: Sequence[int]) -> np.ndarray:
    """perm[y] = index(y + shift) for all y in canonical order."""
    grid = residue_grid(spec)
    shifted = (grid + np.asarray(shift, dtype=np.int64)) % np.asarray(spec.factors)
    return np.ravel_multi_index(shifted.T, spec.factors)


@lru_cache(maxsize=32)
def neg_index(spec: GroupSpec) -> np.ndarray:
    """perm[y] = index(-y)."""
    grid = residue_grid(spec)
    neg = (-grid) % np.asarray(spec.factors)
    perm = np.ravel_multi_index(neg.T, spec.factors)
    perm.setflags(write=False)
    return perm


@lru_cache(maxsize=8)
def diff_table(spec: GroupSpec) -> np.ndarray:
    """table[a, b] = index(a - b); cached for groups up to the table limit."""
    n = spec.order
    if n > _TABLE_LIMIT:
        raise GroupError(f"difference table of order {n} exceeds the cached-table limit")
    grid = residue_grid(spec)
    mods = np.asarray(spec.factors)
    res = (grid[:, None, :] - grid[None, :, :]) % mods
    table = np.ravel_multi_index(np.moveaxis(res, 2, 0), spec.factors).astype(np.int32)
    table.setflags(write=False)
    return table


def diff_rows(spec: GroupSpec, rows: np.ndarray) -> np.ndarray:
    """index(a - b) for a in ``rows`` (indices) against all b."""
    grid = residue_grid(spec)
    mods = np.asarray(spec.factors)
    res = (grid[rows][:, None, :] - grid[None, :, :]) % mods
    return np.ravel_multi_index(np.moveaxis(res, 2, 0), spec.factors)


# ---------------------------------------------------------------------------
# subgroup, annihilator, coset representatives


@lru_cache(maxsize=32)
def subgroup_indices(spec: GroupSpec) -> np.ndarray:
    """Canonical indices of K, in increasing order."""
    grid = residue_grid(spec)
    mask = np.ones(spec.order, dtype=bool)
    for j, d in enumerate(spec.subgroup_divisors):
        mask &= grid[:, j] % d == 0
    idx = np.nonzero(mask)[0]
    idx.setflags(write=False)
    return idx


@lru_cache(maxsize=32)
def annihilator_indices(spec: GroupSpec) -> np.ndarray:
    """Canonical indices of K_perp, in increasing order."""
    grid = residue_grid(spec)
    mask = np.ones(spec.order, dtype=bool)
    for j, (n, d) in enumerate(zip(spec.factors, spec.subgroup_divisors)):
        mask &= grid[:, j] % (n // d) == 0
    idx = np.nonzero(mask)[0]
    idx.setflags(write=False)
    return idx


def annihilator(spec: GroupSpec) -> list[DualElement]:
    """Characters that are identically 1 on the subgroup K."""
    return [spec.dual_at(i) for i in annihilator_indices(spec)]


def coset_representatives(spec: GroupSpec) -> tuple[list[GroupElement], list[DualElement]]:
    """Canonical transversals (D1, D2) of G/K and of G^/K_perp.

    D1 runs over residues below the subgroup step, D2 over residues below
    the annihilator step, both lexicographically.
    """
    d1_ranges = [range(d) for d in spec.subgroup_divisors]
    d2_ranges = [range(n // d) for n, d in zip(spec.factors, spec.subgroup_divisors)]
    d1 = [spec.element(r) for r in _lex_product(d1_ranges)]
    d2 = [spec.dual(r) for r in _lex_product(d2_ranges)]
    return d1, d2


def _lex_product(ranges: list[range]) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = [()]
    for rng in ranges:
        out = [t + (v,) for t in out for v in rng]
    return out


# ---------------------------------------------------------------------------
# derived groups


@lru_cache(maxsize=32)
def dual_spec(spec: GroupSpec) -> GroupSpec:
    """The dual group as a GroupSpec: subgroup K_perp, Plancherel mass."""
    divisors = tuple(n // d for n, d in zip(spec.factors, spec.subgroup_divisors))
    return GroupSpec(spec.factors, divisors, mass=spec.mass_dual)


@lru_cache(maxsize=32)
def phase_spec(spec: GroupSpec) -> GroupSpec:
    """Phase space G x G^ as a group with subgroup K x K_perp.

    The point mass is ``mass * mass_dual`` so integrals over phase space
    written as plain mass-weighted sums match the product Haar measure.
    Its dual is again a group of the same shape (representing G^ x G), and
    the canonical product character realizes the pairing
    <(omega, u), (x, xi)> = <omega, x> <xi, u>.
    """
    dual = dual_spec(spec)
    return GroupSpec(
        spec.factors + dual.factors,
        spec.subgroup_divisors + dual.subgroup_divisors,
        mass=spec.mass * spec.mass_dual,
    )


def product_spec(a: GroupSpec, b: GroupSpec) -> GroupSpec:
    """Direct product with concatenated factors and product mass."""
    return GroupSpec(
        a.factors + b.factors, a.subgroup_divisors + b.subgroup_divisors, mass=a.mass * b.mass
    )


def phase_index(spec: GroupSpec, x: GroupElement, xi: DualElement) -> int:
    """Flat canonical index of (x, xi) in phase space."""
    if x.group != spec or xi.group != spec:
        raise GroupMismatch("phase point components belong to a different group")
    return x.index * spec.order + xi.index


def phase_point(spec: GroupSpec, flat: int) -> tuple[GroupElement, DualElement]:
    """Inverse of :func:`phase_index`."""
    n = spec.order
    return spec.element_at(flat // n), spec.dual_at(flat % n)
