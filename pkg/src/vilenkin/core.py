"""Mixed-radix arithmetic, group elements, cylinder grids and Haar integration.

Every object lives on a truncated group ``Z_{m_0} x ... x Z_{m_{N-1}}``.  A
function of the first ``d`` coordinates is stored as a flat vector of length
``M_d`` whose entry ``c`` is the value on the cell with mixed-radix address
``c = x_0 + x_1 M_1 + ... + x_{d-1} M_{d-1}`` (``x_0`` least significant).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cache, cached_property
from typing import Sequence

import numpy as np

from .errors import (
    CannotCoarsen,
    DepthExceeded,
    IndexOutOfRange,
    InvalidArgument,
    InvalidDigit,
    InvalidRadix,
    UnsupportedNorm,
)

MAX_RADIX = 16


@dataclass(frozen=True)
class RadixSystem:
    """Generating sequence ``m`` of a bounded Vilenkin group truncated at depth N."""

    m: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(q) for q in self.m)
        if not m:
            raise InvalidRadix("radix sequence must be non-empty")
        for j, q in enumerate(m):
            if q < 2:
                raise InvalidRadix(f"m[{j}] = {q} < 2")
            if q > MAX_RADIX:
                raise InvalidRadix(f"m[{j}] = {q} exceeds the bound {MAX_RADIX}")
        object.__setattr__(self, "m", m)

    @classmethod
    def constant(cls, q: int, depth: int) -> RadixSystem:
        return cls((q,) * depth)

    @property
    def depth(self) -> int:
        return len(self.m)

    @cached_property
    def M(self) -> tuple[int, ...]:
        out = [1]
        for q in self.m:
            out.append(out[-1] * q)
        return tuple(out)

    @property
    def is_dyadic(self) -> bool:
        return all(q == 2 for q in self.m)

    def check_depth(self, d: int) -> int:
        if not 0 <= d <= self.depth:
            raise DepthExceeded(f"depth {d} outside 0..{self.depth}")
        return d

    def phase_modulus(self, d: int | None = None) -> int:
        """Least common multiple of ``m_0..m_{d-1}``; character phases are integers mod this."""
        d = self.depth if d is None else d
        return math.lcm(1, *self.m[:d])

    def coords(self, d: int) -> np.ndarray:
        """Coordinate table of shape ``(M_d, d)``; row ``c`` is the point of cell ``c``."""
        self.check_depth(d)
        return _coords(self.m[:d])

    def grid_shape(self, d: int) -> tuple[int, ...]:
        """numpy shape for which a C-ordered reshape puts ``x_k`` on axis ``d-1-k``."""
        return tuple(reversed(self.m[:d]))


@cache
def _coords(m: tuple[int, ...]) -> np.ndarray:
    size = math.prod(m)
    c = np.arange(size, dtype=np.int64)
    out = np.empty((size, len(m)), dtype=np.int64)
    stride = 1
    for k, q in enumerate(m):
        out[:, k] = (c // stride) % q
        stride *= q
    out.flags.writeable = False
    return out


@cache
def unit_roots(L: int) -> np.ndarray:
    """``exp(2 pi i p / L)`` for ``p = 0..L-1`` with the quarter points snapped exactly."""
    p = np.arange(L)
    table = np.exp(2j * np.pi * p / L)
    for q, z in enumerate((1, 1j, -1, -1j)):
        if (q * L) % 4 == 0:
            table[q * L // 4] = z
    table.flags.writeable = False
    return table


@dataclass(frozen=True)
class DigitExpansion:
    n: int
    digits: tuple[int, ...]
    order: int


@dataclass(frozen=True)
class GroupPoint:
    coords: tuple[int, ...]

    def __len__(self):
        return len(self.coords)


def expand(rs: RadixSystem, n: int) -> DigitExpansion:
    if not 0 <= n < rs.M[-1]:
        raise IndexOutOfRange(f"n = {n} outside 0..{rs.M[-1] - 1}")
    digits = []
    r = n
    for q in rs.m:
        r, dgt = divmod(r, q)
        digits.append(dgt)
    nonzero = [j for j, dgt in enumerate(digits) if dgt]
    return DigitExpansion(n, tuple(digits), max(nonzero) if nonzero else 0)


def compose(rs: RadixSystem, digits: Sequence[int]) -> int:
    if len(digits) > rs.depth:
        raise DepthExceeded(f"{len(digits)} digits for a depth-{rs.depth} system")
    n = 0
    for j, (dgt, q, Mj) in enumerate(zip(digits, rs.m, rs.M)):
        if not 0 <= dgt < q:
            raise InvalidDigit(f"digit {j} = {dgt} not in Z_{q}")
        n += dgt * Mj
    return n


def order(rs: RadixSystem, n: int) -> int:
    """``|n|``, the index of the leading nonzero digit (0 for ``n = 0``)."""
    return expand(rs, n).order


def _check_point(rs: RadixSystem, x: GroupPoint) -> None:
    if len(x.coords) > rs.depth:
        raise DepthExceeded(f"point has {len(x.coords)} coordinates, depth is {rs.depth}")
    for j, (xj, q) in enumerate(zip(x.coords, rs.m)):
        if not 0 <= xj < q:
            raise InvalidDigit(f"coordinate {j} = {xj} not in Z_{q}")


def cell_index(rs: RadixSystem, x: GroupPoint, d: int) -> int:
    rs.check_depth(d)
    _check_point(rs, x)
    coords = tuple(x.coords) + (0,) * (d - len(x.coords))
    return sum(xj * Mj for xj, Mj in zip(coords[:d], rs.M))


def point_of_cell(rs: RadixSystem, c: int, d: int) -> GroupPoint:
    """Representative point of cell ``c``: its first ``d`` coordinates, zeros after."""
    rs.check_depth(d)
    if not 0 <= c < rs.M[d]:
        raise IndexOutOfRange(f"cell {c} outside 0..{rs.M[d] - 1}")
    coords = []
    for q in rs.m:
        c, xj = divmod(c, q)
        coords.append(xj)
    return GroupPoint(tuple(coords))


def group_add(rs: RadixSystem, x: GroupPoint, y: GroupPoint) -> GroupPoint:
    _check_point(rs, x)
    _check_point(rs, y)
    n = max(len(x), len(y))
    a = tuple(x.coords) + (0,) * (n - len(x))
    b = tuple(y.coords) + (0,) * (n - len(y))
    return GroupPoint(tuple((u + v) % q for u, v, q in zip(a, b, rs.m)))


def basis_element(rs: RadixSystem, n: int) -> GroupPoint:
    if not 0 <= n < rs.depth:
        raise DepthExceeded(f"e_{n} needs depth > {n}")
    return GroupPoint(tuple(int(j == n) for j in range(rs.depth)))


class CylinderFunction:
    """Complex step function constant on the depth-``d`` cylinders.

    Instances are immutable; arithmetic lifts both operands to the finer depth.
    """

    __slots__ = ("radix", "depth", "values")

    def __init__(self, radix: RadixSystem, depth: int, values):
        radix.check_depth(depth)
        vals = np.array(values, dtype=np.complex128)
        if vals.shape != (radix.M[depth],):
            raise InvalidArgument(
                f"expected {radix.M[depth]} values for depth {depth}, got shape {vals.shape}"
            )
        vals.flags.writeable = False
        self.radix = radix
        self.depth = depth
        self.values = vals

    @classmethod
    def constant(cls, rs: RadixSystem, value: complex, depth: int = 0) -> CylinderFunction:
        return cls(rs, depth, np.full(rs.M[depth], value, dtype=np.complex128))

    @classmethod
    def zeros(cls, rs: RadixSystem, depth: int = 0) -> CylinderFunction:
        return cls.constant(rs, 0.0, depth)

    def __repr__(self):
        return f"CylinderFunction(m={self.radix.m}, depth={self.depth})"

    def __call__(self, x: GroupPoint) -> complex:
        coords = (tuple(x.coords) + (0,) * self.depth)[: self.depth]
        return complex(self.values[cell_index(self.radix, GroupPoint(coords), self.depth)])

    def _align(self, other):
        if isinstance(other, CylinderFunction):
            if other.radix != self.radix:
                raise InvalidArgument("functions live on different radix systems")
            d = max(self.depth, other.depth)
            return d, refine(self, d).values, refine(other, d).values
        return self.depth, self.values, other

    def __add__(self, other):
        d, a, b = self._align(other)
        return CylinderFunction(self.radix, d, a + b)

    __radd__ = __add__

    def __sub__(self, other):
        d, a, b = self._align(other)
        return CylinderFunction(self.radix, d, a - b)

    def __rsub__(self, other):
        return CylinderFunction(self.radix, self.depth, other - self.values)

    def __mul__(self, other):
        d, a, b = self._align(other)
        return CylinderFunction(self.radix, d, a * b)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return CylinderFunction(self.radix, self.depth, self.values / scalar)

    def __neg__(self):
        return CylinderFunction(self.radix, self.depth, -self.values)

    def conj(self) -> CylinderFunction:
        return CylinderFunction(self.radix, self.depth, self.values.conj())

    def abs(self) -> CylinderFunction:
        return CylinderFunction(self.radix, self.depth, np.abs(self.values))

    def at_depth(self, d: int) -> np.ndarray:
        return refine(self, d).values


def haar_integrate(f: CylinderFunction) -> complex:
    return complex(f.values.mean())


def norm(f: CylinderFunction, p=1) -> float:
    a = np.abs(f.values)
    if p == 1:
        return float(a.mean())
    if p == 2:
        return float(np.sqrt(np.mean(a * a)))
    if p in (np.inf, "inf", math.inf):
        return float(a.max())
    raise UnsupportedNorm(f"p = {p!r}; supported: 1, 2, inf")


def refine(f: CylinderFunction, d: int) -> CylinderFunction:
    if d < f.depth:
        raise CannotCoarsen(f"cannot refine depth {f.depth} to {d}")
    f.radix.check_depth(d)
    if d == f.depth:
        return f
    reps = f.radix.M[d] // f.radix.M[f.depth]
    return CylinderFunction(f.radix, d, np.tile(f.values, reps))


def conditional_expectation(f: CylinderFunction, n: int) -> CylinderFunction:
    """Average of ``f`` over each depth-``n`` cylinder, as a depth-``n`` function."""
    f.radix.check_depth(n)
    if n >= f.depth:
        return f
    block = f.radix.M[f.depth] // f.radix.M[n]
    return CylinderFunction(f.radix, n, f.values.reshape(block, f.radix.M[n]).mean(axis=0))


def cylinder_mask(rs: RadixSystem, x: GroupPoint, n: int, d: int) -> np.ndarray:
    """Boolean mask of ``I_n(x)`` on the depth-``d`` grid (``n <= d``)."""
    rs.check_depth(d)
    if n > d:
        raise DepthExceeded(f"cylinder depth {n} exceeds grid depth {d}")
    X = rs.coords(d)
    target = np.array((tuple(x.coords) + (0,) * n)[:n], dtype=np.int64)
    return np.all(X[:, :n] == target, axis=1)
