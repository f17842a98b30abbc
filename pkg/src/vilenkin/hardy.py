"""Intervals from the dyadic partition of ``Z_{m_n}``, atoms, atomic decompositions
and the two computable surrogates of the H1 norm.

An interval at level ``n`` with index range ``U = {lo..hi}`` is
``{y : y_0..y_{n-1} = x_0..x_{n-1}, y_n in U}``; its measure is ``|U| / M_{n+1}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .core import CylinderFunction, GroupPoint, RadixSystem, conditional_expectation, refine
from .errors import DepthExceeded, InvalidArgument, InvalidAtom, InvalidRadix
from .operators import maximal_partial

ATOM_TOL = 1e-12


@dataclass(frozen=True)
class PartitionNode:
    lo: int
    hi: int
    children: tuple[PartitionNode, ...] = ()

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def walk(self) -> Iterator[PartitionNode]:
        yield self
        for ch in self.children:
            yield from ch.walk()


def _split(lo: int, hi: int) -> PartitionNode:
    size = hi - lo + 1
    if size == 1:
        return PartitionNode(lo, hi)
    left = size // 2
    return PartitionNode(lo, hi, (_split(lo, lo + left - 1), _split(lo + left, hi)))


def dyadic_partition_tree(q: int) -> PartitionNode:
    """Recursive halving of ``{0..q-1}``; the left half has ``floor(size/2)`` elements."""
    if q < 2:
        raise InvalidRadix(f"cannot partition Z_{q}")
    return _split(0, q - 1)


def partition_nodes(q: int) -> list[tuple[int, int]]:
    return [(nd.lo, nd.hi) for nd in dyadic_partition_tree(q).walk()]


@dataclass(frozen=True)
class Interval:
    radix: RadixSystem
    base: GroupPoint
    level: int
    lo: int
    hi: int

    def __post_init__(self):
        rs = self.radix
        if not 0 <= self.level < rs.depth:
            raise DepthExceeded(f"interval level {self.level} outside 0..{rs.depth - 1}")
        if (self.lo, self.hi) not in partition_nodes(rs.m[self.level]):
            raise InvalidArgument(
                f"{{{self.lo}..{self.hi}}} is not a dyadic-partition node of Z_{rs.m[self.level]}"
            )

    @classmethod
    def cylinder(cls, rs: RadixSystem, base: GroupPoint, n: int) -> Interval:
        """``I_n(base)`` as the whole index set at level ``n``."""
        return cls(rs, base, n, 0, rs.m[n] - 1)

    @property
    def measure(self) -> float:
        return (self.hi - self.lo + 1) / self.radix.M[self.level + 1]

    @property
    def grid_depth(self) -> int:
        return self.level + 1

    def mask(self, d: int | None = None) -> np.ndarray:
        d = self.grid_depth if d is None else d
        if d < self.grid_depth:
            raise DepthExceeded(f"interval needs grid depth >= {self.grid_depth}")
        X = self.radix.coords(d)
        n = self.level
        prefix = np.array((tuple(self.base.coords) + (0,) * n)[:n], dtype=np.int64)
        inside = np.all(X[:, :n] == prefix, axis=1)
        return inside & (X[:, n] >= self.lo) & (X[:, n] <= self.hi)

    def to_dict(self) -> dict:
        return {"level": self.level, "base": list(self.base.coords)[: self.level],
                "U": [self.lo, self.hi], "measure": self.measure}


@dataclass(frozen=True)
class Atom:
    """Either the unit atom (``function is None``) or a function with its certificate interval."""

    radix: RadixSystem
    function: CylinderFunction | None = None
    interval: Interval | None = None

    @classmethod
    def unit(cls, rs: RadixSystem) -> Atom:
        return cls(rs)

    @property
    def is_unit(self) -> bool:
        return self.function is None

    def as_function(self, d: int | None = None) -> CylinderFunction:
        if self.is_unit:
            return CylinderFunction.constant(self.radix, 1.0, d or 0)
        return self.function if d is None else refine(self.function, d)


@dataclass(frozen=True)
class AtomReport:
    valid: bool
    condition: str | None = None
    cell: int | None = None
    value: float | None = None
    bound: float | None = None

    def __bool__(self):
        return self.valid

    def to_dict(self) -> dict:
        return {"valid": self.valid, "condition": self.condition, "cell": self.cell,
                "value": self.value, "bound": self.bound}


def validate_atom(a: Atom, interval: Interval | None = None) -> AtomReport:
    """Check support, sup bound and vanishing integral; violations are returned, not raised."""
    if a.is_unit:
        return AtomReport(True)
    I = interval if interval is not None else a.interval
    if I is None:
        return AtomReport(False, "missing_interval")
    f = a.function
    if I.radix != f.radix:
        return AtomReport(False, "radix_mismatch")
    d = max(f.depth, I.grid_depth)
    vals = refine(f, d).values
    mask = I.mask(d)
    outside = np.abs(vals[~mask])
    if outside.size and outside.max() > ATOM_TOL:
        c = int(np.flatnonzero(~mask)[np.argmax(outside)])
        return AtomReport(False, "support", c, float(outside.max()), ATOM_TOL)
    bound = 1.0 / I.measure
    absval = np.abs(vals)
    if absval.max() > bound * (1 + ATOM_TOL):
        c = int(np.argmax(absval))
        return AtomReport(False, "sup_bound", c, float(absval.max()), bound)
    integral = abs(vals.mean())
    if integral > ATOM_TOL:
        return AtomReport(False, "vanishing_integral", None, float(integral), ATOM_TOL)
    return AtomReport(True)


@dataclass
class AtomicDecomposition:
    radix: RadixSystem
    depth: int
    terms: list[tuple[complex, Atom]] = field(default_factory=list)

    def add(self, lam: complex, atom: Atom) -> None:
        self.terms.append((lam, atom))

    def assemble(self) -> CylinderFunction:
        out = np.zeros(self.radix.M[self.depth], dtype=np.complex128)
        for lam, atom in self.terms:
            out += lam * atom.as_function(self.depth).values
        return CylinderFunction(self.radix, self.depth, out)

    def __len__(self):
        return len(self.terms)


def h1_upper_bound(dec: AtomicDecomposition) -> float:
    """``sum |lambda_i|``, an upper bound for the H1 norm of the assembled function."""
    for i, (_, atom) in enumerate(dec.terms):
        report = validate_atom(atom)
        if not report:
            raise InvalidAtom(f"term {i}: {report.condition} violated")
    return float(sum(abs(lam) for lam, _ in dec.terms))


def h1_proxy_norm(f: CylinderFunction) -> float:
    """``||f*||_1`` with ``f*`` the dyadic maximal function."""
    return float(np.abs(maximal_partial(f).values).mean())


def trivial_decomposition(f: CylinderFunction) -> AtomicDecomposition:
    """``f = f^(0) * 1 + ||f - f^(0)||_inf * a`` with ``a`` an atom certified by the whole group."""
    rs, d = f.radix, f.depth
    dec = AtomicDecomposition(rs, d)
    mean = complex(f.values.mean())
    if mean != 0:
        dec.add(mean, Atom.unit(rs))
    rest = f.values - mean
    scale = float(np.abs(rest).max()) if rest.size else 0.0
    if scale > 0:
        whole = Interval.cylinder(rs, GroupPoint(()), 0)
        dec.add(scale, Atom(rs, CylinderFunction(rs, d, rest / scale), whole))
    return dec


def random_atom(rs: RadixSystem, d: int, rng: np.random.Generator) -> Atom:
    """A random atom on the depth-``d`` grid, certified by a random interval."""
    if d < 1:
        raise DepthExceeded("random atoms need depth >= 1")
    while True:
        level = int(rng.integers(0, d))
        nodes = partition_nodes(rs.m[level])
        lo, hi = nodes[int(rng.integers(len(nodes)))]
        if hi == lo and level + 1 >= d:
            continue
        base = GroupPoint(tuple(int(rng.integers(q)) for q in rs.m[:level]))
        I = Interval(rs, base, level, lo, hi)
        mask = I.mask(d)
        vals = np.zeros(rs.M[d], dtype=np.complex128)
        inner = rng.standard_normal(mask.sum())
        inner -= inner.mean()
        if not np.any(inner):
            continue
        vals[mask] = inner / np.abs(inner).max() / I.measure
        return Atom(rs, CylinderFunction(rs, d, vals), I)


def f_double_star(f: CylinderFunction, max_cells: int = 4096) -> CylinderFunction:
    """``sup |I|^{-1} |integral_I f|`` over all intervals ``I`` containing each point."""
    rs, d = f.radix, f.depth
    if rs.M[d] > max_cells:
        raise DepthExceeded(f"exhaustive interval search limited to {max_cells} cells")
    X = rs.coords(d)
    out = np.abs(f.values).copy() if d == 0 else np.zeros(rs.M[d])
    for n in range(d):
        g = conditional_expectation(f, n + 1).values.reshape(rs.m[n], rs.M[n])
        low = np.arange(rs.M[d]) % rs.M[n]
        xn = X[:, n]
        for lo, hi in partition_nodes(rs.m[n]):
            avg = np.abs(g[lo:hi + 1].mean(axis=0))
            inside = (xn >= lo) & (xn <= hi)
            np.maximum(out, np.where(inside, avg[low], 0.0), out=out)
    return CylinderFunction(rs, d, out)

