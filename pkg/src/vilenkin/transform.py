"""Rademacher functions, Vilenkin characters and the fast Vilenkin-Fourier transform.

The transform is separable: coordinate ``x_k`` of the grid is one numpy axis,
and an ``m_k``-point character matrix is applied along each axis in turn.
Coefficient ``n`` lands at flat index ``n`` because the digit ``n_k`` takes the
place of ``x_k``.  Radix-2 axes use the exact +-1 butterfly.
"""
from __future__ import annotations

from functools import cache

import numpy as np

from .core import CylinderFunction, RadixSystem, expand, unit_roots
from .errors import DepthExceeded, IndexOutOfRange, InvalidArgument
from . import kernels


class Spectrum:
    """Vilenkin-Fourier coefficients ``f^(0..M_d-1)`` of a depth-``d`` function."""

    __slots__ = ("radix", "depth", "coeffs")

    def __init__(self, radix: RadixSystem, depth: int, coeffs):
        radix.check_depth(depth)
        c = np.array(coeffs, dtype=np.complex128)
        if c.shape != (radix.M[depth],):
            raise InvalidArgument(f"expected {radix.M[depth]} coefficients, got {c.shape}")
        c.flags.writeable = False
        self.radix = radix
        self.depth = depth
        self.coeffs = c

    def __repr__(self):
        return f"Spectrum(m={self.radix.m}, depth={self.depth})"

    def __add__(self, other: Spectrum) -> Spectrum:
        return Spectrum(self.radix, self.depth, self.coeffs + other.coeffs)

    def __mul__(self, scalar) -> Spectrum:
        return Spectrum(self.radix, self.depth, scalar * self.coeffs)

    __rmul__ = __mul__

    def truncate(self, n: int) -> Spectrum:
        """Keep coefficients of index ``< n``."""
        c = self.coeffs.copy()
        c[n:] = 0
        return Spectrum(self.radix, self.depth, c)


def character_phases(rs: RadixSystem, n: int, d: int) -> tuple[np.ndarray, int]:
    """Integer phases ``p`` with ``psi_n = exp(2 pi i p / L)`` on the depth-``d`` grid."""
    rs.check_depth(d)
    L = rs.phase_modulus(d)
    digits = expand(rs, n).digits
    X = rs.coords(d)
    p = np.zeros(rs.M[d], dtype=np.int64)
    for k in range(d):
        if digits[k]:
            p += digits[k] * X[:, k] * (L // rs.m[k])
    return p % L, L


def character_values(rs: RadixSystem, n: int, d: int) -> np.ndarray:
    if any(expand(rs, n).digits[d:]):
        raise DepthExceeded(f"psi_{n} is not constant on depth-{d} cylinders")
    p, L = character_phases(rs, n, d)
    return unit_roots(L)[p]


def rademacher(rs: RadixSystem, k: int) -> CylinderFunction:
    if not 0 <= k < rs.depth:
        raise DepthExceeded(f"r_{k} needs depth > {k}")
    return CylinderFunction(rs, k + 1, character_values(rs, rs.M[k], k + 1))


def character(rs: RadixSystem, n: int) -> CylinderFunction:
    """``psi_n`` as a step function on depth ``|n| + 1``."""
    d = expand(rs, n).order + 1
    return CylinderFunction(rs, d, character_values(rs, n, d))


@cache
def _axis_matrix(q: int, sign: int) -> np.ndarray:
    roots = unit_roots(q)
    j = np.arange(q)
    mat = roots[(sign * np.outer(j, j)) % q]
    mat.flags.writeable = False
    return mat


def _apply_axes(values: np.ndarray, rs: RadixSystem, d: int, sign: int) -> np.ndarray:
    if d == 0:
        return values.astype(np.complex128)
    if all(q == 2 for q in rs.m[:d]):
        return kernels.fwht(values)
    a = values.astype(np.complex128).reshape(rs.grid_shape(d))
    for k, q in enumerate(rs.m[:d]):
        axis = d - 1 - k
        if q == 2:
            u = np.take(a, 0, axis=axis)
            v = np.take(a, 1, axis=axis)
            a = np.stack([u + v, u - v], axis=axis)
        else:
            a = np.moveaxis(np.tensordot(_axis_matrix(q, sign), a, axes=([1], [axis])), 0, axis)
    return a.reshape(-1)


def forward(f: CylinderFunction) -> Spectrum:
    """``f^(k) = integral of f * conj(psi_k)`` for ``k < M_d``, in ``O(M_d sum m_j)``."""
    rs, d = f.radix, f.depth
    return Spectrum(rs, d, _apply_axes(f.values, rs, d, -1) / rs.M[d])


def inverse(s: Spectrum) -> CylinderFunction:
    return CylinderFunction(s.radix, s.depth, _apply_axes(s.coeffs, s.radix, s.depth, +1))


def forward_naive(f: CylinderFunction) -> Spectrum:
    """Direct ``O(M_d^2)`` evaluation of every coefficient integral."""
    rs, d = f.radix, f.depth
    out = np.empty(rs.M[d], dtype=np.complex128)
    for k in range(rs.M[d]):
        out[k] = np.mean(f.values * np.conj(character_values(rs, k, d)))
    return Spectrum(rs, d, out)


def spectrum_at(f: CylinderFunction, d: int) -> Spectrum:
    """Spectrum of ``f`` on the depth-``d`` grid; coefficients from ``M_{f.depth}`` on vanish."""
    if d < f.depth:
        raise IndexOutOfRange(f"depth {d} below the function depth {f.depth}")
    f.radix.check_depth(d)
    c = np.zeros(f.radix.M[d], dtype=np.complex128)
    c[: f.radix.M[f.depth]] = forward(f).coeffs
    return Spectrum(f.radix, d, c)
