"""Dirichlet kernels, partial sums, Fejer means, Lebesgue constants and strong means."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .core import CylinderFunction, RadixSystem, conditional_expectation, refine
from .errors import IndexOutOfRange, InvalidArgument
from .transform import Spectrum, forward, inverse


def _check_n(n: int, limit: int, what: str = "n") -> None:
    if not 0 <= n <= limit:
        raise IndexOutOfRange(f"{what} = {n} outside 0..{limit}")


def min_depth(rs: RadixSystem, n: int) -> int:
    """Smallest ``j`` with ``M_j >= n``: every ``psi_k``, ``k < n``, lives on depth ``j``."""
    for j, Mj in enumerate(rs.M):
        if Mj >= n:
            return j
    raise IndexOutOfRange(f"{n} exceeds M_N = {rs.M[-1]}")


def dirichlet(rs: RadixSystem, n: int, d: int) -> CylinderFunction:
    """``D_n = sum_{k<n} psi_k`` on the depth-``d`` grid, synthesised from its spectrum."""
    rs.check_depth(d)
    _check_n(n, rs.M[d])
    c = np.zeros(rs.M[d])
    c[:n] = 1.0
    return inverse(Spectrum(rs, d, c))


def partial_sum(f: CylinderFunction, n: int) -> CylinderFunction:
    _check_n(n, f.radix.M[f.depth])
    return inverse(forward(f).truncate(n))


def fejer(f: CylinderFunction, n: int) -> CylinderFunction:
    """``sigma_n f = (1/n) sum_{k<n} S_k f``: coefficient ``k`` is weighted by ``(n - 1 - k) / n``."""
    if n < 1:
        raise InvalidArgument("Fejer mean needs n >= 1")
    _check_n(n, f.radix.M[f.depth])
    s = forward(f)
    k = np.arange(len(s.coeffs))
    w = np.where(k < n, (n - 1 - k) / n, 0.0)
    return inverse(Spectrum(f.radix, f.depth, s.coeffs * w))


@dataclass(frozen=True)
class KernelScan:
    """Lebesgue constants ``L[n] = ||D_n||_1`` and running averages for ``n <= n_max``."""

    radix: RadixSystem
    depth: int
    n_max: int
    L: np.ndarray
    A: np.ndarray

    def ratio_L(self, n: int) -> float:
        if n < 2:
            raise InvalidArgument("log 1 = 0; need n >= 2")
        return float(self.L[n] / math.log(n))


def lebesgue_scan(rs: RadixSystem, d: int, n_max: int, backend=None) -> KernelScan:
    """Stream ``D_{n+1} = D_n + psi_n`` and record ``||D_n||_1`` for ``0 <= n <= n_max``.

    Norms are refinement invariant, so the stream runs on the coarsest grid
    holding ``D_{n_max}``.
    """
    rs.check_depth(d)
    _check_n(n_max, rs.M[d], "n_max")
    g = min_depth(rs, n_max)
    L = kernels.stream_norms(rs, g, np.ones(max(n_max, 1)), 0, n_max, backend=backend)
    A = np.zeros_like(L)
    A[1:] = np.cumsum(L[1:]) / np.arange(1, n_max + 1)
    for arr in (L, A):
        arr.flags.writeable = False
    return KernelScan(rs, d, n_max, L, A)


def lebesgue_average_ratio(scan: KernelScan, n: int) -> float:
    """``A[n] / ln n`` where ``A[n]`` is the mean of ``L_1..L_n``."""
    if n < 2:
        raise InvalidArgument("log 1 = 0; need n >= 2")
    _check_n(n, scan.n_max)
    return float(scan.A[n] / math.log(n))


def maximal_partial(f: CylinderFunction) -> CylinderFunction:
    """``f* = max_{0 <= n <= d} |S_{M_n} f|``; ``S_{M_n} f`` is the depth-``n`` average."""
    d = f.depth
    out = np.zeros(f.radix.M[d])
    for n in range(d + 1):
        np.maximum(out, np.abs(refine(conditional_expectation(f, n), d).values), out=out)
    return CylinderFunction(f.radix, d, out)


def maximal_fejer(f: CylinderFunction, backend=None) -> CylinderFunction:
    """``sup_{1 <= n <= M_d} |sigma_n f|`` pointwise, by cumulative partial-sum streaming."""
    rs, d = f.radix, f.depth
    sup = kernels.fejer_sup(rs, d, forward(f).coeffs, rs.M[d], backend=backend)
    return CylinderFunction(rs, d, sup)


def partial_sum_norms(f: CylinderFunction, n_max: int, subtract_f: bool = False,
                      backend=None) -> np.ndarray:
    """``||S_n f||_1`` (or ``||S_n f - f||_1``) for ``0 <= n <= n_max``.

    ``n_max`` may exceed ``M_d``; past that ``S_n f = f``.
    """
    if n_max < 0:
        raise InvalidArgument("n_max must be nonnegative")
    rs, d = f.radix, f.depth
    top = min(n_max, rs.M[d])
    coeffs = forward(f).coeffs
    if subtract_f:
        vals = kernels.stream_norms(rs, d, _maybe_real(coeffs), 0, top,
                                    target=_maybe_real(f.values), backend=backend)
        tail = 0.0
    else:
        g = min_depth(rs, top)
        vals = kernels.stream_norms(rs, g, _maybe_real(coeffs[: rs.M[g]]), 0, top, backend=backend)
        tail = float(np.abs(f.values).mean())
    if n_max > top:
        vals = np.concatenate([vals, np.full(n_max - top, tail)])
    return vals


def _maybe_real(a: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(a) and not np.any(a.imag):
        return a.real.copy()
    return a


def strong_mean_gat(f: CylinderFunction, n: int) -> float:
    """``(1/ln n) sum_{k=1}^n ||S_k f - f||_1 / k``."""
    if n < 2:
        raise InvalidArgument("need n >= 2")
    e = partial_sum_norms(f, n, subtract_f=True)
    k = np.arange(1, n + 1)
    return float(np.sum(e[1:] / k) / math.log(n))


def strong_sum(f: CylinderFunction, n: int) -> float:
    """``sum_{k=1}^n ||S_k f||_1``."""
    return float(partial_sum_norms(f, n)[1:].sum())


def strong_sum_normalized(f: CylinderFunction, n: int, weight: str = "uniform",
                          phi: Callable[[int], float] | None = None) -> float:
    """``(1/(n w_n)) sum_{k=1}^n ||S_k f||_1`` with ``w_n`` = 1, ``ln n`` or ``phi(n)``."""
    if n < 2:
        raise InvalidArgument("need n >= 2")
    total = strong_sum(f, n)
    if weight == "uniform":
        w = 1.0
    elif weight == "log":
        w = math.log(n)
    elif weight == "phi":
        if phi is None:
            raise InvalidArgument("weight 'phi' needs a phi function")
        w = float(phi(n))
    else:
        raise InvalidArgument(f"unknown weight {weight!r}")
    return total / (n * w)
