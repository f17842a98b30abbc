"""Backend selection and argument preparation for the streaming kernels.

The compiled ``_ckernels`` extension is used when importable; otherwise the
numpy ``_pykernels`` fallback.  Set ``VILENKIN_BACKEND=python`` to force the
fallback.
"""
from __future__ import annotations

import importlib
import os
from functools import cache

import numpy as np

from .core import RadixSystem, unit_roots
from .errors import IndexOutOfRange, InvalidArgument


def _load(name: str):
    return importlib.import_module(f"vilenkin.{'_ckernels' if name == 'c' else '_pykernels'}")


def available_backends() -> list[str]:
    names = ["python"]
    try:
        _load("c")
        names.insert(0, "c")
    except ImportError:
        pass
    return names


def _select():
    wanted = os.environ.get("VILENKIN_BACKEND", "").lower()
    if wanted == "python":
        return "python", _load("python")
    try:
        return "c", _load("c")
    except ImportError:
        if wanted == "c":
            raise
        return "python", _load("python")


BACKEND, _impl = _select()


def get_backend(name: str | None = None):
    return _impl if name is None else _load(name)


@cache
def phase_increments(m: tuple[int, ...]) -> tuple[np.ndarray, int]:
    """Per-digit phase step ``add[k, c] = x_k(c) * L / m_k`` on the grid of ``m``."""
    rs = RadixSystem(m)
    d = len(m)
    L = rs.phase_modulus(d)
    X = rs.coords(d)
    add = np.empty((d, rs.M[d]), dtype=np.int64)
    for k, q in enumerate(m):
        add[k] = X[:, k] * (L // q)
    add.flags.writeable = False
    return add, L


def _initial_phase(m, add, L, n):
    digits = []
    r = n
    for q in m:
        r, dg = divmod(r, q)
        digits.append(dg)
    P = np.zeros(add.shape[1], dtype=np.int64)
    for k, dg in enumerate(digits):
        if dg:
            P += dg * add[k]
    return P % L, np.array(digits, dtype=np.int64)


def stream_norms(rs: RadixSystem, d: int, coeffs, n_start: int, n_stop: int,
                 state=None, target=None, backend=None) -> np.ndarray:
    """``||S_n - target||_1`` for ``n_start <= n <= n_stop`` on the depth-``d`` grid.

    ``S_n = state + sum_{n_start <= k < n} coeffs[k] psi_k``; ``state`` defaults to 0.
    Walsh grids with real data run in real arithmetic.
    """
    m = rs.m[:d]
    if not 0 <= n_start <= n_stop <= rs.M[d]:
        raise IndexOutOfRange(f"stream range {n_start}..{n_stop} outside 0..{rs.M[d]}")
    coeffs = np.asarray(coeffs)
    if len(coeffs) < n_stop:
        raise InvalidArgument(f"need {n_stop} coefficients, got {len(coeffs)}")
    add, L = phase_increments(m)
    real = (L == 2 and not np.iscomplexobj(coeffs)
            and not np.iscomplexobj(state) and not np.iscomplexobj(target))
    dtype = np.float64 if real else np.complex128
    coeffs = np.ascontiguousarray(coeffs, dtype=dtype)
    S = (np.zeros(rs.M[d], dtype=dtype) if state is None
         else np.array(state, dtype=dtype))
    T = None if target is None else np.ascontiguousarray(target, dtype=dtype)
    if len(S) != rs.M[d] or (T is not None and len(T) != rs.M[d]):
        raise InvalidArgument("state/target length must equal the grid size")
    P, digits = _initial_phase(m, add, L, n_start)
    impl = get_backend(backend)
    return impl.stream_norms(add, np.array(m, dtype=np.int64), L, P, digits, unit_roots(L),
                             coeffs, n_start, n_stop, S, T)


def fejer_sup(rs: RadixSystem, d: int, coeffs, n_max: int, backend=None) -> np.ndarray:
    """Pointwise ``max_{1 <= n <= n_max} |sigma_n|`` for the series with ``coeffs``."""
    m = rs.m[:d]
    if not 1 <= n_max <= rs.M[d]:
        raise IndexOutOfRange(f"n_max = {n_max} outside 1..{rs.M[d]}")
    add, L = phase_increments(m)
    P, digits = _initial_phase(m, add, L, 0)
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    impl = get_backend(backend)
    return impl.fejer_sup(add, np.array(m, dtype=np.int64), L, P, digits, unit_roots(L),
                          coeffs, n_max)


def fwht(values: np.ndarray, backend=None) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform of a 1-D real or complex vector (copy)."""
    v = np.asarray(values)
    n = v.shape[0]
    if n & (n - 1):
        raise InvalidArgument(f"length {n} is not a power of two")
    impl = get_backend(backend)
    if np.iscomplexobj(v):
        a = np.ascontiguousarray(np.stack([v.real, v.imag], axis=1), dtype=np.float64)
        impl.fwht(a)
        return a[:, 0] + 1j * a[:, 1]
    a = np.ascontiguousarray(v, dtype=np.float64).reshape(n, 1).copy()
    impl.fwht(a)
    return a[:, 0]
