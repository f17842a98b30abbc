"""Pure numpy implementation of the streaming kernels.

Signatures mirror ``_ckernels``; all argument preparation happens in
:mod:`vilenkin.kernels`.  Phases are integers modulo ``L``: cell ``c`` of
character ``psi_n`` has phase ``sum_k n_k * add[k, c] (mod L)``, and stepping
``n -> n+1`` adds ``add[k]`` once for every digit ``k`` that changes.
"""
import numpy as np


def _advance(P, add, radices, digits, L):
    k = 0
    d = len(radices)
    while k < d:
        P += add[k]
        digits[k] += 1
        if digits[k] < radices[k]:
            break
        digits[k] = 0
        k += 1
    np.remainder(P, L, out=P)


def stream_norms(add, radices, L, phase, digits, roots, coeffs, n_start, n_stop, state, target):
    """L1 norms of ``S_n - target`` for ``n_start <= n <= n_stop``.

    ``state`` holds ``S_{n_start}`` and is updated in place with
    ``S_{n+1} = S_n + coeffs[n] * psi_n``.
    """
    P = phase.copy()
    digits = list(digits)
    walsh = L == 2 and not np.iscomplexobj(state)
    sign = np.array([1.0, -1.0])
    out = np.empty(n_stop - n_start + 1)
    diff = state - target if target is not None else state
    out[0] = np.abs(diff).mean()
    for i, n in enumerate(range(n_start, n_stop), start=1):
        c = coeffs[n]
        if c != 0:
            psi = sign[P] if walsh else roots[P]
            state += c * psi
        if n + 1 < n_stop:
            _advance(P, add, radices, digits, L)
        diff = state - target if target is not None else state
        out[i] = np.abs(diff).mean()
    return out


def fejer_sup(add, radices, L, phase, digits, roots, coeffs, n_max):
    """Pointwise ``max_{1 <= n <= n_max} |sigma_n f|`` on the grid."""
    P = phase.copy()
    digits = list(digits)
    S = np.zeros(len(P), dtype=np.complex128)
    C = np.zeros_like(S)
    sup = np.zeros(len(P))
    for n in range(1, n_max + 1):
        C += S
        np.maximum(sup, np.abs(C) / n, out=sup)
        c = coeffs[n - 1]
        if c != 0:
            S += c * roots[P]
        if n < n_max:
            _advance(P, add, radices, digits, L)
    return sup


def fwht(a):
    """In-place unnormalized Walsh butterfly along axis 0 of a 2-D float array."""
    n = a.shape[0]
    h = 1
    while h < n:
        v = a.reshape(n // (2 * h), 2, h, a.shape[1])
        x = v[:, 0].copy()
        y = v[:, 1]
        v[:, 0] += y
        y *= -1
        y += x
        h *= 2
    return a
