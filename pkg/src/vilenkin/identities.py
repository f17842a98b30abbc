"""Exact kernel identities and the counterexample structure checks, as residual reports.

Kernel identities are evaluated on the coarsest grid that carries every term;
refinement only replicates cell values, so residuals are unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import GroupPoint, RadixSystem, cylinder_mask, unit_roots
from .operators import dirichlet
from .transform import character_phases, character_values

KERNEL_TOL = 1e-12
STRUCTURE_TOL = 1e-10


class KernelSource:
    """Produces Dirichlet kernels two ways: synthesis from the spectrum, and a running sum."""

    def kernel(self, rs: RadixSystem, n: int, d: int) -> np.ndarray:
        return self.perturb(dirichlet(rs, n, d).values)

    def stream(self, rs: RadixSystem, d: int, stop: int):
        """Yield ``D_0, D_1, ..., D_stop`` on the depth-``d`` grid."""
        # extended-precision accumulator keeps the running-sum error far below KERNEL_TOL
        D = np.zeros(rs.M[d], dtype=np.clongdouble)
        yield self.perturb(D.astype(np.complex128))
        for k in range(stop):
            D += character_values(rs, k, d)
            yield self.perturb(D.astype(np.complex128))

    def perturb(self, values: np.ndarray) -> np.ndarray:
        return values


class CorruptedKernelSource(KernelSource):
    """Negative control: every kernel is off by ``delta`` on cell 0."""

    def __init__(self, delta: float = 1e-6):
        self.delta = delta

    def perturb(self, values):
        values = values.copy()
        values[..., 0] += self.delta
        return values


@dataclass
class IdentityResult:
    name: str
    cases: int
    max_residual: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.max_residual <= self.tolerance


def check_cylinder_kernel(rs: RadixSystem, d: int, source: KernelSource | None = None) -> IdentityResult:
    """``D_{M_n} = M_n`` on ``I_n`` and 0 off it, for ``0 <= n <= d``."""
    source = source or KernelSource()
    worst = 0.0
    for n in range(d + 1):
        expected = rs.M[n] * cylinder_mask(rs, GroupPoint(()), n, d)
        worst = max(worst, float(np.abs(source.kernel(rs, rs.M[n], d) - expected).max()))
    return IdentityResult("cylinder_kernel", d + 1, worst, KERNEL_TOL)


def check_digit_multiple(rs: RadixSystem, d: int, source: KernelSource | None = None) -> IdentityResult:
    """``D_{s M_n} = D_{M_n} sum_{k<s} r_n^k`` for ``n < d``, ``1 <= s < m_n``."""
    source = source or KernelSource()
    worst, cases = 0.0, 0
    for n in range(d):
        g = n + 1
        phase, L = character_phases(rs, rs.M[n], g)
        roots = unit_roots(L)
        base = source.kernel(rs, rs.M[n], g)
        geom = np.zeros(rs.M[g], dtype=np.complex128)
        for s in range(1, rs.m[n]):
            geom = geom + roots[((s - 1) * phase) % L]
            lhs = source.kernel(rs, s * rs.M[n], g)
            worst = max(worst, float(np.abs(lhs - base * geom).max()))
            cases += 1
    return IdentityResult("digit_multiple", cases, worst, KERNEL_TOL)


def check_shift(rs: RadixSystem, d: int, source: KernelSource | None = None) -> IdentityResult:
    """``D_{j + M_n} = D_{M_n} + psi_{M_n} D_j`` for ``n < d``, ``0 <= j <= M_n``."""
    source = source or KernelSource()
    worst, cases = 0.0, 0
    for n in range(d):
        g = n + 1
        M = rs.M[n]
        psi = character_values(rs, M, g)
        kernels = list(source.stream(rs, g, 2 * M))
        for j in range(M + 1):
            worst = max(worst, float(np.abs(kernels[j + M] - (kernels[M] + psi * kernels[j])).max()))
            cases += 1
    return IdentityResult("shift_identity", cases, worst, KERNEL_TOL)


def kernel_identities(rs: RadixSystem, d: int, source: KernelSource | None = None) -> list[IdentityResult]:
    return [check_cylinder_kernel(rs, d, source), check_digit_multiple(rs, d, source),
            check_shift(rs, d, source)]


def counterexample_identities(config, max_exhaustive: int = 64, samples: int = 16,
                              seed: int = 0) -> list[IdentityResult]:
    """Atom forms, block spectrum and in-block partial-sum split for a counterexample config."""
    from .counterexample import assemble_f, atom_k, atom_k_forms, decomposition_check, spectrum_check
    from .hardy import validate_atom

    rs = config.radix
    worst = 0.0
    for a in config.alphas:
        p, q = atom_k_forms(rs, a)
        worst = max(worst, float(np.abs(p.values - q.values).max()))
    results = [IdentityResult("atom_forms", len(config.alphas), worst, KERNEL_TOL)]
    bad_atoms = sum(not validate_atom(atom_k(rs, a)) for a in config.alphas)
    results.append(IdentityResult("atom_certificates", len(config.alphas), float(bad_atoms), 0.0))
    f, _ = assemble_f(config)
    sc = spectrum_check(f, config)
    results.append(IdentityResult("block_spectrum", rs.M[config.depth], sc.max_residual,
                                  STRUCTURE_TOL))
    rng = np.random.default_rng(seed)
    worst, cases = 0.0, 0
    for k, a in enumerate(config.alphas):
        M = rs.M[a]
        js = range(M, 2 * M + 1) if M <= max_exhaustive else sorted(
            {M, 2 * M, *rng.integers(M, 2 * M + 1, size=samples).tolist()})
        for j in js:
            worst = max(worst, decomposition_check(f, config, int(j), k))
            cases += 1
    results.append(IdentityResult("block_split", cases, worst, STRUCTURE_TOL))
    return results
