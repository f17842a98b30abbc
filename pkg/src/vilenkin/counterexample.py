"""The divergent strong mean: ``f = sum_k lambda_k a_k`` with ``a_k = r_{alpha_k} D_{M_{alpha_k}}``.

The spectrum of ``f`` is ``lambda_k`` on each block ``[M_{alpha_k}, 2 M_{alpha_k})``
and zero elsewhere, so

* between blocks the partial sums are frozen, and
* inside block ``k``, ``S_{M+j} f = S_M f + lambda_k psi_M D_j`` (``M = M_{alpha_k}``).

``divergence_experiment`` evaluates the normalised strong sums
``Q(n) = (1/(n phi_n)) sum_{l=1}^n ||S_l f||_1`` at ``n_k = 2 M_{alpha_k}`` from
these two facts; ``naive=True`` streams every partial sum on the full grid instead.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .core import CylinderFunction, GroupPoint, RadixSystem, conditional_expectation, refine
from .errors import DepthExceeded, InvalidArgument, InvalidCheckpoint, InvalidConfig
from .hardy import Atom, AtomicDecomposition, Interval, h1_proxy_norm, h1_upper_bound, validate_atom
from .operators import dirichlet, partial_sum, partial_sum_norms
from .transform import character, forward, rademacher

PHI_KINDS = ("const", "sqrt_log", "log_over_loglog2", "table")


@dataclass(frozen=True)
class PhiFunction:
    """Nondecreasing weight ``phi: {2, 3, ...} -> [1, inf)``.

    ``const``: ``phi = value`` (default 1).
    ``sqrt_log``: ``max(1, sqrt(ln n))``.
    ``log_over_loglog2``: ``max(1, t / (ln t)^2)`` with ``t = max(ln n, e^2)``; the
    clamp keeps it nondecreasing.
    ``table``: step function through sorted ``(n, value)`` pairs.
    """

    kind: str = "sqrt_log"
    value: float = 1.0
    table: tuple[tuple[int, float], ...] = ()

    def __post_init__(self):
        if self.kind not in PHI_KINDS:
            raise InvalidConfig(f"unknown phi kind {self.kind!r}; choose from {PHI_KINDS}")
        if self.kind == "const" and self.value < 1:
            raise InvalidConfig("constant phi must be >= 1")
        if self.kind == "table":
            if not self.table:
                raise InvalidConfig("phi table is empty")
            tab = tuple(sorted((int(n), float(v)) for n, v in self.table))
            object.__setattr__(self, "table", tab)

    @classmethod
    def from_spec(cls, spec) -> PhiFunction:
        if isinstance(spec, PhiFunction):
            return spec
        if isinstance(spec, str):
            if spec in ("one", "1"):
                return cls("const", 1.0)
            return cls(spec)
        if isinstance(spec, dict):
            kind = spec.get("kind", "sqrt_log")
            table = spec.get("table", ())
            if isinstance(table, dict):
                table = table.items()
            return cls(kind, float(spec.get("value", 1.0)), tuple(tuple(p) for p in table))
        raise InvalidConfig(f"cannot build phi from {spec!r}")

    def __call__(self, n: int) -> float:
        if n < 2:
            raise InvalidArgument(f"phi is defined on n >= 2, got {n}")
        if self.kind == "const":
            return self.value
        if self.kind == "sqrt_log":
            return max(1.0, math.sqrt(math.log(n)))
        if self.kind == "log_over_loglog2":
            t = max(math.log(n), math.e ** 2)
            return max(1.0, t / math.log(t) ** 2)
        keys = [k for k, _ in self.table]
        i = int(np.searchsorted(keys, n, side="right")) - 1
        if i < 0:
            raise InvalidArgument(f"phi table starts at {keys[0]}, asked for {n}")
        return self.table[i][1]

    def describe(self) -> str:
        if self.kind == "const":
            return f"const({self.value:g})"
        return self.kind

    def check(self, ns: Sequence[int]) -> list[str]:
        """Problems with ``phi`` on the evaluated points ``ns`` (empty if none)."""
        problems = []
        ns = sorted(set(int(n) for n in ns))
        vals = [self(n) for n in ns]
        for n, v in zip(ns, vals):
            if v < 1:
                problems.append(f"phi({n}) = {v} < 1")
        for (n0, v0), (n1, v1) in zip(zip(ns, vals), zip(ns[1:], vals[1:])):
            if v1 < v0:
                problems.append(f"phi decreases between {n0} and {n1}")
        return problems

    def growth_ratio(self, ns: Sequence[int]) -> float:
        """``max ln(n)/phi(n)`` over ``ns``: the finite face of ``limsup ln n / phi_n = inf``."""
        return max(math.log(n) / self(n) for n in ns)


@dataclass(frozen=True)
class CounterexampleConfig:
    radix: RadixSystem
    alphas: tuple[int, ...]
    phi: PhiFunction = field(default_factory=PhiFunction)
    growth_threshold: float = 2.0

    @property
    def depth(self) -> int:
        return self.radix.depth

    def checkpoints(self) -> list[int]:
        return [2 * self.radix.M[a] for a in self.alphas]

    def validate(self) -> None:
        a = self.alphas
        if any(x < 1 for x in a):
            raise InvalidConfig(f"alphas must be >= 1, got {a}")
        if any(x1 <= x0 for x0, x1 in zip(a, a[1:])):
            raise InvalidConfig(f"alphas must be strictly increasing, got {a}")
        if a and a[-1] >= self.depth:
            raise InvalidConfig(f"alpha {a[-1]} needs depth > {a[-1]}, depth is {self.depth}")
        if not a:
            return
        problems = self.phi.check(self.checkpoints())
        if problems:
            raise InvalidConfig("; ".join(problems[:3]))
        ratio = self.phi.growth_ratio(self.checkpoints())
        if ratio <= self.growth_threshold:
            raise InvalidConfig(
                f"max ln(n)/phi(n) over checkpoints is {ratio:.4g}, "
                f"not above the threshold {self.growth_threshold}"
            )
        for x in a:
            lam = lambda_k(self.phi, self.radix, x)
            if not (math.isfinite(lam) and lam > 0):
                raise InvalidConfig(f"lambda for alpha {x} is {lam}")


def lambda_k(phi, rs: RadixSystem, alpha: int) -> float:
    """``sqrt(phi(2 M_alpha)) / sqrt(ln M_alpha)``."""
    if alpha < 1:
        raise InvalidCheckpoint("alpha must be >= 1 (ln M_0 = 0)")
    if alpha >= rs.depth:
        raise DepthExceeded(f"alpha {alpha} needs depth > {alpha}")
    M = rs.M[alpha]
    return math.sqrt(phi(2 * M)) / math.sqrt(math.log(M))


def atom_k_forms(rs: RadixSystem, alpha: int, depth: int | None = None):
    """Both expressions ``r_alpha D_{M_alpha}`` and ``D_{2M_alpha} - D_{M_alpha}``."""
    if not 0 <= alpha < rs.depth:
        raise DepthExceeded(f"alpha {alpha} needs depth > {alpha}")
    d = alpha + 1 if depth is None else depth
    if d <= alpha:
        raise DepthExceeded(f"atom at alpha {alpha} needs grid depth > {alpha}")
    M = rs.M[alpha]
    product = refine(rademacher(rs, alpha), d) * dirichlet(rs, M, d)
    difference = dirichlet(rs, 2 * M, d) - dirichlet(rs, M, d)
    return product, difference


def atom_k(rs: RadixSystem, alpha: int, depth: int | None = None) -> Atom:
    product, difference = atom_k_forms(rs, alpha, depth)
    residual = float(np.abs(product.values - difference.values).max())
    if residual > 1e-12:
        raise ArithmeticError(f"a_k forms disagree by {residual:.3e} at alpha {alpha}")
    I = Interval.cylinder(rs, GroupPoint((0,) * alpha), alpha)
    return Atom(rs, product, I)


def assemble_f(config: CounterexampleConfig) -> tuple[CylinderFunction, AtomicDecomposition]:
    config.validate()
    rs, N = config.radix, config.depth
    dec = AtomicDecomposition(rs, N)
    for a in config.alphas:
        dec.add(lambda_k(config.phi, rs, a), atom_k(rs, a))
    return dec.assemble(), dec


@dataclass(frozen=True)
class SpectrumCheck:
    ok: bool
    max_residual: float
    first_violation: int | None = None

    def __bool__(self):
        return self.ok


def expected_spectrum(config: CounterexampleConfig) -> np.ndarray:
    rs = config.radix
    c = np.zeros(rs.M[config.depth])
    for a in config.alphas:
        M = rs.M[a]
        c[M:2 * M] = lambda_k(config.phi, rs, a)
    return c


def spectrum_check(f: CylinderFunction, config: CounterexampleConfig, tol: float = 1e-10) -> SpectrumCheck:
    """Coefficients equal ``lambda_k`` on ``[M_{alpha_k}, 2 M_{alpha_k})`` and vanish elsewhere."""
    got = forward(refine(f, config.depth)).coeffs
    err = np.abs(got - expected_spectrum(config))
    bad = np.flatnonzero(err > tol)
    return SpectrumCheck(bad.size == 0, float(err.max()), int(bad[0]) if bad.size else None)


def decomposition_check(f: CylinderFunction, config: CounterexampleConfig, j: int, k: int) -> float:
    """``||S_j f - (S_M f + lambda_k psi_M D_{j-M})||_inf`` for ``M = M_{alpha_k}``, ``M <= j <= 2M``."""
    rs = config.radix
    if not 0 <= k < len(config.alphas):
        raise InvalidArgument(f"block index {k} outside 0..{len(config.alphas) - 1}")
    a = config.alphas[k]
    M = rs.M[a]
    if not M <= j <= 2 * M:
        raise InvalidArgument(f"j = {j} outside the block {M}..{2 * M}")
    d = f.depth
    lam = lambda_k(config.phi, rs, a)
    lhs = partial_sum(f, j)
    rhs = partial_sum(f, M) + lam * refine(character(rs, M), d) * dirichlet(rs, j - M, d)
    return float(np.abs(lhs.values - rhs.values).max())


@dataclass
class LedgerRow:
    k: int
    alpha: int
    M: int
    n: int
    lam: float
    phi_n: float
    Q: float
    in_block_mean: float
    bound: float
    envelope_slack: float


@dataclass
class DivergenceLedger:
    phi: str
    rows: list[LedgerRow]
    sum_lambda: float
    proxy_norm: float
    blocks: list[dict] = field(default_factory=list, repr=False)

    @property
    def Q(self) -> list[float]:
        return [r.Q for r in self.rows]

    @property
    def increasing(self) -> bool:
        q = self.Q
        return all(b > a for a, b in zip(q, q[1:]))

    def as_records(self) -> list[dict]:
        return [asdict(r) for r in self.rows]


def _block_norms(f: CylinderFunction, rs: RadixSystem, a: int, lam: float, backend=None):
    """In-block norms ``||S_{M+j} f||_1`` and ``L(j)`` for ``0 <= j <= M``, with ``||S_M f||_1``.

    Uses ``|psi_M| = 1``: ``||S_M f + lam psi_M D_j||_1 = ||conj(psi_M) S_M f + lam D_j||_1``
    on the depth-``(a+1)`` grid.
    """
    M = rs.M[a]
    head = refine(conditional_expectation(f, a), a + 1)
    base = np.conj(refine(rademacher(rs, a), a + 1).values) * head.values
    if not np.any(base.imag):
        base = base.real.copy()
    norms = kernels.stream_norms(rs, a + 1, np.full(M, lam), 0, M, state=base, backend=backend)
    leb = kernels.stream_norms(rs, a, np.ones(M), 0, M, backend=backend)
    return norms, leb, float(np.abs(head.values).mean())


def divergence_experiment(config: CounterexampleConfig, naive: bool = False,
                          backend=None) -> DivergenceLedger:
    f, dec = assemble_f(config)
    rs, phi = config.radix, config.phi
    rows, blocks = [], []
    if naive and config.alphas:
        n_last = 2 * rs.M[config.alphas[-1]]
        all_norms = partial_sum_norms(f, n_last, backend=backend)
    total = 0.0
    prev_end = 0
    frozen = 0.0
    for k, a in enumerate(config.alphas):
        M = rs.M[a]
        lam = lambda_k(phi, rs, a)
        n = 2 * M
        norms, leb, head_norm = _block_norms(f, rs, a, lam, backend=backend)
        if naive:
            total = float(all_norms[1:n + 1].sum())
            norms_used = all_norms[M:n + 1]
        else:
            # l in (prev_end, M]: S_l f = S_{prev_end} f
            total += (M - prev_end) * frozen
            total += float(norms[1:].sum())
            norms_used = norms
        phi_n = phi(n)
        slack = float(np.max(np.abs(norms_used - lam * leb) - head_norm))
        rows.append(LedgerRow(
            k=k + 1, alpha=a, M=M, n=n, lam=lam, phi_n=phi_n,
            Q=total / (n * phi_n),
            in_block_mean=float(norms_used.sum()) / (n * phi_n),
            bound=math.sqrt(math.log(M)) / math.sqrt(phi_n),
            envelope_slack=slack,
        ))
        blocks.append({"norms": norms_used, "lebesgue": leb, "head_norm": head_norm})
        frozen = float(norms[-1])
        prev_end = n
    return DivergenceLedger(phi.describe(), rows, h1_upper_bound(dec), h1_proxy_norm(f), blocks)


@dataclass
class PartACheck:
    n_list: list[int]
    ratios: list[list[float]]

    @property
    def max_ratio(self) -> float:
        return max((max(r) for r in self.ratios if r), default=0.0)

    def spread(self, i: int) -> float:
        r = [x for x in self.ratios[i] if x > 0]
        return max(r) / min(r) if r else 1.0


def part_a_check(pairs: Sequence[tuple[CylinderFunction, AtomicDecomposition]],
                 n_list: Sequence[int], backend=None) -> PartACheck:
    """``R(n) = [(1/(n ln n)) sum_{k=1}^n ||S_k f||_1] / sum|lambda|`` for each ``(f, decomposition)``."""
    n_list = [int(n) for n in n_list]
    if any(n < 2 for n in n_list):
        raise InvalidArgument("part (a) ratios need n >= 2")
    out = []
    for f, dec in pairs:
        upper = h1_upper_bound(dec)
        norms = partial_sum_norms(f, max(n_list), backend=backend)
        csum = np.cumsum(norms)
        row = []
        for n in n_list:
            t_log = float(csum[n] - csum[0]) / (n * math.log(n))
            row.append(t_log / upper if upper > 0 else 0.0)
        out.append(row)
    return PartACheck(n_list, out)


def validate_atoms(config: CounterexampleConfig) -> list:
    return [validate_atom(atom_k(config.radix, a)) for a in config.alphas]
