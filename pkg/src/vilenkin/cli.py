"""Command-line drivers: ``vilenkin lebesgue|diverge|strong|validate``.

Tables go to ``--out`` (or stdout) as CSV or JSON.  Exit codes: 0 success,
2 configuration error, 3 identity check failed; errors are reported as a JSON
object on stderr.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import click
import numpy as np

from . import __version__, kernels
from .core import CylinderFunction, RadixSystem, refine
from .counterexample import (
    CounterexampleConfig,
    PhiFunction,
    assemble_f,
    divergence_experiment,
    part_a_check,
)
from .errors import InvalidConfig, VilenkinError
from .hardy import AtomicDecomposition, h1_upper_bound, random_atom, trivial_decomposition
from .identities import CorruptedKernelSource, KernelSource, counterexample_identities, kernel_identities
from .operators import lebesgue_scan, partial_sum_norms
from .transform import Spectrum, character, inverse

MAX_DEPTH = 24
MAX_CELLS = 2 ** 24
VALIDATE_DEPTH = 10  # the shift check costs O(M_d^2)
EXIT_CONFIG = 2
EXIT_VALIDATION = 3

DEFAULTS = {
    "radix": {"const": 2, "depth": 14},
    "format": "csv",
    "lebesgue": {"grid": "auto"},
    "diverge": {"alphas": [3, 7, 12], "phi": "sqrt_log", "growth_threshold": 2.0},
    "strong": {"function": {"kind": "character", "n": 5}},
    "validate": {},
}


class ValidationFailed(Exception):
    def __init__(self, failed):
        super().__init__(", ".join(failed))
        self.failed = failed


@dataclass
class ExperimentConfig:
    radix: RadixSystem
    raw: dict
    fmt: str = "csv"
    out: str | None = None

    @property
    def depth(self) -> int:
        return self.radix.depth

    def block(self, name: str) -> dict:
        return dict(self.raw.get(name) or {})

    def digest(self) -> str:
        blob = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _merge(base: dict, extra: dict) -> dict:
    out = dict(base)
    for k, v in extra.items():
        out[k] = _merge(out[k], v) if isinstance(v, dict) and isinstance(out.get(k), dict) else v
    return out


def build_radix(spec: dict, depth: int | None) -> RadixSystem:
    if "m" in spec:
        m = [int(q) for q in spec["m"]]
        if depth is not None:
            if depth > len(m):
                raise InvalidConfig(f"depth {depth} exceeds the {len(m)} listed radices")
            m = m[:depth]
    elif "const" in spec:
        n = depth if depth is not None else spec.get("depth")
        if n is None:
            raise InvalidConfig("constant radix spec needs a depth")
        m = [int(spec["const"])] * int(n)
    else:
        raise InvalidConfig("radix spec needs 'm' or 'const'")
    if not 1 <= len(m) <= MAX_DEPTH:
        raise InvalidConfig(f"depth must be in 1..{MAX_DEPTH}, got {len(m)}")
    if any(not 2 <= q <= 16 for q in m):
        raise InvalidConfig(f"radices must lie in [2, 16], got {m}")
    rs = RadixSystem(tuple(m))
    if rs.M[-1] > MAX_CELLS:
        raise InvalidConfig(f"M_N = {rs.M[-1]} exceeds the memory guard {MAX_CELLS}")
    return rs


def load_config(path: str | None, overrides: dict) -> ExperimentConfig:
    raw = json.loads(json.dumps(DEFAULTS))
    if path:
        try:
            user = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidConfig(f"cannot read config {path}: {exc}") from exc
        if not isinstance(user, dict):
            raise InvalidConfig("config must be a JSON object")
        if "m" in user.get("radix", {}) or "const" in user.get("radix", {}):
            raw["radix"] = {}
        raw = _merge(raw, user)
    raw = _merge(raw, {k: v for k, v in overrides.items() if v is not None})
    depth = raw.get("depth")
    rs = build_radix(raw["radix"], None if depth is None else int(depth))
    fmt = raw.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise InvalidConfig(f"format must be csv or json, got {fmt!r}")
    return ExperimentConfig(rs, raw, fmt, raw.get("output"))


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[list]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for r in self.rows:
            if len(r) != len(self.columns):
                raise ValueError("ragged result table")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_fmt(v) for v in r])
        return buf.getvalue()

    def to_json(self) -> str:
        rows = [[_json_value(v) for v in r] for r in self.rows]
        return json.dumps({"meta": self.meta, "columns": self.columns, "rows": rows}, indent=2) + "\n"

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".12g")
    return str(v)


def _json_value(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def _meta(cfg: ExperimentConfig, command: str, started: float, **extra) -> dict:
    return {"command": command, "config_hash": cfg.digest(), "tool_version": __version__,
            "backend": kernels.BACKEND, "radix": list(cfg.radix.m), "depth": cfg.depth,
            "wall_clock_s": round(time.perf_counter() - started, 6), **extra}


def _grid(spec, n_max: int) -> list[int]:
    if isinstance(spec, list):
        ns = sorted({int(n) for n in spec})
        if ns and (ns[0] < 1 or ns[-1] > n_max):
            raise InvalidConfig(f"lebesgue grid must lie in 1..{n_max}")
        return ns
    if spec == "all" or (spec == "auto" and n_max <= 4096):
        return list(range(1, n_max + 1))
    if spec in ("auto", "pow2"):
        ns = {1, 2, 3}
        p = 2
        while p <= n_max:
            ns.update({p - 1, p, p + 1})
            p *= 2
        return sorted(n for n in ns if 1 <= n <= n_max)
    raise InvalidConfig(f"unknown lebesgue grid {spec!r}")


def cmd_lebesgue(cfg: ExperimentConfig) -> ResultTable:
    t0 = time.perf_counter()
    blk = cfg.block("lebesgue")
    rs = cfg.radix
    n_max = int(blk.get("n_max", rs.M[-1]))
    if not 1 <= n_max <= rs.M[-1]:
        raise InvalidConfig(f"n_max = {n_max} outside 1..{rs.M[-1]}")
    scan = lebesgue_scan(rs, cfg.depth, n_max)
    rows = []
    for n in _grid(blk.get("grid", "auto"), n_max):
        ln = math.log(n) if n >= 2 else None
        rows.append([n, float(scan.L[n]), float(scan.A[n]),
                     None if ln is None else float(scan.A[n]) / ln,
                     None if ln is None else float(scan.L[n]) / ln])
    n_range = np.arange(2, n_max + 1)
    extra = {}
    if n_max >= 2:
        extra["max_L_over_log"] = float(np.max(scan.L[2:] / np.log(n_range)))
    return ResultTable(["n", "L_n", "avg_A_n", "A_n_over_log_n", "L_n_over_log_n"], rows,
                       _meta(cfg, "lebesgue", t0, n_max=n_max, **extra))


def counterexample_config(cfg: ExperimentConfig, fit_depth: bool = False) -> CounterexampleConfig:
    """Counterexample settings from the ``diverge`` block.

    With ``fit_depth`` the checkpoints that do not fit below the depth are dropped.
    """
    blk = cfg.block("diverge")
    alphas = blk.get("alphas", [])
    if isinstance(alphas, str):
        try:
            alphas = [int(a) for a in alphas.split(",") if a.strip()]
        except ValueError as exc:
            raise InvalidConfig(f"alphas must be integers: {exc}") from exc
    if fit_depth:
        alphas = [a for a in alphas if int(a) < cfg.depth]
    cx = CounterexampleConfig(cfg.radix, tuple(int(a) for a in alphas),
                              PhiFunction.from_spec(blk.get("phi", "sqrt_log")),
                              float(blk.get("growth_threshold", 2.0)))
    cx.validate()
    return cx


def cmd_diverge(cfg: ExperimentConfig) -> ResultTable:
    t0 = time.perf_counter()
    cx = counterexample_config(cfg)
    ledger = divergence_experiment(cx)
    rows = []
    for r in ledger.rows:
        rows.append([r.k, r.alpha, r.M, r.n, r.phi_n, r.lam, r.Q * r.n * r.phi_n, r.Q,
                     r.in_block_mean, r.bound, ledger.sum_lambda, ledger.proxy_norm,
                     r.envelope_slack])
    extra = {"phi": ledger.phi, "Q_increasing": ledger.increasing if len(rows) > 1 else None}
    part_a_ns = [n for n in (2 ** 6, 2 ** 8, 2 ** 10) if n <= cfg.radix.M[-1]]
    if cx.alphas and part_a_ns:
        f, dec = assemble_f(cx)
        extra["part_a_n"] = part_a_ns
        extra["part_a_R"] = part_a_check([(f, dec)], part_a_ns).ratios[0]
    columns = ["k", "alpha_k", "M_alpha_k", "n_k", "phi_n_k", "lambda_k", "sum_norms", "Q",
               "in_block_mean", "B_k", "sum_lambda", "proxy_norm", "envelope_slack"]
    return ResultTable(columns, rows, _meta(cfg, "diverge", t0, **extra))


def strong_function(cfg: ExperimentConfig) -> tuple[CylinderFunction, AtomicDecomposition]:
    spec = cfg.block("strong").get("function", {"kind": "character", "n": 5})
    rs, N = cfg.radix, cfg.depth
    kind = spec.get("kind")
    if kind == "zero":
        f = CylinderFunction.zeros(rs, N)
    elif kind == "constant":
        f = CylinderFunction.constant(rs, complex(spec.get("value", 1.0)), N)
    elif kind == "character":
        n = int(spec.get("n", 5))
        if not 0 <= n < rs.M[-1]:
            raise InvalidConfig(f"character index {n} outside 0..{rs.M[-1] - 1}")
        f = refine(character(rs, n), N)
    elif kind == "polynomial":
        c = np.zeros(rs.M[-1], dtype=np.complex128)
        for idx, val in spec.get("coeffs", []):
            if not 0 <= int(idx) < rs.M[-1]:
                raise InvalidConfig(f"coefficient index {idx} out of range")
            c[int(idx)] = complex(val)
        f = inverse(Spectrum(rs, N, c))
    elif kind == "counterexample":
        return assemble_f(counterexample_config(cfg))
    elif kind == "random_atoms":
        rng = np.random.default_rng(int(spec.get("seed", 0)))
        dec = AtomicDecomposition(rs, N)
        for _ in range(int(spec.get("count", 4))):
            dec.add(float(rng.uniform(0.1, 1.0)), random_atom(rs, N, rng))
        return dec.assemble(), dec
    else:
        raise InvalidConfig(f"unknown strong function kind {kind!r}")
    return f, trivial_decomposition(f)


def _strong_grid(spec, M: int) -> list[int]:
    if spec is None:
        ns = {2, 6}
        p = 4
        while p <= 4 * M:
            ns.add(p)
            p *= 2
        return sorted(ns)
    ns = sorted({int(n) for n in spec})
    if ns and ns[0] < 2:
        raise InvalidConfig("strong n grid must start at n >= 2")
    return ns


def cmd_strong(cfg: ExperimentConfig) -> ResultTable:
    t0 = time.perf_counter()
    f, dec = strong_function(cfg)
    ns = _strong_grid(cfg.block("strong").get("n_grid"), cfg.radix.M[-1])
    upper = h1_upper_bound(dec)
    rows = []
    if ns:
        top = ns[-1]
        norms = np.cumsum(partial_sum_norms(f, top)[1:])
        errs = partial_sum_norms(f, top, subtract_f=True)[1:]
        gat = np.cumsum(errs / np.arange(1, top + 1))
        for n in ns:
            s, g = float(norms[n - 1]), float(gat[n - 1])
            ln = math.log(n)
            t_log = s / (n * ln)
            rows.append([n, s, g, g / ln, t_log, s / n, upper, t_log / upper if upper else 0.0])
    columns = ["n", "sum_norms", "gat_sum", "G", "T_log", "T_unif", "h1_upper", "R"]
    return ResultTable(columns, rows, _meta(cfg, "strong", t0))


def cmd_validate(cfg: ExperimentConfig, corrupt: bool = False) -> ResultTable:
    t0 = time.perf_counter()
    blk = cfg.block("validate")
    d = int(blk.get("depth", min(cfg.depth, VALIDATE_DEPTH)))
    cfg.radix.check_depth(d)
    source = CorruptedKernelSource() if corrupt else KernelSource()
    results = kernel_identities(cfg.radix, d, source)
    cx, skipped = None, None
    try:
        cx = counterexample_config(cfg, fit_depth=True)
    except InvalidConfig as exc:
        skipped = str(exc)
    if cx is not None and cx.alphas:
        results += counterexample_identities(cx)
    rows = [[r.name, r.cases, r.max_residual, r.tolerance, r.ok] for r in results]
    failed = [r.name for r in results if not r.ok]
    return ResultTable(["identity", "cases", "max_residual", "tolerance", "ok"], rows,
                       _meta(cfg, "validate", t0, failed=failed, corrupted_kernel=corrupt,
                             kernel_depth=d, alphas=list(cx.alphas) if cx else [],
                             counterexample_skipped=skipped))


def emit(table: ResultTable, cfg: ExperimentConfig) -> None:
    text = table.to_json() if cfg.fmt == "json" else table.to_csv()
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _error(kind: str, message: str, **extra) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message, **extra}) + "\n")


def _common(fn):
    fn = click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
                      help="JSON experiment config.")(fn)
    fn = click.option("--out", default=None, help="Output path (default: stdout).")(fn)
    fn = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None)(fn)
    fn = click.option("--depth", type=int, default=None, help="Override the truncation depth N.")(fn)
    return fn


def _load(config_path, out, fmt, depth, **blocks) -> ExperimentConfig:
    overrides = {"output": out, "format": fmt, "depth": depth}
    for name, values in blocks.items():
        values = {k: v for k, v in values.items() if v is not None}
        if values:
            overrides[name] = values
    return load_config(config_path, overrides)


@click.group()
@click.version_option(__version__)
def cli():
    """Vilenkin-Fourier experiments on truncated bounded Vilenkin groups."""


@cli.command()
@_common
@click.option("--nmax", type=int, default=None, help="Largest n in the Lebesgue scan.")
def lebesgue(config_path, out, fmt, depth, nmax):
    """Lebesgue constants L_n and their averaged ratios."""
    cfg = _load(config_path, out, fmt, depth, lebesgue={"n_max": nmax})
    emit(cmd_lebesgue(cfg), cfg)


@cli.command()
@_common
@click.option("--alphas", default=None, help="Comma-separated checkpoints, e.g. 3,7,12.")
@click.option("--phi", default=None, help="const | one | sqrt_log | log_over_loglog2")
def diverge(config_path, out, fmt, depth, alphas, phi):
    """Divergence ledger of the counterexample function."""
    cfg = _load(config_path, out, fmt, depth, diverge={"alphas": alphas, "phi": phi})
    emit(cmd_diverge(cfg), cfg)


@cli.command()
@_common
def strong(config_path, out, fmt, depth):
    """Strong means (logarithmic, uniform and Gat) of a configured function."""
    cfg = _load(config_path, out, fmt, depth)
    emit(cmd_strong(cfg), cfg)


@cli.command()
@_common
@click.option("--alphas", default=None, help="Counterexample checkpoints to validate as well.")
@click.option("--corrupt-kernel", is_flag=True, help="Negative control: perturb every kernel.")
def validate(config_path, out, fmt, depth, alphas, corrupt_kernel):
    """Exact identity suite; exits 3 when any residual exceeds its tolerance."""
    cfg = _load(config_path, out, fmt, depth, diverge={"alphas": alphas})
    table = cmd_validate(cfg, corrupt=corrupt_kernel)
    emit(table, cfg)
    if table.meta["failed"]:
        raise ValidationFailed(table.meta["failed"])


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="vilenkin", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        _error("usage", exc.format_message())
        return EXIT_CONFIG
    except (VilenkinError, ValueError) as exc:
        _error("config", str(exc), type=type(exc).__name__)
        return EXIT_CONFIG
    except ValidationFailed as exc:
        _error("validation", f"identity check failed: {exc}", failed=exc.failed)
        return EXIT_VALIDATION
    return 0


if __name__ == "__main__":
    sys.exit(main())
