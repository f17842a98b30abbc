"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

The lines are collected in ``RESULTS`` and printed in the terminal summary
(see ``conftest.py``); run ``pytest tests/test_acceptance.py -v`` to see them.
"""
import json
import math
import time

import numpy as np
import pytest

from vilenkin.cli import main
from vilenkin.core import CylinderFunction, RadixSystem, norm
from vilenkin.counterexample import (
    CounterexampleConfig, PhiFunction, assemble_f, atom_k, decomposition_check,
    divergence_experiment, part_a_check, spectrum_check,
)
from vilenkin.hardy import AtomicDecomposition, random_atom, validate_atom
from vilenkin.identities import kernel_identities
from vilenkin.operators import dirichlet, lebesgue_scan, strong_mean_gat
from vilenkin.transform import Spectrum, character_values, forward, forward_naive, inverse

RESULTS: list[str] = []
DEFAULT = CounterexampleConfig(RadixSystem.constant(2, 14), (3, 7, 12), PhiFunction("sqrt_log"))


def report(number: int, title: str, ok: bool, detail: str) -> None:
    RESULTS.append(f"{'PASS' if ok else 'FAIL'} criterion {number} ({title}): {detail}")
    assert ok, detail


def test_criterion_1_exact_identities():
    t0 = time.perf_counter()
    worst = {}
    for rs in (RadixSystem.constant(2, 10), RadixSystem((2, 3, 4, 5, 2, 3))):
        for r in kernel_identities(rs, rs.depth):
            worst[r.name] = max(worst.get(r.name, 0.0), r.max_residual)
    elapsed = time.perf_counter() - t0
    ok = all(v <= 1e-12 for v in worst.values()) and elapsed < 30
    detail = ", ".join(f"{k} {v:.2e}" for k, v in worst.items()) + f"; {elapsed:.2f}s"
    report(1, "kernel identities", ok, detail)


def test_criterion_2_transform():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    roundtrip = plancherel = 0.0
    for m in [(2,) * 16, (16,) * 4, (2, 3, 4, 5, 2, 3, 4, 5, 2), (7, 11, 13, 5), (3,) * 10]:
        rs = RadixSystem(m)
        n = rs.M[-1]
        assert n <= 2 ** 16
        f = CylinderFunction(rs, rs.depth, rng.standard_normal(n) + 1j * rng.standard_normal(n))
        s = forward(f)
        roundtrip = max(roundtrip, float(np.abs(inverse(s).values - f.values).max()))
        e = norm(f, 2) ** 2
        plancherel = max(plancherel, abs(e - float(np.sum(np.abs(s.coeffs) ** 2))) / e)
    naive = 0.0
    for m in [(2,) * 9, (8, 8, 8), (2, 3, 4, 5), (16, 16, 2), (3, 3, 3, 3, 3), (7, 11)]:
        rs = RadixSystem(m)
        assert rs.M[-1] <= 512
        f = CylinderFunction(rs, rs.depth, rng.standard_normal(rs.M[-1]) + 1j * rng.standard_normal(rs.M[-1]))
        naive = max(naive, float(np.abs(forward(f).coeffs - forward_naive(f).coeffs).max()))
    elapsed = time.perf_counter() - t0
    ok = roundtrip <= 1e-9 and plancherel <= 1e-9 and naive <= 1e-10 and elapsed < 60
    report(2, "transform", ok, f"roundtrip {roundtrip:.2e}, Plancherel {plancherel:.2e}, "
                               f"fast-vs-naive {naive:.2e}; {elapsed:.2f}s")


def test_criterion_3_lebesgue_constants():
    walsh = lebesgue_scan(RadixSystem.constant(2, 14), 14, 2 ** 14)
    walsh_exact = all(walsh.L[2 ** j] == 1 for j in range(15))
    dyadic_err = 0.0
    for rs in (RadixSystem((2, 3, 4, 5, 2, 3)), RadixSystem((16, 3, 5, 7))):
        scan = lebesgue_scan(rs, rs.depth, rs.M[-1])
        dyadic_err = max(dyadic_err, max(abs(scan.L[Mj] - 1) for Mj in rs.M))
    rs = RadixSystem.constant(2, 2)
    brute = np.abs(sum(character_values(rs, k, 2) for k in range(3))).mean()
    L3 = lebesgue_scan(rs, 2, 3).L[3]
    per_index = 0.0
    for rs in (RadixSystem.constant(2, 9), RadixSystem((2, 3, 4, 5, 2))):
        n_max = min(512, rs.M[-1])
        scan = lebesgue_scan(rs, rs.depth, n_max)
        ref = [norm(dirichlet(rs, n, rs.depth), 1) for n in range(n_max + 1)]
        per_index = max(per_index, float(np.abs(scan.L - ref).max()))
    ok = walsh_exact and dyadic_err <= 1e-12 and L3 == 1.5 == brute and per_index <= 1e-10
    report(3, "Lebesgue constants", ok, f"L_Mj == 1 bitwise on Walsh: {walsh_exact}, "
                                        f"mixed max |L_Mj - 1| = {dyadic_err:.1e}, L_3 = {L3} "
                                        f"(oracle {brute}), scan vs per-index {per_index:.2e}")


def test_criterion_4_growth_surrogates():
    t0 = time.perf_counter()
    rs = RadixSystem.constant(2, 14)
    scan = lebesgue_scan(rs, 14, 2 ** 14)
    ratios = [float(scan.A[2 ** j] / math.log(2 ** j)) for j in range(4, 15)]
    bracket = max(ratios) / min(ratios)
    ln = np.log(np.arange(2, 2 ** 14 + 1))
    ratio_L = scan.L[2:] / ln
    c10, c14 = float(ratio_L[: 2 ** 10 - 1].max()), float(ratio_L.max())
    growth = c14 / c10 - 1
    elapsed = time.perf_counter() - t0
    ok = bracket < 2 and growth < 0.05 and elapsed < 180
    report(4, "Lebesgue growth surrogates", ok,
           f"A_n/ln n in [{min(ratios):.4f}, {max(ratios):.4f}] (max/min {bracket:.3f}); "
           f"max L_n/ln n {c10:.4f} -> {c14:.4f} ({100 * growth:.2f}%); {elapsed:.2f}s")


def _structure(cfg, rng):
    f, _ = assemble_f(cfg)
    sc = spectrum_check(f, cfg)
    worst = 0.0
    for k, a in enumerate(cfg.alphas):
        M = cfg.radix.M[a]
        js = range(M, 2 * M + 1) if M <= 64 else sorted({M, 2 * M, *rng.integers(M, 2 * M + 1, 24).tolist()})
        worst = max(worst, max(decomposition_check(f, cfg, int(j), k) for j in js))
    atoms = all(validate_atom(atom_k(cfg.radix, a)) for a in cfg.alphas)
    return sc.max_residual, worst, atoms


def test_criterion_5_counterexample_structure():
    rng = np.random.default_rng(5)
    mixed = CounterexampleConfig(RadixSystem((2, 3, 4, 5, 2, 3)), (1, 2, 4), PhiFunction("const"),
                                 growth_threshold=1.0)
    spec = split = 0.0
    atoms = True
    for cfg in (DEFAULT, mixed):
        s, d, a = _structure(cfg, rng)
        spec, split, atoms = max(spec, s), max(split, d), atoms and a
    ok = spec <= 1e-10 and split <= 1e-10 and atoms
    report(5, "counterexample structure", ok,
           f"spectrum residual {spec:.2e}, block split residual {split:.2e}, atoms valid: {atoms}")


def test_criterion_6_divergence():
    t0 = time.perf_counter()
    main_ledger = divergence_experiment(DEFAULT)
    const_ledger = divergence_experiment(CounterexampleConfig(DEFAULT.radix, DEFAULT.alphas, PhiFunction("const")))
    slack = max(r.envelope_slack for led in (main_ledger, const_ledger) for r in led.rows)
    elapsed = time.perf_counter() - t0
    ok = main_ledger.increasing and const_ledger.increasing and slack <= 1e-12 and elapsed < 300
    fmt = lambda q: " < ".join(f"{x:.5f}" for x in q)  # noqa: E731
    report(6, "divergence", ok, f"Q sqrt_log {fmt(main_ledger.Q)}; Q const {fmt(const_ledger.Q)}; "
                                f"envelope slack {slack:.1e}; {elapsed:.2f}s")


def test_criterion_7_bounded_log_means():
    pairs = [assemble_f(DEFAULT)]
    rs = RadixSystem.constant(2, 10)
    for seed in range(4):
        rng = np.random.default_rng(seed)
        dec = AtomicDecomposition(rs, 10)
        for _ in range(5):
            dec.add(float(rng.uniform(0.1, 1)), random_atom(rs, 6, rng))
        pairs.append((dec.assemble(), dec))
    res = part_a_check(pairs, [2 ** 6, 2 ** 8, 2 ** 10])
    spreads = [res.spread(i) for i in range(len(pairs))]
    q = divergence_experiment(DEFAULT).Q
    ok = max(spreads) < 2 and q[-1] > q[0]
    report(7, "bounded log means", ok,
           f"R spread max/min per function {', '.join(f'{s:.3f}' for s in spreads)}; "
           f"counterexample R {', '.join(f'{r:.4f}' for r in res.ratios[0])} "
           f"vs growing Q {q[0]:.4f} -> {q[-1]:.4f}")


def test_criterion_8_gat_means():
    rs = RadixSystem.constant(2, 4)
    psi5 = CylinderFunction(rs, 4, character_values(rs, 5, 4))
    g6 = strong_mean_gat(psi5, 6)
    closed = sum(1 / k for k in range(1, 6)) / math.log(6)
    decreasing = True
    rng = np.random.default_rng(8)
    for m in [(2,) * 6, (2, 3, 4), (5, 3)]:
        prs = RadixSystem(m)
        c = np.zeros(prs.M[-1], dtype=complex)
        c[rng.integers(0, prs.M[-1], 4)] = rng.standard_normal(4)
        f = inverse(Spectrum(prs, prs.depth, c))
        n = prs.M[-1]
        while n <= 2 ** 14:
            decreasing &= strong_mean_gat(f, 4 * n) < strong_mean_gat(f, n)
            n *= 4
    ok = abs(g6 - closed) <= 1e-6 and 0 <= g6 - 1.2743 < 1e-4 and decreasing
    report(8, "Gat strong means", ok, f"G(6) = {g6:.7f} (closed form {closed:.7f}); "
                                      f"G(4n) < G(n) beyond M_d: {decreasing}")


def test_criterion_9_negative_control(capsys):
    code = main(["validate", "--corrupt-kernel"])
    err = capsys.readouterr().err
    failed = json.loads(err).get("failed", [])
    ok = code == 3 and bool(failed)
    report(9, "negative control", ok, f"exit {code}, failed identities {failed}")
