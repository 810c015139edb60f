"""Acceptance gate: one exact check per criterion, one PASS/FAIL line each.

Run under pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import json
import random
import subprocess
import sys
import time
from collections import Counter
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from divpos.bundles import (Curve, SplitBundle, h0_genus0, hn_profile, splitting_frobenius_power,
                            sym_power, tensor)
from divpos.checks import random_cone_point, random_instance, random_profile, split_bundles, sweep_rationals
from divpos.chow import DivClass, intersection_number
from divpos.fourier_motzkin import fm_feasible
from divpos.ns_cone import (NSClass, NSLattice, build_counterexample, nef_membership, pairing,
                            proportional, ray_is_rational, support_functional)
from divpos.positivity import classify, pullback_invariance_check
from divpos.rationalization import admissible_system, normalize_instance, rationalize, zero_row_forcing

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # direct script run
    ACCEPTANCE_LINES = []

K = Curve(genus=0, char=5, over_fpbar=True)
BUNDLES = list(split_bundles(4, -3, 3))
VALUES = sweep_rationals(4, 4)
MULTIPLES = 20
DEG_BOUND = 3


def report(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


# -- brute-force section counts on P^1 ----------------------------------------

def sym_table(E: SplitBundle, m_max: int) -> np.ndarray:
    """``T[m, s + m_max*B]`` = multiplicity of degree ``s`` in ``Sym^m E``."""
    width = 2 * m_max * DEG_BOUND + 1
    T = np.zeros((m_max + 1, width), dtype=np.int64)
    T[0, m_max * DEG_BOUND] = 1
    for d in E.degrees:
        # ascending m lets each summand repeat: multisets, not subsets
        for m in range(1, m_max + 1):
            if d >= 0:
                T[m, d:] += T[m - 1, :width - d]
            else:
                T[m, :d] += T[m - 1, -d:]
    return T


def h0_from_table(T: np.ndarray, m: int, twist: Fraction, m_max: int) -> int:
    degrees = np.arange(T.shape[1]) - m_max * DEG_BOUND
    shifted = degrees + int(twist) + 1
    return int(np.dot(T[m], np.maximum(shifted, 0)))


def test_table_matches_sym_power():
    for E in BUNDLES:
        T = sym_table(E, 6)
        for m in range(1, 7):
            counts = Counter(sym_power(E, m).degrees)
            row = {s - 6 * DEG_BOUND: int(k) for s, k in enumerate(T[m]) if k}
            assert row == dict(counts)


# -- criteria ------------------------------------------------------------------

def criterion_1():
    start = time.perf_counter()
    bad, cases, checked = [], 0, 0
    m_max = 4 * MULTIPLES
    for E in BUNDLES:
        T = sym_table(E, m_max)
        for a in VALUES:
            cases += 1
            u, q = a.numerator, a.denominator
            rep = classify(DivClass(1, -a), E, K)
            h0 = h0_genus0(tensor(sym_power(E, q), SplitBundle([-u])))
            if rep.is_q_effective != (h0 > 0):
                bad.append((E.degrees, a, "q_eff"))
            if not rep.is_pseudoeffective:
                for k in range(1, MULTIPLES + 1):
                    checked += 1
                    if h0_from_table(T, k * q, Fraction(-k * u), m_max):
                        bad.append((E.degrees, a, k * q))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 30
    return ok, f"{cases} classes, {checked} non-pseff multiples, {len(bad)} violations, {elapsed:.1f}s"


def criterion_2():
    bad, cases = [], 0
    for E in BUNDLES:
        lo, mu = min(E.degrees), Fraction(E.degree, E.rank)
        for a in VALUES:
            cases += 1
            D = DivClass(1, -a)
            if classify(D, E, K).is_nef != (a <= lo):
                bad.append((E.degrees, a, "nef"))
            # top self-intersection of Θ - aF is r(μ - a) on every bundle
            if intersection_number([D] * E.rank, E) != E.rank * (mu - a):
                bad.append((E.degrees, a, "top power"))
        if len(set(E.degrees)) == 1:
            d = E.degrees[0]
            boundary = DivClass(1, -mu)
            if intersection_number([boundary] * E.rank, E) != 0:
                bad.append((E.degrees, "boundary power"))
            nef_at = [a for a in VALUES if classify(DivClass(1, -a), E, K).is_nef]
            if max(nef_at) != d:
                bad.append((E.degrees, "nef boundary", max(nef_at)))
    return not bad, f"{cases} classes, {len(bad)} violations"


def criterion_3():
    start = time.perf_counter()
    bad, cases = 0, 0
    for E in split_bundles(3, -4, -1):
        for e in range(-3, 1):
            for m in range(1, 7):
                cases += 1
                if h0_genus0(tensor(sym_power(E, m), SplitBundle([e]))):
                    bad += 1
    elapsed = time.perf_counter() - start
    return bad == 0 and elapsed < 5, f"{cases} cases, {bad} violations, {elapsed:.2f}s"


def criterion_4():
    rng = random.Random(2024)
    bad = 0
    for _ in range(200):
        P = random_profile(rng)
        sl = P.slopes
        assert len(sl) <= 4 and all(-5 <= s <= 5 for s in sl)
        assert all(x - y >= Fraction(1, 4) for x, y in zip(sl, sl[1:]))
        g, p = rng.randint(0, 3), rng.choice([2, 3, 5])
        m = splitting_frobenius_power(P, Curve(g, p, True))

        def holds(k):
            return all(p**k * (y - x) + 2 * g - 2 < 0 for x, y in zip(sl, sl[1:]))

        if not holds(m) or (m >= 1 and holds(m - 1)):
            bad += 1
    return bad == 0, f"200 profiles, {bad} violations"


def criterion_5():
    rng = random.Random(1789)
    bad, forced = 0, 0
    for i in range(100):
        d = (2, 7)[i % 2]
        inst = random_instance(rng, d)
        assert inst.slots <= 6 and len(inst.principals) <= 3
        assert inst.is_effective()
        assert {a.radicand for a in inst.coeffs} <= {d, None}
        a = rationalize(inst)
        if not all(isinstance(x, Fraction) for x in a) or not inst.is_effective(a):
            bad += 1
        if not fm_feasible(admissible_system(inst))[0]:
            bad += 1
        norm = normalize_instance(inst).instance
        for k in zero_row_forcing(norm):
            forced += 1
            if norm.d_prime[k] or any(p[k] for p in norm.principals):
                bad += 1
    return bad == 0, f"100 instances, {forced} forced slots, {bad} violations"


def criterion_6():
    start = time.perf_counter()
    L = NSLattice(3, 2, [1, 1])
    D, cert = build_counterexample(L, Fraction(1, 2))
    ok = pairing(L, D, D) == 0 and nef_membership(L, D) and not ray_is_rational(D) and cert.passes
    H = support_functional(L, D)
    ok = ok and H(D) == 0
    rng = random.Random(33)
    negatives = 0
    for _ in range(1000):
        if H(random_cone_point(rng, L)).sign() < 0:
            negatives += 1
    elapsed = time.perf_counter() - start
    ok = ok and negatives == 0 and elapsed < 2
    return ok, f"D = (1, 1/2, sqrt(7)/2), 1000 samples, {negatives} negative, {elapsed:.2f}s"


def criterion_7():
    L = NSLattice(3, 2, [1, 1])
    rng = random.Random(77)
    # rational boundary points exercise the equality case
    boundary = [NSClass(c) for c in ((1, 1, 1), (1, -1, 1), (5, 1, 7), (5, 7, -1), (5, -7, -1))]
    bad, equal = 0, 0
    for _ in range(1000):
        x = random_cone_point(rng, L) if rng.random() < 0.6 else rng.choice(boundary) * rng.randint(1, 4)
        y = random_cone_point(rng, L) if rng.random() < 0.6 else rng.choice(boundary) * rng.randint(1, 4)
        p = pairing(L, x, y)
        if p.sign() < 0:
            bad += 1
        if p == 0 and not x.is_zero() and not y.is_zero():
            equal += 1
            if not proportional(x, y):
                bad += 1
    return bad == 0, f"1000 pairs, {equal} equality cases, {bad} violations"


def criterion_8():
    bad, cases = 0, 0
    for E in BUNDLES:
        P = hn_profile(E)
        for a in VALUES:
            for n in (2, 3):
                cases += 1
                if not pullback_invariance_check(DivClass(1, -a), P, n, K):
                    bad += 1
    return bad == 0, f"{cases} cases, {bad} violations"


BATCH = {"scenarios": [
    {"id": "pe", "kind": "classify", "base": {"genus": 0, "char": 5}, "bundle": {"split": [1, 0]},
     "divisor": {"theta": "1", "fiber": "-1"}},
    {"id": "irr", "kind": "classify", "base": {"genus": 1, "char": 3}, "bundle": {"hn": [[2, "3"], [1, "-1"]]},
     "divisor": {"theta": "1", "fiber": "-1 + 1/3*sqrt(5)"}},
    {"id": "nakai", "kind": "classify", "base": {"genus": 0, "char": 5}, "bundle": {"split": [2, 0, 1]},
     "divisor": {"theta": "1", "fiber": "1"}, "nakai": True},
]}


def _cli(*args: str) -> tuple[int, bytes]:
    proc = subprocess.run([sys.executable, "-m", "divpos", *args], capture_output=True)
    return proc.returncode, proc.stdout


def criterion_9(tmp: Path):
    path = tmp / "batch.json"
    path.write_text(json.dumps(BATCH))
    runs = {}
    for label, args in (("selftest", ("selftest", "--format", "json")),
                        ("batch-json", ("classify", "--input", str(path), "--format", "json")),
                        ("batch-text", ("classify", "--input", str(path))),
                        ("batch-jobs", ("classify", "--input", str(path), "--format", "json", "--jobs", "2"))):
        runs[label] = [_cli(*args) for _ in range(2)]
    same = all(a == b for a, b in runs.values())
    selftest_ok = runs["selftest"][0][0] == 0
    parallel_ok = runs["batch-jobs"][0][1] == runs["batch-json"][0][1]
    ok = same and selftest_ok and parallel_ok
    return ok, (f"selftest exit {runs['selftest'][0][0]}, "
                f"{sum(a == b for a, b in runs.values())}/{len(runs)} report pairs byte-identical, "
                f"parallel == serial: {parallel_ok}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8]


@pytest.mark.parametrize("n", range(1, 9))
def test_criterion(n):
    ok, detail = CRITERIA[n - 1]()
    report(n, ok, detail)
    assert ok, detail


def test_criterion_9(tmp_path):
    ok, detail = criterion_9(tmp_path)
    report(9, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    import tempfile

    results = []
    for n, fn in enumerate(CRITERIA, 1):
        ok, detail = fn()
        report(n, ok, detail)
        results.append(ok)
    with tempfile.TemporaryDirectory() as d:
        ok, detail = criterion_9(Path(d))
        report(9, ok, detail)
        results.append(ok)
    raise SystemExit(0 if all(results) else 1)
