"""Brute-force and property suites run by ``divpos selftest``.

Each suite returns a :class:`CheckResult`; all randomness comes from a fixed
seed so two runs produce identical reports.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .bundles import (Curve, HNProfile, SplitBundle, h0_genus0, hn_profile,
                      splitting_frobenius_power, sym_power, tensor)
from .chow import DivClass, intersection_number
from .numbers import FieldElem
from .ns_cone import (NSClass, NSLattice, build_counterexample, nef_membership, pairing,
                      proportional, support_functional)
from .positivity import classify, pullback_invariance_check
from .fourier_motzkin import fm_feasible
from .rationalization import (EffectivityInstance, admissible_system, normalize_instance,
                              rationalize, zero_row_forcing)

FPBAR_P1 = Curve(genus=0, char=5, over_fpbar=True)


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        if len(self.failures) < 20:
            self.failures.append(msg)
        else:
            self.failures[-1] = "... more failures truncated"

    def to_json(self) -> dict:
        return {"name": self.name, "cases": self.cases, "ok": self.ok,
                "failures": list(self.failures)}


def split_bundles(max_rank: int, lo: int, hi: int):
    for r in range(1, max_rank + 1):
        for degs in itertools.combinations_with_replacement(range(hi, lo - 1, -1), r):
            yield SplitBundle(degs)


def sweep_rationals(max_den: int = 4, bound: int = 4) -> list[Fraction]:
    """Every rational ``u/q`` with ``q <= max_den`` and ``|u/q| <= bound``, in lowest terms."""
    vals = {Fraction(u, q) for q in range(1, max_den + 1) for u in range(-bound * q, bound * q + 1)}
    return sorted(vals)


def sym_degree_counts(E: SplitBundle, m: int) -> dict[int, int]:
    """Multiplicity of each degree in ``Sym^m E``, by dynamic programming over summands."""
    # layers[n][s] = number of size-n multisets from processed summands with degree sum s
    layers: list[dict[int, int]] = [{0: 1}] + [{} for _ in range(m)]
    for d in E.degrees:
        for n in range(1, m + 1):
            prev, cur = layers[n - 1], layers[n]
            for s, k in prev.items():
                cur[s + d] = cur.get(s + d, 0) + k
    return layers[m]


def h0_sym_twist(E: SplitBundle, m: int, twist: int) -> int:
    return sum(k * max(s + twist + 1, 0) for s, k in sym_degree_counts(E, m).items())


def check_genus0_equivalence(max_rank: int = 4, multiples: int = 3) -> CheckResult:
    """Q-effectivity and nefness of ``Θ - aF`` against sections on P^1."""
    res = CheckResult("genus0_equivalence")
    values = sweep_rationals()
    for E in split_bundles(max_rank, -3, 3):
        for a in values:
            res.cases += 1
            q, u = a.denominator, a.numerator
            rep = classify(DivClass(1, -a), E, FPBAR_P1)
            h0 = h0_genus0(tensor(sym_power(E, q), SplitBundle([-u])))
            if rep.is_q_effective != (h0 > 0):
                res.fail(f"E={list(E.degrees)} a={a}: q_eff={rep.is_q_effective} h0={h0}")
            if rep.is_nef != (a <= min(E.degrees)):
                res.fail(f"E={list(E.degrees)} a={a}: nef={rep.is_nef}")
            if not rep.is_pseudoeffective:
                for k in range(1, multiples + 1):
                    if h0_sym_twist(E, k * q, -k * u):
                        res.fail(f"E={list(E.degrees)} a={a}: sections at m={k * q}")
    return res


def check_sym_vanishing() -> CheckResult:
    res = CheckResult("sym_vanishing")
    for E in split_bundles(3, -4, -1):
        for e in range(-3, 1):
            for m in range(1, 7):
                res.cases += 1
                if h0_genus0(tensor(sym_power(E, m), SplitBundle([e]))):
                    res.fail(f"E={list(E.degrees)} G=[{e}] m={m}")
    return res


def check_semistable_boundary() -> CheckResult:
    res = CheckResult("semistable_boundary")
    for r in range(1, 5):
        for d in range(-3, 4):
            res.cases += 1
            E = SplitBundle([d] * r)
            mu = Fraction(d)
            D = DivClass(1, -mu)
            if intersection_number([D] * r, E) != 0:
                res.fail(f"(Θ - μF)^{r} != 0 for E={[d] * r}")
            if not classify(D, E, FPBAR_P1).is_nef:
                res.fail(f"Θ - μF not nef for E={[d] * r}")
            if r > 1 and classify(DivClass(1, -mu - Fraction(1, 4)), E, FPBAR_P1).is_nef:
                res.fail(f"Θ - (μ+1/4)F nef for E={[d] * r}")
    return res


def random_profile(rng: random.Random, max_pieces: int = 4) -> HNProfile:
    n = rng.randint(1, max_pieces)
    # slopes on a 1/4 grid in [-5, 5], pairwise gaps >= 1/4
    grid = rng.sample(range(-20, 21), n)
    slopes = sorted((Fraction(g, 4) for g in grid), reverse=True)
    pieces = []
    for s in slopes:
        r = rng.randint(1, 3)
        pieces.append((r, s * r))
    return HNProfile(pieces)


def check_planner(count: int = 200, seed: int = 2) -> CheckResult:
    res = CheckResult("frobenius_planner")
    rng = random.Random(seed)
    for _ in range(count):
        P = random_profile(rng)
        c = Curve(genus=rng.randint(0, 3), char=rng.choice([2, 3, 5]), over_fpbar=True)
        res.cases += 1
        m = splitting_frobenius_power(P, c)
        sl = P.slopes

        def ok(k):
            return all(c.char**k * (b - a) + 2 * c.genus - 2 < 0 for a, b in zip(sl, sl[1:]))

        if not ok(m) or (m >= 1 and ok(m - 1)):
            res.fail(f"slopes={sl} g={c.genus} p={c.char} m={m}")
    return res


def random_field_elem(rng: random.Random, d: int) -> FieldElem:
    a = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
    b = Fraction(rng.choice([i for i in range(-6, 7) if i]), rng.randint(1, 4))
    return FieldElem(a, b, d)


def random_instance(rng: random.Random, d: int) -> EffectivityInstance:
    """An effective instance, with some slots forced to vanish exactly."""
    n = rng.randint(1, 6)
    r = rng.randint(1, 3)
    coeffs = [random_field_elem(rng, d) for _ in range(r)]
    related = r >= 2 and rng.random() < 0.5
    if related:
        # a rational relation among the coefficients
        coeffs[1] = coeffs[0] + Fraction(rng.randint(-3, 3))
    principals = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(r)]
    d_prime = []
    for k in range(n):
        kind = rng.random()
        if kind < 0.2:
            for p in principals:
                p[k] = Fraction(0)
            d_prime.append(Fraction(0))
            continue
        if kind < 0.4 and related:
            # irrational parts cancel so the slot can vanish exactly
            x = Fraction(rng.randint(1, 3))
            for p in principals:
                p[k] = Fraction(0)
            principals[0][k], principals[1][k] = x, -x
        s = sum((a * p[k] for a, p in zip(coeffs, principals)), FieldElem(0))
        if s.is_rational():
            d_prime.append(-s.rational_part + rng.randint(0, 2))
        else:
            d_prime.append(Fraction(-s.floor()) + Fraction(rng.randint(0, 4), rng.randint(1, 3)))
    return EffectivityInstance(d_prime, principals, coeffs)


def check_rationalizer(count: int = 100, seed: int = 5) -> CheckResult:
    res = CheckResult("rationalizer")
    rng = random.Random(seed)
    for i in range(count):
        inst = random_instance(rng, (2, 7)[i % 2])
        res.cases += 1
        try:
            a = rationalize(inst)
        except Exception as exc:  # recorded as a failure, suite continues
            res.fail(f"instance {i}: {type(exc).__name__}: {exc}")
            continue
        if not inst.is_effective(a):
            res.fail(f"instance {i}: output fails re-verification")
        feasible, _ = fm_feasible(admissible_system(inst))
        if not feasible:
            res.fail(f"instance {i}: admissible region empty")
        norm = normalize_instance(inst).instance
        for k in zero_row_forcing(norm):
            if norm.d_prime[k] or any(p[k] for p in norm.principals):
                res.fail(f"instance {i}: forced slot {k} has nonzero column")
    return res


def random_cone_point(rng: random.Random, L: NSLattice) -> NSClass:
    """A rational point of the closed positive cone (rejection sampling)."""
    while True:
        x1 = Fraction(rng.randint(0, 8), rng.randint(1, 3))
        rest = [Fraction(rng.randint(-8, 8), rng.randint(1, 3)) for _ in range(L.rho - 1)]
        x = NSClass([x1] + rest)
        if nef_membership(L, x):
            return x


def check_cone(samples: int = 1000, seed: int = 7) -> CheckResult:
    res = CheckResult("cone_properties")
    rng = random.Random(seed)
    L = NSLattice(3, 2, [1, 1])
    D, cert = build_counterexample(L, Fraction(1, 2))
    res.cases += 1
    if pairing(L, D, D) or not cert.nef or cert.ray_rational:
        res.fail("counterexample certificate does not re-verify")
    H = support_functional(L, D)
    if H(D):
        res.fail("H(D) != 0")
    boundary = [NSClass([1, 1, 1]), NSClass([1, -1, 1]), NSClass([5, 1, 7]), NSClass([1, 0, 0])]
    for _ in range(samples):
        res.cases += 1
        x = random_cone_point(rng, L)
        if H(x).sign() < 0:
            res.fail(f"H < 0 at {x.coords}")
        k = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        if H(D * k):
            res.fail(f"H != 0 at {k}·D")
        y = random_cone_point(rng, L) if rng.random() < 0.7 else rng.choice(boundary) * rng.randint(1, 3)
        p = pairing(L, x, y)
        if p.sign() < 0:
            res.fail(f"pairing < 0 for {x.coords}, {y.coords}")
        if not p and not x.is_zero() and not y.is_zero() and not proportional(x, y):
            res.fail(f"zero pairing without proportionality {x.coords}, {y.coords}")
        s = x + y
        if not nef_membership(L, s) or not nef_membership(L, x * k):
            res.fail("cone not closed under addition/scaling")
    return res


def check_cover_invariance(covers=(2, 3)) -> CheckResult:
    res = CheckResult("cover_invariance")
    values = sweep_rationals()
    for E in split_bundles(4, -3, 3):
        P = hn_profile(E)
        for a in values:
            for n in covers:
                res.cases += 1
                if not pullback_invariance_check(DivClass(1, -a), P, n, FPBAR_P1):
                    res.fail(f"E={list(E.degrees)} a={a} n={n}")
    return res


SUITES = {
    "genus0_equivalence": check_genus0_equivalence,
    "sym_vanishing": check_sym_vanishing,
    "semistable_boundary": check_semistable_boundary,
    "frobenius_planner": check_planner,
    "rationalizer": check_rationalizer,
    "cone_properties": check_cone,
    "cover_invariance": check_cover_invariance,
}


def run_all() -> list[CheckResult]:
    return [fn() for fn in SUITES.values()]
