"""Positivity of divisor classes ``λΘ + bF`` on P(E) over a curve.

With ``mu_max`` / ``mu_min`` the extreme slopes of the strong HN profile of E
and ``λ > 0``: pseudo-effective iff ``b >= -λ mu_max``, nef iff
``b >= -λ mu_min``; big and ample are the strict versions.  Over the closure
of a finite field a rational pseudo-effective class is Q-effective, and the
report carries an explicit decomposition witnessing it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .bundles import Bundle, Curve, SplitBundle, as_profile, pullback_cover
from .chow import DivClass, self_intersection
from .numbers import FieldElem, Number, as_field, format_field


class NotOverFpbar(ValueError):
    """The statement only holds over the algebraic closure of a finite field."""


class PreconditionViolated(ValueError):
    pass


R_EFFECTIVITY_UNDECIDED = "R-effectivity not decided here"


@dataclass(frozen=True)
class EffectivityWitness:
    """``D = λ(Θ - ξF) + λ deg(B) F`` with ``deg(B) >= 0``.

    ``section_slot`` indexes a summand (or HN piece) of ``E ⊗ O(-ξ)`` of
    degree zero, which carries a nonzero section; ``m`` clears every
    denominator in the decomposition.
    """

    xi_degree: Fraction
    b_degree: FieldElem
    section_slot: int
    m: int

    def reconstruct(self, theta: Number) -> DivClass:
        theta = as_field(theta)
        return DivClass(theta, theta * (self.b_degree - self.xi_degree))

    def to_json(self) -> dict:
        return {"xi": str(self.xi_degree), "b": format_field(self.b_degree),
                "slot": self.section_slot, "m": self.m}


@dataclass(frozen=True)
class PositivityReport:
    is_nef: bool
    is_pseudoeffective: bool
    is_big: bool
    is_ample: bool
    is_q_effective: bool | None
    witness: EffectivityWitness | None
    thresholds: tuple[Fraction, Fraction]
    notes: tuple[str, ...] = field(default=())

    def verdicts(self) -> tuple:
        return (self.is_nef, self.is_pseudoeffective, self.is_big, self.is_ample,
                self.is_q_effective)

    def to_json(self) -> dict:
        out = {
            "nef": self.is_nef,
            "pseff": self.is_pseudoeffective,
            "big": self.is_big,
            "ample": self.is_ample,
            "q_effective": self.is_q_effective,
            "witness": self.witness.to_json() if self.witness else None,
            "thresholds": {"mu_max": str(self.thresholds[0]), "mu_min": str(self.thresholds[1])},
        }
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _denominator(x: Number) -> int:
    x = as_field(x)
    return math.lcm(x.rational_part.denominator, x.radical_part.denominator)


def _section_slot(E: Bundle) -> int:
    # first summand (or HN piece) of maximal slope
    if isinstance(E, SplitBundle):
        return E.degrees.index(max(E.degrees))
    return 0


def classify(D: DivClass, E: Bundle, c: Curve) -> PositivityReport:
    P = as_profile(E)
    hi, lo = P.slopes[0], P.slopes[-1]
    lam, b = D.theta, D.fiber
    rational = D.is_rational()
    decide_q = rational and c.over_fpbar
    notes: list[str] = []
    if not rational:
        notes.append(R_EFFECTIVITY_UNDECIDED)

    if P.rank == 1:
        # P(E) is the curve itself and Θ is numerically deg(E) points
        total = lam * P.degree + b
        s = total.sign()
        q_eff = (s >= 0) if decide_q else None
        return PositivityReport(s >= 0, s >= 0, s > 0, s > 0, q_eff, None, (hi, lo), tuple(notes))

    s = lam.sign()
    if s < 0:
        return PositivityReport(False, False, False, False, False if decide_q else None,
                                None, (hi, lo), tuple(notes))
    if s == 0:
        ok = b.sign() >= 0
        return PositivityReport(ok, ok, False, False, ok if decide_q else None,
                                None, (hi, lo), tuple(notes))

    pe_margin = (b + lam * hi).sign()
    nef_margin = (b + lam * lo).sign()
    pseff = pe_margin >= 0
    witness = None
    q_eff = None
    if decide_q:
        q_eff = pseff
        if pseff:
            b_deg = b / lam + hi
            m = math.lcm(_denominator(lam), _denominator(b), hi.denominator, _denominator(b_deg))
            witness = EffectivityWitness(hi, b_deg, _section_slot(E), m)
            assert witness.reconstruct(lam) == D
    return PositivityReport(nef_margin >= 0, pseff, pe_margin > 0, nef_margin > 0,
                            q_eff, witness, (hi, lo), tuple(notes))


def curve_divisor_q_effective(deg_A: Number, c: Curve) -> bool:
    """A divisor of nonnegative degree on a curve over the closure of F_p is effective up to Q/R."""
    if not c.over_fpbar:
        raise NotOverFpbar("degree criterion needs a base over the closure of F_p")
    return as_field(deg_A).sign() >= 0


@dataclass(frozen=True)
class NakaiCertificate:
    ample: bool
    self_intersection: FieldElem
    strict_nef_margin: FieldElem


def is_ample_rank2_nakai(D: DivClass, E: SplitBundle, c: Curve) -> NakaiCertificate:
    """Ampleness of a strictly nef class on a ruled surface via ``D.D > 0``."""
    if E.rank != 2:
        raise PreconditionViolated("Nakai route is for rank-2 bundles")
    if not D.is_rational():
        raise PreconditionViolated("Nakai route needs a rational class")
    lo = as_profile(E).slopes[-1]
    margin = D.fiber + D.theta * lo
    if D.theta.sign() <= 0 or margin.sign() <= 0:
        raise PreconditionViolated(f"class is not strictly nef (b + λ·mu_min = {margin})")
    square = self_intersection(D, E)
    # λ > 0 and b > -λ mu_min force D^2 > λ^2 (d1 - d2) >= 0
    assert square.sign() > 0, "strictly nef class with D^2 = 0"
    return NakaiCertificate(True, square, margin)


def pullback_divisor(D: DivClass, n: int) -> DivClass:
    return DivClass(D.theta, D.fiber * n)


def pullback_invariance_check(D: DivClass, E: Bundle, n: int, c: Curve) -> bool:
    P = as_profile(E)
    before = classify(D, P, c)
    after = classify(pullback_divisor(D, n), pullback_cover(P, n), c)
    return before.verdicts() == after.verdicts()

