"""Turn a real effective presentation of a Q-divisor into a rational one.

An instance is a rational coefficient vector ``d_prime`` over some prime
divisor slots, the coefficient vectors of principal divisors, and real
coefficients ``a_j`` with ``d_prime + sum_j a_j * principals_j >= 0``.

The coefficients are first re-expressed in an integral Q-basis of their span
(rational element first), which keeps every principal vector integral in the
new basis.  With ``1, a_1, ..., a_r`` independent over Q, a slot where the
combination vanishes must have all entries zero; every other slot has
positive slack, and a small enough rational perturbation keeps it
nonnegative.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .fourier_motzkin import GE, LinearSystem, Row
from .numbers import FieldElem, Number, as_field, continued_fraction_approx


class IndependenceViolated(ValueError):
    """A vanishing slot carries a nonzero entry, so 1, a_1, ... are Q-dependent."""


class NotEffective(ValueError):
    pass


def _vec(xs) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in xs)


@dataclass(frozen=True)
class EffectivityInstance:
    d_prime: tuple[Fraction, ...]
    principals: tuple[tuple[Fraction, ...], ...]
    coeffs: tuple[FieldElem, ...]

    def __init__(self, d_prime, principals, coeffs):
        d_prime = _vec(d_prime)
        principals = tuple(_vec(p) for p in principals)
        coeffs = tuple(as_field(a) for a in coeffs)
        if len(principals) != len(coeffs):
            raise ValueError("one coefficient per principal divisor")
        if any(len(p) != len(d_prime) for p in principals):
            raise ValueError("all vectors must have the same length")
        object.__setattr__(self, "d_prime", d_prime)
        object.__setattr__(self, "principals", principals)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def slots(self) -> int:
        return len(self.d_prime)

    def combined(self, coeffs: Sequence[Number] | None = None) -> list[FieldElem]:
        """``d_prime + sum_j coeffs_j * principals_j`` slot by slot."""
        coeffs = self.coeffs if coeffs is None else coeffs
        out = []
        for k in range(self.slots):
            v = as_field(self.d_prime[k])
            for a, p in zip(coeffs, self.principals):
                if p[k]:
                    v = v + a * p[k]
            out.append(v)
        return out

    def is_effective(self, coeffs: Sequence[Number] | None = None) -> bool:
        return all(v.sign() >= 0 for v in self.combined(coeffs))


# -- Q-basis with integral coordinates ----------------------------------------

def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def normalize_basis(b: Sequence[Number]) -> tuple[list[FieldElem], list[list[int]]]:
    """Q-basis of ``span_Q(b)`` in which every ``b_i`` has integer coordinates.

    If the span contains a nonzero rational, the first basis element is
    rational.  Returns ``(basis, coords)`` with ``b_i == sum_j coords[i][j] * basis[j]``.
    """
    b = [as_field(x) for x in b]
    if not b:
        raise ValueError("normalize_basis needs at least one element")
    radicands = {x.radicand for x in b if x.radicand is not None}
    if len(radicands) > 1:
        raise ValueError("elements from different quadratic fields")
    d = radicands.pop() if radicands else None
    den = math.lcm(*(math.lcm(x.rational_part.denominator, x.radical_part.denominator) for x in b))
    vecs = [(int(x.rational_part * den), int(x.radical_part * den)) for x in b]

    # irrational generator: integer combination reaching gcd of radical parts
    g, irr = 0, (0, 0)
    for u, v in vecs:
        g2, s, t = _xgcd(g, v)
        if g2 != g:
            irr = (s * irr[0] + t * u, s * irr[1] + t * v)
            g = g2
    # rational sublattice after removing the irrational direction
    h = 0
    for u, v in vecs:
        k = v // g if g else 0
        h = math.gcd(h, u - k * irr[0])
    if g and h:
        irr = (irr[0] % h, irr[1])

    basis_int: list[tuple[int, int]] = []
    if h:
        basis_int.append((h, 0))
    if g:
        basis_int.append(irr)
    if not basis_int:
        return [], [[] for _ in b]
    basis = [FieldElem(Fraction(u, den), Fraction(v, den), d) for u, v in basis_int]

    coords = []
    for u, v in vecs:
        row = []
        if g:
            k = v // g
            u -= k * irr[0]
        if h:
            row.append(u // h)
            assert u % h == 0
        elif u:
            raise AssertionError("rational residue outside the span")
        if g:
            row.append(k)
        coords.append(row)
    for x, row in zip(b, coords):
        assert sum((c * e for c, e in zip(row, basis)), FieldElem(0)) == x
    return basis, coords


@dataclass(frozen=True)
class NormalizedInstance:
    """Instance rewritten over an integral basis, rational basis element folded in."""

    instance: EffectivityInstance
    coords: list[list[int]]
    basis: list[FieldElem]
    folded: FieldElem | None


def normalize_instance(inst: EffectivityInstance) -> NormalizedInstance:
    basis, coords = normalize_basis(inst.coeffs) if inst.coeffs else ([], [])
    n = inst.slots
    new_principals = []
    for j in range(len(basis)):
        new_principals.append(tuple(
            sum((coords[i][j] * inst.principals[i][k] for i in range(len(inst.coeffs))), Fraction(0))
            for k in range(n)))
    d_new = list(inst.d_prime)
    folded = None
    if basis and basis[0].is_rational():
        folded = basis[0]
        q = basis[0].rational_part
        d_new = [d_new[k] + q * new_principals[0][k] for k in range(n)]
        new_principals, new_basis = new_principals[1:], basis[1:]
    else:
        new_basis = basis
    return NormalizedInstance(EffectivityInstance(d_new, new_principals, new_basis),
                              coords, basis, folded)


# -- forcing and perturbation -------------------------------------------------

def zero_row_forcing(inst: EffectivityInstance) -> list[int]:
    """Slots where the combination is exactly zero.

    Each such slot must have zero entries in ``d_prime`` and in every
    principal vector; otherwise ``1, a_1, ...`` were not Q-independent.
    """
    values = inst.combined()
    if any(v.sign() < 0 for v in values):
        raise NotEffective("instance combination has a negative slot")
    forced = [k for k, v in enumerate(values) if not v]
    for k in forced:
        if inst.d_prime[k] or any(p[k] for p in inst.principals):
            raise IndependenceViolated(f"slot {k} vanishes but has nonzero entries")
    return forced


def _perturb(inst: EffectivityInstance) -> list[Fraction]:
    """Rational coefficients close enough to keep ``inst`` effective."""
    forced = set(zero_row_forcing(inst))
    values = inst.combined()
    live = [k for k in range(inst.slots) if k not in forced]
    r = len(inst.coeffs)
    if not r:
        return []
    norm = max((abs(p[k]) for p in inst.principals for k in live), default=Fraction(0))
    if not live or not norm:
        return [continued_fraction_approx(a, Fraction(1)) for a in inst.coeffs]
    slack = min(values[k] for k in live)
    eps = slack / (r * norm)
    return [continued_fraction_approx(a, eps) for a in inst.coeffs]


def rationalize(inst: EffectivityInstance) -> list[Fraction]:
    """Rational ``a'`` with ``d_prime + sum_j a'_j principals_j >= 0`` exactly."""
    if not inst.is_effective():
        raise NotEffective("instance combination has a negative slot")
    if all(a.is_rational() for a in inst.coeffs):
        return [a.rational_part for a in inst.coeffs]
    norm = normalize_instance(inst)
    approx = _perturb(norm.instance)
    basis_values = ([norm.folded.rational_part] if norm.folded is not None else []) + approx
    result = [sum((c * v for c, v in zip(row, basis_values)), Fraction(0)) for row in norm.coords]
    if not inst.is_effective(result):
        raise AssertionError("rationalized coefficients fail exact re-verification")
    return result


def admissible_system(inst: EffectivityInstance) -> LinearSystem:
    """Constraints on rational unknowns ``a'_j``: one ``>=`` row per slot."""
    rows = [Row(tuple(p[k] for p in inst.principals), GE, -inst.d_prime[k])
            for k in range(inst.slots)]
    return LinearSystem(rows, nvars=len(inst.principals))


def substituted_system(inst: EffectivityInstance) -> LinearSystem:
    """The instance with its own coefficients plugged in: zero unknowns, one row per slot."""
    return LinearSystem([Row((), GE, -v) for v in inst.combined()], nvars=0)
