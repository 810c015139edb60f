"""Nef cone of a diagonal Lorentzian Néron-Severi lattice.

The lattice has basis ``e_1, ..., e_rho`` with ``(e_1.e_1) = anchor_square``,
``(e_i.e_i) = -lambda_i`` for ``i >= 2`` and no off-diagonal terms.  The nef
cone is the closed positive cone ``{x : x.x >= 0, x.e_1 >= 0}``.  On its
boundary sit nef classes whose ray contains no rational point; such a class
cannot be a nonnegative combination of rational nef classes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .numbers import FieldElem, Number, as_field


class DimensionMismatch(ValueError):
    pass


class ZeroClass(ValueError):
    pass


class NotBoundaryClass(ValueError):
    pass


class DegenerateChoice(ValueError):
    pass


@dataclass(frozen=True)
class NSLattice:
    rho: int
    anchor_square: int
    negatives: tuple[int, ...]

    def __init__(self, rho: int, anchor_square: int = 2, negatives: Sequence[int] = ()):
        negatives = tuple(negatives)
        if rho < 3:
            raise ValueError("Picard number must be at least 3")
        if anchor_square <= 0:
            raise ValueError("anchor square must be positive")
        if len(negatives) != rho - 1:
            raise ValueError(f"need {rho - 1} negative diagonal entries, got {len(negatives)}")
        if any(lam <= 0 for lam in negatives):
            raise ValueError("negative diagonal entries are given as positive lambda_i")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "anchor_square", anchor_square)
        object.__setattr__(self, "negatives", negatives)

    def basis_vector(self, i: int) -> NSClass:
        return NSClass([1 if j == i else 0 for j in range(self.rho)])

    @property
    def anchor(self) -> NSClass:
        return self.basis_vector(0)


@dataclass(frozen=True)
class NSClass:
    coords: tuple[FieldElem, ...]

    def __init__(self, coords: Sequence[Number]):
        object.__setattr__(self, "coords", tuple(as_field(c) for c in coords))

    def __len__(self):
        return len(self.coords)

    def __add__(self, other: NSClass) -> NSClass:
        if len(self) != len(other):
            raise DimensionMismatch("classes of different rank")
        return NSClass([a + b for a, b in zip(self.coords, other.coords)])

    def __mul__(self, k: Number) -> NSClass:
        return NSClass([a * k for a in self.coords])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.coords)


def pairing(L: NSLattice, x: NSClass, y: NSClass) -> FieldElem:
    if len(x) != L.rho or len(y) != L.rho:
        raise DimensionMismatch(f"lattice has rank {L.rho}, got {len(x)} and {len(y)}")
    total = x.coords[0] * y.coords[0] * L.anchor_square
    for lam, a, b in zip(L.negatives, x.coords[1:], y.coords[1:]):
        total = total - a * b * lam
    return total


def nef_membership(L: NSLattice, x: NSClass) -> bool:
    return pairing(L, x, x).sign() >= 0 and pairing(L, x, L.anchor).sign() >= 0


def is_boundary(L: NSLattice, x: NSClass) -> bool:
    """On the boundary of the cone and off the origin."""
    return not pairing(L, x, x) and pairing(L, x, L.anchor).sign() > 0


def ray_is_rational(x: NSClass) -> bool:
    if x.is_zero():
        raise ZeroClass("the zero class spans no ray")
    pivot = next(c for c in x.coords if c)
    return all((c / pivot).is_rational() for c in x.coords)


def proportional(x: NSClass, y: NSClass) -> bool:
    """Whether ``x`` and ``y`` are linearly dependent."""
    n = len(x.coords)
    return all(not (x.coords[i] * y.coords[j] - x.coords[j] * y.coords[i])
               for i in range(n) for j in range(i + 1, n))


@dataclass(frozen=True)
class SupportFunctional:
    """``H(.) = pairing(d, .)`` for a boundary class ``d``."""

    lattice: NSLattice
    vector: NSClass

    def __call__(self, x: NSClass) -> FieldElem:
        return pairing(self.lattice, self.vector, x)


def support_functional(L: NSLattice, d: NSClass) -> SupportFunctional:
    """Supporting functional of the cone along the boundary ray through ``d``.

    Nonnegative on the cone (reverse Cauchy-Schwarz in signature (1, rho-1))
    and vanishing on the cone exactly along that ray.
    """
    if not is_boundary(L, d):
        raise NotBoundaryClass("support functional needs d.d = 0 and d.e_1 > 0")
    return SupportFunctional(L, d)


@dataclass(frozen=True)
class Certificate:
    nef: bool
    boundary: bool
    ray_rational: bool
    self_pairing: FieldElem

    @property
    def passes(self) -> bool:
        return self.nef and self.boundary and not self.ray_rational


def certify(L: NSLattice, D: NSClass) -> Certificate:
    return Certificate(nef_membership(L, D), is_boundary(L, D), ray_is_rational(D),
                       pairing(L, D, D))


def build_counterexample(L: NSLattice, t) -> tuple[NSClass, Certificate]:
    """Nef class ``(1, t, a_3, 0, ...)`` on the cone boundary with an irrational ray.

    ``a_3 = sqrt((anchor - lambda_2 t^2) / lambda_3)`` must be irrational.
    """
    t = Fraction(t)
    lam2, lam3 = L.negatives[0], L.negatives[1]
    rest = L.anchor_square - lam2 * t * t
    if not 0 < lam2 * t * t < L.anchor_square:
        raise DegenerateChoice(f"need 0 < lambda_2 t^2 < {L.anchor_square}, got t = {t}")
    a3 = FieldElem.sqrt(rest / lam3)
    if a3.is_rational():
        raise DegenerateChoice(f"{rest / lam3} is a rational square; the ray would be rational")
    D = NSClass([1, t, a3] + [0] * (L.rho - 3))
    cert = certify(L, D)
    assert cert.passes and not cert.self_pairing
    return D, cert


@dataclass(frozen=True)
class Refutation:
    refuted: bool
    step: str
    detail: str
    functional_values: tuple[FieldElem, ...] = field(default=())


def effective_decomposition_refuter(L: NSLattice, d: NSClass, gammas: Sequence[NSClass],
                                    c: Sequence[Number]) -> Refutation:
    """Show ``d != sum c_i gamma_i`` for rational nef ``gamma_i`` and positive ``c_i``.

    Steps: an empty sum is zero; otherwise the sum must match coordinatewise;
    if it did, the support functional would vanish on every ``gamma_i``,
    putting a rational class on the irrational ray of ``d``.
    """
    cert = certify(L, d)
    if not cert.passes:
        raise ValueError("d is not a certified boundary class with an irrational ray")
    if len(gammas) != len(c):
        raise ValueError("one coefficient per class")
    c = [as_field(x) for x in c]
    if any(x.sign() <= 0 for x in c):
        raise ValueError("coefficients must be positive")
    for g in gammas:
        if not g.is_rational() or not nef_membership(L, g):
            raise ValueError("each gamma must be a rational nef class")
    if not gammas:
        return Refutation(True, "zero_sum", "an empty combination is the zero class, d is not zero")

    H = support_functional(L, d)
    values = tuple(H(g) for g in gammas)
    total = NSClass([0] * L.rho)
    for ci, g in zip(c, gammas):
        total = total + g * ci
    if total != d:
        bad = [i for i, (u, v) in enumerate(zip(total.coords, d.coords)) if u != v]
        return Refutation(True, "sum_mismatch",
                          f"combination differs from d in coordinates {bad}", values)
    # H(d) = 0 = sum c_i H(gamma_i) with every term >= 0
    positive = [i for i, v in enumerate(values) if v.sign() > 0]
    if positive:
        return Refutation(True, "functional_balance",
                          f"H(d) = 0 but H(gamma_i) > 0 for i in {positive}", values)
    return _ray_step(d, gammas, values)


def _ray_step(d: NSClass, gammas: Sequence[NSClass], values) -> Refutation:
    for i, g in enumerate(gammas):
        if proportional(g, d) and not g.is_zero():
            return Refutation(True, "ray_rationality",
                              f"gamma_{i} is rational and lies on the ray of d, "
                              "so that ray would be rational", values)
    return Refutation(True, "ray_rationality",
                      "H vanishes on every gamma_i, forcing them onto the irrational ray of d",
                      values)
