"""Intersection numbers on a projective bundle P(E) over a curve.

Numerical classes are ``theta*Θ + fiber*F``.  The ring is generated by Θ and
F subject to ``F^2 = 0`` and ``Θ^r = deg(E) Θ^(r-1) F``; the point class is
``Θ^(r-1) F``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .bundles import Bundle, SplitBundle, as_profile
from .numbers import FieldElem, Number, as_field


class ArityMismatch(ValueError):
    pass


@dataclass(frozen=True)
class DivClass:
    theta: FieldElem
    fiber: FieldElem

    def __init__(self, theta: Number = 0, fiber: Number = 0):
        object.__setattr__(self, "theta", as_field(theta))
        object.__setattr__(self, "fiber", as_field(fiber))

    def __add__(self, other: DivClass) -> DivClass:
        return DivClass(self.theta + other.theta, self.fiber + other.fiber)

    def __mul__(self, k: Number) -> DivClass:
        return DivClass(self.theta * k, self.fiber * k)

    __rmul__ = __mul__

    def __neg__(self) -> DivClass:
        return DivClass(-self.theta, -self.fiber)

    def is_rational(self) -> bool:
        return self.theta.is_rational() and self.fiber.is_rational()


THETA = DivClass(1, 0)
FIBER = DivClass(0, 1)


class ChowRing:
    """Numerical Chow ring of P(E) for a bundle of rank ``r`` and degree ``deg``."""

    def __init__(self, rank: int, degree: Number):
        if rank < 1:
            raise ValueError("rank must be positive")
        self.rank = rank
        self.degree = as_field(degree)

    @classmethod
    def of(cls, E: Bundle) -> ChowRing:
        if isinstance(E, SplitBundle):
            return cls(E.rank, E.degree)
        P = as_profile(E)
        return cls(P.rank, P.degree)

    def reduce(self, elem: dict[tuple[int, int], FieldElem]) -> dict[tuple[int, int], FieldElem]:
        """Rewrite monomials Θ^i F^j into normal form (j <= 1, total degree <= r)."""
        r = self.rank
        out: dict[tuple[int, int], FieldElem] = {}
        work = list(elem.items())
        while work:
            (i, j), c = work.pop()
            if not c or j >= 2 or i + j > r:
                continue
            if j == 0 and i == r:
                work.append(((r - 1, 1), c * self.degree))
                continue
            out[(i, j)] = out.get((i, j), FieldElem(0)) + c
        return {k: v for k, v in out.items() if v}

    def mul(self, x: dict, y: dict) -> dict:
        prod: dict[tuple[int, int], FieldElem] = {}
        for (i1, j1), c1 in x.items():
            for (i2, j2), c2 in y.items():
                key = (i1 + i2, j1 + j2)
                prod[key] = prod.get(key, FieldElem(0)) + c1 * c2
        return self.reduce(prod)

    @staticmethod
    def linear(D: DivClass) -> dict[tuple[int, int], FieldElem]:
        return {(1, 0): D.theta, (0, 1): D.fiber}

    def degree_of(self, elem: dict) -> FieldElem:
        """Degree of the top-dimensional part (coefficient of the point class)."""
        return elem.get((self.rank - 1, 1), FieldElem(0))

    def symbolic_product(self, classes: Iterable[DivClass]) -> FieldElem:
        acc: dict[tuple[int, int], FieldElem] = {(0, 0): FieldElem(1)}
        for D in classes:
            acc = self.mul(acc, self.linear(D))
        return self.degree_of(acc)

    def closed_form(self, classes: list[DivClass]) -> FieldElem:
        """``(prod theta_i) deg(E) + sum_j fiber_j prod_{i != j} theta_i``."""
        total = self.degree
        for D in classes:
            total = total * D.theta
        for j, Dj in enumerate(classes):
            term = Dj.fiber
            for i, Di in enumerate(classes):
                if i != j:
                    term = term * Di.theta
            total = total + term
        return total


def intersection_number(classes: list[DivClass], E: Bundle) -> FieldElem:
    ring = ChowRing.of(E)
    classes = list(classes)
    if len(classes) != ring.rank:
        raise ArityMismatch(f"need {ring.rank} classes on P(E), got {len(classes)}")
    symbolic = ring.symbolic_product(classes)
    closed = ring.closed_form(classes)
    if symbolic != closed:
        raise AssertionError(f"ring reduction {symbolic} disagrees with closed form {closed}")
    return symbolic


def self_intersection(D: DivClass, E: Bundle) -> FieldElem:
    return intersection_number([D] * ChowRing.of(E).rank, E)


def fiber_restriction_degree(D: DivClass) -> FieldElem:
    return D.theta
