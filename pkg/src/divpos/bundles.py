"""Slope-level model of vector bundles on a smooth projective curve.

A bundle is either split (a multiset of line-bundle degrees) or given by a
strong Harder-Narasimhan profile: graded pieces ``(rank, degree)`` with
strictly decreasing slopes.  Over the algebraic closure of a finite field a
line bundle is determined, for every question asked here, by its degree.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Union


class CharZero(ValueError):
    """A Frobenius operation was requested on a characteristic-zero curve."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % q for q in range(2, int(n**0.5) + 1))


@dataclass(frozen=True)
class Curve:
    genus: int = 0
    char: int = 0
    over_fpbar: bool = False

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be nonnegative")
        if self.char and not _is_prime(self.char):
            raise ValueError(f"characteristic must be 0 or a prime, got {self.char}")
        if self.over_fpbar and not self.char:
            raise ValueError("a curve over the closure of F_p needs a prime characteristic")

    @property
    def canonical_degree(self) -> int:
        return 2 * self.genus - 2


@dataclass(frozen=True)
class SplitBundle:
    degrees: tuple[int, ...]

    def __init__(self, degrees):
        degrees = tuple(degrees)
        if not degrees:
            raise ValueError("a bundle has rank >= 1")
        if not all(isinstance(d, int) and not isinstance(d, bool) for d in degrees):
            raise TypeError("split bundle degrees must be integers")
        object.__setattr__(self, "degrees", degrees)

    @property
    def rank(self) -> int:
        return len(self.degrees)

    @property
    def degree(self) -> int:
        return sum(self.degrees)

    @property
    def slope(self) -> Fraction:
        return Fraction(self.degree, self.rank)

    def sorted(self) -> SplitBundle:
        return SplitBundle(sorted(self.degrees, reverse=True))


@dataclass(frozen=True)
class HNProfile:
    pieces: tuple[tuple[int, Fraction], ...]

    def __init__(self, pieces):
        pieces = tuple((int(r), Fraction(d)) for r, d in pieces)
        if not pieces:
            raise ValueError("an HN profile has at least one piece")
        if any(r < 1 for r, _ in pieces):
            raise ValueError("piece ranks must be positive")
        slopes = [d / r for r, d in pieces]
        if any(s <= t for s, t in zip(slopes, slopes[1:])):
            raise ValueError(f"slopes must strictly decrease, got {slopes}")
        object.__setattr__(self, "pieces", pieces)

    @property
    def slopes(self) -> list[Fraction]:
        return [d / r for r, d in self.pieces]

    @property
    def rank(self) -> int:
        return sum(r for r, _ in self.pieces)

    @property
    def degree(self) -> Fraction:
        return sum((d for _, d in self.pieces), Fraction(0))

    def __len__(self):
        return len(self.pieces)


Bundle = Union[SplitBundle, HNProfile]


def as_profile(E: Bundle) -> HNProfile:
    return hn_profile(E) if isinstance(E, SplitBundle) else E


def hn_profile(E: SplitBundle) -> HNProfile:
    """Group equal degrees; the filtration of a split bundle is by degree."""
    counts = Counter(E.degrees)
    return HNProfile((n, Fraction(d * n)) for d, n in sorted(counts.items(), reverse=True))


def mu_max(P: Bundle) -> Fraction:
    return as_profile(P).slopes[0]


def mu_min(P: Bundle) -> Fraction:
    return as_profile(P).slopes[-1]


def sym_power(E: SplitBundle, m: int) -> SplitBundle:
    if m < 1:
        raise ValueError("symmetric power needs m >= 1")
    degs = E.degrees
    out = [sum(degs[i] for i in idx)
           for idx in itertools.combinations_with_replacement(range(len(degs)), m)]
    assert len(out) == comb(E.rank + m - 1, m)
    return SplitBundle(out)


def tensor(E: SplitBundle, G: SplitBundle) -> SplitBundle:
    return SplitBundle(d + e for d in E.degrees for e in G.degrees)


def pullback_cover(P: HNProfile, n: int) -> HNProfile:
    """Pull back along a finite cover of degree ``n``."""
    if n < 1:
        raise ValueError("cover degree must be positive")
    return HNProfile((r, n * d) for r, d in P.pieces)


def frobenius_pullback(P: HNProfile, m: int, c: Curve) -> HNProfile:
    if not c.char:
        raise CharZero("Frobenius pullback needs positive characteristic")
    if m < 0:
        raise ValueError("Frobenius power must be nonnegative")
    return pullback_cover(P, c.char**m)


def _splits_at(slopes, m: int, c: Curve) -> bool:
    q = c.char**m
    return all(q * (b - a) + c.canonical_degree < 0 for a, b in zip(slopes, slopes[1:]))


def splitting_frobenius_power(P: HNProfile, c: Curve) -> int:
    """Least ``m >= 0`` making every adjacent extension of ``(F^m)^*`` pieces split.

    Needs ``p^m (mu_{i+1} - mu_i) + 2g - 2 < 0`` for each adjacent pair of
    slopes; the gaps are negative so such ``m`` exists.
    """
    if not c.char:
        raise CharZero("the splitting planner needs positive characteristic")
    if len(P) < 2:
        return 0
    m = 0
    while not _splits_at(P.slopes, m, c):
        m += 1
    return m


def h0_genus0(E: SplitBundle) -> int:
    """Sections of a split bundle on P^1: each O(d) contributes max(d + 1, 0)."""
    return sum(max(d + 1, 0) for d in E.degrees)


def sym_vanishing_holds(P: HNProfile, G: tuple[int, Fraction]) -> bool:
    """Whether ``P`` and ``G`` satisfy the hypotheses under which ``Sym^m(E) ⊗ G`` has no sections.

    Every graded piece must have negative degree and ``G`` nonpositive degree.
    This checks hypotheses only; it computes no cohomology.
    """
    _, g_deg = G
    return all(d < 0 for _, d in P.pieces) and g_deg <= 0
