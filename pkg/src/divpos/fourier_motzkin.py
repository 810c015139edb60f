"""Exact Fourier-Motzkin feasibility for systems of ``>=`` / ``>`` rows.

Rows are ``coeffs . x  REL  bound`` with REL in ``{">=", ">"}``.  Strictness
is tracked as a flag through elimination, so no epsilon shifts are needed.
Values may be Fractions or :class:`~divpos.numbers.FieldElem`; any exact
ordered field works.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

GE = ">="
GT = ">"


def _exact(v):
    if isinstance(v, float):
        raise TypeError("floating-point entries are not accepted")
    return Fraction(v) if isinstance(v, int) else v


@dataclass(frozen=True)
class Row:
    coeffs: tuple
    rel: str
    bound: object

    def __post_init__(self):
        if self.rel not in (GE, GT):
            raise ValueError(f"relation must be '>=' or '>', got {self.rel!r}")
        object.__setattr__(self, "coeffs", tuple(_exact(c) for c in self.coeffs))
        object.__setattr__(self, "bound", _exact(self.bound))

    @property
    def strict(self) -> bool:
        return self.rel == GT

    def holds(self, x: Sequence) -> bool:
        lhs = sum((c * v for c, v in zip(self.coeffs, x)), Fraction(0))
        return lhs > self.bound if self.strict else lhs >= self.bound


@dataclass(frozen=True)
class LinearSystem:
    rows: tuple[Row, ...]
    nvars: int

    def __init__(self, rows, nvars: int | None = None):
        rows = tuple(r if isinstance(r, Row) else Row(tuple(r[0]), r[1], r[2]) for r in rows)
        if not rows:
            raise ValueError("a linear system needs at least one row")
        widths = {len(r.coeffs) for r in rows}
        if len(widths) != 1:
            raise ValueError("rows have different widths")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nvars", widths.pop() if nvars is None else nvars)

    def satisfied_by(self, x: Sequence) -> bool:
        return all(r.holds(x) for r in self.rows)


def _normalize(row: Row) -> Row:
    # scale so the first nonzero coefficient has magnitude 1; keeps duplicates detectable
    for c in row.coeffs:
        if c:
            k = c if c > 0 else -c
            return Row(tuple(v / k for v in row.coeffs), row.rel, row.bound / k)
    return row


def _eliminate(rows: list[Row], k: int) -> list[Row]:
    pos, neg, rest = [], [], []
    for r in rows:
        c = r.coeffs[k]
        (pos if c > 0 else neg if c < 0 else rest).append(r)
    out = list(rest)
    for p in pos:
        for q in neg:
            a, b = p.coeffs[k], -q.coeffs[k]
            coeffs = tuple(b * u + a * v for u, v in zip(p.coeffs, q.coeffs))
            rel = GT if (p.strict or q.strict) else GE
            out.append(Row(coeffs, rel, b * p.bound + a * q.bound))
    seen: dict = {}
    for r in map(_normalize, out):
        key = (r.coeffs, r.bound)
        if key not in seen or r.strict:
            seen[key] = r
    return list(seen.values())


def _constant_ok(r: Row) -> bool:
    return 0 > r.bound if r.strict else 0 >= r.bound


def _pick(lower, upper):
    """A value strictly/weakly between the tightest lower and upper bounds."""
    lo, lo_strict = lower if lower else (None, False)
    hi, hi_strict = upper if upper else (None, False)

    def inside(v):
        if lo is not None and (v < lo or (lo_strict and v == lo)):
            return False
        if hi is not None and (v > hi or (hi_strict and v == hi)):
            return False
        return True

    candidates = [Fraction(0)]
    if lo is not None:
        candidates += [lo, lo + 1]
    if hi is not None:
        candidates += [hi, hi - 1]
    if lo is not None and hi is not None:
        candidates.append((lo + hi) / 2)
    for v in candidates:
        if inside(v):
            return v
    return None


def fm_feasible(system: LinearSystem) -> tuple[bool, tuple | None]:
    """Decide feasibility; on success also return a point satisfying every row."""
    n = system.nvars
    stages = [list(system.rows)]
    for k in reversed(range(n)):
        stages.append(_eliminate(stages[-1], k))
    if not all(_constant_ok(r) for r in stages[-1]):
        return False, None

    # back-substitute: stages[n - k] still mentions x_0..x_k only
    x: list = [Fraction(0)] * n
    for k in range(n):
        rows = stages[n - k - 1]
        lower = upper = None
        for r in rows:
            c = r.coeffs[k]
            if not c:
                continue
            rest = sum((r.coeffs[i] * x[i] for i in range(k)), Fraction(0))
            value = (r.bound - rest) / c
            if c > 0:
                if lower is None or value > lower[0] or (value == lower[0] and r.strict):
                    lower = (value, r.strict)
            else:
                if upper is None or value < upper[0] or (value == upper[0] and r.strict):
                    upper = (value, r.strict)
        v = _pick(lower, upper)
        if v is None:
            raise AssertionError("elimination reported feasible but back-substitution failed")
        x[k] = v
    point = tuple(x)
    assert system.satisfied_by(point)
    return True, point
