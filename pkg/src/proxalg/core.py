"""Exact rationals, intervals of [0,1] and the regular open sets of [0,1].

A regular open set is stored as a sorted tuple of pairwise separated
intervals, each open in the subspace topology of [0,1].  Interior endpoints
are always open; the endpoint 0 (resp. 1) is closed exactly when it belongs
to the set.  Structural equality of that canonical form is set equality.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


def q(x) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s or any(ch in s for ch in ".eE"):
            raise ValueError(f"not an exact rational: {x!r}")
        return Fraction(s)
    raise TypeError(f"cannot read {x!r} as a rational")


def fmt_q(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


class MalformedInterval(ValueError):
    pass


class NotWellInside(ValueError):
    """Raised when cl(U) is not contained in V; ``point`` lies in cl(U) but not in V."""

    def __init__(self, point: Fraction):
        super().__init__(f"closure escapes at {fmt_q(point)}")
        self.point = point


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    lo_open: bool = True
    hi_open: bool = True

    def __post_init__(self):
        if not (ZERO <= self.lo <= ONE and ZERO <= self.hi <= ONE):
            raise MalformedInterval(f"interval [{self.lo}, {self.hi}] leaves [0,1]")
        if self.lo > self.hi:
            raise MalformedInterval(f"lo {self.lo} exceeds hi {self.hi}")

    @property
    def empty(self) -> bool:
        return self.lo == self.hi and (self.lo_open or self.hi_open)

    def __contains__(self, x: Fraction) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and self.lo_open:
            return False
        if x == self.hi and self.hi_open:
            return False
        return True

    def to_json(self) -> dict:
        return {"lo": fmt_q(self.lo), "hi": fmt_q(self.hi),
                "lo_open": self.lo_open, "hi_open": self.hi_open}

    @classmethod
    def from_json(cls, obj: dict) -> "Interval":
        return cls(q(obj["lo"]), q(obj["hi"]),
                   bool(obj.get("lo_open", True)), bool(obj.get("hi_open", True)))


def _open_part(lo: Fraction, hi: Fraction) -> Interval:
    # component of a regular open set: closed at 0 or 1 only
    return Interval(lo, hi, lo != ZERO, hi != ONE)


@dataclass(frozen=True)
class RegOpen:
    parts: tuple[Interval, ...] = ()

    @property
    def spans(self) -> tuple[tuple[Fraction, Fraction], ...]:
        return tuple((p.lo, p.hi) for p in self.parts)

    def __contains__(self, x: Fraction) -> bool:
        return any(x in p for p in self.parts)

    def __bool__(self) -> bool:
        return bool(self.parts)

    def __str__(self) -> str:
        if not self.parts:
            return "{}"
        out = []
        for p in self.parts:
            left = "(" if p.lo_open else "["
            right = ")" if p.hi_open else "]"
            out.append(f"{left}{p.lo},{p.hi}{right}")
        return " u ".join(out)

    def to_json(self) -> dict:
        return {"parts": [p.to_json() for p in self.parts]}

    @classmethod
    def from_json(cls, obj: dict) -> "RegOpen":
        """Read and regularize; a non-canonical input is accepted but normalized."""
        return regularize(Interval.from_json(p) for p in obj.get("parts", []))


EMPTY = RegOpen(())
FULL = RegOpen((_open_part(ZERO, ONE),))


def from_spans(spans: Iterable[tuple]) -> RegOpen:
    """Regular open set int(cl(union of the open intervals (lo, hi)))."""
    return regularize(Interval(q(a), q(b)) for a, b in spans)


def _merge_closed(spans: Iterable[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    # union of closed intervals as a sorted list of disjoint, non-touching closed intervals
    merged: list[list[Fraction]] = []
    for lo, hi in sorted(spans):
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]


def regularize(parts: Iterable[Interval]) -> RegOpen:
    """int(cl(union of parts)) in canonical form."""
    closed = [(p.lo, p.hi) for p in parts if not p.empty]
    # interior of a point is empty, even at 0 or 1
    comps = [_open_part(lo, hi) for lo, hi in _merge_closed(closed) if lo < hi]
    return RegOpen(tuple(comps))


def is_regular(u: RegOpen) -> bool:
    return regularize(u.parts) == u


def meet(u: RegOpen, v: RegOpen) -> RegOpen:
    out = []
    for a, b in u.spans:
        for c, d in v.spans:
            lo, hi = max(a, c), min(b, d)
            if lo < hi:
                out.append(Interval(lo, hi))
    return regularize(out)


def join(u: RegOpen, v: RegOpen) -> RegOpen:
    return regularize(u.parts + v.parts)


def complement(u: RegOpen) -> RegOpen:
    gaps = []
    prev = ZERO
    for lo, hi in u.spans:
        if lo > prev:
            gaps.append(Interval(prev, lo, False, False))
        prev = hi
    if not u.parts:
        return FULL
    if prev < ONE:
        gaps.append(Interval(prev, ONE, False, False))
    return regularize(gaps)


def boolean_op(tag: str, u: RegOpen, v: Optional[RegOpen] = None) -> RegOpen:
    if tag == "complement":
        return complement(u)
    if v is None:
        raise ValueError(f"{tag} needs two arguments")
    if tag == "meet":
        return meet(u, v)
    if tag == "join":
        return join(u, v)
    raise ValueError(f"unknown boolean op {tag!r}")


def leq(u: RegOpen, v: RegOpen) -> bool:
    return meet(u, v) == u


def _inside(lo: Fraction, hi: Fraction, c: Fraction, d: Fraction) -> bool:
    # is the closed interval [lo, hi] inside the component of a regular open with span (c, d)?
    left = c < lo or c == lo == ZERO
    right = hi < d or hi == d == ONE
    return left and right


def escape_point(u: RegOpen, v: RegOpen) -> Optional[Fraction]:
    """A point of cl(u) outside v, or None when cl(u) is contained in v."""
    for lo, hi in u.spans:
        host = None
        for c, d in v.spans:
            if (c < lo or c == lo == ZERO) and lo < d:
                host = (c, d)
                break
        if host is None:
            return lo
        c, d = host
        if not _inside(lo, hi, c, d):
            return d
    return None


def closure_contained(u: RegOpen, v: RegOpen) -> bool:
    return escape_point(u, v) is None


def interpolate(u: RegOpen, v: RegOpen) -> RegOpen:
    """Some w with cl(u) inside w and cl(w) inside v.

    Inside each component of v the hull of the parts of u is widened to the
    midpoints of the two gaps separating it from the boundary of v.
    """
    bad = escape_point(u, v)
    if bad is not None:
        raise NotWellInside(bad)
    out = []
    for c, d in v.spans:
        inner = [(lo, hi) for lo, hi in u.spans if c <= lo and hi <= d]
        if not inner:
            continue
        m = min(lo for lo, _ in inner)
        big = max(hi for _, hi in inner)
        lo = m if m == c else (c + m) / 2
        hi = big if big == d else (big + d) / 2
        out.append(Interval(lo, hi))
    return regularize(out)


def erode(u: RegOpen, delta: Fraction) -> RegOpen:
    """Move every interior endpoint inward by delta; monotone and well inside u."""
    out = []
    for lo, hi in u.spans:
        a = lo if lo == ZERO else lo + delta
        b = hi if hi == ONE else hi - delta
        if a < b:
            out.append(Interval(a, b))
    return regularize(out)


def shrink(u: RegOpen) -> RegOpen:
    """Nonempty w with cl(w) inside u for nonempty u: each component pulled toward its midpoint."""
    out = []
    for lo, hi in u.spans:
        out.append(Interval((3 * lo + hi) / 4, (lo + 3 * hi) / 4))
    return regularize(out)


def random_regopen(rng: random.Random, denom: int = 16, max_parts: int = 3) -> RegOpen:
    k = rng.randint(0, max_parts)
    spans = []
    for _ in range(k):
        a, b = sorted(rng.sample(range(denom + 1), 2))
        spans.append((Fraction(a, denom), Fraction(b, denom)))
    return from_spans(spans)


def grid_points(denoms: Sequence[int]) -> list[Fraction]:
    pts = {Fraction(k, n) for n in denoms for k in range(n + 1)}
    return sorted(pts)
