"""Piecewise-constant functions on [0,1], Baire operators and normal functions.

A :class:`StepFn` carries breakpoints ``0 = x0 < ... < xm = 1``, a value on
each open cell and a value at each breakpoint.  The Baire operators only
change point values, and the normalization (f*)_* depends on the cell values
alone, so the normal functions are in bijection with their cell data.

:class:`PL` is an exact continuous piecewise-linear function; it supplies the
continuous interpolants that do not exist among step functions.
"""

from __future__ import annotations

import bisect
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from . import core
from .core import RegOpen, fmt_q, q
from .verdict import InputError

ZERO, ONE = Fraction(0), Fraction(1)


@dataclass(frozen=True)
class StepFn:
    xs: tuple[Fraction, ...]
    cs: tuple[Fraction, ...]
    vs: tuple[Fraction, ...]

    def __post_init__(self):
        xs = self.xs
        if len(xs) < 2 or xs[0] != ZERO or xs[-1] != ONE:
            raise InputError("breakpoints must run from 0 to 1")
        if any(a >= b for a, b in zip(xs, xs[1:])):
            raise InputError("breakpoints must increase strictly")
        if len(self.cs) != len(xs) - 1 or len(self.vs) != len(xs):
            raise InputError("value lists do not match the breakpoints")

    def __call__(self, x: Fraction) -> Fraction:
        return value_at(self, x)

    def to_json(self) -> dict:
        return {"x": [fmt_q(x) for x in self.xs], "c": [fmt_q(c) for c in self.cs],
                "v": [fmt_q(v) for v in self.vs]}

    @classmethod
    def from_json(cls, obj: dict) -> "StepFn":
        try:
            xs = tuple(q(x) for x in obj["x"])
            cs = tuple(q(c) for c in obj["c"])
            vs = tuple(q(v) for v in obj["v"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad step function: {exc}") from exc
        return step(xs, cs, vs)

    def min_value(self) -> Fraction:
        return min(self.cs + self.vs)

    def max_value(self) -> Fraction:
        return max(self.cs + self.vs)


def step(xs: Iterable, cs: Iterable, vs: Iterable) -> StepFn:
    """Canonical step function: redundant breakpoints removed."""
    xs, cs, vs = [q(x) for x in xs], [q(c) for c in cs], [q(v) for v in vs]
    StepFn(tuple(xs), tuple(cs), tuple(vs))
    keep_x, keep_c, keep_v = [xs[0]], [], [vs[0]]
    for i in range(1, len(xs)):
        c = cs[i - 1]
        if i < len(xs) - 1 and cs[i] == c and vs[i] == c:
            continue
        keep_c.append(c)
        keep_x.append(xs[i])
        keep_v.append(vs[i])
    return StepFn(tuple(keep_x), tuple(keep_c), tuple(keep_v))


def const(c) -> StepFn:
    c = q(c)
    return StepFn((ZERO, ONE), (c,), (c, c))


def _locate(f: StepFn, x: Fraction):
    # (True, i) when x == xs[i]; (False, i) when x lies in cell i
    k = bisect.bisect_left(f.xs, x)
    if k < len(f.xs) and f.xs[k] == x:
        return True, k
    return False, k - 1


def value_at(f: StepFn, x: Fraction) -> Fraction:
    x = q(x)
    if not ZERO <= x <= ONE:
        raise ValueError("point outside [0,1]")
    at, i = _locate(f, x)
    return f.vs[i] if at else f.cs[i]


def refine(f: StepFn, xs: Sequence[Fraction]) -> tuple[list, list]:
    """Cell and point values of f on a finer breakpoint list."""
    cs = [value_at(f, (a + b) / 2) for a, b in zip(xs, xs[1:])]
    vs = [value_at(f, x) for x in xs]
    return cs, vs


def merged_breaks(*fs: StepFn) -> list[Fraction]:
    out = set()
    for f in fs:
        out.update(f.xs)
    return sorted(out)


def upper(f: StepFn) -> StepFn:
    """f*: point values raised to the largest adjacent value."""
    m = len(f.cs)
    vs = []
    for i, v in enumerate(f.vs):
        nb = [f.cs[j] for j in (i - 1, i) if 0 <= j < m]
        vs.append(max([v] + nb))
    return step(f.xs, f.cs, vs)


def lower(f: StepFn) -> StepFn:
    m = len(f.cs)
    vs = []
    for i, v in enumerate(f.vs):
        nb = [f.cs[j] for j in (i - 1, i) if 0 <= j < m]
        vs.append(min([v] + nb))
    return step(f.xs, f.cs, vs)


def baire(tag: str, f: StepFn) -> StepFn:
    if tag == "upper":
        return upper(f)
    if tag == "lower":
        return lower(f)
    raise InputError(f"unknown Baire operator {tag!r}")


def _normal_points(cs: Sequence[Fraction]) -> list[Fraction]:
    return [cs[0]] + [min(a, b) for a, b in zip(cs, cs[1:])] + [cs[-1]]


def normalize(f: StepFn) -> StepFn:
    return lower(upper(f))


def from_cells(xs: Sequence[Fraction], cs: Sequence[Fraction]) -> StepFn:
    """The normal function with the given cell values."""
    return step(xs, cs, _normal_points(cs))


def is_normal(f: StepFn) -> bool:
    return list(f.vs) == _normal_points(f.cs)


def leq(f: StepFn, g: StepFn) -> bool:
    xs = merged_breaks(f, g)
    fc, fv = refine(f, xs)
    gc, gv = refine(g, xs)
    return all(a <= b for a, b in zip(fc, gc)) and all(a <= b for a, b in zip(fv, gv))


def pointwise(f: StepFn, g: StepFn, op: Callable) -> StepFn:
    xs = merged_breaks(f, g)
    fc, fv = refine(f, xs)
    gc, gv = refine(g, xs)
    return step(xs, [op(a, b) for a, b in zip(fc, gc)], [op(a, b) for a, b in zip(fv, gv)])


def pointwise_map(f: StepFn, op: Callable) -> StepFn:
    return step(f.xs, [op(c) for c in f.cs], [op(v) for v in f.vs])


def add(f, g):
    return normalize(pointwise(f, g, lambda a, b: a + b))


def neg(f):
    return normalize(pointwise_map(f, lambda a: -a))


def scale(s, f):
    s = q(s)
    return normalize(pointwise_map(f, lambda a: s * a))


def mul(f, g):
    # normalization only sees cell values, so this equals the bilinear extension
    return normalize(pointwise(f, g, lambda a, b: a * b))


def join(f, g):
    return normalize(pointwise(f, g, max))


def meet(f, g):
    h = pointwise(f, g, min)
    if is_normal(f) and is_normal(g):
        assert is_normal(h), "meet of normal functions must be normal"
    return h


def fn_op(tag: str, f: StepFn, g=None) -> StepFn:
    if tag == "neg":
        return neg(f)
    if tag == "scalar":
        return scale(g, f)
    ops = {"add": add, "mul": mul, "join": join, "meet": meet}
    if tag not in ops:
        raise InputError(f"unknown operation {tag!r}")
    return ops[tag](f, g)


def positive(f):
    return join(f, const(0))


def negative(f):
    return join(neg(f), const(0))


# ---------------------------------------------------------------- proximities

def kt_proximity(f: StepFn, g: StepFn) -> bool:
    """f < g iff the upper regularization of f lies below g."""
    return leq(upper(f), g)


@dataclass(frozen=True)
class GridSet:
    """A subset of [0,1] that is a union of cells and breakpoints of a grid."""

    xs: tuple
    cells: tuple
    points: tuple

    def closure(self) -> "GridSet":
        pts = []
        for i, p in enumerate(self.points):
            left = i > 0 and self.cells[i - 1]
            right = i < len(self.cells) and self.cells[i]
            pts.append(p or left or right)
        return GridSet(self.xs, self.cells, tuple(pts))

    def __le__(self, other: "GridSet") -> bool:
        return (all(b or not a for a, b in zip(self.cells, other.cells))
                and all(b or not a for a, b in zip(self.points, other.points)))


def level_set(f: StepFn, r: Fraction, xs: Sequence[Fraction]) -> GridSet:
    """f^-1[r, oo) on a grid refining the breakpoints of f."""
    cs, vs = refine(f, xs)
    return GridSet(tuple(xs), tuple(c >= r for c in cs), tuple(v >= r for v in vs))


def threshold_proximity(f: StepFn, g: StepFn) -> bool:
    """cl(f^-1[r,oo)) inside g^-1[r,oo) for every r; the value set of f and g suffices."""
    xs = merged_breaks(f, g)
    levels = sorted(set(f.cs + f.vs + g.cs + g.vs))
    return all(level_set(f, r, xs).closure() <= level_set(g, r, xs) for r in levels)


# ---------------------------------------------------------------- idempotents

def chi(u: RegOpen) -> StepFn:
    """Normal characteristic function of a regular open set."""
    xs = sorted({ZERO, ONE} | {x for span in u.spans for x in span})
    cs = [ONE if (a + b) / 2 in u else ZERO for a, b in zip(xs, xs[1:])]
    return from_cells(xs, cs)


def is_idempotent(f: StepFn) -> bool:
    return is_normal(f) and set(f.cs) <= {ZERO, ONE}


def region(e: StepFn) -> RegOpen:
    """The regular open set on which an idempotent normal function is 1."""
    if not is_idempotent(e):
        raise InputError("not a normal idempotent")
    return core.regularize(core.Interval(a, b) for a, b, c in zip(e.xs, e.xs[1:], e.cs) if c == ONE)


def idempotent_dictionary(direction: str, x):
    if direction == "forward":
        return chi(x)
    if direction == "backward":
        return region(x)
    raise InputError(f"unknown direction {direction!r}")


# ---------------------------------------------------------------- flat view

def level_regions(f: StepFn) -> list[tuple[Fraction, RegOpen]]:
    """Threshold data of a normal f: each cell value w with the region where f >= w."""
    if not is_normal(f):
        raise InputError("threshold data needs a normal function")
    out = []
    for w in sorted(set(f.cs)):
        cells = [core.Interval(a, b) for a, b, c in zip(f.xs, f.xs[1:], f.cs) if c >= w]
        out.append((w, core.regularize(cells)))
    return out


def to_flat(f: StepFn):
    from .boolalg import RegOpenAlgebra
    from .specker import FlatElem

    return FlatElem(RegOpenAlgebra(), tuple(level_regions(f)))


def from_flat(a) -> StepFn:
    """Cell value = largest threshold whose region contains the cell."""
    xs = sorted({ZERO, ONE} | {x for _, e in a.steps for span in e.spans for x in span})
    cs = []
    for lo, hi in zip(xs, xs[1:]):
        mid = (lo + hi) / 2
        cs.append(max(r for r, e in a.steps if mid in e))
    return from_cells(xs, cs)


@dataclass(frozen=True)
class ClaimReport:
    kt: bool
    threshold: bool
    componentwise: bool

    @property
    def agree(self) -> bool:
        return self.kt == self.threshold == self.componentwise

    def to_json(self) -> dict:
        return {"kt": self.kt, "threshold": self.threshold,
                "componentwise": self.componentwise, "agree": self.agree}


def componentwise_proximity(f: StepFn, g: StepFn) -> bool:
    """ei < fi for the compatible decreasing forms of f and g."""
    from .specker import compatible_forms

    _, es, fs = compatible_forms(to_flat(f), to_flat(g))
    return all(core.closure_contained(e, h) for e, h in zip(es, fs))


def claim_equivalence(f: StepFn, g: StepFn) -> ClaimReport:
    if not (is_normal(f) and is_normal(g)):
        raise InputError("claim needs normal functions")
    return ClaimReport(kt_proximity(f, g), threshold_proximity(f, g), componentwise_proximity(f, g))


# ---------------------------------------------------------------- continuous witnesses

@dataclass(frozen=True)
class PL:
    """Continuous piecewise-linear function given by its values at breakpoints."""

    xs: tuple[Fraction, ...]
    ys: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.xs) < 2 or self.xs[0] != ZERO or self.xs[-1] != ONE:
            raise InputError("breakpoints must run from 0 to 1")
        if len(self.ys) != len(self.xs) or any(a >= b for a, b in zip(self.xs, self.xs[1:])):
            raise InputError("malformed piecewise-linear data")

    def __call__(self, x: Fraction) -> Fraction:
        k = bisect.bisect_left(self.xs, x)
        if self.xs[k] == x:
            return self.ys[k]
        x0, x1, y0, y1 = self.xs[k - 1], self.xs[k], self.ys[k - 1], self.ys[k]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def refined(self, xs: Iterable[Fraction]) -> "PL":
        pts = sorted(set(self.xs) | set(xs))
        return PL(tuple(pts), tuple(self(x) for x in pts))

    def with_level_crossings(self, level: Fraction) -> "PL":
        extra = []
        for x0, x1, y0, y1 in zip(self.xs, self.xs[1:], self.ys, self.ys[1:]):
            if (y0 - level) * (y1 - level) < 0:
                extra.append(x0 + (level - y0) * (x1 - x0) / (y1 - y0))
        return self.refined(extra)

    def map(self, fn: Callable[[Fraction], Fraction], level: Fraction) -> "PL":
        """Apply a function that is affine on each side of ``level``."""
        h = self.with_level_crossings(level)
        return PL(h.xs, tuple(fn(y) for y in h.ys))


def pl_const(c) -> PL:
    c = q(c)
    return PL((ZERO, ONE), (c, c))


def pl_le_step(h: PL, f: StepFn) -> bool:
    """h <= f everywhere (exact: linear pieces versus constant cells)."""
    xs = sorted(set(h.xs) | set(f.xs))
    cs, vs = refine(f, xs)
    hy = [h(x) for x in xs]
    if any(a > b for a, b in zip(hy, vs)):
        return False
    return all(max(hy[i], hy[i + 1]) <= cs[i] for i in range(len(cs)))


def step_le_pl(f: StepFn, h: PL) -> bool:
    xs = sorted(set(h.xs) | set(f.xs))
    cs, vs = refine(f, xs)
    hy = [h(x) for x in xs]
    if any(b > a for a, b in zip(hy, vs)):
        return False
    return all(cs[i] <= min(hy[i], hy[i + 1]) for i in range(len(cs)))


def pl_vanishes_off(h: PL, e: StepFn) -> bool:
    """h is zero wherever the idempotent e is zero, i.e. h = h e."""
    xs = sorted(set(h.xs) | set(e.xs))
    cs, vs = refine(e, xs)
    hy = [h(x) for x in xs]
    if any(v == 0 and y != 0 for v, y in zip(vs, hy)):
        return False
    return all(hy[i] == 0 == hy[i + 1] for i, c in enumerate(cs) if c == 0)


def pl_support(h: PL) -> RegOpen:
    """int(cl{h != 0}), the idempotent generating the double annihilator of h."""
    parts = [core.Interval(x0, x1) for x0, x1, y0, y1 in zip(h.xs, h.xs[1:], h.ys, h.ys[1:])
             if y0 != 0 or y1 != 0]
    return core.regularize(parts)


def urysohn(u: RegOpen, v: RegOpen) -> PL:
    """Continuous h with h = 1 on cl(u), h = 0 off v and 0 <= h <= 1; needs cl(u) inside v."""
    bad = core.escape_point(u, v)
    if bad is not None:
        raise core.NotWellInside(bad)
    pts: dict = {ZERO: ZERO, ONE: ZERO}
    for c, d in v.spans:
        inner = [(lo, hi) for lo, hi in u.spans if c <= lo and hi <= d]
        if not inner:
            continue
        m = min(lo for lo, _ in inner)
        big = max(hi for _, hi in inner)
        pts[c] = ONE if c == m == ZERO else ZERO
        pts[m] = ONE
        pts[big] = ONE
        pts[d] = ONE if d == big == ONE else ZERO
    xs = sorted(pts)
    return PL(tuple(xs), tuple(pts[x] for x in xs))


def kt_witness(f: StepFn, g: StepFn) -> Optional[PL]:
    """A continuous h with f* <= h <= g when f < g: interpolate f* linearly."""
    uf = upper(f)
    xs = merged_breaks(f, g)
    h = PL(tuple(xs), tuple(value_at(uf, x) for x in xs))
    if step_le_pl(uf, h) and pl_le_step(h, g):
        return h
    return None


def constant_witness(f: StepFn, g: StepFn) -> Optional[Fraction]:
    """A reflexive step function (a constant) between f* and g, if one exists."""
    top, bottom = upper(f).max_value(), g.min_value()
    if top > bottom:
        return None
    c = (top + bottom) / 2
    k = const(c)
    assert kt_proximity(f, k) and kt_proximity(k, g) and kt_proximity(k, k)
    return c


# ---------------------------------------------------------------- algebra handle

def random_stepfn(rng: random.Random, max_cells: int = 4, denom: int = 8,
                  values: Sequence[Fraction] = tuple(Fraction(k, 2) for k in range(-4, 7)),
                  normal: bool = True) -> StepFn:
    m = rng.randint(1, max_cells)
    inner = sorted(rng.sample(range(1, denom), min(m - 1, denom - 1)))
    xs = [ZERO] + [Fraction(k, denom) for k in inner] + [ONE]
    cs = [rng.choice(values) for _ in range(len(xs) - 1)]
    if normal:
        return from_cells(xs, cs)
    return step(xs, cs, [rng.choice(values) for _ in xs])


def dilate(f: StepFn, rng: random.Random, bump: Sequence[Fraction] = (ZERO, Fraction(1, 2), ONE)) -> StepFn:
    """A normal g with f < g, built on the midpoint refinement of f."""
    uf = upper(f)
    xs = list(f.xs)
    lift = [value_at(uf, x) + rng.choice(bump) for x in xs]
    fine, cells = [], []
    for i in range(len(xs) - 1):
        mid = (xs[i] + xs[i + 1]) / 2
        fine += [xs[i], mid]
        cells += [lift[i], lift[i + 1]]
    fine.append(ONE)
    return from_cells(fine, cells)


def midpoint_interpolant(f: StepFn, g: StepFn) -> Optional[StepFn]:
    """Normal c with f < c < g: on the half cell next to each breakpoint, the
    average of f* and g there."""
    if not kt_proximity(f, g):
        return None
    uf = upper(f)
    xs = merged_breaks(f, g)
    mid = [(value_at(uf, x) + value_at(g, x)) / 2 for x in xs]
    fine, cells = [], []
    for i in range(len(xs) - 1):
        fine += [xs[i], (xs[i] + xs[i + 1]) / 2]
        cells += [mid[i], mid[i + 1]]
    fine.append(ONE)
    return from_cells(fine, cells)


class StepAlgebra:
    """Finitely valued normal functions on [0,1] with the proximity f* <= g."""

    kind = "stepfn"
    name = "stepfn"

    def __init__(self, max_cells: int = 4):
        self.max_cells = max_cells

    const = staticmethod(const)
    add = staticmethod(add)
    neg = staticmethod(neg)
    mul = staticmethod(mul)
    meet = staticmethod(meet)
    join = staticmethod(join)
    leq = staticmethod(leq)
    rel = staticmethod(kt_proximity)

    def scale(self, s, f):
        return scale(s, f)

    def encode(self, f: StepFn) -> dict:
        return f.to_json()

    def decode(self, obj) -> StepFn:
        f = StepFn.from_json(obj)
        if not is_normal(f):
            raise InputError("elements of the normal algebra must be normal")
        return f

    def random(self, rng: random.Random) -> StepFn:
        return random_stepfn(rng, self.max_cells)

    def related_pair(self, rng: random.Random):
        f = random_stepfn(rng, max(1, self.max_cells - 1))
        return f, dilate(f, rng)

    def interpolant(self, f, g):
        return midpoint_interpolant(f, g)

    def positive_below(self, f: StepFn) -> Optional[StepFn]:
        best = max(range(len(f.cs)), key=lambda i: f.cs[i])
        c = f.cs[best]
        if c <= 0:
            return None
        lo, hi = f.xs[best], f.xs[best + 1]
        w = core.from_spans([((3 * lo + hi) / 4, (lo + 3 * hi) / 4)])
        return scale(c, chi(w))
