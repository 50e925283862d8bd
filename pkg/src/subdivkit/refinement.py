"""Exact refinement of control polygons.

Closed polygons wrap indices cyclically.  Open polygons keep only refined
points whose stencil lies entirely inside the data, so nothing is ever
extrapolated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .numeric import format_rational, parse_number
from .scheme import Stencil, SubdivisionScheme, stencils

Point = tuple[Fraction, ...]


class TooFewPoints(ValueError):
    """An open polygon is too short for the scheme's stencils."""


class PolygonFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Polygon:
    points: tuple[Point, ...]
    closed: bool = True

    def __post_init__(self) -> None:
        pts = tuple(tuple(Fraction(x) for x in p) for p in self.points)
        if len(pts) < (3 if self.closed else 2):
            kind = "closed" if self.closed else "open"
            raise ValueError(f"a {kind} polygon needs at least {3 if self.closed else 2} points")
        dims = {len(p) for p in pts}
        if len(dims) != 1 or 0 in dims:
            raise ValueError("all points must share one positive dimension")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_points(cls, points: Iterable[Sequence], closed: bool = True) -> Polygon:
        return cls(tuple(tuple(p) for p in points), closed)

    @property
    def topology(self) -> str:
        return "closed" if self.closed else "open"

    @property
    def dimension(self) -> int:
        return len(self.points[0])

    def __len__(self) -> int:
        return len(self.points)

    def map_points(self, f) -> Polygon:
        return Polygon(tuple(f(p) for p in self.points), self.closed)


@dataclass(frozen=True)
class RefinementTrace:
    levels: tuple[Polygon, ...]
    scheme: SubdivisionScheme

    @property
    def steps(self) -> int:
        return len(self.levels) - 1

    @property
    def final(self) -> Polygon:
        return self.levels[-1]


def _combine(stencil: Stencil, pts: Sequence[Point], base: int, wrap: int | None) -> Point:
    dim = len(pts[0])
    acc = [Fraction(0)] * dim
    for o, w in zip(stencil.offsets, stencil.weights):
        j = base + o
        p = pts[j % wrap] if wrap else pts[j]
        for d in range(dim):
            acc[d] += w * p[d]
    return tuple(acc)


def _layout(p: Polygon, scheme: SubdivisionScheme) -> list[tuple[int, int, Stencil]]:
    """``(phi, phase, stencil)`` for every refined point, in output order."""
    r = scheme.mask.arity
    rules = {st.phase: st for st in stencils(scheme)}
    n = len(p)
    if p.closed:
        out = []
        for i in range(r * n):
            phase = (i + r // 2) % r - r // 2
            out.append(((i - phase) // r, phase, rules[phase]))
        return out
    widest = max(st.width for st in rules.values())
    if n < widest:
        raise TooFewPoints(
            f"open polygon has {n} points but {scheme.name or 'the scheme'} needs at least {widest}"
        )
    entries = []
    for phase, st in rules.items():
        if not st.offsets:
            continue
        lo, hi = st.offsets[0], st.offsets[-1]
        for phi in range(-lo, n - hi):
            entries.append((r * phi + phase, phi, phase, st))
    entries.sort(key=lambda e: e[0])
    if len(entries) < 2:
        raise TooFewPoints(f"open polygon of {n} points refines to fewer than 2 points")
    return [(phi, phase, st) for _, phi, phase, st in entries]


def refine_once(p: Polygon, scheme: SubdivisionScheme) -> Polygon:
    """One step of ``g'[i] = sum_j mask[i - r*j] g[j]``."""
    wrap = len(p) if p.closed else None
    pts = p.points
    return Polygon(tuple(_combine(st, pts, phi, wrap) for phi, _, st in _layout(p, scheme)), p.closed)


def refine(p: Polygon, scheme: SubdivisionScheme, steps: int) -> RefinementTrace:
    if steps < 0:
        raise ValueError(f"steps must be non-negative, got {steps}")
    levels = [p]
    for _ in range(steps):
        levels.append(refine_once(levels[-1], scheme))
    return RefinementTrace(tuple(levels), scheme)


def _source_offset(st: Stencil) -> int:
    total = st.total()
    if total != 0:
        centre = sum((o * w for o, w in zip(st.offsets, st.weights)), Fraction(0)) / total
    else:
        centre = Fraction(sum(st.offsets), len(st.offsets))
    return math.floor(centre + Fraction(1, 2))


def step_displacements(trace: RefinementTrace) -> list[Fraction]:
    """Per step, the largest L-infinity hop from a refined point to its source point.

    The source of a refined point is the coarse point nearest to its
    stencil's weighted centre of mass.
    """
    if len(trace.levels) < 2:
        raise ValueError("need at least two levels")
    hops = []
    for coarse, fine in zip(trace.levels, trace.levels[1:]):
        n = len(coarse)
        best = Fraction(0)
        for (phi, _, st), q in zip(_layout(coarse, trace.scheme), fine.points):
            if not st.offsets:
                continue
            j = phi + _source_offset(st)
            j = j % n if coarse.closed else min(max(j, 0), n - 1)
            src = coarse.points[j]
            best = max(best, max(abs(a - b) for a, b in zip(q, src)))
        hops.append(best)
    return hops


def displacement_bound(trace: RefinementTrace) -> Fraction:
    return max(step_displacements(trace))


# ---------------------------------------------------------------------------
# CSV polygons
# ---------------------------------------------------------------------------


def parse_polygon(text: str) -> Polygon:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise PolygonFormatError("empty polygon file")
    header = lines[0].lower()
    if header not in ("closed", "open"):
        raise PolygonFormatError(f"first line must be 'closed' or 'open', got {lines[0]!r}")
    points = []
    for lineno, line in enumerate(lines[1:], start=2):
        try:
            points.append(tuple(parse_number(tok) for tok in line.split(",")))
        except ValueError as exc:
            raise PolygonFormatError(f"line {lineno}: {exc}") from exc
    try:
        return Polygon(tuple(points), header == "closed")
    except ValueError as exc:
        raise PolygonFormatError(str(exc)) from exc


def format_polygon(p: Polygon) -> str:
    rows = [p.topology]
    rows += [",".join(format_rational(x) for x in pt) for pt in p.points]
    return "\n".join(rows) + "\n"


def load_polygon(path: str | Path) -> Polygon:
    return parse_polygon(Path(path).read_text(encoding="utf-8"))


def save_polygon(p: Polygon, path: str | Path) -> None:
    Path(path).write_text(format_polygon(p), encoding="utf-8")
