"""Finite unions of half-open rational boxes in the unit cube.

The ambient space is ``[0, 1)^n``: boxes are products of ``[lo, hi)`` so unions
and grid partitions tile without double-counting boundaries.  The face
``x_f = 1`` is outside the ambient space and carries no mass.
"""

from __future__ import annotations

import bisect
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .hfunc import INDICATOR, HFunction
from .space import as_fraction, frac_str

Interval = tuple[Fraction, Fraction]


class BoxError(ValueError):
    """Malformed box or box event."""


@dataclass(frozen=True, order=True)
class Box:
    intervals: tuple[Interval, ...]

    def __init__(self, intervals: Iterable[Sequence]):
        ivs = []
        for iv in intervals:
            lo, hi = (as_fraction(x) for x in iv)
            if not 0 <= lo <= 1 or not 0 <= hi <= 1:
                raise BoxError(f"endpoint outside [0, 1] in [{lo}, {hi})")
            if lo > hi:
                raise BoxError(f"interval [{lo}, {hi}) has lo > hi")
            ivs.append((lo, hi))
        object.__setattr__(self, "intervals", tuple(ivs))

    @property
    def n(self) -> int:
        return len(self.intervals)

    def is_empty(self) -> bool:
        return any(lo == hi for lo, hi in self.intervals)

    def volume(self) -> Fraction:
        return math.prod((hi - lo for lo, hi in self.intervals), start=Fraction(1))

    def intersects(self, other: Box) -> bool:
        return all(
            max(a0, b0) < min(a1, b1)
            for (a0, a1), (b0, b1) in zip(self.intervals, other.intervals)
        )

    def contains_point(self, point: Sequence[Fraction]) -> bool:
        return all(lo <= x < hi for (lo, hi), x in zip(self.intervals, point))

    def minus(self, other: Box) -> list[Box]:
        """``self \\ other`` as disjoint boxes."""
        if not self.intersects(other):
            return [self]
        pieces = []
        core = list(self.intervals)
        for i, ((lo, hi), (olo, ohi)) in enumerate(zip(self.intervals, other.intervals)):
            if lo < olo:
                pieces.append(Box(core[:i] + [(lo, olo)] + core[i + 1 :]))
            if ohi < hi:
                pieces.append(Box(core[:i] + [(ohi, hi)] + core[i + 1 :]))
            core[i] = (max(lo, olo), min(hi, ohi))
        return pieces


@dataclass(frozen=True)
class BoxEvent:
    n: int
    boxes: tuple[Box, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise BoxError("dimension must be at least 1")
        boxes = tuple(b if isinstance(b, Box) else Box(b) for b in self.boxes)
        for b in boxes:
            if b.n != self.n:
                raise BoxError(f"box of dimension {b.n} in a {self.n}-dimensional event")
        object.__setattr__(self, "boxes", boxes)

    @classmethod
    def full(cls, n: int) -> BoxEvent:
        return cls(n, (Box([(0, 1)] * n),))

    @classmethod
    def empty(cls, n: int) -> BoxEvent:
        return cls(n, ())


@dataclass(frozen=True)
class NullSlice:
    """The hyperplane ``x_coord = at``, added to (or removed from) an event."""

    coord: int
    at: Fraction
    include: bool = True


@dataclass(frozen=True)
class SlicedBoxEvent:
    """A box event modified by hyperplane slices, applied in order.

    Measures and revised influences see only ``base``; the BKKKL line
    evaluator also sees the slices.
    """

    base: BoxEvent
    slices: tuple[NullSlice, ...] = field(default=())

    @property
    def n(self) -> int:
        return self.base.n


def add_null_slice(b, e: int, at, *, include: bool = True) -> SlicedBoxEvent:
    at = as_fraction(at)
    if not 0 <= at <= 1:
        raise BoxError(f"slice position {at} outside [0, 1]")
    if isinstance(b, SlicedBoxEvent):
        base, slices = b.base, b.slices
    else:
        base, slices = b, ()
    if not 0 <= e < base.n:
        raise BoxError(f"coordinate {e} out of range")
    return SlicedBoxEvent(base, slices + (NullSlice(e, at, include),))


def _base(b) -> BoxEvent:
    return b.base if isinstance(b, SlicedBoxEvent) else b


def _merge_pass(boxes: list[Box], i: int) -> list[Box]:
    groups: dict[tuple, list[Interval]] = {}
    for bx in boxes:
        key = bx.intervals[:i] + bx.intervals[i + 1 :]
        groups.setdefault(key, []).append(bx.intervals[i])
    out = []
    for key, ivs in groups.items():
        ivs.sort()
        merged = [ivs[0]]
        for lo, hi in ivs[1:]:
            if lo == merged[-1][1]:
                merged[-1] = (merged[-1][0], hi)
            else:
                merged.append((lo, hi))
        out.extend(Box(key[:i] + (iv,) + key[i:]) for iv in merged)
    return out


def merge_adjacent(boxes: Iterable[Box], n: int) -> list[Box]:
    """Fuse disjoint boxes that differ in one coordinate and touch there."""
    cur = sorted(boxes)
    while True:
        before = len(cur)
        for i in range(n):
            cur = _merge_pass(cur, i)
        cur.sort()
        if len(cur) == before:
            return cur


def normalize(b: BoxEvent, *, assume_disjoint: bool = False) -> BoxEvent:
    """Equivalent union of pairwise-disjoint, maximally merged, sorted boxes."""
    disjoint: list[Box] = []
    for bx in b.boxes:
        if bx.is_empty():
            continue
        if assume_disjoint:
            disjoint.append(bx)
            continue
        pieces = [bx]
        for other in disjoint:
            pieces = [q for p in pieces for q in p.minus(other)]
            if not pieces:
                break
        disjoint.extend(pieces)
    return BoxEvent(b.n, tuple(merge_adjacent(disjoint, b.n)))


def box_measure(b) -> Fraction:
    return sum((bx.volume() for bx in _base(b).boxes), Fraction(0))


def _lcm_int(values: Iterable[Fraction]) -> int:
    return math.lcm(1, *(v.denominator for v in values))


def box_section_profile(
    b, e: int, extra_cuts: Mapping[int, Iterable] | None = None
) -> dict[Fraction, Fraction]:
    """Map e-section measure -> total volume of grid cells with that section.

    The grid over the coordinates other than ``e`` is cut at every box
    endpoint (plus ``extra_cuts`` and, for a sliced event, its slice
    positions); the e-section measure is constant on each cell.  Boxes
    must be pairwise disjoint.
    """
    base = _base(b)
    n = base.n
    if not 0 <= e < n:
        raise BoxError(f"coordinate {e} out of range for n={n}")
    extra = {f: [as_fraction(x) for x in xs] for f, xs in (extra_cuts or {}).items()}
    if isinstance(b, SlicedBoxEvent):
        for s in b.slices:
            extra.setdefault(s.coord, []).append(s.at)
    others = [f for f in range(n) if f != e]
    cuts = []
    for f in others:
        pts = {Fraction(0), Fraction(1)}
        pts.update(x for bx in base.boxes for x in bx.intervals[f])
        pts.update(extra.get(f, ()))
        cuts.append(sorted(pts))
    shape = tuple(len(c) - 1 for c in cuts)

    boxes = [bx for bx in base.boxes if not bx.is_empty()]
    lden = _lcm_int(bx.intervals[e][1] - bx.intervals[e][0] for bx in boxes)
    sec = np.zeros(shape, dtype=object)
    for bx in boxes:
        lo, hi = bx.intervals[e]
        idx = tuple(
            slice(bisect.bisect_left(c, bx.intervals[f][0]), bisect.bisect_left(c, bx.intervals[f][1]))
            for c, f in zip(cuts, others)
        )
        sec[idx] += int((hi - lo) * lden)

    if any(s > lden for s in sec.ravel()):
        raise BoxError("overlapping boxes; normalize the event first")

    vol = np.ones((), dtype=object)
    vden = 1
    for c in cuts:
        widths = [hi - lo for lo, hi in zip(c, c[1:])]
        q = _lcm_int(widths)
        vol = np.multiply.outer(vol, np.array([int(w * q) for w in widths], dtype=object))
        vden *= q

    profile: dict[Fraction, Fraction] = {}
    for s, v in zip(sec.ravel(), vol.ravel()):
        key = Fraction(s, lden)
        profile[key] = profile.get(key, 0) + v
    return {s: Fraction(v, vden) for s, v in sorted(profile.items()) if v}


def box_h_influence(b, e: int, h: HFunction, extra_cuts=None) -> Fraction:
    return sum(
        (v * h(s) for s, v in box_section_profile(b, e, extra_cuts).items()),
        Fraction(0),
    )


def box_influence(b, e: int, extra_cuts=None) -> Fraction:
    return box_h_influence(b, e, INDICATOR, extra_cuts)


def box_section_at(b, e: int, point: Sequence) -> Fraction:
    """Length of the e-section of ``b`` through ``point`` (its e-coordinate is ignored)."""
    point = [as_fraction(x) for x in point]
    total = Fraction(0)
    for bx in _base(b).boxes:
        if all(
            lo <= x < hi for f, ((lo, hi), x) in enumerate(zip(bx.intervals, point)) if f != e
        ):
            lo, hi = bx.intervals[e]
            total += hi - lo
    return total


def line_nonconstancy(b, e: int) -> Fraction:
    """Measure of lines in direction ``e`` on which the point set is not constant.

    Lines are indexed by the other coordinates.  Slices across other
    coordinates touch only a null set of lines; a slice across ``e`` meets
    every line in one point.
    """
    status: dict[Fraction, bool] = {}
    if isinstance(b, SlicedBoxEvent):
        for s in b.slices:
            if s.coord == e and s.at < 1:
                status[s.at] = s.include
    adds = any(status.values())
    removes = not all(status.values())
    total = Fraction(0)
    for s, v in box_section_profile(b, e).items():
        if 0 < s < 1 or (s == 0 and adds) or (s == 1 and removes):
            total += v
    return total


def boxes_from_json(doc, n: int | None = None) -> BoxEvent:
    """Parse ``[[["lo", "hi"], ...], ...]`` (or ``{"n": .., "boxes": ..}``)."""
    if isinstance(doc, dict):
        n = doc.get("n", n)
        doc = doc["boxes"]
    boxes = tuple(Box(bx) for bx in doc)
    if n is None:
        if not boxes:
            raise BoxError("cannot infer dimension of an empty box list")
        n = boxes[0].n
    return BoxEvent(n, boxes)


def boxes_to_json(b: BoxEvent) -> dict:
    return {
        "n": b.n,
        "boxes": [[[frac_str(lo), frac_str(hi)] for lo, hi in bx.intervals] for bx in b.boxes],
    }

