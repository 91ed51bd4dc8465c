"""Transport of events on ``X^n`` to box events on the Lebesgue cube.

Atom ``j`` (one-based index ``k = j + 1``) is sent to the Cantor point
``2 * 3**-k``.  The push-forward measure on the Cantor set has distribution
function ``kappa(c) = mu(C ∩ [0, c])`` and generalised inverse
``gamma(y) = inf{c : kappa(c) >= y}``.  The preimage under ``gamma`` of atom
``j``'s point is an interval of length ``weight[j]``; intervals are laid out
in increasing Cantor-point order, which is *decreasing* atom id.  An event
``A`` then becomes the union over its outcomes of products of those
intervals.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .boxes import Box, BoxEvent, box_h_influence, box_measure, box_section_at, normalize
from .hfunc import INDICATOR, HFunction
from .influence import h_influence
from .space import (
    Event,
    GroundSpace,
    enumerate_fibre_assignments,
    event_measure,
    fibre_measure,
    frac_str,
)


class TransportError(ValueError):
    """Event and transport were built on different ground spaces."""


@dataclass(frozen=True, order=True)
class CantorPoint:
    """A point of the middle-thirds Cantor set with a finite ternary expansion."""

    value: Fraction

    def __post_init__(self):
        v = Fraction(self.value)
        object.__setattr__(self, "value", v)
        if not 0 <= v <= 1:
            raise ValueError(f"{v} is outside [0, 1]")
        self.digits()

    @classmethod
    def from_digits(cls, digits: Sequence[int]) -> CantorPoint:
        """``sum(2 * 3**-(i+1) * d[i])`` for a 0/1 digit sequence."""
        return cls(sum((Fraction(2 * d, 3 ** (i + 1)) for i, d in enumerate(digits)), Fraction(0)))

    def digits(self) -> tuple[int, ...]:
        """The 0/1 sequence ``a`` with ``value = sum(2 * 3**-k * a_k)``."""
        q = self.value.denominator
        while q % 3 == 0:
            q //= 3
        if q != 1:
            raise ValueError(f"{self.value} has no finite ternary expansion")
        out = []
        x = self.value
        while x:
            x *= 3
            d = int(x)
            if d not in (0, 2):
                raise ValueError(f"{self.value} needs a ternary digit other than 0, 2")
            out.append(d // 2)
            x -= d
        return tuple(out)


@dataclass(frozen=True)
class Transport:
    ground: GroundSpace
    cantor_points: tuple[CantorPoint, ...]
    order: tuple[int, ...]
    kappa_table: tuple[Fraction, ...]
    atom_intervals: tuple[tuple[Fraction, Fraction], ...]

    def psi(self, atom: int) -> CantorPoint:
        return self.cantor_points[atom]

    def kappa(self, c) -> Fraction:
        """Push-forward mass of ``[0, c]``."""
        c = Fraction(c)
        return sum(
            (w for w, p in zip(self.ground.weights, self.cantor_points) if p.value <= c),
            Fraction(0),
        )

    def gamma(self, y) -> CantorPoint:
        """Smallest Cantor point whose kappa reaches ``y``."""
        y = Fraction(y)
        if not 0 <= y <= 1:
            raise ValueError(f"{y} outside [0, 1]")
        if y == 0:
            # kappa(0) = 0 already; 0 lies in the Cantor set but carries no atom.
            return CantorPoint(Fraction(0))
        for atom, cum in zip(self.order, self.kappa_table):
            if cum >= y:
                return self.cantor_points[atom]
        raise AssertionError("kappa table does not reach 1")

    def dump(self) -> list[dict]:
        return [
            {
                "atom": j,
                "weight": frac_str(self.ground.weights[j]),
                "cantor_point": frac_str(self.cantor_points[j].value),
                "interval": [frac_str(lo), frac_str(hi)],
            }
            for j, (lo, hi) in enumerate(self.atom_intervals)
        ]


def build_transport(ground: GroundSpace) -> Transport:
    k = ground.k
    points = tuple(CantorPoint(Fraction(2, 3 ** (j + 1))) for j in range(k))
    order = tuple(sorted(range(k), key=lambda j: points[j]))
    intervals: list = [None] * k
    kappa = []
    cum = Fraction(0)
    for j in order:
        lo, cum = cum, cum + ground.weights[j]
        intervals[j] = (lo, cum)
        kappa.append(cum)
    return Transport(ground, points, order, tuple(kappa), tuple(intervals))


def push_event(t: Transport, a: Event) -> BoxEvent:
    if a.ground != t.ground:
        raise TransportError("event and transport use different ground spaces")
    ivs = t.atom_intervals
    boxes = [Box([ivs[x] for x in w]) for w in a.outcomes()]
    return normalize(BoxEvent(a.n, tuple(boxes)), assume_disjoint=True)


@dataclass
class TransportVerification:
    measure: tuple[Fraction, Fraction]
    # (coordinate, h name, value on X^n, value on the cube)
    rows: list[tuple[int, str, Fraction, Fraction]] = field(default_factory=list)

    @property
    def mismatches(self) -> list[tuple]:
        bad = []
        if self.measure[0] != self.measure[1]:
            bad.append(("measure", None, *self.measure))
        bad.extend(r for r in self.rows if r[2] != r[3])
        return bad

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "measure": [frac_str(x) for x in self.measure],
            "h_influences": [
                {"coord": e, "h": name, "event": frac_str(x), "boxes": frac_str(y)}
                for e, name, x, y in self.rows
            ],
            "mismatches": [
                [str(c) for c in row] for row in self.mismatches
            ],
        }


class TransportMismatch(AssertionError):
    def __init__(self, record: TransportVerification):
        self.record = record
        super().__init__(f"transport mismatch: {record.mismatches}")


def verify_transport(
    t: Transport,
    a: Event,
    b: BoxEvent,
    hs: Sequence[HFunction] = (),
    *,
    strict: bool = True,
) -> TransportVerification:
    """Compare measure and every h-influence of ``a`` and its pushed box event."""
    if a.ground != t.ground:
        raise TransportError("event and transport use different ground spaces")
    funcs = [INDICATOR] + [h for h in hs if h != INDICATOR]
    rec = TransportVerification((event_measure(a), box_measure(b)))
    for e in range(a.n):
        for h in funcs:
            rec.rows.append((e, h.name, h_influence(a, e, h), box_h_influence(b, e, h)))
    if strict and not rec.ok:
        raise TransportMismatch(rec)
    return rec


def check_fibre_preservation(
    t: Transport, a: Event, e: int, b: BoxEvent | None = None
) -> bool:
    """Each positive-weight fibre's section measure equals the box section over its cell."""
    if b is None:
        b = push_event(t, a)
    for psi, w in enumerate_fibre_assignments(a.space, e):
        if w == 0:
            continue
        point = [t.atom_intervals[v][0] for v in psi.complete(0)]
        if box_section_at(b, e, point) != fibre_measure(a, psi):
            return False
    return True
