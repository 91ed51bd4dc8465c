"""Finite ground spaces, homogeneous product spaces and events.

Outcomes of ``X^n`` are ranked with coordinate 0 most significant::

    rank(w) = sum(w[i] * K**(n - 1 - i) for i in range(n))

and an :class:`Event` stores one byte (0 or 1) per rank.  All measures are
exact :class:`fractions.Fraction` values.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

Outcome = tuple[int, ...]


class SpaceError(ValueError):
    """Malformed ground space, product space or event."""


def as_fraction(value) -> Fraction:
    """Parse an exact rational from a Fraction, int or ``"p/q"`` string.

    Floats are rejected so that no binary rounding sneaks into a measure.
    """
    if isinstance(value, bool):
        raise SpaceError(f"not a rational: {value!r}")
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SpaceError(f"malformed rational {value!r}") from exc
    raise SpaceError(f"not a rational: {value!r}")


def frac_str(x: Fraction) -> str:
    """Lossless ``"p/q"`` rendering (integers keep the ``/1``)."""
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class GroundSpace:
    """A probability space on atoms ``0..K-1``; zero weights are allowed."""

    weights: tuple[Fraction, ...]

    def __init__(self, weights: Iterable):
        ws = tuple(as_fraction(w) for w in weights)
        if not ws:
            raise SpaceError("ground space needs at least one atom")
        if any(w < 0 for w in ws):
            raise SpaceError("atom weights must be non-negative")
        if sum(ws) != 1:
            raise SpaceError(f"atom weights sum to {sum(ws)}, not 1")
        object.__setattr__(self, "weights", ws)

    @classmethod
    def uniform(cls, k: int) -> GroundSpace:
        return cls([Fraction(1, k)] * k)

    @property
    def k(self) -> int:
        return len(self.weights)

    @property
    def denominator(self) -> int:
        """Least common denominator of the weights."""
        return math.lcm(*(w.denominator for w in self.weights))

    def integer_weights(self) -> tuple[tuple[int, ...], int]:
        """Return ``(numerators, D)`` with ``weights[j] == numerators[j] / D``."""
        d = self.denominator
        return tuple(int(w * d) for w in self.weights), d

    def null_atoms(self) -> tuple[int, ...]:
        return tuple(j for j, w in enumerate(self.weights) if w == 0)


@dataclass(frozen=True)
class ProductSpace:
    """The product ``X^n`` of a ground space with itself."""

    ground: GroundSpace
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise SpaceError("product dimension must be at least 1")

    @property
    def k(self) -> int:
        return self.ground.k

    @property
    def size(self) -> int:
        return self.k**self.n

    def rank(self, outcome: Sequence[int]) -> int:
        k = self.k
        if len(outcome) != self.n:
            raise SpaceError(f"outcome {tuple(outcome)} has wrong length")
        r = 0
        for a in outcome:
            if not 0 <= a < k:
                raise SpaceError(f"atom id {a} out of range for K={k}")
            r = r * k + a
        return r

    def unrank(self, r: int) -> Outcome:
        k = self.k
        out = []
        for _ in range(self.n):
            r, a = divmod(r, k)
            out.append(a)
        return tuple(reversed(out))

    def outcomes(self) -> Iterator[Outcome]:
        """All outcomes in rank order."""
        return itertools.product(range(self.k), repeat=self.n)

    def outcome_array(self) -> np.ndarray:
        """``(K**n, n)`` integer array of all outcomes in rank order."""
        return np.array(np.unravel_index(np.arange(self.size), (self.k,) * self.n)).T

    def outcome_weight(self, outcome: Sequence[int]) -> Fraction:
        w = Fraction(1)
        for a in outcome:
            w *= self.ground.weights[a]
        return w


@dataclass(frozen=True)
class Event:
    """A subset of ``X^n`` held as a rank-ordered 0/1 byte string."""

    space: ProductSpace
    accepted: bytes = field(repr=False)

    def __post_init__(self):
        if len(self.accepted) != self.space.size:
            raise SpaceError(
                f"bitset length {len(self.accepted)} != K**n = {self.space.size}"
            )
        if self.accepted.translate(None, b"\x00\x01"):
            raise SpaceError("bitset entries must be 0 or 1")

    @classmethod
    def from_outcomes(cls, space: ProductSpace, outcomes: Iterable[Sequence[int]]) -> Event:
        buf = bytearray(space.size)
        for w in outcomes:
            buf[space.rank(w)] = 1
        return cls(space, bytes(buf))

    @classmethod
    def from_predicate(cls, space: ProductSpace, pred) -> Event:
        return cls(space, bytes(int(bool(pred(w))) for w in space.outcomes()))

    @classmethod
    def from_mask(cls, space: ProductSpace, mask) -> Event:
        """Build from a boolean array of length ``K**n`` in rank order."""
        arr = np.asarray(mask, dtype=bool)
        return cls(space, arr.astype(np.uint8).tobytes())

    @classmethod
    def full(cls, space: ProductSpace) -> Event:
        return cls(space, b"\x01" * space.size)

    @classmethod
    def empty(cls, space: ProductSpace) -> Event:
        return cls(space, b"\x00" * space.size)

    @property
    def ground(self) -> GroundSpace:
        return self.space.ground

    @property
    def n(self) -> int:
        return self.space.n

    def __contains__(self, outcome) -> bool:
        return bool(self.accepted[self.space.rank(outcome)])

    def contains_many(self, outcomes: np.ndarray) -> np.ndarray:
        """Vectorised membership for an ``(m, n)`` array of outcomes."""
        ranks = np.ravel_multi_index(tuple(np.asarray(outcomes).T), (self.space.k,) * self.n)
        return np.frombuffer(self.accepted, dtype=np.uint8)[ranks].astype(bool)

    def outcomes(self) -> Iterator[Outcome]:
        """Accepted outcomes in rank order."""
        space = self.space
        return (space.unrank(r) for r, b in enumerate(self.accepted) if b)

    def bit_string(self) -> str:
        return self.accepted.translate(bytes.maketrans(b"\x00\x01", b"01")).decode()

    def complement(self) -> Event:
        return Event(self.space, self.accepted.translate(bytes.maketrans(b"\x00\x01", b"\x01\x00")))

    def without_atom(self, atom: int) -> Event:
        """Restrict to the ground space with a zero-weight atom deleted."""
        ws = self.ground.weights
        if ws[atom] != 0:
            raise SpaceError(f"atom {atom} has positive weight {ws[atom]}")
        if len(ws) == 1:
            raise SpaceError("cannot delete the only atom")
        space = ProductSpace(GroundSpace(ws[:atom] + ws[atom + 1 :]), self.n)
        relabel = [j for j in range(len(ws)) if j != atom]
        return Event.from_outcomes(
            space,
            (tuple(relabel.index(a) for a in w) for w in self.outcomes() if atom not in w),
        )


@dataclass(frozen=True)
class FibreAssignment:
    """Values for every coordinate except ``omitted_coord``, in coordinate order."""

    omitted_coord: int
    values: tuple[int, ...]

    def complete(self, t: int) -> Outcome:
        e = self.omitted_coord
        return self.values[:e] + (t,) + self.values[e:]


def event_measure(a: Event) -> Fraction:
    """P^n(A), summed over accepted outcomes."""
    nums, d = a.ground.integer_weights()
    total = 0
    for w in a.outcomes():
        total += math.prod(nums[x] for x in w)
    return Fraction(total, d**a.n)


def fibre_measure(a: Event, psi: FibreAssignment) -> Fraction:
    """Measure of the section of ``A`` along the fibre through ``psi``."""
    if not 0 <= psi.omitted_coord < a.n:
        raise SpaceError(f"coordinate {psi.omitted_coord} out of range")
    if len(psi.values) != a.n - 1:
        raise SpaceError("fibre assignment has wrong length")
    return sum(
        (w for t, w in enumerate(a.ground.weights) if psi.complete(t) in a),
        Fraction(0),
    )


def enumerate_fibre_assignments(
    space: ProductSpace, e: int
) -> Iterator[tuple[FibreAssignment, Fraction]]:
    """Every assignment of the coordinates other than ``e`` with its weight."""
    if not 0 <= e < space.n:
        raise SpaceError(f"coordinate {e} out of range")
    weights = space.ground.weights
    for values in itertools.product(range(space.k), repeat=space.n - 1):
        w = Fraction(1)
        for v in values:
            w *= weights[v]
        yield FibreAssignment(e, values), w
