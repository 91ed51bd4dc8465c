"""Built-in event families.

Each family is a vectorised predicate over an ``(m, n)`` array of outcomes.
"Nonzero" means atom id ``!= 0``; on uniform bits that is the bit being 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .space import Event, ProductSpace, as_fraction


class FamilyError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def _int_param(params, name, default=None, minimum=0):
    v = params.get(name, default)
    if v is None or isinstance(v, bool) or not isinstance(v, int) or v < minimum:
        raise FamilyError("bad-params", f"parameter {name!r} must be an integer >= {minimum}")
    return v


def _dictator(space, params):
    i = _int_param(params, "i", 0)
    if i >= space.n:
        raise FamilyError("bad-params", f"dictator coordinate {i} out of range for n={space.n}")
    return lambda w: w[:, i] != 0


def _parity(space, params):
    return lambda w: w.sum(axis=1) % 2 == 1


def _majority(space, params):
    if space.k != 2:
        raise FamilyError("majority-k", "majority needs a two-atom ground space")
    if space.n % 2 == 0:
        raise FamilyError("majority-even-n", f"majority needs odd n, got n={space.n}")
    return lambda w: 2 * np.count_nonzero(w, axis=1) > space.n


def _threshold(space, params):
    t = _int_param(params, "t")
    return lambda w: np.count_nonzero(w, axis=1) >= t


def _tribes(space, params):
    width = _int_param(params, "w", minimum=1)
    count = _int_param(params, "s", minimum=1)
    if width * count != space.n:
        raise FamilyError("bad-params", f"tribes needs n = w*s, got {width}*{count} != {space.n}")

    def pred(w):
        return (w.reshape(len(w), count, width) != 0).all(axis=2).any(axis=1)

    return pred


def _and_all(space, params):
    return lambda w: (w != 0).all(axis=1)


def _or_all(space, params):
    return lambda w: (w != 0).any(axis=1)


FAMILIES = {
    "dictator": _dictator,
    "parity": _parity,
    "majority": _majority,
    "threshold": _threshold,
    "tribes": _tribes,
    "and_all": _and_all,
    "or_all": _or_all,
    "random": None,
}


@dataclass(frozen=True)
class PredicateEvent:
    """An event known only through a vectorised membership test.

    Used for spaces too large to hold as a bitset; only sampling
    estimators accept it.
    """

    space: ProductSpace
    predicate: object

    @property
    def n(self) -> int:
        return self.space.n

    def contains_many(self, outcomes: np.ndarray) -> np.ndarray:
        return np.asarray(self.predicate(np.asarray(outcomes)), dtype=bool)

    def materialize(self) -> Event:
        return Event.from_mask(self.space, self.contains_many(self.space.outcome_array()))


def random_event(space: ProductSpace, seed: int, density) -> Event:
    """Each outcome accepted independently with probability ``density``."""
    try:
        d = float(as_fraction(density)) if isinstance(density, str) else float(density)
    except (TypeError, ValueError) as exc:
        raise FamilyError("bad-params", f"bad density {density!r}") from exc
    if not 0 <= d <= 1:
        raise FamilyError("bad-params", f"density {d} outside [0, 1]")
    rng = np.random.default_rng(seed)
    return Event.from_mask(space, rng.random(space.size) < d)


def family_event(space: ProductSpace, name: str, params=None, *, implicit: bool = False):
    """Expand a named family; ``implicit=True`` returns a :class:`PredicateEvent`."""
    params = dict(params or {})
    if name not in FAMILIES:
        raise FamilyError("unknown-family", f"unknown family {name!r}; known: {sorted(FAMILIES)}")
    if name == "random":
        if implicit:
            raise FamilyError("too-large", "random events must be materialised")
        seed = _int_param(params, "seed", 0)
        return random_event(space, seed, params.get("density", Fraction(1, 2)))
    pe = PredicateEvent(space, FAMILIES[name](space, params))
    return pe if implicit else pe.materialize()
