"""Event spec documents.

An event spec is a JSON object::

    {"ground": ["1/2", "1/2"], "n": 3,
     "event": {"family": {"name": "majority", "params": {}}}}

where ``event`` holds exactly one of ``family``, ``bits`` (a '0'/'1' string
of length K**n in rank order, coordinate 0 most significant) or ``tuples``
(a list of accepted outcomes).
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .families import FamilyError, PredicateEvent, family_event
from .space import Event, GroundSpace, ProductSpace, SpaceError, as_fraction, frac_str

MAX_EXACT_SIZE = 2**24


class SpecError(ValueError):
    """Invalid event spec; ``code`` names the diagnostic."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code

    def to_json(self) -> dict:
        return {"error": {"code": self.code, "message": str(self)}}


def parse_ground(weights) -> GroundSpace:
    if not isinstance(weights, list) or not weights:
        raise SpecError("bad-ground", "ground must be a non-empty list of rational strings")
    try:
        ws = [as_fraction(w) for w in weights]
    except SpaceError as exc:
        raise SpecError("malformed-rational", str(exc)) from exc
    if any(w < 0 for w in ws):
        raise SpecError("negative-weight", "atom weights must be non-negative")
    if sum(ws) != 1:
        raise SpecError("weight-sum", f"atom weights sum to {sum(ws)}, not 1")
    return GroundSpace(ws)


def parse_event_spec(doc, *, implicit: bool = False):
    """Build ``(ProductSpace, Event)`` from a spec document.

    Spaces with more than ``2**24`` outcomes are refused unless ``implicit``
    is set, in which case family and tuple events come back as a
    :class:`~prodinf.families.PredicateEvent` (sampling only).
    """
    if not isinstance(doc, dict):
        raise SpecError("bad-document", "event spec must be a JSON object")
    for key in ("ground", "n", "event"):
        if key not in doc:
            raise SpecError("missing-field", f"event spec lacks {key!r}")
    ground = parse_ground(doc["ground"])
    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise SpecError("bad-n", f"n must be a positive integer, got {n!r}")
    space = ProductSpace(ground, n)
    ev = doc["event"]
    if not isinstance(ev, dict):
        raise SpecError("event-variant", "event must be an object")
    present = [k for k in ("family", "bits", "tuples") if k in ev]
    if len(present) != 1:
        raise SpecError("event-variant", f"event needs exactly one of family/bits/tuples, got {present}")
    too_large = space.size > MAX_EXACT_SIZE
    if too_large and not implicit:
        raise SpecError(
            "too-large",
            f"K**n = {space.size} exceeds 2**24; use --mc for a sampling estimate",
        )
    kind = present[0]
    if kind == "family":
        fam = ev["family"]
        if isinstance(fam, str):
            fam = {"name": fam}
        if not isinstance(fam, dict) or "name" not in fam:
            raise SpecError("bad-family", "family must be {'name': ..., 'params': {...}}")
        try:
            event = family_event(space, fam["name"], fam.get("params"), implicit=too_large)
        except FamilyError as exc:
            raise SpecError(exc.code, str(exc)) from exc
        return space, event
    if kind == "bits":
        bits = ev["bits"]
        if too_large:
            raise SpecError("too-large", "bit strings are limited to 2**24 outcomes")
        if not isinstance(bits, str) or len(bits) != space.size:
            got = len(bits) if isinstance(bits, str) else type(bits).__name__
            raise SpecError("bad-length", f"bits must have length K**n = {space.size}, got {got}")
        if bits.strip("01"):
            raise SpecError("bad-bits", "bits may contain only '0' and '1'")
        return space, Event(space, bits.encode().translate(bytes.maketrans(b"01", b"\x00\x01")))
    tuples = ev["tuples"]
    if not isinstance(tuples, list):
        raise SpecError("bad-outcome", "tuples must be a list of outcomes")
    outs = []
    for w in tuples:
        if (
            not isinstance(w, list)
            or len(w) != n
            or not all(isinstance(x, int) and not isinstance(x, bool) and 0 <= x < space.k for x in w)
        ):
            raise SpecError("bad-outcome", f"bad outcome {w!r} for K={space.k}, n={n}")
        outs.append(tuple(w))
    if too_large:
        accepted = np.array(outs, dtype=np.int64).reshape(-1, n)

        def pred(w):
            return (w[:, None, :] == accepted[None, :, :]).all(axis=2).any(axis=1)

        return space, PredicateEvent(space, pred)
    return space, Event.from_outcomes(space, outs)


def load_event_spec(path: str, *, implicit: bool = False):
    """Read and parse a spec file (``-`` reads stdin)."""
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise SpecError("unreadable", f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError("malformed-json", f"{path}: {exc}") from exc
    return parse_event_spec(doc, implicit=implicit)


def event_to_spec(a: Event) -> dict:
    return {
        "ground": [frac_str(w) for w in a.ground.weights],
        "n": a.n,
        "event": {"bits": a.bit_string()},
    }


def uniform_spec(k: int, n: int, event: dict) -> dict:
    """Convenience for building spec documents on uniform ground spaces."""
    return {"ground": [frac_str(Fraction(1, k))] * k, "n": n, "event": event}
