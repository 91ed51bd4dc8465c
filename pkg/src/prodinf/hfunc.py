"""Exactly evaluable weight functions ``h: [0, 1] -> [0, 1]``."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .space import as_fraction, frac_str


class HFunctionError(ValueError):
    """An h-function is malformed or left [0, 1] at an evaluated point."""


class HFunction:
    name = "h"

    def evaluate(self, x: Fraction) -> Fraction:
        raise NotImplementedError

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        if not 0 <= x <= 1:
            raise HFunctionError(f"{self.name}: argument {x} outside [0, 1]")
        y = self.evaluate(x)
        if not 0 <= y <= 1:
            raise HFunctionError(f"{self.name}({x}) = {y} outside [0, 1]")
        return y

    def __repr__(self):
        return f"<HFunction {self.name}>"


class Indicator01(HFunction):
    """``1(0 < x < 1)``; recovers the plain influence."""

    name = "indicator"

    def evaluate(self, x):
        return Fraction(int(0 < x < 1))

    def __eq__(self, other):
        return isinstance(other, Indicator01)

    def __hash__(self):
        return hash(self.name)


class QuadXOneMinusX(HFunction):
    """``x (1 - x)``."""

    name = "quad"

    def evaluate(self, x):
        return x * (1 - x)

    def __eq__(self, other):
        return isinstance(other, QuadXOneMinusX)

    def __hash__(self):
        return hash(self.name)


INDICATOR = Indicator01()
QUAD = QuadXOneMinusX()


@dataclass(frozen=True, eq=True)
class PiecewisePolynomial(HFunction):
    """Polynomial pieces on ``[b_i, b_{i+1})``; the last piece is closed at 1.

    ``breakpoints`` run from 0 to 1 inclusive and ``pieces[i]`` holds the
    coefficients of piece ``i`` in increasing degree.  At construction every
    piece is sampled at ``samples + 1`` equispaced rational points (ends
    included) and rejected if a value leaves [0, 1]; evaluation re-checks
    every value actually used.
    """

    breakpoints: tuple[Fraction, ...]
    pieces: tuple[tuple[Fraction, ...], ...]
    name: str = "piecewise"
    samples: int = 64

    def __post_init__(self):
        bps = tuple(as_fraction(b) for b in self.breakpoints)
        pcs = tuple(tuple(as_fraction(c) for c in p) for p in self.pieces)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "pieces", pcs)
        if len(bps) < 2 or bps[0] != 0 or bps[-1] != 1:
            raise HFunctionError("breakpoints must start at 0 and end at 1")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise HFunctionError("breakpoints must be strictly increasing")
        if len(pcs) != len(bps) - 1:
            raise HFunctionError(f"need {len(bps) - 1} pieces, got {len(pcs)}")
        for i, (lo, hi) in enumerate(zip(bps, bps[1:])):
            for j in range(self.samples + 1):
                x = lo + (hi - lo) * Fraction(j, self.samples)
                y = _horner(pcs[i], x)
                if not 0 <= y <= 1:
                    raise HFunctionError(f"{self.name}: piece {i} takes value {y} at {x}")

    @classmethod
    def constant(cls, c) -> PiecewisePolynomial:
        return cls((0, 1), ((c,),), name=f"const({c})")

    def evaluate(self, x):
        i = len(self.pieces) - 1
        for j, b in enumerate(self.breakpoints[1:-1]):
            if x < b:
                i = j
                break
        return _horner(self.pieces[i], x)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "breakpoints": [frac_str(b) for b in self.breakpoints],
            "pieces": [[frac_str(c) for c in p] for p in self.pieces],
        }


def _horner(coeffs, x):
    y = Fraction(0)
    for c in reversed(coeffs):
        y = y * x + c
    return y


def load_hfunction(spec: str) -> HFunction:
    """Resolve ``indicator``, ``quad`` or a path to a piecewise JSON document."""
    if spec == "indicator":
        return INDICATOR
    if spec == "quad":
        return QUAD
    path = Path(spec)
    if not path.is_file():
        raise HFunctionError(f"unknown h-function {spec!r} (not indicator, quad, or a file)")
    try:
        doc = json.loads(path.read_text())
        return PiecewisePolynomial(
            tuple(doc["breakpoints"]),
            tuple(tuple(p) for p in doc["pieces"]),
            name=doc.get("name", path.stem),
        )
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise HFunctionError(f"malformed h-function document {spec}: {exc}") from exc
