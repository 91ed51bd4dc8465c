"""Influence, BKKKL influence and h-influence of events on ``X^n``.

Every exact quantity is read off one histogram per coordinate ``e``: each
fibre through ``e`` is classified by its *section mask* (bit ``t`` set when
the outcome with atom ``t`` at ``e`` is accepted) and the fibre weights are
summed per mask.  The section measure of a fibre is the weight of its mask;
the line is constant in the BKKKL sense iff its mask is empty or full.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels
from .hfunc import INDICATOR, HFunction
from .space import Event, SpaceError, event_measure


class InconsistentReportError(RuntimeError):
    """An internal invariant of the influence report was violated."""


def _check_coord(a: Event, e: int) -> None:
    if not 0 <= e < a.n:
        raise SpaceError(f"coordinate {e} out of range for n={a.n}")


@lru_cache(maxsize=256)
def _profile(a: Event, e: int, backend: str | None) -> tuple[tuple[int, Fraction], ...]:
    nums, d = a.ground.integer_weights()
    hist = kernels.section_histogram(a.accepted, nums, a.space.k, a.n, e, backend=backend)
    scale = d ** (a.n - 1)
    return tuple(sorted((mask, Fraction(w, scale)) for mask, w in hist.items()))


def section_profile(a: Event, e: int, backend: str | None = None) -> dict[int, Fraction]:
    """Map section mask -> total weight of fibres through ``e`` with that mask."""
    _check_coord(a, e)
    return dict(_profile(a, e, backend))


def mask_measure(a: Event, mask: int) -> Fraction:
    return sum(
        (w for t, w in enumerate(a.ground.weights) if mask >> t & 1), Fraction(0)
    )


def influence(a: Event, e: int) -> Fraction:
    """Weight of fibres through ``e`` whose section measure is strictly in (0, 1)."""
    return h_influence(a, e, INDICATOR)


def bkkkl_influence(a: Event, e: int) -> Fraction:
    """Weight of fibres along which ``A`` is not constant, counting null atoms."""
    full = (1 << a.space.k) - 1
    return sum(
        (w for mask, w in section_profile(a, e).items() if 0 < mask < full),
        Fraction(0),
    )


def h_influence(a: Event, e: int, h: HFunction) -> Fraction:
    """Expectation over fibres through ``e`` of ``h(section measure)``."""
    total = Fraction(0)
    for mask, w in section_profile(a, e).items():
        total += w * h(mask_measure(a, mask))
    return total


def influences(a: Event, h: HFunction = INDICATOR) -> list[Fraction]:
    return [h_influence(a, e, h) for e in range(a.n)]


@dataclass(frozen=True)
class InfluenceReport:
    """Exact influences of one event plus the two float bound ratios.

    ``total_ratio`` is ``total / (p(1-p) ln(1/(2m)))`` and ``max_ratio`` is
    ``m / (p(1-p) ln(n)/n)``.  Each is ``None`` when not applicable and the
    matching ``*_status`` says why.
    """

    p: Fraction
    influences: tuple[Fraction, ...]
    m: Fraction
    total: Fraction
    total_ratio: float | None
    total_ratio_status: str
    max_ratio: float | None
    max_ratio_status: str


def influence_report(a: Event) -> InfluenceReport:
    p = event_measure(a)
    infl = tuple(influence(a, e) for e in range(a.n))
    m = max(infl)
    total = sum(infl, Fraction(0))
    n = a.n
    if p in (0, 1):
        return InfluenceReport(p, infl, m, total, None, "degenerate-p", None, "degenerate-p")
    if m == 0:
        raise InconsistentReportError(f"p = {p} in (0, 1) but every influence is 0")
    var = float(p * (1 - p))
    if m >= Fraction(1, 2):
        total_ratio, total_status = None, "m>=1/2"
    else:
        # ln(1/(2m)) via log1p keeps precision when m is close to 1/2.
        log_term = math.log1p(float((1 - 2 * m) / (2 * m)))
        total_ratio, total_status = float(total) / (var * log_term), "ok"
    if n == 1:
        max_ratio, max_status = None, "n=1"
    else:
        max_ratio, max_status = float(m) / (var * math.log(n) / n), "ok"
    return InfluenceReport(
        p, infl, m, total, total_ratio, total_status, max_ratio, max_status
    )


_MC_CHUNK = 1 << 16


def mc_influence(a, e: int, samples: int, seed: int) -> tuple[float, float]:
    """Monte-Carlo estimate of ``influence(a, e)`` and its binomial standard error.

    Fibres are drawn exactly from the ground measure (integer sampling over
    the common denominator) and classified exactly.  ``a`` only needs
    ``space`` and ``contains_many``, so implicit family events work too.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    space = a.space
    n, k = space.n, space.k
    if not 0 <= e < n:
        raise SpaceError(f"coordinate {e} out of range for n={n}")
    nums, d = space.ground.integer_weights()
    rng = np.random.default_rng(seed)
    small = d < 2**62
    cum = np.cumsum(nums) if small else None
    probs = None if small else np.array([float(w) for w in space.ground.weights])
    wvec = np.array(nums, dtype=np.int64 if small else object)
    hits = 0
    done = 0
    while done < samples:
        size = min(_MC_CHUNK, samples - done)
        if small:
            u = rng.integers(0, d, size=(size, n - 1))
            rest = np.searchsorted(cum, u, side="right")
        else:
            rest = rng.choice(k, size=(size, n - 1), p=probs / probs.sum())
        outs = np.empty((size, k, n), dtype=np.int64)
        outs[:, :, :e] = rest[:, None, :e]
        outs[:, :, e] = np.arange(k)[None, :]
        outs[:, :, e + 1 :] = rest[:, None, e:]
        member = a.contains_many(outs.reshape(-1, n)).reshape(size, k)
        s = member.astype(wvec.dtype) @ wvec
        hits += int(np.count_nonzero((s > 0) & (s < d)))
        done += size
    est = hits / samples
    return est, math.sqrt(est * (1 - est) / samples)
