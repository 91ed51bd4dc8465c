"""Reproducible event corpora and the batch runner behind ``prodinf corpus``."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .families import FAMILIES, FamilyError, family_event
from .hfunc import INDICATOR, QUAD
from .influence import bkkkl_influence, h_influence, influence_report
from .space import (
    Event,
    GroundSpace,
    ProductSpace,
    enumerate_fibre_assignments,
    event_measure,
    fibre_measure,
    frac_str,
)
from .transport import build_transport, check_fibre_preservation, push_event, verify_transport

DEFAULT_SEED = 2012
DEFAULT_RANDOM_EVENTS = 1000
DEFAULT_MAX_N = 4
DEFAULT_MAX_K = 4


@dataclass(frozen=True)
class CorpusItem:
    id: int
    label: str
    event: Event


def _family_params(name: str, n: int):
    if name == "dictator":
        return {"i": 0}
    if name == "threshold":
        return {"t": (n + 1) // 2}
    if name == "tribes":
        if n % 2:
            return None
        return {"w": 2, "s": n // 2}
    return {}


def zero_weight_example() -> Event:
    """K=3 with weights (1/2, 1/2, 0), n=1, accepting atoms {0, 1}."""
    space = ProductSpace(GroundSpace(["1/2", "1/2", "0"]), 1)
    return Event.from_outcomes(space, [(0,), (1,)])


def random_ground(rng: np.random.Generator, k: int, zero_prob: float) -> GroundSpace:
    raw = rng.integers(1, 6, size=k)
    raw[rng.random(k) < zero_prob] = 0
    if raw.sum() == 0:
        raw[rng.integers(k)] = 1
    total = int(raw.sum())
    return GroundSpace([Fraction(int(r), total) for r in raw])


def random_item_event(
    seed: int, index: int, max_n: int, max_k: int, zero_prob: float = 0.3
) -> Event:
    rng = np.random.default_rng([seed, index])
    k = int(rng.integers(1, max_k + 1))
    n = int(rng.integers(1, max_n + 1))
    space = ProductSpace(random_ground(rng, k, zero_prob), n)
    density = rng.uniform(0.15, 0.85)
    return Event.from_mask(space, rng.random(space.size) < density)


def generate_corpus(
    *,
    families=tuple(f for f in FAMILIES if f != "random"),
    random_events: int = DEFAULT_RANDOM_EVENTS,
    seed: int = DEFAULT_SEED,
    max_n: int = DEFAULT_MAX_N,
    max_k: int = DEFAULT_MAX_K,
) -> list[CorpusItem]:
    """Families on uniform bits for ``n <= max_n``, the zero-weight line example,
    then ``random_events`` random events on random ground spaces."""
    items = []
    bits = GroundSpace.uniform(2)
    for name in families:
        for n in range(1, max_n + 1):
            params = _family_params(name, n)
            if params is None:
                continue
            try:
                ev = family_event(ProductSpace(bits, n), name, params)
            except FamilyError:
                continue
            items.append((f"{name}(n={n})", ev))
    items.append(("zero-weight-line", zero_weight_example()))
    for i in range(random_events):
        items.append((f"random[{i}]", random_item_event(seed, i, max_n, max_k)))
    return [CorpusItem(i, label, ev) for i, (label, ev) in enumerate(items)]


def run_item(item: CorpusItem) -> dict:
    """Every exact check on one event, plus its bound ratios."""
    a = item.event
    n = a.n
    p = event_measure(a)
    infl = [h_influence(a, e, INDICATOR) for e in range(n)]
    bk = [bkkkl_influence(a, e) for e in range(n)]
    quad = [h_influence(a, e, QUAD) for e in range(n)]
    fubini = all(
        sum((w * fibre_measure(a, psi) for psi, w in enumerate_fibre_assignments(a.space, e)), Fraction(0)) == p
        for e in range(n)
    )
    t = build_transport(a.ground)
    b = push_event(t, a)
    rec = verify_transport(t, a, b, [QUAD], strict=False)
    fibres = all(check_fibre_preservation(t, a, e, b) for e in range(n))
    checks = {
        "fubini": fubini,
        "remark_inequality": all(x >= y for x, y in zip(bk, infl)),
        "transport": rec.ok,
        "fibre_preservation": fibres,
    }
    out = {
        "id": item.id,
        "label": item.label,
        "k": a.space.k,
        "n": n,
        "p": frac_str(p),
        "influence": [frac_str(x) for x in infl],
        "bkkkl_influence": [frac_str(x) for x in bk],
        "quad_influence": [frac_str(x) for x in quad],
        "strict_bkkkl_gap": any(x > y for x, y in zip(bk, infl)),
        "checks": checks,
        "ok": all(checks.values()),
        "total_ratio": None,
        "max_ratio": None,
    }
    if 0 < p < 1:
        rep = influence_report(a)
        out["total_ratio"] = rep.total_ratio
        out["max_ratio"] = rep.max_ratio
    return out


def run_corpus(items: list[CorpusItem], jobs: int = 1) -> dict:
    """Run every item; results come back sorted by item id whatever ``jobs`` is."""
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_item, items, chunksize=16))
    else:
        results = [run_item(it) for it in items]
    results.sort(key=lambda r: r["id"])
    ratios = [r["total_ratio"] for r in results if r["total_ratio"] is not None]
    return {
        "items": len(results),
        "failures": [r["id"] for r in results if not r["ok"]],
        "strict_bkkkl_gaps": sum(r["strict_bkkkl_gap"] for r in results),
        "min_total_ratio": min(ratios) if ratios else None,
        "min_max_ratio": min(
            (r["max_ratio"] for r in results if r["max_ratio"] is not None), default=None
        ),
        "results": results,
    }

