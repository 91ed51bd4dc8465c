"""Backend selection for the fibre-section kernel.

The compiled extension is used when it imported and the weight numerators
fit in int64; otherwise the pure-Python kernel runs with big integers.  Set
``PRODINF_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernel

try:
    if os.environ.get("PRODINF_PURE_PYTHON"):
        raise ImportError("pure-Python kernel forced")
    from . import _ckernel
except ImportError:
    _ckernel = None

BACKEND = "cython" if _ckernel is not None else "python"

_INT64_BUDGET = 2**62
_MAX_COMPILED_K = 20


def _digit_weights(nums, k: int, length: int) -> list[int]:
    """Products of atom weights over the base-``k`` digits of ``0..k**length-1``."""
    out = [1]
    for _ in range(length):
        out = [w * x for w in out for x in nums]
    return out


def section_histogram(
    bits: bytes, nums, k: int, n: int, e: int, backend: str | None = None
) -> dict[int, int]:
    """Histogram of fibres through coordinate ``e`` keyed by section mask.

    ``nums`` are integer atom weights over a common denominator ``D``; the
    returned values are weight numerators over ``D**(n-1)``.
    """
    stride = k ** (n - 1 - e)
    pre = _digit_weights(nums, k, e)
    suf = _digit_weights(nums, k, n - 1 - e)
    if backend is None:
        use_c = (
            _ckernel is not None
            and k <= _MAX_COMPILED_K
            and sum(pre) * sum(suf) < _INT64_BUDGET
        )
    elif backend == "cython":
        if _ckernel is None:
            raise RuntimeError("compiled kernel is not available")
        use_c = True
    elif backend == "python":
        use_c = False
    else:
        raise ValueError(f"unknown backend {backend!r}")
    if use_c:
        return _ckernel.section_histogram(
            bits,
            np.asarray(pre, dtype=np.int64),
            np.asarray(suf, dtype=np.int64),
            k,
            stride,
        )
    return _pykernel.section_histogram(bits, pre, suf, k, stride)
