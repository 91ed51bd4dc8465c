"""Pure-Python section histogram; reference for the compiled kernel."""


def section_histogram(bits, pre, suf, k, stride):
    """Accumulate fibre weights by section mask.

    The fibre ``(hi, lo)`` through the omitted coordinate holds the outcomes
    of rank ``(hi * k + t) * stride + lo`` for ``t < k``.  Its section mask
    has bit ``t`` set when that outcome is accepted, and its weight numerator
    is ``pre[hi] * suf[lo]``.  Returns ``{mask: summed weight numerator}``.
    """
    hist = {}
    block = k * stride
    for hi, wp in enumerate(pre):
        if not wp:
            continue
        base = hi * block
        rows = [bits[base + t * stride : base + (t + 1) * stride] for t in range(k)]
        for lo, ws in enumerate(suf):
            if not ws:
                continue
            mask = 0
            for t in range(k):
                if rows[t][lo]:
                    mask |= 1 << t
            hist[mask] = hist.get(mask, 0) + wp * ws
    return hist
