"""Numba kernels for the sequential passes (dead time, coincidence sweeps).

The coincidence window ``window_ps`` is the full width of the acceptance
interval: two tags coincide when ``2*|dt| <= window_ps``.
"""

import numba
import numpy as np


@numba.njit(cache=True)
def dead_time_filter(times, dead_time_ps):
    """Non-paralyzable dead time: a blocked event does not extend the window."""
    n = times.size
    keep = np.ones(n, numba.boolean)
    if n == 0 or dead_time_ps <= 0:
        return keep
    last = times[0]
    for k in range(1, n):
        if times[k] - last < dead_time_ps:
            keep[k] = False
        else:
            last = times[k]
    return keep


@numba.njit(cache=True)
def count_twofold_kernel(a, b, window_ps):
    """Greedy one-to-one matching sweep over two sorted streams."""
    ia = 0
    ib = 0
    count = 0
    na = a.size
    nb = b.size
    while ia < na and ib < nb:
        d = a[ia] - b[ib]
        if 2 * abs(d) <= window_ps:
            count += 1
            ia += 1
            ib += 1
        elif d < 0:
            ia += 1
        else:
            ib += 1
    return count


@numba.njit(cache=True)
def count_threefold_kernel(idler, s1, s2, window_ps):
    """Herald-anchored greedy triples.

    For each idler tag in order, the earliest unconsumed tag of each signal
    arm inside the window forms a triple; all three are consumed.  Tags of a
    failed candidate are left for later idler tags.
    """
    c1 = 0
    c2 = 0
    count = 0
    n1 = s1.size
    n2 = s2.size
    for k in range(idler.size):
        t = idler[k]
        while c1 < n1 and 2 * (t - s1[c1]) > window_ps:
            c1 += 1
        while c2 < n2 and 2 * (t - s2[c2]) > window_ps:
            c2 += 1
        if (
            c1 < n1
            and c2 < n2
            and 2 * (s1[c1] - t) <= window_ps
            and 2 * (s2[c2] - t) <= window_ps
        ):
            count += 1
            c1 += 1
            c2 += 1
    return count


@numba.njit(cache=True)
def is_sorted(a):
    for k in range(1, a.size):
        if a[k] < a[k - 1]:
            return False
    return True
