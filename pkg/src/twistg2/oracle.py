"""Independent brute-force coincidence oracles.

These deliberately avoid the greedy sweep: two-fold counts come from a
maximum bipartite matching, three-fold counts from an exact 0/1 integer
program over all feasible triples.  Intended for validating the production
counters on small instances, not for production use.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching


def _candidate_ranges(anchor, other, window_ps):
    """Index range [lo, hi) of ``other`` inside each anchor's window."""
    half = window_ps / 2.0
    lo = np.searchsorted(other, np.ceil(anchor - half).astype(np.int64))
    hi = np.searchsorted(other, np.floor(anchor + half).astype(np.int64), side="right")
    return lo, hi


def max_twofold(a, b, window_ps: int) -> int:
    """Maximum one-to-one coincidence count via bipartite matching."""
    a = np.asarray(a, np.int64)
    b = np.asarray(b, np.int64)
    if not a.size or not b.size:
        return 0
    lo, hi = _candidate_ranges(a, b, window_ps)
    rows = np.repeat(np.arange(a.size), hi - lo)
    cols = np.concatenate([np.arange(l, h) for l, h in zip(lo, hi)]) if rows.size else []
    if not rows.size:
        return 0
    adj = coo_matrix((np.ones(rows.size, np.int8), (rows, cols)), (a.size, b.size))
    match = maximum_bipartite_matching(adj.tocsr(), perm_type="column")
    return int(np.count_nonzero(match >= 0))


def max_threefold(idler, s1, s2, window_ps: int) -> int:
    """Maximum number of disjoint herald-anchored triples, solved exactly.

    One binary variable per feasible (idler, s1, s2) combination; each tag
    may appear in at most one chosen triple.
    """
    idler = np.asarray(idler, np.int64)
    s1 = np.asarray(s1, np.int64)
    s2 = np.asarray(s2, np.int64)
    if not (idler.size and s1.size and s2.size):
        return 0
    lo1, hi1 = _candidate_ranges(idler, s1, window_ps)
    lo2, hi2 = _candidate_ranges(idler, s2, window_ps)
    triples = [
        (ia, j, k)
        for ia in range(idler.size)
        for j in range(lo1[ia], hi1[ia])
        for k in range(lo2[ia], hi2[ia])
    ]
    if not triples:
        return 0

    n_var = len(triples)
    cols = np.arange(n_var)
    ias, js, ks = map(np.asarray, zip(*triples))
    rows = np.concatenate([ias, idler.size + js, idler.size + s1.size + ks])
    a = coo_matrix(
        (np.ones(3 * n_var), (rows, np.tile(cols, 3))),
        (idler.size + s1.size + s2.size, n_var),
    )
    res = milp(
        c=-np.ones(n_var),
        constraints=LinearConstraint(a.tocsc(), -np.inf, 1.0),
        integrality=np.ones(n_var),
        bounds=Bounds(0.0, 1.0),
    )
    if not res.success:
        raise RuntimeError(f"threefold oracle MILP failed: {res.message}")
    return int(round(-res.fun))
