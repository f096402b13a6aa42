"""Pure NumPy split-scan kernels (fallback backend).

Bit-compatible with the compiled backend: the candidate order and every
floating-point operation order are identical. Prefix sums use
np.cumsum/np.bincount, which accumulate sequentially like the C loops;
np.sum is never used here because its pairwise reduction would round
differently.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"

_NO_SPLIT = (False, 0.0, 0.0)


def best_numeric_split(presort, node_mask, values, g, h, g_tot, h_tot, n_node, lam, min_leaf, banned):
    """Best "value < t" split for one numeric feature over one node.

    presort: all sample ids sorted by (value asc, id asc); node_mask: uint8
    membership by sample id. Candidate thresholds are midpoints between
    consecutive distinct values present in the node, nudged up to the higher
    value if rounding lands the midpoint on the lower one. Returns
    (found, gain, threshold); ties keep the lowest threshold.
    """
    sid = presort[node_mask.view(np.bool_)[presort]]
    n = sid.size
    if n != n_node:
        raise ValueError("node mask does not match n_node")
    if n < 2:
        return _NO_SPLIT
    v = values[sid]
    gp = np.cumsum(g[sid])
    hp = np.cumsum(h[sid])
    cut = np.nonzero(v[:-1] != v[1:])[0]
    if cut.size == 0:
        return _NO_SPLIT
    left_n = cut + 1
    ok = (left_n >= min_leaf) & ((n - left_n) >= min_leaf)
    lo = v[cut]
    hi = v[cut + 1]
    thr = lo + (hi - lo) * 0.5
    thr = np.where(thr <= lo, hi, thr)
    if banned.size:
        ok &= ~np.isin(thr, banned)
    if not np.any(ok):
        return _NO_SPLIT
    gl = gp[cut]
    hl = hp[cut]
    gr = g_tot - gl
    hr = h_tot - hl
    with np.errstate(divide="ignore", invalid="ignore"):
        gain = 0.5 * (gl * gl / (hl + lam) + gr * gr / (hr + lam) - (gl + gr) * (gl + gr) / ((hl + hr) + lam))
    gain = np.where(ok, gain, -np.inf)
    k = int(np.argmax(gain))
    if not ok[k]:
        return _NO_SPLIT
    return True, float(gain[k]), float(thr[k])


def best_categorical_split(node_ids, codes, g, h, g_tot, h_tot, n_cats, lam, min_leaf, banned):
    """Best one-vs-rest "value == c" split for one categorical feature.

    node_ids must be ascending so the per-category accumulation order matches
    the compiled loop. Candidates are the codes present in the node, scanned
    ascending; ties keep the lowest code. Returns (found, gain, code).
    """
    c = codes[node_ids]
    n = node_ids.size
    cnt = np.bincount(c, minlength=n_cats)
    gl = np.bincount(c, weights=g[node_ids], minlength=n_cats)
    hl = np.bincount(c, weights=h[node_ids], minlength=n_cats)
    ok = (cnt > 0) & (cnt >= min_leaf) & ((n - cnt) >= min_leaf)
    if banned.size:
        ok[banned] = False
    if not np.any(ok):
        return _NO_SPLIT
    gr = g_tot - gl
    hr = h_tot - hl
    with np.errstate(divide="ignore", invalid="ignore"):
        gain = 0.5 * (gl * gl / (hl + lam) + gr * gr / (hr + lam) - (gl + gr) * (gl + gr) / ((hl + hr) + lam))
    gain = np.where(ok, gain, -np.inf)
    k = int(np.argmax(gain))
    if not ok[k]:
        return _NO_SPLIT
    return True, float(gain[k]), float(k)
