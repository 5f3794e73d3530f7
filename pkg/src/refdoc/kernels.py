"""Hot tree-construction kernels: numba-jitted with a pure-numpy fallback.

Tree split search dominates training time, so it is implemented twice with
identical semantics: tight loops compiled by numba (default) and a
vectorized numpy path. Select with the REFDOC_KERNELS environment variable
("numba" or "numpy"); numpy is used automatically when numba is not
importable. benchmarks/bench_kernels.py compares the two.

Feature matrices arrive as CSC-style arrays whose entries are sorted by
(column, value, row); `col_of` carries the column id of every entry.
Sample-to-leaf assignment lives in `node_of`; rows with node_of == -1 (for
example out-of-bag rows under bootstrap weights) belong to no leaf.
"""

from __future__ import annotations

import os
import warnings
from types import SimpleNamespace

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        if args and callable(args[0]):
            return args[0]
        return wrap


def build_sorted_csc(X_csr):
    """(indptr, rows, vals, col_of) with entries sorted by (col, val, row)."""
    coo = X_csr.tocoo()
    order = np.lexsort((coo.row, coo.data, coo.col))
    cols = coo.col[order].astype(np.int64)
    rows = coo.row[order].astype(np.int64)
    vals = coo.data[order].astype(np.float64)
    n_cols = X_csr.shape[1]
    counts = np.bincount(cols, minlength=n_cols)
    indptr = np.zeros(n_cols + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, rows, vals, cols


# ---------------------------------------------------------------------------
# numpy reference implementations
# ---------------------------------------------------------------------------

def np_gbt_best_split(indptr, rows, vals, col_of, node_of, node, g, h,
                      sum_g, sum_h, count, min_leaf):
    """Best (gain, feature, threshold) for one leaf of a boosted tree.

    Gain is the Newton objective improvement (lg^2/lh + rg^2/rh - parent);
    candidate thresholds sit between distinct in-leaf feature values with
    the implicit zero block at the left end. Returns feature -1 when no
    candidate improves on the parent.
    """
    sel = np.flatnonzero(node_of[rows] == node)
    if sel.size == 0:
        return 0.0, -1, 0.0
    feats = col_of[sel]
    v = vals[sel]
    gg = g[rows[sel]]
    hh = h[rows[sel]]

    new_seg = np.empty(sel.size, dtype=bool)
    new_seg[0] = True
    np.not_equal(feats[1:], feats[:-1], out=new_seg[1:])
    first = np.flatnonzero(new_seg)
    seg = np.cumsum(new_seg) - 1
    last = np.r_[first[1:], sel.size] - 1

    cg = np.cumsum(gg)
    ch = np.cumsum(hh)
    base_g = np.where(first > 0, cg[first - 1], 0.0)
    base_h = np.where(first > 0, ch[first - 1], 0.0)
    prefix_g = cg - base_g[seg]
    prefix_h = ch - base_h[seg]
    prefix_n = np.arange(sel.size) - first[seg] + 1

    seg_n = last - first + 1
    seg_g = prefix_g[last]
    seg_h = prefix_h[last]
    zero_n = count - seg_n           # per segment
    zero_g = sum_g - seg_g
    zero_h = sum_h - seg_h

    parent = (sum_g * sum_g) / sum_h

    def gains_of(ln, lg, lh, rn, rg, rh):
        ok = (ln >= min_leaf) & (rn >= min_leaf) & (lh > 0.0) & (rh > 0.0)
        lh_safe = np.where(ok, lh, 1.0)
        rh_safe = np.where(ok, rh, 1.0)
        gain = (lg * lg) / lh_safe + (rg * rg) / rh_safe - parent
        return np.where(ok, gain, -np.inf)

    # zeros-vs-nonzeros boundary, one candidate per segment
    a_ok = zero_n > 0
    a_gain = np.where(
        a_ok,
        gains_of(zero_n, zero_g, zero_h,
                 count - zero_n, sum_g - zero_g, sum_h - zero_h),
        -np.inf,
    )
    a_thr = 0.5 * v[first]
    a_feat = feats[first]
    a_key = first - 0.5

    # boundaries between consecutive distinct values inside a segment
    b_idx = np.flatnonzero((seg[:-1] == seg[1:]) & (v[1:] > v[:-1]))
    ln = zero_n[seg[b_idx]] + prefix_n[b_idx]
    lg = zero_g[seg[b_idx]] + prefix_g[b_idx]
    lh = zero_h[seg[b_idx]] + prefix_h[b_idx]
    b_gain = gains_of(ln, lg, lh, count - ln, sum_g - lg, sum_h - lh)
    b_thr = 0.5 * (v[b_idx] + v[b_idx + 1])
    b_feat = feats[b_idx]
    b_key = b_idx + 0.5

    gain = np.r_[a_gain, b_gain]
    thr = np.r_[a_thr, b_thr]
    feat = np.r_[a_feat, b_feat]
    key = np.r_[a_key, b_key]
    order = np.argsort(key)          # scan order of the loop implementation
    gain, thr, feat = gain[order], thr[order], feat[order]

    best = int(np.argmax(gain))
    if not np.isfinite(gain[best]) or gain[best] <= 0.0:
        return 0.0, -1, 0.0
    return float(gain[best]), int(feat[best]), float(thr[best])


def np_gbt_partition(indptr, rows, vals, node_of, node, feature, threshold,
                     new_node, g, h):
    """Move in-leaf rows with value > threshold to new_node; return their stats."""
    s, e = indptr[feature], indptr[feature + 1]
    rws = rows[s:e]
    m = (node_of[rws] == node) & (vals[s:e] > threshold)
    moved = rws[m]
    node_of[moved] = new_node
    return int(moved.size), float(g[moved].sum()), float(h[moved].sum())


def _gini_from_counts(counts, total):
    p = counts / total
    return 1.0 - np.sum(p * p)


def np_rf_best_candidate(indptr, rows, vals, node_of, node, y, weights,
                         n_classes, cand_feats, cand_fracs, node_counts,
                         count, min_leaf):
    """Best of the random (feature, threshold) candidates for one node.

    Thresholds interpolate between the in-node min and max of the candidate
    feature; Gini impurity decrease decides, first best wins on ties.
    """
    parent = _gini_from_counts(node_counts.astype(np.float64), float(count))
    best_gain, best_feat, best_thr = 0.0, -1, 0.0
    for c in range(cand_feats.size):
        j = int(cand_feats[c])
        s, e = indptr[j], indptr[j + 1]
        rws = rows[s:e]
        m = node_of[rws] == node
        if not m.any():
            continue
        rsel = rws[m]
        vsel = vals[s:e][m]
        wsel = weights[rsel]
        nz_n = int(wsel.sum())
        zero_n = count - nz_n
        vmin = 0.0 if zero_n > 0 else float(vsel[0])
        vmax = float(vsel[-1])
        if vmax <= vmin:
            continue
        thr = vmin + float(cand_fracs[c]) * (vmax - vmin)
        if thr >= vmax:
            thr = vmin
        nz_counts = np.bincount(y[rsel], weights=wsel.astype(np.float64),
                                minlength=n_classes)
        lm = vsel <= thr
        left_nz = np.bincount(y[rsel[lm]], weights=wsel[lm].astype(np.float64),
                              minlength=n_classes)
        left = (node_counts.astype(np.float64) - nz_counts) + left_nz
        ln = float(left.sum())
        rn = count - ln
        if ln < min_leaf or rn < min_leaf:
            continue
        right = node_counts.astype(np.float64) - left
        gain = parent - (ln * _gini_from_counts(left, ln)
                         + rn * _gini_from_counts(right, rn)) / count
        if gain > best_gain:
            best_gain, best_feat, best_thr = float(gain), j, float(thr)
    return best_gain, best_feat, best_thr


def np_rf_partition(indptr, rows, vals, node_of, node, feature, threshold,
                    new_node, y, weights, n_classes):
    """Move in-node rows with value > threshold to new_node; return their class counts."""
    s, e = indptr[feature], indptr[feature + 1]
    rws = rows[s:e]
    m = (node_of[rws] == node) & (vals[s:e] > threshold)
    moved = rws[m]
    node_of[moved] = new_node
    counts = np.bincount(y[moved], weights=weights[moved].astype(np.float64),
                         minlength=n_classes)
    return counts.astype(np.int64)


# ---------------------------------------------------------------------------
# numba twins
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _nb_gbt_best_split(indptr, rows, vals, col_of, node_of, node, g, h,
                       sum_g, sum_h, count, min_leaf):
    best_gain = 0.0
    best_feat = -1
    best_thr = 0.0
    parent = (sum_g * sum_g) / sum_h
    n_feat = indptr.size - 1
    for j in range(n_feat):
        s = indptr[j]
        e = indptr[j + 1]
        nz_n = 0
        nz_g = 0.0
        nz_h = 0.0
        for k in range(s, e):
            r = rows[k]
            if node_of[r] == node:
                nz_n += 1
                nz_g += g[r]
                nz_h += h[r]
        if nz_n == 0:
            continue
        left_n = count - nz_n
        left_g = sum_g - nz_g
        left_h = sum_h - nz_h
        prev_val = 0.0
        for k in range(s, e):
            r = rows[k]
            if node_of[r] != node:
                continue
            v = vals[k]
            if v > prev_val and left_n > 0:
                right_n = count - left_n
                if (left_n >= min_leaf and right_n >= min_leaf):
                    right_g = sum_g - left_g
                    right_h = sum_h - left_h
                    if left_h > 0.0 and right_h > 0.0:
                        gain = ((left_g * left_g) / left_h
                                + (right_g * right_g) / right_h - parent)
                        if gain > best_gain:
                            best_gain = gain
                            best_feat = j
                            best_thr = 0.5 * (prev_val + v)
            left_n += 1
            left_g += g[r]
            left_h += h[r]
            prev_val = v
    return best_gain, best_feat, best_thr


@njit(cache=True, nogil=True)
def _nb_gbt_partition(indptr, rows, vals, node_of, node, feature, threshold,
                      new_node, g, h):
    s = indptr[feature]
    e = indptr[feature + 1]
    rn = 0
    rg = 0.0
    rh = 0.0
    for k in range(s, e):
        r = rows[k]
        if node_of[r] == node and vals[k] > threshold:
            node_of[r] = new_node
            rn += 1
            rg += g[r]
            rh += h[r]
    return rn, rg, rh


@njit(cache=True, nogil=True)
def _nb_gini(counts, total):
    acc = 0.0
    for k in range(counts.size):
        p = counts[k] / total
        acc += p * p
    return 1.0 - acc


@njit(cache=True, nogil=True)
def _nb_rf_best_candidate(indptr, rows, vals, node_of, node, y, weights,
                          n_classes, cand_feats, cand_fracs, node_counts,
                          count, min_leaf):
    fcounts = node_counts.astype(np.float64)
    parent = _nb_gini(fcounts, float(count))
    best_gain = 0.0
    best_feat = -1
    best_thr = 0.0
    nz = np.empty(n_classes, dtype=np.float64)
    left = np.empty(n_classes, dtype=np.float64)
    right = np.empty(n_classes, dtype=np.float64)
    for c in range(cand_feats.size):
        j = cand_feats[c]
        s = indptr[j]
        e = indptr[j + 1]
        nz_n = 0
        vmin = 0.0
        vmax = 0.0
        seen = False
        for k in range(s, e):
            r = rows[k]
            if node_of[r] == node:
                nz_n += weights[r]
                if not seen:
                    vmin = vals[k]
                    seen = True
                vmax = vals[k]
        if not seen:
            continue
        zero_n = count - nz_n
        if zero_n > 0:
            vmin = 0.0
        if vmax <= vmin:
            continue
        thr = vmin + cand_fracs[c] * (vmax - vmin)
        if thr >= vmax:
            thr = vmin
        for k2 in range(n_classes):
            nz[k2] = 0.0
            left[k2] = 0.0
        for k in range(s, e):
            r = rows[k]
            if node_of[r] == node:
                w = float(weights[r])
                nz[y[r]] += w
                if vals[k] <= thr:
                    left[y[r]] += w
        ln = 0.0
        for k2 in range(n_classes):
            left[k2] = (fcounts[k2] - nz[k2]) + left[k2]
            ln += left[k2]
        rn = count - ln
        if ln < min_leaf or rn < min_leaf:
            continue
        for k2 in range(n_classes):
            right[k2] = fcounts[k2] - left[k2]
        gain = parent - (ln * _nb_gini(left, ln)
                         + rn * _nb_gini(right, rn)) / count
        if gain > best_gain:
            best_gain = gain
            best_feat = j
            best_thr = thr
    return best_gain, best_feat, best_thr


@njit(cache=True, nogil=True)
def _nb_rf_partition(indptr, rows, vals, node_of, node, feature, threshold,
                     new_node, y, weights, n_classes):
    counts = np.zeros(n_classes, dtype=np.int64)
    s = indptr[feature]
    e = indptr[feature + 1]
    for k in range(s, e):
        r = rows[k]
        if node_of[r] == node and vals[k] > threshold:
            node_of[r] = new_node
            counts[y[r]] += weights[r]
    return counts


def nb_gbt_best_split(indptr, rows, vals, col_of, node_of, node, g, h,
                      sum_g, sum_h, count, min_leaf):
    gain, feat, thr = _nb_gbt_best_split(
        indptr, rows, vals, col_of, node_of, np.int64(node), g, h,
        float(sum_g), float(sum_h), np.int64(count), np.int64(min_leaf))
    return float(gain), int(feat), float(thr)


def nb_gbt_partition(indptr, rows, vals, node_of, node, feature, threshold,
                     new_node, g, h):
    rn, rg, rh = _nb_gbt_partition(
        indptr, rows, vals, node_of, np.int64(node), np.int64(feature),
        float(threshold), np.int64(new_node), g, h)
    return int(rn), float(rg), float(rh)


def nb_rf_best_candidate(indptr, rows, vals, node_of, node, y, weights,
                         n_classes, cand_feats, cand_fracs, node_counts,
                         count, min_leaf):
    gain, feat, thr = _nb_rf_best_candidate(
        indptr, rows, vals, node_of, np.int64(node), y, weights,
        np.int64(n_classes), cand_feats, cand_fracs, node_counts,
        np.int64(count), np.int64(min_leaf))
    return float(gain), int(feat), float(thr)


def nb_rf_partition(indptr, rows, vals, node_of, node, feature, threshold,
                    new_node, y, weights, n_classes):
    return _nb_rf_partition(
        indptr, rows, vals, node_of, np.int64(node), np.int64(feature),
        float(threshold), np.int64(new_node), y, weights, np.int64(n_classes))


_NUMPY = SimpleNamespace(
    name="numpy",
    gbt_best_split=np_gbt_best_split,
    gbt_partition=np_gbt_partition,
    rf_best_candidate=np_rf_best_candidate,
    rf_partition=np_rf_partition,
)

_NUMBA = SimpleNamespace(
    name="numba",
    gbt_best_split=nb_gbt_best_split,
    gbt_partition=nb_gbt_partition,
    rf_best_candidate=nb_rf_best_candidate,
    rf_partition=nb_rf_partition,
)


def default_backend() -> str:
    env = os.environ.get("REFDOC_KERNELS", "").strip().lower()
    if env == "numpy":
        return "numpy"
    if env == "numba":
        if not HAVE_NUMBA:
            warnings.warn("REFDOC_KERNELS=numba but numba is not installed; "
                          "using the numpy kernels")
            return "numpy"
        return "numba"
    if env:
        raise ValueError(f"REFDOC_KERNELS must be 'numba' or 'numpy', got {env!r}")
    return "numba" if HAVE_NUMBA else "numpy"


def get_kernels(backend=None) -> SimpleNamespace:
    """Kernel namespace for the requested backend (default: env/numba)."""
    name = backend or default_backend()
    if name == "numpy":
        return _NUMPY
    if name == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is not installed")
        return _NUMBA
    raise ValueError(f"unknown kernel backend {name!r}")
