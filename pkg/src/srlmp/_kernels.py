"""Compiled per-iteration kernels for :class:`srlmp.decoder.SrlmpDecoder`.

Messages are ``(E, gamma)`` int64 slot arrays, sorted ascending, with ``q``
marking an unused slot.  Adjacency is passed in CSR form: ``ptr`` offsets into
an array of edge ids.
"""

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _isort(a, r, n):
    """In-place insertion sort of ``a[r, :n]`` (rows are at most a few slots)."""
    for i in range(1, n):
        v = a[r, i]
        k = i
        while k > 0 and a[r, k - 1] > v:
            a[r, k] = a[r, k - 1]
            k -= 1
        a[r, k] = v


@njit(cache=True, inline="always")
def _sumset(a, ra, b, rb, out, ro, gamma, q, add):
    """Sorted sumset of slot rows ``a[ra]`` and ``b[rb]`` into ``out[ro]``.

    Returns False on overflow past ``gamma`` symbols.
    """
    cnt = 0
    for i in range(gamma):
        x = a[ra, i]
        if x == q:
            break
        for j in range(gamma):
            y = b[rb, j]
            if y == q:
                break
            s = add[x, y]
            seen = False
            for k in range(cnt):
                if out[ro, k] == s:
                    seen = True
                    break
            if not seen:
                if cnt == gamma:
                    return False
                # insertion keeps the row sorted
                k = cnt
                while k > 0 and out[ro, k - 1] > s:
                    out[ro, k] = out[ro, k - 1]
                    k -= 1
                out[ro, k] = s
                cnt += 1
    for k in range(cnt, gamma):
        out[ro, k] = q
    return True


@njit(cache=True)
def _cn_kernel_single(v2c, labels, neg_inv, cn_ptr, cn_edges, add, mul, q, out, maxd):
    # list size 1: the absorbing symbol q in the extended tables marks "empty"
    pre = np.empty(maxd + 1, dtype=np.int64)
    suf = np.empty(maxd + 1, dtype=np.int64)
    for c in range(cn_ptr.size - 1):
        lo = cn_ptr[c]
        dc = cn_ptr[c + 1] - lo
        pre[0] = 0
        suf[dc] = 0
        for i in range(dc):
            e = cn_edges[lo + i]
            pre[i + 1] = add[pre[i], mul[labels[e], v2c[e, 0]]]
        for i in range(dc - 1, -1, -1):
            e = cn_edges[lo + i]
            suf[i] = add[suf[i + 1], mul[labels[e], v2c[e, 0]]]
        for i in range(dc):
            e = cn_edges[lo + i]
            out[e, 0] = mul[neg_inv[e], add[pre[i], suf[i + 1]]]


@njit(cache=True)
def cn_kernel(v2c, labels, neg_inv, cn_ptr, cn_edges, add, mul, q, gamma, out):
    maxd = 0
    for c in range(cn_ptr.size - 1):
        maxd = max(maxd, cn_ptr[c + 1] - cn_ptr[c])
    if gamma == 1:
        _cn_kernel_single(v2c, labels, neg_inv, cn_ptr, cn_edges, add, mul, q, out, maxd)
        return
    msgs = np.empty((maxd, gamma), dtype=np.int64)
    pre = np.empty((maxd + 1, gamma), dtype=np.int64)
    suf = np.empty((maxd + 1, gamma), dtype=np.int64)
    pre_ok = np.empty(maxd + 1, dtype=np.bool_)
    suf_ok = np.empty(maxd + 1, dtype=np.bool_)
    tmp = np.empty((1, gamma), dtype=np.int64)
    for c in range(cn_ptr.size - 1):
        lo = cn_ptr[c]
        dc = cn_ptr[c + 1] - lo
        for i in range(dc):
            e = cn_edges[lo + i]
            h = labels[e]
            for k in range(gamma):
                msgs[i, k] = mul[h, v2c[e, k]]
            # scaling by a nonzero label can reorder symbols
            _isort(msgs, i, gamma)
        # pre[i]: sum of inputs < i; suf[i]: sum of inputs >= i
        for k in range(gamma):
            pre[0, k] = q
            suf[dc, k] = q
        pre[0, 0] = 0
        suf[dc, 0] = 0
        pre_ok[0] = True
        suf_ok[dc] = True
        for i in range(dc):
            pre_ok[i + 1] = (pre_ok[i] and msgs[i, 0] != q
                             and _sumset(pre, i, msgs, i, pre, i + 1, gamma, q, add))
        for i in range(dc - 1, -1, -1):
            suf_ok[i] = (suf_ok[i + 1] and msgs[i, 0] != q
                         and _sumset(suf, i + 1, msgs, i, suf, i, gamma, q, add))
        for i in range(dc):
            e = cn_edges[lo + i]
            ok = pre_ok[i] and suf_ok[i + 1] and _sumset(pre, i, suf, i + 1, tmp, 0, gamma, q, add)
            if not ok:
                for k in range(gamma):
                    out[e, k] = q
                continue
            g = neg_inv[e]
            for k in range(gamma):
                out[e, k] = mul[g, tmp[0, k]]
            _isort(out, e, gamma)


@njit(cache=True)
def vn_kernel(c2v, y, vn_ptr, vn_edges, d_ch, d1, d2, delta, q, gamma, lam, v2c):
    """Fill ``lam`` (n, q) with aggregated LLs and ``v2c`` with VN decisions.

    Returns False if a message longer than two symbols was seen.
    """
    kk = min(gamma + 1, q)
    ext = np.empty(q)
    used = np.empty(q, dtype=np.bool_)
    order = np.empty(kk, dtype=np.int64)
    vals = np.empty(kk)
    for v in range(vn_ptr.size - 1):
        for u in range(q):
            lam[v, u] = 0.0
        lam[v, y[v]] += d_ch
        for p in range(vn_ptr[v], vn_ptr[v + 1]):
            e = vn_edges[p]
            size = 0
            while size < gamma and c2v[e, size] != q:
                size += 1
            if size > 2:
                return False
            w = d1 if size == 1 else d2
            for k in range(size):
                lam[v, c2v[e, k]] += w
        for p in range(vn_ptr[v], vn_ptr[v + 1]):
            e = vn_edges[p]
            for u in range(q):
                ext[u] = lam[v, u]
            size = 0
            while size < gamma and c2v[e, size] != q:
                size += 1
            w = d1 if size == 1 else d2
            for k in range(size):
                ext[c2v[e, k]] -= w
            # top kk entries, descending, ties to the lowest index
            for u in range(q):
                used[u] = False
            for t in range(kk):
                best = -1
                for u in range(q):
                    if not used[u] and (best < 0 or ext[u] > ext[best]):
                        best = u
                used[best] = True
                order[t] = best
                vals[t] = ext[best]
            for t in range(gamma):
                v2c[e, t] = q
            for k in range(1, min(gamma, q) + 1):
                if k == q or vals[k - 1] > vals[k] + delta:
                    for t in range(k):
                        v2c[e, t] = order[t]
                    _isort(v2c, e, k)
                    break
    return True


@njit(cache=True)
def syndrome_kernel(x, labels, edge_vn, cn_ptr, cn_edges, add, mul):
    for c in range(cn_ptr.size - 1):
        acc = 0
        for p in range(cn_ptr[c], cn_ptr[c + 1]):
            e = cn_edges[p]
            acc = add[acc, mul[labels[e], x[edge_vn[e]]]]
        if acc != 0:
            return False
    return True
