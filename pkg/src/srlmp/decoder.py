"""List message-passing decoder for non-binary LDPC codes on the QSC.

Messages are sets of at most ``gamma`` field symbols, the empty set
included.  Check nodes forward the (label-scaled) Minkowski sum of their
other inputs, or the empty set on overflow / empty input.  Variable nodes
turn incoming sets into log-likelihood vectors through the extrinsic
reliabilities ``d1`` (singletons) and ``d2`` (pairs), add the channel
term, and emit the smallest top-ranked set that beats every other symbol by
more than ``delta``.

Scalar helpers operate on sorted tuples and serve as the reference
semantics.  :class:`SrlmpDecoder` runs the flooding schedule with compiled
kernels on numpy arrays, storing each message as a row of
``gamma`` slots where the value ``q`` marks an unused slot (an all-``q`` row
is the empty set).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf import FieldError, FieldSpec, field
from .schedule import ReliabilitySchedule
from .tanner import TannerGraph
from ._kernels import cn_kernel, syndrome_kernel, vn_kernel

TIE_LOWEST = "lowest"
TIE_RANDOM = "random"


# --------------------------------------------------------------------------
# scalar operations on symbol lists
# --------------------------------------------------------------------------

def minkowski_sum(a, b, gf: FieldSpec) -> tuple:
    """``{x + y : x in a, y in b}``; the empty set absorbs."""
    if not a or not b:
        return ()
    return tuple(sorted({int(gf.add_table[x, y]) for x in a for y in b}))


def scale(a, h, gf: FieldSpec) -> tuple:
    return tuple(sorted({int(gf.mul_table[h, x]) for x in a}))


def cn_update(incoming, labels_in, label_out, gamma: int, gf: FieldSpec) -> tuple:
    """Check-to-variable message from the ``d_c - 1`` extrinsic inputs."""
    if label_out == 0 or any(h == 0 for h in labels_in):
        raise FieldError("edge labels must be nonzero")
    if any(len(m) == 0 for m in incoming):
        return ()
    acc = (0,)
    for msg, h in zip(incoming, labels_in):
        acc = minkowski_sum(acc, scale(msg, h, gf), gf)
        # sumsets never shrink, so an overflow is final
        if len(acc) > gamma:
            return ()
    return scale(acc, int(gf.neg_table[gf.inv_table[label_out]]), gf)


def vn_aggregate(y: int, incoming, sched: ReliabilitySchedule, it: int, q: int):
    """Aggregated LL vector (additive constants dropped)."""
    d1, d2, _ = sched.at(it)
    lam = np.zeros(q)
    lam[y] += sched.d_ch
    for msg in incoming:
        if len(msg) == 1:
            lam[msg[0]] += d1
        elif len(msg) == 2:
            if sched.d2 is None:
                raise ValueError("pair message received with a list-size-1 schedule")
            lam[list(msg)] += d2
        elif len(msg) > 2:
            raise ValueError("no reliability defined for lists longer than 2")
    return lam


def vn_decide(lam, delta: float, gamma: int) -> tuple:
    """Grow the top-ranked set until it clears every other symbol by ``delta``."""
    lam = np.asarray(lam, dtype=float)
    order = np.argsort(-lam, kind="stable")
    for k in range(1, min(gamma, lam.size) + 1):
        if k == lam.size or lam[order[k - 1]] > lam[order[k]] + delta:
            return tuple(sorted(order[:k].tolist()))
    return ()


def final_decision(lam_app, tie_policy=TIE_LOWEST, rng=None) -> int:
    lam_app = np.asarray(lam_app, dtype=float)
    if tie_policy == TIE_LOWEST:
        return int(np.argmax(lam_app))
    best = np.flatnonzero(lam_app == lam_app.max())
    if rng is None:
        raise ValueError("random tie policy needs a generator")
    return int(best[rng.integers(best.size)]) if best.size > 1 else int(best[0])


# --------------------------------------------------------------------------
# batched kernels
# --------------------------------------------------------------------------

def _extended_tables(gf: FieldSpec):
    """Add/mul tables with an extra absorbing 'unused slot' symbol ``q``."""
    q = gf.q
    add = np.full((q + 1, q + 1), q, dtype=np.int64)
    add[:q, :q] = gf.add_table
    mul = np.full((q + 1, q + 1), q, dtype=np.int64)
    mul[:q, :q] = gf.mul_table
    return add, mul


def minkowski_batch(a, a_dead, b, b_dead, add_ext, gamma, q):
    """Row-wise sumset of slot arrays ``(N, gamma)``; overflow marks dead."""
    dead = a_dead | b_dead
    if gamma == 1:
        return add_ext[a, b], dead
    pairs = add_ext[a[:, :, None], b[:, None, :]].reshape(a.shape[0], -1)
    pairs.sort(axis=1)
    fresh = np.ones_like(pairs, dtype=bool)
    fresh[:, 1:] = pairs[:, 1:] != pairs[:, :-1]
    fresh &= pairs < q
    dead = dead | (fresh.sum(axis=1) > gamma)
    out = np.where(fresh, pairs, q)
    out.sort(axis=1)
    return out[:, :gamma], dead


def decide_batch(lam, delta: float, gamma: int):
    """Vectorized :func:`vn_decide`; returns ``(N, gamma)`` slots (``q`` = unused)."""
    N, q = lam.shape
    out = np.full((N, gamma), q, dtype=np.int64)
    if gamma == 1 and delta >= 0:
        top = np.argmax(lam, axis=1)
        rows = np.arange(N)
        v1 = lam[rows, top]
        rest = lam.copy()
        rest[rows, top] = -np.inf
        ok = v1 > rest.max(axis=1) + delta
        out[ok, 0] = top[ok]
        return out
    kk = min(gamma + 1, q)
    order = np.argsort(-lam, axis=1, kind="stable")[:, :kk]
    vals = np.take_along_axis(lam, order, axis=1)
    decided = np.zeros(N, dtype=bool)
    for k in range(1, min(gamma, q) + 1):
        ok = np.ones(N, dtype=bool) if k == q else vals[:, k - 1] > vals[:, k] + delta
        sel = ok & ~decided
        if sel.any():
            out[sel, :k] = np.sort(order[sel, :k], axis=1)
        decided |= ok
    return out


# --------------------------------------------------------------------------
# decoder
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DecoderConfig:
    gamma: int = 1
    max_iter: int = 50
    tie_policy: str = TIE_LOWEST

    def __post_init__(self):
        if self.gamma < 1:
            raise ValueError("gamma must be >= 1")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.tie_policy not in (TIE_LOWEST, TIE_RANDOM):
            raise ValueError(f"unknown tie policy {self.tie_policy!r}")


@dataclass
class DecodeResult:
    x_hat: np.ndarray
    iterations: int
    converged: bool


class SrlmpDecoder:
    """Flooding-schedule decoder bound to one Tanner graph."""

    def __init__(self, graph: TannerGraph, cfg: DecoderConfig = DecoderConfig()):
        self.graph = graph
        self.cfg = cfg
        self.gf = field(graph.q)
        self.q = graph.q
        self._add_ext, self._mul_ext = _extended_tables(self.gf)
        self._neg_inv = self.gf.neg_table[self.gf.inv_table[graph.labels]]
        self._cn_edges = np.argsort(graph.edge_cn, kind="stable")
        self._cn_ptr = np.concatenate(([0], np.cumsum(graph.cn_degrees)))
        self._vn_edges = np.argsort(graph.edge_vn, kind="stable")
        self._vn_ptr = np.concatenate(([0], np.cumsum(graph.vn_degrees)))

    # -- message kernels ---------------------------------------------------

    def initial_messages(self, y):
        E, g = self.graph.num_edges, self.cfg.gamma
        msgs = np.full((E, g), self.q, dtype=np.int64)
        msgs[:, 0] = np.asarray(y)[self.graph.edge_vn]
        return msgs

    def cn_step(self, v2c):
        """All check-to-variable messages from the variable-to-check ones."""
        out = np.empty_like(v2c)
        cn_kernel(v2c, self.graph.labels, self._neg_inv, self._cn_ptr, self._cn_edges,
                  self._add_ext, self._mul_ext, self.q, self.cfg.gamma, out)
        return out

    def vn_step(self, c2v, y, sched: ReliabilitySchedule, it: int):
        """Aggregated LL vectors ``(n, q)`` and the new variable-to-check messages."""
        d1, d2, delta = sched.at(it)
        lam = np.empty((self.graph.n, self.q))
        v2c = np.empty_like(c2v)
        ok = vn_kernel(c2v, y, self._vn_ptr, self._vn_edges, sched.d_ch, d1, d2, delta,
                       self.q, self.cfg.gamma, lam, v2c)
        if not ok:
            raise ValueError("no reliability defined for lists longer than 2")
        return lam, v2c

    def hard_decision(self, lam, rng=None):
        if self.cfg.tie_policy == TIE_LOWEST:
            return np.argmax(lam, axis=1)
        mx = lam.max(axis=1, keepdims=True)
        ties = lam == mx
        x = np.argmax(lam, axis=1)
        multi = np.flatnonzero(ties.sum(axis=1) > 1)
        if multi.size:
            if rng is None:
                raise ValueError("random tie policy needs a generator")
            noise = rng.random((multi.size, lam.shape[1]))
            noise[~ties[multi]] = -1.0
            x[multi] = np.argmax(noise, axis=1)
        return x

    def syndrome_ok(self, x) -> bool:
        return bool(syndrome_kernel(np.asarray(x, dtype=np.int64), self.graph.labels,
                                    self.graph.edge_vn, self._cn_ptr, self._cn_edges,
                                    self.gf.add_table, self.gf.mul_table))

    # -- full decode ------------------------------------------------------

    def decode(self, y, sched: ReliabilitySchedule, rng=None, trace=None) -> DecodeResult:
        """Decode channel output ``y``; stops early on a zero syndrome.

        ``trace``, if given, is called as ``trace(it, c2v, v2c, x_hat)`` after
        every iteration.
        """
        y = np.asarray(y, dtype=np.int64)
        if y.shape != (self.graph.n,):
            raise ValueError(f"expected {self.graph.n} channel symbols, got shape {y.shape}")
        if sched.d2 is None and self.cfg.gamma >= 2:
            raise ValueError("list size 2 needs a schedule with d2")
        x = y.copy()
        if self.syndrome_ok(x):
            return DecodeResult(x, 0, True)
        v2c = self.initial_messages(y)
        for it in range(1, self.cfg.max_iter + 1):
            c2v = self.cn_step(v2c)
            lam, v2c = self.vn_step(c2v, y, sched, it)
            x = self.hard_decision(lam, rng)
            if trace is not None:
                trace(it, c2v, v2c, x)
            if self.syndrome_ok(x):
                return DecodeResult(x, it, True)
        return DecodeResult(x, self.cfg.max_iter, False)


def decode(graph: TannerGraph, y, cfg: DecoderConfig, sched: ReliabilitySchedule, rng=None):
    return SrlmpDecoder(graph, cfg).decode(y, sched, rng)
