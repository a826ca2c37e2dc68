"""Density evolution for list message passing with list size 1 or 2.

Messages are tracked through their symmetry classes under the all-zero
codeword:

    0: empty set      1: {0}       2: {a}, a != 0
    3: {0, a}         4: {a, e}, a, e != 0

(classes 3 and 4 exist only for list size 2).  The check-node side uses
closed-form polynomial expressions in ``rho``.  The variable-node side is
computed exactly by enumerating the ``d - 1`` incoming messages: wrong
symbols are interchangeable, so each ordered message sequence is
enumerated with wrong symbols labelled in order of first appearance and
weighted by the number of concrete symbol choices it represents.  The
enumeration size therefore depends on ``d`` and the list size but not on
``q``.  A sampling estimator is provided for configurations too large to
enumerate.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .decoder import decide_batch, minkowski_batch, _extended_tables
from .ensembles import DegreeDistribution
from .gf import field as gf_field
from .qsc import QscParams, safe_log
from .schedule import ReliabilitySchedule

DEFAULT_DELTA_GRID = tuple(np.round(np.arange(0.0, 3.0 + 1e-9, 0.05), 10))
DEFAULT_DELTA_REFINE = 0.01
DEFAULT_TERM_BUDGET = 2_000_000


class UnsupportedConfiguration(ValueError):
    """Raised for list sizes / field orders the analysis does not cover."""


def _check(q, gamma):
    if gamma not in (1, 2):
        raise UnsupportedConfiguration(f"density evolution supports list size 1 or 2, not {gamma}")
    if gamma == 2 and q < 3:
        raise UnsupportedConfiguration("list size 2 over F_2 is degenerate (no wrong pairs)")


def class_sizes(q: int, gamma: int) -> np.ndarray:
    """Number of messages in each symmetry class."""
    sizes = [1, 1, q - 1]
    if gamma == 2:
        sizes += [q - 1, (q - 1) * (q - 2) // 2]
    return np.array(sizes, dtype=float)


def initial_state(eps: float, gamma: int) -> np.ndarray:
    x = np.zeros(3 if gamma == 1 else 5)
    x[1] = 1.0 - eps
    x[2] = eps
    return x


def _clean(v):
    """Clamp round-off negatives and renormalize."""
    v = np.clip(v, 0.0, 1.0)
    return v / v.sum()


# --------------------------------------------------------------------------
# check-node side
# --------------------------------------------------------------------------

def cn_de_step_g1(x, dd: DegreeDistribution, q: int) -> np.ndarray:
    x0, x1, x2 = x
    a = dd.eval_rho(x1 + x2)
    b = dd.eval_rho(x1 - x2 / (q - 1))
    s0 = 1.0 - dd.eval_rho(1.0 - x0)
    s1 = (a + (q - 1) * b) / q
    s2 = (q - 1) / q * (a - b)
    return _clean(np.array([s0, s1, s2], dtype=float))


def cn_de_step_g2(x, dd: DegreeDistribution, q: int) -> np.ndarray:
    """Closed-form CN update for list size 2 (characteristic-2 fields)."""
    if q < 3:
        raise UnsupportedConfiguration("list size 2 over F_2 is degenerate (no wrong pairs)")
    x0, x1, x2, x3, x4 = x
    rho = dd.eval_rho
    a = rho(x1 + x2)
    b = rho(x1 - x2 / (q - 1))
    c = rho(x1 + x2 + x3 / (q - 1) + x4 / (q - 1))
    e = rho(x1 - x2 / (q - 1) + x3 / (q - 1) - 2 * x4 / ((q - 1) * (q - 2)))
    s1 = (a + (q - 1) * b) / q
    s2 = (q - 1) / q * (a - b)
    s3 = (q - 1) / q * (-2 * a + 2 * c + (q - 2) * e - (q - 2) * b)
    s4 = (q - 1) * (q - 2) / q * (c - a - e + b)
    s0 = 1.0 - s1 - s2 - s3 - s4
    return _clean(np.array([s0, s1, s2, s3, s4], dtype=float))


@lru_cache(maxsize=32)
def _sumset_table(q: int, gamma: int):
    """Alphabet index of ``a + b`` for all message pairs; ``-1`` on overflow/empty."""
    gf = gf_field(q)
    alpha = message_alphabet(q, gamma)
    index = {m: i for i, m in enumerate(alpha)}
    A = len(alpha)
    if A * A > 20_000_000:
        raise UnsupportedConfiguration(f"sumset table for q={q} is too large")
    table = np.full((A, A), -1, dtype=np.int64)
    for i, a in enumerate(alpha):
        for j, b in enumerate(alpha):
            if a and b:
                ssum = tuple(sorted({int(gf.add_table[u, v]) for u in a for v in b}))
                if len(ssum) <= gamma:
                    table[i, j] = index[ssum]
    classes = np.array([message_class(m, 0) for m in alpha])
    return table, classes


def cn_de_step_enumerated(x, dd: DegreeDistribution, q: int, gamma: int) -> np.ndarray:
    """CN update by exact convolution of message distributions.

    Valid in any characteristic; used for list size 2 over odd prime fields,
    where the closed-form pair expressions do not apply.
    """
    x = np.asarray(x, dtype=float)
    table, classes = _sumset_table(q, gamma)
    sizes = class_sizes(q, gamma)
    A = classes.size
    # label scaling keeps each class uniform, so the input law is class mass / class size
    dist = x[classes] / sizes[classes]
    start = np.zeros(A)
    start[1] = 1.0  # the set {0}
    s = np.zeros(sizes.size)
    for dc, r in dd.rho.items():
        acc = start
        for _ in range(dc - 1):
            joint = np.outer(acc, dist)
            ok = table >= 0
            acc = np.bincount(table[ok], weights=joint[ok], minlength=A)
        s += r * np.bincount(classes, weights=acc, minlength=sizes.size)
    s[0] = 1.0 - s[1:].sum()
    return _clean(s)


def cn_de_step(x, dd, q, gamma):
    _check(q, gamma)
    if gamma == 1:
        return cn_de_step_g1(x, dd, q)
    if q % 2:
        return cn_de_step_enumerated(x, dd, q, gamma)
    return cn_de_step_g2(x, dd, q)


# --------------------------------------------------------------------------
# extrinsic channel
# --------------------------------------------------------------------------

def message_alphabet(q: int, gamma: int):
    """Messages as sorted tuples: empty set, singletons, then pairs."""
    alpha = [()] + [(a,) for a in range(q)]
    if gamma >= 2:
        alpha += [(a, b) for a in range(q) for b in range(a + 1, q)]
    return alpha


def message_class(msg, truth: int = 0) -> int:
    if len(msg) == 0:
        return 0
    if len(msg) == 1:
        return 1 if msg[0] == truth else 2
    return 3 if truth in msg else 4


def _extrinsic(s, q, gamma):
    sizes = class_sizes(q, gamma)
    alpha = message_alphabet(q, gamma)
    P = np.zeros((q, len(alpha)))
    for j, z in enumerate(alpha):
        for u in range(q):
            k = message_class(z, u)
            P[u, j] = s[k] / sizes[k]
    return P, alpha


def extrinsic_channel_g1(s, q: int):
    """Transition table ``P[u, j] = P(alphabet[j] | u)`` and the alphabet."""
    return _extrinsic(np.asarray(s, dtype=float), q, 1)


def extrinsic_channel_g2(s, q: int):
    if q < 3:
        raise UnsupportedConfiguration("list size 2 over F_2 is degenerate (no wrong pairs)")
    return _extrinsic(np.asarray(s, dtype=float), q, 2)


def reliability_params(s, eps: float, q: int, gamma: int):
    """``(d_ch, d1, d2)``; ``d2`` is ``None`` for list size 1."""
    d_ch = QscParams(q, eps).d_ch
    d1 = float(safe_log(s[1]) - safe_log(s[2] / (q - 1)))
    if gamma == 1:
        return d_ch, d1, None
    sizes = class_sizes(q, gamma)
    d2 = float(safe_log(s[3] / sizes[3]) - safe_log(s[4] / sizes[4]))
    return d_ch, d1, d2


# --------------------------------------------------------------------------
# variable-node side: exact enumeration
# --------------------------------------------------------------------------

def count_terms(q: int, gamma: int, nmsg: int, y_wrong: bool) -> int:
    """Number of enumerated sequences for one (degree, y-class) pair."""
    counts = {2 if y_wrong else 1: 1}
    for _ in range(nmsg):
        nxt: dict[int, int] = {}
        for L, c in counts.items():
            r = q - L
            nxt[L] = nxt.get(L, 0) + c * (1 + L + (L * (L - 1) // 2 if gamma >= 2 else 0))
            if r > 0:
                nxt[L + 1] = nxt.get(L + 1, 0) + c * (1 + (L if gamma >= 2 else 0))
            if gamma >= 2 and r > 1:
                nxt[L + 2] = nxt.get(L + 2, 0) + c
        counts = nxt
    return sum(counts.values())


@dataclass(frozen=True)
class _Terms:
    weight: np.ndarray    # (T,) number of concrete sequences per term
    exps: np.ndarray      # (T, K) messages per class
    single: np.ndarray    # (T, Lmax) singleton counts per label
    pair: np.ndarray      # (T, Lmax) pair-membership counts per label
    used: np.ndarray      # (T, Lmax) label in use
    is_y: np.ndarray      # (Lmax,) channel-output label
    rest: np.ndarray      # (T,) untouched wrong symbols


@lru_cache(maxsize=256)
def _vn_terms(q: int, gamma: int, nmsg: int, y_wrong: bool) -> _Terms:
    K = 3 if gamma == 1 else 5
    L0 = 2 if y_wrong else 1
    Lmax = min(q, L0 + nmsg * gamma)
    # state: (L, single, pair, exps, weight)
    states = [(L0, (0,) * Lmax, (0,) * Lmax, (0,) * K, 1.0)]

    def bump(t, *idx):
        t = list(t)
        for i in idx:
            t[i] += 1
        return tuple(t)

    for _ in range(nmsg):
        nxt = []
        for L, sg, pr, ex, w in states:
            r = q - L
            nxt.append((L, sg, pr, bump(ex, 0), w))
            for a in range(L):
                nxt.append((L, bump(sg, a), pr, bump(ex, 1 if a == 0 else 2), w))
            if r > 0:
                nxt.append((L + 1, bump(sg, L), pr, bump(ex, 2), w * r))
            if gamma < 2:
                continue
            for a in range(L):
                for b in range(a + 1, L):
                    nxt.append((L, sg, bump(pr, a, b), bump(ex, 3 if a == 0 else 4), w))
            if r > 0:
                for a in range(L):
                    nxt.append((L + 1, sg, bump(pr, a, L), bump(ex, 3 if a == 0 else 4), w * r))
            if r > 1:
                nxt.append((L + 2, sg, bump(pr, L, L + 1), bump(ex, 4), w * r * (r - 1) / 2))
        states = nxt

    Ls = np.array([s[0] for s in states])
    is_y = np.zeros(Lmax)
    is_y[1 if y_wrong else 0] = 1.0
    return _Terms(
        weight=np.array([s[4] for s in states]),
        exps=np.array([s[3] for s in states], dtype=float),
        single=np.array([s[1] for s in states], dtype=float),
        pair=np.array([s[2] for s in states], dtype=float),
        used=np.arange(Lmax)[None, :] < Ls[:, None],
        is_y=is_y,
        rest=q - Ls,
    )


def lam_from_counts(single, pair, is_y, d_ch, d1, d2):
    """Aggregated LL values from per-symbol counts (shared by exact and sampled paths)."""
    return d1 * single + d2 * pair + d_ch * is_y


def classify_decisions(slots, correct_col, q):
    """Symmetry class of decided sets given as ``(N, gamma)`` slot arrays."""
    size = (slots < q).sum(axis=1)
    has0 = (slots == correct_col).any(axis=1)
    cls = np.zeros(slots.shape[0], dtype=np.int64)
    cls[(size == 1) & has0] = 1
    cls[(size == 1) & ~has0] = 2
    cls[(size == 2) & has0] = 3
    cls[(size == 2) & ~has0] = 4
    return cls


def _term_classes(terms: _Terms, gamma, d_ch, d1, d2, delta):
    lam = lam_from_counts(terms.single, terms.pair, terms.is_y[None, :], d_ch, d1, d2)
    lam = np.where(terms.used, lam, -np.inf)
    nz = gamma + 1
    zeros = np.where(np.arange(nz)[None, :] < terms.rest[:, None], 0.0, -np.inf)
    lam = np.concatenate([lam, zeros], axis=1)
    slots = decide_batch(lam, delta, gamma)
    return classify_decisions(slots, 0, lam.shape[1])


def vn_de_step(s, eps, dd: DegreeDistribution, q: int, gamma: int, delta: float,
               budget: int = DEFAULT_TERM_BUDGET) -> np.ndarray:
    """Exact VN-side update ``s -> x`` by enumeration."""
    _check(q, gamma)
    s = np.asarray(s, dtype=float)
    d_ch, d1, d2 = reliability_params(s, eps, q, gamma)
    d2 = 0.0 if d2 is None else d2
    p = s / class_sizes(q, gamma)
    K = s.size
    x = np.zeros(K)
    for d, lam_d in dd.lam.items():
        for y_wrong, py in ((False, 1.0 - eps), (True, eps)):
            if py == 0.0:
                continue
            n_terms = count_terms(q, gamma, d - 1, y_wrong)
            if n_terms > budget:
                raise UnsupportedConfiguration(
                    f"{n_terms} enumeration terms exceed the budget {budget}; use monte_carlo mode")
            t = _vn_terms(q, gamma, d - 1, y_wrong)
            prob = t.weight * np.prod(np.power(p[None, :], t.exps), axis=1)
            cls = _term_classes(t, gamma, d_ch, d1, d2, delta)
            x += lam_d * py * np.bincount(cls, weights=prob, minlength=K)
    return _clean(x)


def vn_de_step_g1(s, eps, dd, q, delta, **kw):
    return vn_de_step(s, eps, dd, q, 1, delta, **kw)


def vn_de_step_g2(s, eps, dd, q, delta, **kw):
    return vn_de_step(s, eps, dd, q, 2, delta, **kw)


# --------------------------------------------------------------------------
# sampling estimators
# --------------------------------------------------------------------------

def _sample_messages(cls, q, rng):
    """Concrete messages ``(N, 2)`` (slot value ``q`` = unused) for class labels."""
    N = cls.size
    out = np.full((N, 2), q, dtype=np.int64)
    a = rng.integers(1, q, size=N)
    out[cls == 1, 0] = 0
    m2 = cls == 2
    out[m2, 0] = a[m2]
    m3 = cls == 3
    out[m3, 0] = 0
    out[m3, 1] = a[m3]
    m4 = np.flatnonzero(cls == 4)
    if m4.size:
        # uniform pair of distinct nonzero symbols
        b = rng.integers(1, q - 1, size=m4.size)
        b = b + (b >= a[m4])
        out[m4, 0] = np.minimum(a[m4], b)
        out[m4, 1] = np.maximum(a[m4], b)
    return out


def _sample_degrees(poly, samples, rng):
    degs = np.array(list(poly.keys()))
    probs = np.array(list(poly.values()))
    return degs, rng.multinomial(samples, probs / probs.sum())


def mc_vn_de_step(s, eps, dd: DegreeDistribution, q: int, gamma: int, delta: float,
                  samples: int, rng: np.random.Generator, chunk: int = 200_000):
    """Sampling estimate of :func:`vn_de_step`; returns ``(x, stderr)``."""
    _check(q, gamma)
    s = np.asarray(s, dtype=float)
    d_ch, d1, d2 = reliability_params(s, eps, q, gamma)
    d2 = 0.0 if d2 is None else d2
    K = s.size
    counts = np.zeros(K)
    degs, per_deg = _sample_degrees(dd.lam, samples, rng)
    for d, nd in zip(degs, per_deg):
        done = 0
        while done < nd:
            N = min(chunk, nd - done)
            done += N
            y = np.where(rng.random(N) < eps, rng.integers(1, q, size=N), 0)
            single = np.zeros((N, q))
            pair = np.zeros((N, q))
            rows = np.arange(N)
            for _ in range(d - 1):
                cls = rng.choice(K, size=N, p=s)
                msg = _sample_messages(cls, q, rng)
                one = cls <= 2
                np.add.at(single, (rows[one & (cls > 0)], msg[one & (cls > 0), 0]), 1.0)
                two = cls >= 3
                np.add.at(pair, (rows[two], msg[two, 0]), 1.0)
                np.add.at(pair, (rows[two], msg[two, 1]), 1.0)
            is_y = np.zeros((N, q))
            is_y[rows, y] = 1.0
            lam = lam_from_counts(single, pair, is_y, d_ch, d1, d2)
            slots = decide_batch(lam, delta, gamma)
            counts += np.bincount(classify_decisions(slots, 0, q), minlength=K)
    x = counts / samples
    return x, np.sqrt(x * (1.0 - x) / samples)


def mc_cn_de_step(x, dd: DegreeDistribution, q: int, gamma: int, samples: int,
                  rng: np.random.Generator, chunk: int = 200_000):
    """Sampling estimate of :func:`cn_de_step` with random nonzero edge labels."""
    _check(q, gamma)
    x = np.asarray(x, dtype=float)
    gf = gf_field(q)
    add, mul = _extended_tables(gf)
    K = x.size
    counts = np.zeros(K)
    degs, per_deg = _sample_degrees(dd.rho, samples, rng)
    for dc, nd in zip(degs, per_deg):
        done = 0
        while done < nd:
            N = min(chunk, nd - done)
            done += N
            acc = np.full((N, gamma), q, dtype=np.int64)
            acc[:, 0] = 0
            dead = np.zeros(N, dtype=bool)
            for _ in range(dc - 1):
                cls = rng.choice(K, size=N, p=x)
                msg = _sample_messages(cls, q, rng)[:, :gamma]
                h = rng.integers(1, q, size=N)
                msg = mul[h[:, None], msg]
                acc, dead = minkowski_batch(acc, dead, msg, cls == 0, add, gamma, q)
            h = rng.integers(1, q, size=N)
            out = mul[gf.neg_table[gf.inv_table[h]][:, None], acc]
            out[dead] = q
            counts += np.bincount(classify_decisions(out, 0, q), minlength=K)
    s = counts / samples
    return s, np.sqrt(s * (1.0 - s) / samples)


# --------------------------------------------------------------------------
# iteration, threshold, schedules
# --------------------------------------------------------------------------

EXACT = "exact"
MONTE_CARLO = "monte_carlo"


@dataclass
class DeConfig:
    q: int
    dd: DegreeDistribution
    eps: float
    gamma: int = 1
    delta: object = 1.0          # constant or per-iteration sequence
    max_iter: int = 500
    convergence_tol: float = 1e-6
    mode: str = EXACT
    samples: int = 100_000
    seed: int = 0
    budget: int = DEFAULT_TERM_BUDGET
    stall_tol: float = 1e-14

    def __post_init__(self):
        _check(self.q, self.gamma)
        if not 0.0 < self.convergence_tol < 1.0:
            raise ValueError("convergence_tol must lie in (0, 1)")
        if not 0.0 <= self.eps <= 1.0:
            raise ValueError("eps must lie in [0, 1]")
        if self.mode not in (EXACT, MONTE_CARLO):
            raise ValueError(f"unknown mode {self.mode!r}")

    def delta_at(self, it: int) -> float:
        if np.ndim(self.delta) == 0:
            return float(self.delta)
        seq = list(self.delta)
        return float(seq[min(it, len(seq)) - 1])


@dataclass
class DeState:
    iter: int
    x: np.ndarray
    s: np.ndarray | None = None
    d1: float | None = None
    d2: float | None = None
    delta: float | None = None


@dataclass
class DeResult:
    converged: bool
    iterations: int
    trajectory: list = field(default_factory=list)
    schedule: ReliabilitySchedule | None = None


def de_run(cfg: DeConfig) -> DeResult:
    """Alternate CN and VN updates from the channel-initialised state."""
    q, gamma = cfg.q, cfg.gamma
    rng = np.random.default_rng(cfg.seed) if cfg.mode == MONTE_CARLO else None
    x = initial_state(cfg.eps, gamma)
    traj = [DeState(0, x)]
    d_ch = QscParams(q, cfg.eps).d_ch
    converged = x[1] > 1.0 - cfg.convergence_tol
    it = 0
    while not converged and it < cfg.max_iter:
        it += 1
        delta = cfg.delta_at(it)
        s = cn_de_step(x, cfg.dd, q, gamma)
        _, d1, d2 = reliability_params(s, cfg.eps, q, gamma)
        if cfg.mode == EXACT:
            x_new = vn_de_step(s, cfg.eps, cfg.dd, q, gamma, delta, cfg.budget)
        else:
            x_new, _ = mc_vn_de_step(s, cfg.eps, cfg.dd, q, gamma, delta, cfg.samples, rng)
        traj.append(DeState(it, x_new, s, d1, d2, delta))
        converged = x_new[1] > 1.0 - cfg.convergence_tol
        if not converged and cfg.mode == EXACT and np.max(np.abs(x_new - x)) < cfg.stall_tol:
            x = x_new
            break
        x = x_new
    rows = traj[1:]
    if rows:
        sched = ReliabilitySchedule(
            d_ch, [r.d1 for r in rows], [r.delta for r in rows],
            None if gamma == 1 else [r.d2 for r in rows],
            meta={"q": q, "gamma": gamma, "eps": cfg.eps, "dd": str(cfg.dd),
                  "converged": bool(converged)})
    else:
        # noiseless start: no iteration needed, but keep a usable schedule
        s = cn_de_step(x, cfg.dd, q, gamma)
        _, d1, d2 = reliability_params(s, cfg.eps, q, gamma)
        sched = ReliabilitySchedule(d_ch, [d1], [cfg.delta_at(1)], None if gamma == 1 else [d2],
                                    meta={"q": q, "gamma": gamma, "eps": cfg.eps,
                                          "dd": str(cfg.dd), "converged": True})
    return DeResult(bool(converged), it, traj, sched)


def converges(q, dd, gamma, eps, delta, **kw) -> bool:
    return de_run(DeConfig(q=q, dd=dd, eps=eps, gamma=gamma, delta=delta, **kw)).converged


def threshold(q: int, dd: DegreeDistribution, gamma: int, delta=1.0,
              resolution: float = 1e-4, **kw) -> float:
    """Largest eps for which DE converges (bisection).

    ``delta`` is a constant, a per-iteration sequence, or ``"grid"`` /
    a list wrapped as ``("grid", values)`` to maximise over constant values.
    """
    if resolution < 1e-5:
        raise ValueError("resolution must be >= 1e-5")
    if isinstance(delta, str) and delta == "grid":
        return optimize_delta(q, dd, gamma, resolution=resolution, **kw)[1]
    if isinstance(delta, tuple) and len(delta) == 2 and delta[0] == "grid":
        return optimize_delta(q, dd, gamma, grid=delta[1], resolution=resolution, **kw)[1]
    _check(q, gamma)
    lo, hi = 0.0, (q - 1) / q
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if converges(q, dd, gamma, mid, delta, **kw):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def optimize_delta(q: int, dd: DegreeDistribution, gamma: int, grid=DEFAULT_DELTA_GRID,
                   resolution: float = 1e-4, refine: float | None = DEFAULT_DELTA_REFINE,
                   refine_top: int = 3, **kw):
    """Best constant delta on ``grid``; ties go to the smallest delta.

    With ``refine`` set, the ``refine_top`` best grid points are re-searched
    on a local grid of that step spanning the neighbouring grid points.
    """
    grid = sorted({round(float(g), 10) for g in grid})
    if not grid:
        raise ValueError("empty delta grid")
    results = {}

    def evaluate(dlt):
        dlt = round(dlt, 10)
        if dlt not in results:
            results[dlt] = threshold(q, dd, gamma, dlt, resolution=resolution, **kw)
        return results[dlt]

    for dlt in grid:
        evaluate(dlt)
    if refine and len(grid) > 1:
        top = sorted(grid, key=lambda d: (-results[d], d))[:refine_top]
        for centre in top:
            i = grid.index(centre)
            lo = grid[max(i - 1, 0)]
            hi = grid[min(i + 1, len(grid) - 1)]
            for dlt in np.arange(lo, hi + 1e-9, refine):
                evaluate(float(dlt))
    best_delta = min(results, key=lambda d: (-results[d], d))
    return best_delta, results[best_delta]


def trajectory_csv(result: DeResult, gamma: int) -> str:
    K = 3 if gamma == 1 else 5
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["iteration"] + [f"x_I{k}" for k in range(K)] + [f"s_I{k}" for k in range(K)]
               + ["D1", "D2"])
    for st in result.trajectory:
        s = [""] * K if st.s is None else [repr(float(v)) for v in st.s]
        d1 = "" if st.d1 is None else repr(float(st.d1))
        d2 = "" if st.d2 is None else repr(float(st.d2))
        w.writerow([st.iter] + [repr(float(v)) for v in st.x] + s + [d1, d2])
    return buf.getvalue()


def schedule_for(q, dd, gamma, eps, delta, **kw) -> ReliabilitySchedule:
    """Schedule derived from a DE run at ``eps`` (stalled runs keep their tail)."""
    return de_run(DeConfig(q=q, dd=dd, eps=eps, gamma=gamma, delta=delta, **kw)).schedule


__all__ = [
    "DeConfig", "DeResult", "DeState", "UnsupportedConfiguration", "class_sizes",
    "cn_de_step", "cn_de_step_g1", "cn_de_step_g2", "cn_de_step_enumerated", "de_run", "extrinsic_channel_g1",
    "extrinsic_channel_g2", "mc_cn_de_step", "mc_vn_de_step", "optimize_delta",
    "reliability_params", "schedule_for", "threshold", "trajectory_csv", "vn_de_step",
    "vn_de_step_g1", "vn_de_step_g2", "message_alphabet", "message_class", "count_terms",
]
