"""Monte Carlo symbol/frame error rate simulation over the QSC.

The all-zero codeword is transmitted; the decoder and channel commute with
adding a codeword, so this is representative of random codewords.

Every frame draws from its own generator seeded with
``(master_seed, eps_index, frame_index)``.  Frames are merged strictly in
frame order and the stopping rule is evaluated frame by frame, so the report
does not depend on how many workers ran the frames.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .decoder import TIE_LOWEST, DecoderConfig, SrlmpDecoder
from .ensembles import DegreeDistribution
from .qsc import QscParams, sample
from .schedule import ReliabilitySchedule
from .tanner import TannerGraph

CSV_COLUMNS = ("eps", "frames", "sym_errs", "ser", "ser_stderr", "fer", "mean_iters")


class MissingScheduleError(ValueError):
    pass


@dataclass
class DeriveSchedule:
    """Build the schedule for each eps from a density-evolution run at that eps."""

    dd: DegreeDistribution
    delta: float = 1.0


@dataclass
class SimConfig:
    q: int
    gamma: int
    eps_list: list
    max_iter: int = 50
    max_frames: int = 100_000
    target_symbol_errors: int = 500
    master_seed: int = 0
    # a ReliabilitySchedule, a {eps: ReliabilitySchedule} dict, or DeriveSchedule
    schedule: object = None
    workers: int = 1
    chunk: int = 16
    tie_policy: str = TIE_LOWEST
    graph_path: str | None = None

    def __post_init__(self):
        self.eps_list = [float(e) for e in self.eps_list]
        if not self.eps_list:
            raise ValueError("eps_list is empty")
        top = (self.q - 1) / self.q
        for e in self.eps_list:
            if not 0.0 < e <= top:
                raise ValueError(f"eps {e} outside (0, {top}]")
        if self.target_symbol_errors < 1:
            raise ValueError("target_symbol_errors must be >= 1")
        if self.max_frames < 1:
            raise ValueError("max_frames must be >= 1")
        if self.workers < 1 or self.chunk < 1:
            raise ValueError("workers and chunk must be >= 1")

    def schedule_for(self, eps: float) -> ReliabilitySchedule:
        src = self.schedule
        if src is None:
            raise MissingScheduleError(
                f"no reliability schedule for eps={eps}; derive one with density evolution "
                "(DeriveSchedule, or `srlmp de schedule`)")
        if isinstance(src, ReliabilitySchedule):
            return src
        if isinstance(src, DeriveSchedule):
            from .de import schedule_for
            return schedule_for(self.q, src.dd, self.gamma, eps, src.delta)
        if isinstance(src, dict):
            for key, sched in src.items():
                if math.isclose(float(key), eps, rel_tol=1e-12, abs_tol=0.0):
                    return sched
            raise MissingScheduleError(
                f"no reliability schedule for eps={eps}; derive one with density evolution")
        raise TypeError(f"unsupported schedule source {type(src).__name__}")


@dataclass
class SimRow:
    eps: float
    frames: int
    sym_errs: int
    frame_errs: int
    ser: float
    ser_stderr: float
    fer: float
    mean_iters: float
    wall_time: float = field(default=0.0, compare=False)


@dataclass
class SimReport:
    n: int
    rows: list = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([repr(r.eps), r.frames, r.sym_errs, repr(r.ser), repr(r.ser_stderr),
                        repr(r.fer), repr(r.mean_iters)])
        return buf.getvalue()

    def to_json(self) -> str:
        rows = []
        for r in self.rows:
            d = asdict(r)
            d.pop("wall_time")
            rows.append(d)
        return json.dumps({"n": self.n, "rows": rows}, indent=2)


# --------------------------------------------------------------------------
# frame execution
# --------------------------------------------------------------------------

_WORKER = {}


def _frame(decoder: SrlmpDecoder, sched, eps, seed):
    rng = np.random.default_rng(seed)
    g = decoder.graph
    y = sample(np.zeros(g.n, dtype=np.int64), QscParams(g.q, eps), rng)
    res = decoder.decode(y, sched, rng)
    return int(np.count_nonzero(res.x_hat)), res.iterations


def _run_chunk(decoder, sched, eps, seeds):
    return [_frame(decoder, sched, eps, s) for s in seeds]


def _worker_init(graph, dcfg):
    _WORKER["decoder"] = SrlmpDecoder(graph, dcfg)


def _worker_chunk(sched, eps, seeds):
    return _run_chunk(_WORKER["decoder"], sched, eps, seeds)


def _frame_seeds(master_seed, eps_idx, start, stop):
    return [[master_seed, eps_idx, f] for f in range(start, stop)]


class _Accumulator:
    def __init__(self, n, target, max_frames):
        self.n, self.target, self.max_frames = n, target, max_frames
        self.frames = self.sym = self.ferr = self.iters = 0

    @property
    def done(self):
        return self.sym >= self.target or self.frames >= self.max_frames

    def add(self, results):
        for errs, iters in results:
            if self.done:
                return
            self.frames += 1
            self.sym += errs
            self.ferr += errs > 0
            self.iters += iters

    def row(self, eps, wall):
        total = self.frames * self.n
        ser = self.sym / total
        return SimRow(eps, self.frames, self.sym, self.ferr, ser,
                      math.sqrt(ser * (1.0 - ser) / total), self.ferr / self.frames,
                      self.iters / self.frames, wall)


def _simulate(graph, cfg: SimConfig, eps, eps_idx, sched, decoder=None, pool=None) -> SimRow:
    if sched.gamma < min(cfg.gamma, 2):
        raise ValueError(f"schedule is for list size {sched.gamma}, decoder uses {cfg.gamma}")
    t0 = time.perf_counter()
    acc = _Accumulator(graph.n, cfg.target_symbol_errors, cfg.max_frames)
    nxt = 0

    def seeds():
        nonlocal nxt
        stop = min(nxt + cfg.chunk, cfg.max_frames)
        out = _frame_seeds(cfg.master_seed, eps_idx, nxt, stop)
        nxt = stop
        return out

    if pool is None:
        while not acc.done:
            acc.add(_run_chunk(decoder, sched, eps, seeds()))
    else:
        # keep a window of chunks in flight; results are merged in submission order
        inflight = []
        while not acc.done:
            while len(inflight) < 2 * cfg.workers and nxt < cfg.max_frames:
                inflight.append(pool.submit(_worker_chunk, sched, eps, seeds()))
            acc.add(inflight.pop(0).result())
        for fut in inflight:
            fut.cancel()
    return acc.row(eps, time.perf_counter() - t0)


def _decoder_config(cfg):
    return DecoderConfig(gamma=cfg.gamma, max_iter=cfg.max_iter, tie_policy=cfg.tie_policy)


def simulate_point(g: TannerGraph, cfg: SimConfig, eps: float, sched=None, eps_idx: int = 0) -> SimRow:
    """One report row at ``eps``; ``sched`` defaults to the config's schedule source."""
    if g.q != cfg.q:
        raise ValueError(f"graph is over F_{g.q}, config says q={cfg.q}")
    if sched is None:
        sched = cfg.schedule_for(eps)
    dcfg = _decoder_config(cfg)
    if cfg.workers == 1:
        return _simulate(g, cfg, eps, eps_idx, sched, decoder=SrlmpDecoder(g, dcfg))
    with ProcessPoolExecutor(cfg.workers, initializer=_worker_init, initargs=(g, dcfg)) as pool:
        return _simulate(g, cfg, eps, eps_idx, sched, pool=pool)


def simulate_sweep(g: TannerGraph, cfg: SimConfig) -> SimReport:
    if g.q != cfg.q:
        raise ValueError(f"graph is over F_{g.q}, config says q={cfg.q}")
    scheds = [cfg.schedule_for(e) for e in cfg.eps_list]
    report = SimReport(g.n)
    dcfg = _decoder_config(cfg)
    if cfg.workers == 1:
        dec = SrlmpDecoder(g, dcfg)
        for i, (eps, sched) in enumerate(zip(cfg.eps_list, scheds)):
            report.rows.append(_simulate(g, cfg, eps, i, sched, decoder=dec))
        return report
    with ProcessPoolExecutor(cfg.workers, initializer=_worker_init, initargs=(g, dcfg)) as pool:
        for i, (eps, sched) in enumerate(zip(cfg.eps_list, scheds)):
            report.rows.append(_simulate(g, cfg, eps, i, sched, pool=pool))
    return report


def default_workers() -> int:
    env = os.environ.get("SRLMP_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1
