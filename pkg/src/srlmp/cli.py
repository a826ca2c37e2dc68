"""Command-line front end.

Exit codes: 0 success, 2 usage, 3 unsupported configuration, 4 I/O.
Numbers are printed with ``repr`` (full double precision, locale-free).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import de
from .ensembles import DegreeDistribution, EnsembleError, parse_degree_distribution, qsc_capacity, shannon_limit
from .gf import FieldError
from .schedule import ReliabilitySchedule
from .sim import DeriveSchedule, SimConfig, default_workers, simulate_sweep
from .tanner import GraphError, QalistParseError, load_qalist, peg_construct, save_qalist

EXIT_OK, EXIT_USAGE, EXIT_UNSUPPORTED, EXIT_IO = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _floats(text):
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _dd(text):
    try:
        return parse_degree_distribution(text)
    except EnsembleError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _write_rows(out, header, rows):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])


def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_capacity(a):
    eps = _floats(a.eps)
    if len(eps) == 1:
        print(repr(qsc_capacity(a.q, eps[0])))
    else:
        _write_rows(sys.stdout, ["eps", "capacity"], [(e, qsc_capacity(a.q, e)) for e in eps])


def cmd_shannon_limit(a):
    rates = _floats(a.rate)
    if len(rates) == 1:
        print(repr(shannon_limit(a.q, rates[0])))
    else:
        _write_rows(sys.stdout, ["rate", "eps_sh"], [(r, shannon_limit(a.q, r)) for r in rates])


def _de_kwargs(a):
    kw = {"max_iter": a.max_iter}
    if a.mc:
        kw.update(mode=de.MONTE_CARLO, samples=a.mc, seed=a.seed)
    return kw


def cmd_de_threshold(a):
    kw = _de_kwargs(a)
    if a.delta_grid is not None:
        grid = de.DEFAULT_DELTA_GRID if a.delta_grid == "default" else _floats(a.delta_grid)
        delta, thr = de.optimize_delta(a.q, a.dd, a.gamma, grid=grid, resolution=a.resolution, **kw)
    else:
        delta = a.delta
        thr = de.threshold(a.q, a.dd, a.gamma, delta, resolution=a.resolution, **kw)
    _write_rows(sys.stdout, ["q", "gamma", "dd", "delta", "threshold"],
                [(a.q, a.gamma, str(a.dd), float(delta), float(thr))])


def _de_run(a):
    return de.de_run(de.DeConfig(q=a.q, dd=a.dd, eps=a.eps, gamma=a.gamma, delta=a.delta,
                                 **_de_kwargs(a)))


def cmd_de_trace(a):
    _emit(de.trajectory_csv(_de_run(a), a.gamma), a.output)


def cmd_de_schedule(a):
    _emit(json.dumps(_de_run(a).schedule.to_dict(), indent=2) + "\n", a.output)


def cmd_peg(a):
    g = peg_construct(a.n, a.dd, a.q, seed=a.seed)
    if a.output in (None, "-"):
        from .tanner import format_qalist
        sys.stdout.write(format_qalist(g))
    else:
        save_qalist(g, a.output)
        print(f"n={g.n} m={g.m} q={g.q} edges={g.num_edges}", file=sys.stderr)


def graph_degree_distribution(g) -> DegreeDistribution:
    """Edge-perspective degree distribution realised by a graph."""
    def poly(deg):
        deg = deg[deg > 0]
        counts = np.bincount(deg)
        total = counts @ np.arange(counts.size)
        return {int(d): float(d * c / total) for d, c in enumerate(counts) if c}
    return DegreeDistribution(poly(g.vn_degrees), poly(g.cn_degrees))


def cmd_simulate(a):
    g = load_qalist(a.code)
    if (a.schedule is None) == (not a.derive):
        raise UsageError("give exactly one of --schedule or --derive")
    if a.derive:
        src = DeriveSchedule(a.dd or graph_degree_distribution(g), a.delta)
    else:
        src = ReliabilitySchedule.load(a.schedule)
        if src.gamma != min(a.gamma, 2):
            raise UsageError(f"schedule is for list size {src.gamma} but --gamma is {a.gamma}")
    cfg = SimConfig(q=g.q, gamma=a.gamma, eps_list=_floats(a.eps), max_iter=a.max_iter,
                    max_frames=a.max_frames, target_symbol_errors=a.target_errors,
                    master_seed=a.seed, schedule=src, workers=a.threads, graph_path=a.code)
    report = simulate_sweep(g, cfg)
    if a.json:
        _emit(report.to_json() + "\n", a.json)
    _emit(report.to_csv(), a.output)


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _common_de(p):
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--gamma", type=int, default=1)
    p.add_argument("--dd", type=_dd, required=True, help='e.g. "l=3,r=5"')
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--mc", type=int, default=0, metavar="N",
                   help="Monte Carlo DE with N samples per step")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="srlmp", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="JSON file of option defaults")
    ap.add_argument("--threads", type=int, default=None,
                    help="worker processes (default: $SRLMP_THREADS or CPU count)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacity", help="QSC capacity")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--eps", required=True, help="value or comma-separated grid")
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("shannon-limit", help="largest eps with capacity >= rate")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--rate", required=True, help="value or comma-separated grid")
    p.set_defaults(func=cmd_shannon_limit)

    p = sub.add_parser("de", help="density evolution")
    desub = p.add_subparsers(dest="de_command", required=True)
    t = desub.add_parser("threshold")
    _common_de(t)
    t.add_argument("--delta", type=float, default=1.0)
    t.add_argument("--delta-grid", nargs="?", const="default", default=None,
                   help="optimise delta over a grid (default grid, or comma list)")
    t.add_argument("--resolution", type=float, default=1e-4)
    t.set_defaults(func=cmd_de_threshold)
    for name, func in (("trace", cmd_de_trace), ("schedule", cmd_de_schedule)):
        t = desub.add_parser(name)
        _common_de(t)
        t.add_argument("--eps", type=float, required=True)
        t.add_argument("--delta", type=float, default=1.0)
        t.add_argument("-o", "--output", default=None)
        t.set_defaults(func=func)

    p = sub.add_parser("peg", help="build a code with progressive edge growth")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--dd", type=_dd, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_peg)

    p = sub.add_parser("simulate", help="symbol/frame error rate sweep")
    p.add_argument("--code", required=True, help="q-ary alist file")
    p.add_argument("--gamma", type=int, default=1)
    p.add_argument("--eps", required=True, help="comma-separated channel error probabilities")
    p.add_argument("--max-iter", type=int, default=50)
    p.add_argument("--schedule", default=None, help="ReliabilitySchedule JSON")
    p.add_argument("--derive", action="store_true", help="derive schedules by DE at each eps")
    p.add_argument("--dd", type=_dd, default=None,
                   help="ensemble for --derive (default: read off the graph)")
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--max-frames", type=int, default=100_000)
    p.add_argument("--target-errors", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", default=None, help="also write the JSON report here")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_simulate)
    return ap


def _all_actions(ap):
    stack = [ap]
    while stack:
        parser = stack.pop()
        for action in parser._actions:
            if isinstance(action, argparse._SubParsersAction):
                stack.extend(action.choices.values())
            else:
                yield action


def _apply_config(ap, argv):
    """Parse ``argv`` with option defaults (and required values) taken from ``--config``.

    Flags given on the command line override the file.
    """
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        with open(known.config, encoding="utf-8") as fh:
            conf = json.load(fh)
        if not isinstance(conf, dict):
            raise UsageError("config file must hold a JSON object")
        actions = [a for a in _all_actions(ap) if a.dest != "help"]
        unknown = set(conf) - {a.dest for a in actions}
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        for action in actions:
            if action.dest in conf:
                val = conf[action.dest]
                # string defaults go through the option's type converter
                action.default = ",".join(map(str, val)) if isinstance(val, list) else val
                action.required = False
    return ap.parse_args(argv)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    ap = build_parser()
    try:
        args = _apply_config(ap, argv)
        if args.threads is None:
            args.threads = default_workers()
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except de.UnsupportedConfiguration as exc:
        print(f"srlmp: unsupported configuration: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (OSError, QalistParseError) as exc:
        print(f"srlmp: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, EnsembleError, FieldError, GraphError, ValueError) as exc:
        print(f"srlmp: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
