"""Non-binary Tanner graphs: PEG construction and q-ary alist files.

Edges are stored as three parallel arrays (``edge_vn``, ``edge_cn``,
``labels``) ordered VN-major.  Labels are nonzero symbol indices, so label
``i`` is ``alpha^(i-1)``.

q-ary alist layout (1-based indices, whitespace separated)::

    n m q
    max_vn_degree max_cn_degree
    <n VN degrees>
    <m CN degrees>
    <n lines: "cn:label" pairs per VN>
    <m lines: "vn:label" pairs per CN>
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .ensembles import DegreeDistribution, EnsembleError


class GraphError(ValueError):
    pass


class QalistParseError(ValueError):
    def __init__(self, msg, line=None):
        self.line = line
        super().__init__(msg if line is None else f"line {line}: {msg}")


class TannerGraph:
    """Bipartite VN/CN graph with nonzero edge labels over F_q."""

    def __init__(self, n, m, q, edge_vn, edge_cn, labels):
        self.n = int(n)
        self.m = int(m)
        self.q = int(q)
        self.edge_vn = np.asarray(edge_vn, dtype=np.int64).copy()
        self.edge_cn = np.asarray(edge_cn, dtype=np.int64).copy()
        self.labels = np.asarray(labels, dtype=np.int64).copy()
        self._validate()
        for a in (self.edge_vn, self.edge_cn, self.labels):
            a.setflags(write=False)

    def _validate(self):
        E = self.edge_vn.size
        if self.edge_cn.size != E or self.labels.size != E:
            raise GraphError("edge arrays differ in length")
        if E and (self.edge_vn.min() < 0 or self.edge_vn.max() >= self.n):
            raise GraphError("VN index out of range")
        if E and (self.edge_cn.min() < 0 or self.edge_cn.max() >= self.m):
            raise GraphError("CN index out of range")
        if np.any(self.labels == 0):
            raise GraphError("edge label 0 is not allowed")
        if np.any((self.labels < 0) | (self.labels >= self.q)):
            raise GraphError(f"edge label outside 1..{self.q - 1}")
        key = self.edge_vn * self.m + self.edge_cn
        if np.unique(key).size != E:
            raise GraphError("parallel edges between the same (VN, CN) pair")

    @property
    def num_edges(self) -> int:
        return int(self.edge_vn.size)

    @property
    def vn_degrees(self):
        return np.bincount(self.edge_vn, minlength=self.n)

    @property
    def cn_degrees(self):
        return np.bincount(self.edge_cn, minlength=self.m)

    @property
    def vn_adj(self):
        """Per VN: list of ``(cn, edge_id)``."""
        adj = [[] for _ in range(self.n)]
        for e, (v, c) in enumerate(zip(self.edge_vn.tolist(), self.edge_cn.tolist())):
            adj[v].append((c, e))
        return adj

    @property
    def cn_adj(self):
        """Per CN: list of ``(vn, edge_id)``."""
        adj = [[] for _ in range(self.m)]
        for e, (v, c) in enumerate(zip(self.edge_vn.tolist(), self.edge_cn.tolist())):
            adj[c].append((v, e))
        return adj

    def dense(self):
        """The m x n parity-check matrix of symbol indices."""
        H = np.zeros((self.m, self.n), dtype=np.int64)
        H[self.edge_cn, self.edge_vn] = self.labels
        return H

    def girth_at_least_6(self) -> bool:
        """True if no two VNs share more than one CN (no 4-cycles)."""
        seen = set()
        for nbrs in self.cn_adj:
            vs = sorted(v for v, _ in nbrs)
            for i in range(len(vs)):
                for j in range(i + 1, len(vs)):
                    if (vs[i], vs[j]) in seen:
                        return False
                    seen.add((vs[i], vs[j]))
        return True

    def __eq__(self, other):
        return (isinstance(other, TannerGraph)
                and (self.n, self.m, self.q) == (other.n, other.m, other.q)
                and np.array_equal(self.edge_vn, other.edge_vn)
                and np.array_equal(self.edge_cn, other.edge_cn)
                and np.array_equal(self.labels, other.labels))

    def __repr__(self):
        return f"TannerGraph(n={self.n}, m={self.m}, q={self.q}, edges={self.num_edges})"


def degree_sequences(n: int, dd: DegreeDistribution):
    """Integral VN/CN degree sequences (ascending) for block length ``n``."""
    vn_frac, cn_frac = dd.node_fractions()
    vn_counts = {d: f * n for d, f in vn_frac.items()}
    if any(abs(c - round(c)) > 1e-6 for c in vn_counts.values()):
        raise EnsembleError(f"VN degree counts {vn_counts} are not integral at n={n}")
    vn_counts = {d: int(round(c)) for d, c in vn_counts.items()}
    if sum(vn_counts.values()) != n:
        raise EnsembleError("VN degree counts do not sum to n")
    E = sum(d * c for d, c in vn_counts.items())
    cn_counts = {d: E * r / d for d, r in dd.rho.items()}
    if any(abs(c - round(c)) > 1e-6 for c in cn_counts.values()):
        raise EnsembleError(f"CN degree counts {cn_counts} are not integral at n={n}")
    cn_counts = {d: int(round(c)) for d, c in cn_counts.items()}
    if sum(d * c for d, c in cn_counts.items()) != E:
        raise EnsembleError("CN sockets do not match VN sockets")
    vn_deg = np.concatenate([np.full(c, d) for d, c in sorted(vn_counts.items())])
    cn_deg = np.concatenate([np.full(c, d) for d, c in sorted(cn_counts.items())])
    return vn_deg.astype(np.int64), cn_deg.astype(np.int64)


def _random_labels(q, size, seed):
    rng = np.random.default_rng(seed)
    return rng.integers(1, q, size=size)


def peg_construct(n: int, dd: DegreeDistribution, q: int, seed: int = 0) -> TannerGraph:
    """Progressive edge growth with prescribed VN and CN degrees.

    Each new edge of a VN goes to the check node farthest from it in the
    current graph (unreachable counts as farthest), restricted to check
    nodes with spare degree that are not already neighbours.  Ties go to the
    lowest current degree, then the lowest index.  Labels are drawn
    uniformly from the nonzero symbols with ``seed``.
    """
    vn_deg, cn_deg = degree_sequences(n, dd)
    m = cn_deg.size
    dv_max, dc_max = int(vn_deg.max()), int(cn_deg.max())
    vn_nbrs = np.full((n, dv_max), -1, dtype=np.int64)
    cn_nbrs = np.full((m, dc_max), -1, dtype=np.int64)
    vn_cur = np.zeros(n, dtype=np.int64)
    cn_cur = np.zeros(m, dtype=np.int64)
    unreached = np.iinfo(np.int64).max
    edge_vn, edge_cn = [], []

    for v in range(n):
        for _ in range(vn_deg[v]):
            depth = np.full(m, unreached, dtype=np.int64)
            own = vn_nbrs[v, :vn_cur[v]]
            cand = np.flatnonzero(cn_cur < cn_deg)
            cand = cand[~np.isin(cand, own)]
            if cand.size == 0:
                raise EnsembleError(f"PEG stalled at VN {v}: no admissible check node")
            if own.size:
                depth[own] = 0
                frontier = own
                vn_seen = np.zeros(n, dtype=bool)
                vn_seen[v] = True
                level = 0
                while np.any(depth[cand] == unreached):
                    vs = cn_nbrs[frontier].ravel()
                    vs = vs[vs >= 0]
                    vs = np.unique(vs[~vn_seen[vs]])
                    if vs.size == 0:
                        break
                    vn_seen[vs] = True
                    cs = vn_nbrs[vs].ravel()
                    cs = cs[cs >= 0]
                    cs = np.unique(cs[depth[cs] == unreached])
                    if cs.size == 0:
                        break
                    level += 1
                    depth[cs] = level
                    frontier = cs
            d = depth[cand]
            best = cand[d == d.max()]
            best = best[cn_cur[best] == cn_cur[best].min()]
            c = int(best[0])
            vn_nbrs[v, vn_cur[v]] = c
            cn_nbrs[c, cn_cur[c]] = v
            vn_cur[v] += 1
            cn_cur[c] += 1
            edge_vn.append(v)
            edge_cn.append(c)

    labels = _random_labels(q, len(edge_vn), seed)
    return TannerGraph(n, m, q, edge_vn, edge_cn, labels)


def random_construct(n: int, dd: DegreeDistribution, q: int, seed: int = 0) -> TannerGraph:
    """Configuration-model graph (random socket matching, parallel edges repaired).

    Much faster than PEG for large ``n``; girth is not controlled.
    """
    vn_deg, cn_deg = degree_sequences(n, dd)
    rng = np.random.default_rng(seed)
    vn_sock = np.repeat(np.arange(n), vn_deg)
    cn_sock = rng.permutation(np.repeat(np.arange(cn_deg.size), cn_deg))
    m = cn_deg.size
    for _ in range(1000):
        key = vn_sock * m + cn_sock
        _, first = np.unique(key, return_index=True)
        dup = np.setdiff1d(np.arange(key.size), first)
        if dup.size == 0:
            break
        partners = rng.integers(0, key.size, size=dup.size)
        cn_sock[dup], cn_sock[partners] = cn_sock[partners], cn_sock[dup].copy()
    else:
        raise EnsembleError("could not remove parallel edges")
    labels = rng.integers(1, q, size=vn_sock.size)
    return TannerGraph(n, m, q, vn_sock, cn_sock, labels)


def format_qalist(g: TannerGraph) -> str:
    vn_adj, cn_adj = g.vn_adj, g.cn_adj
    vd, cd = g.vn_degrees, g.cn_degrees
    lab = g.labels
    lines = [f"{g.n} {g.m} {g.q}",
             f"{int(vd.max(initial=0))} {int(cd.max(initial=0))}",
             " ".join(map(str, vd.tolist())),
             " ".join(map(str, cd.tolist()))]
    for nbrs in vn_adj:
        lines.append(" ".join(f"{c + 1}:{lab[e]}" for c, e in nbrs))
    for nbrs in cn_adj:
        lines.append(" ".join(f"{v + 1}:{lab[e]}" for v, e in nbrs))
    return "\n".join(lines) + "\n"


def save_qalist(g: TannerGraph, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_qalist(g))


def _ints(line, lineno, count=None):
    try:
        vals = [int(t) for t in line.split()]
    except ValueError:
        raise QalistParseError(f"expected integers, got {line!r}", lineno) from None
    if count is not None and len(vals) != count:
        raise QalistParseError(f"expected {count} integers, got {len(vals)}", lineno)
    return vals


def _pairs(line, lineno):
    out = []
    for tok in line.split():
        if tok in ("0", "0:0"):
            continue
        parts = tok.split(":")
        if len(parts) != 2:
            raise QalistParseError(f"expected index:label, got {tok!r}", lineno)
        try:
            out.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise QalistParseError(f"expected index:label, got {tok!r}", lineno) from None
    return out


def parse_qalist(text: str) -> TannerGraph:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()

    def get(i):
        if i >= len(lines):
            raise QalistParseError("unexpected end of file", i + 1)
        return lines[i]

    n, m, q = _ints(get(0), 1, 3)
    _ints(get(1), 2, 2)
    vd = _ints(get(2), 3, n)
    cd = _ints(get(3), 4, m)
    edge_vn, edge_cn, labels = [], [], []
    for v in range(n):
        lineno = 5 + v
        pairs = _pairs(get(4 + v), lineno)
        if len(pairs) != vd[v]:
            raise QalistParseError(f"VN {v + 1} lists {len(pairs)} edges, header says {vd[v]}", lineno)
        for c, lab in pairs:
            if not 1 <= c <= m:
                raise QalistParseError(f"CN index {c} out of range", lineno)
            if lab == 0:
                raise GraphError(f"line {lineno}: edge label 0 is not allowed")
            edge_vn.append(v)
            edge_cn.append(c - 1)
            labels.append(lab)
    cn_edges = set()
    for c in range(m):
        lineno = 5 + n + c
        pairs = _pairs(get(4 + n + c), lineno)
        if len(pairs) != cd[c]:
            raise QalistParseError(f"CN {c + 1} lists {len(pairs)} edges, header says {cd[c]}", lineno)
        for v, lab in pairs:
            cn_edges.add((v - 1, c, lab))
    if len(lines) > 4 + n + m and any(s.strip() for s in lines[4 + n + m:]):
        raise QalistParseError("trailing content", 5 + n + m)
    if cn_edges != set(zip(edge_vn, edge_cn, labels)):
        raise GraphError("VN and CN adjacency lists disagree")
    return TannerGraph(n, m, q, edge_vn, edge_cn, labels)


def load_qalist(path) -> TannerGraph:
    return parse_qalist(Path(path).read_text(encoding="utf-8"))
