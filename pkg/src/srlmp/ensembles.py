"""Degree distributions, design rate, QSC capacity and Shannon limit."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

import numpy as np


class EnsembleError(ValueError):
    pass


def _normalize_poly(poly) -> dict[int, float]:
    out = {}
    for deg, coef in dict(poly).items():
        deg = int(deg)
        coef = float(coef)
        if coef == 0.0:
            continue
        out[deg] = out.get(deg, 0.0) + coef
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class DegreeDistribution:
    """Edge-perspective degree distributions ``lambda(x)`` and ``rho(x)``.

    ``lam[i]`` (``rho[i]``) is the fraction of edges attached to variable
    (check) nodes of degree ``i``.
    """

    lam: dict = field(default_factory=dict)
    rho: dict = field(default_factory=dict)

    def __post_init__(self):
        lam = _normalize_poly(self.lam)
        rho = _normalize_poly(self.rho)
        for name, poly in (("lambda", lam), ("rho", rho)):
            if not poly:
                raise EnsembleError(f"{name} is empty")
            for deg, coef in poly.items():
                if deg < 2:
                    raise EnsembleError(f"{name}: degree {deg} < 2")
                if not 0.0 <= coef <= 1.0:
                    raise EnsembleError(f"{name}: coefficient {coef} outside [0, 1]")
            if abs(sum(poly.values()) - 1.0) > 1e-12:
                raise EnsembleError(f"{name} coefficients sum to {sum(poly.values())}, not 1")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "rho", rho)

    @classmethod
    def regular(cls, dv: int, dc: int) -> "DegreeDistribution":
        return cls({dv: 1.0}, {dc: 1.0})

    @property
    def is_regular(self) -> bool:
        return len(self.lam) == 1 and len(self.rho) == 1

    def eval_lambda(self, x):
        x = np.asarray(x, dtype=float)
        return sum(c * x ** (d - 1) for d, c in self.lam.items())

    def eval_rho(self, x):
        x = np.asarray(x, dtype=float)
        return sum(c * x ** (d - 1) for d, c in self.rho.items())

    def design_rate(self) -> float:
        return design_rate(self)

    def node_fractions(self):
        """Node-perspective fractions ``(L_i, R_i)``."""
        lam_int = sum(c / d for d, c in self.lam.items())
        rho_int = sum(c / d for d, c in self.rho.items())
        vn = {d: (c / d) / lam_int for d, c in self.lam.items()}
        cn = {d: (c / d) / rho_int for d, c in self.rho.items()}
        return vn, cn

    def to_dict(self) -> dict:
        return {"lambda": {str(d): c for d, c in self.lam.items()},
                "rho": {str(d): c for d, c in self.rho.items()}}

    @classmethod
    def from_dict(cls, data: dict) -> "DegreeDistribution":
        try:
            lam = data["lambda"] if "lambda" in data else data["lam"]
            rho = data["rho"]
        except KeyError as exc:
            raise EnsembleError(f"missing key {exc} in degree distribution") from None
        return cls(lam, rho)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "DegreeDistribution":
        return cls.from_dict(json.loads(text))

    def __str__(self):
        def fmt(poly):
            return ",".join(f"{d}:{c:g}" for d, c in poly.items())
        return f"l={fmt(self.lam)},r={fmt(self.rho)}"


def parse_poly(text: str) -> dict[int, float]:
    """Parse ``"3:1.0"`` / ``"2:0.3,3:0.7"``; a bare ``"3"`` means ``{3: 1.0}``."""
    text = text.strip()
    if not text:
        raise EnsembleError("empty degree polynomial")
    poly: dict[int, float] = {}
    for item in text.split(","):
        item = item.strip()
        try:
            if ":" in item:
                deg, coef = item.split(":")
                poly[int(deg)] = poly.get(int(deg), 0.0) + float(coef)
            else:
                poly[int(item)] = poly.get(int(item), 0.0) + 1.0
        except ValueError:
            raise EnsembleError(f"cannot parse degree term {item!r}") from None
    return poly


_DD_SECTION = re.compile(r"([lr])\s*=\s*(.*?)\s*(?=[,;]\s*[lr]\s*=|$)")


def parse_degree_distribution(text: str) -> DegreeDistribution:
    """Parse ``"l=3,r=5"`` or ``"l=2:0.3,3:0.7,r=6:1.0"`` (``;`` also separates)."""
    sections = {}
    for key, body in _DD_SECTION.findall(text.strip()):
        if key in sections:
            raise EnsembleError(f"duplicate section {key!r} in {text!r}")
        sections[key] = parse_poly(body)
    if set(sections) != {"l", "r"}:
        raise EnsembleError(f"expected 'l=...,r=...', got {text!r}")
    return DegreeDistribution(sections["l"], sections["r"])


def design_rate(dd: DegreeDistribution) -> float:
    lam_int = sum(c / d for d, c in dd.lam.items())
    rho_int = sum(c / d for d, c in dd.rho.items())
    rate = 1.0 - rho_int / lam_int
    if rate <= 1e-12:
        raise EnsembleError(f"degenerate ensemble: design rate {rate:.3g} <= 0")
    return rate


def _xlogx_q(p: float, q: int) -> float:
    return 0.0 if p <= 0.0 else p * math.log(p) / math.log(q)


def qsc_capacity(q: int, eps: float) -> float:
    """Capacity of the q-ary symmetric channel in q-ary symbols per use."""
    if not 0.0 <= eps <= (q - 1) / q + 1e-15:
        raise EnsembleError(f"eps={eps} outside [0, (q-1)/q] for q={q}")
    eps = min(eps, (q - 1) / q)
    wrong = 0.0 if eps <= 0 else eps * (math.log(eps / (q - 1)) / math.log(q))
    return 1.0 + wrong + _xlogx_q(1.0 - eps, q)


def shannon_limit(q: int, rate: float, tol: float = 1e-12) -> float:
    """Largest eps with ``qsc_capacity(q, eps) >= rate`` (bisection)."""
    if not 0.0 < rate < 1.0:
        raise EnsembleError(f"rate {rate} outside (0, 1)")
    lo, hi = 1e-15, (q - 1) / q - 1e-15
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if qsc_capacity(q, mid) > rate:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
