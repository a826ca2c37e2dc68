"""Per-iteration reliabilities consumed by the finite-length decoder."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path


@dataclass
class ReliabilitySchedule:
    """Extrinsic-channel reliabilities and VN thresholds per iteration.

    ``d1[l-1]``, ``d2[l-1]`` and ``delta[l-1]`` apply to decoder iteration
    ``l`` (1-based).  Lists shorter than the number of iterations are
    extended by repeating their last entry.  ``d2`` is ``None`` for list
    size 1.
    """

    d_ch: float
    d1: list
    delta: list
    d2: list | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.d_ch = float(self.d_ch)
        self.d1 = [float(v) for v in self.d1]
        self.delta = [float(v) for v in self.delta]
        if self.d2 is not None:
            self.d2 = [float(v) for v in self.d2]
            if not self.d2:
                raise ValueError("d2 must be non-empty when given")
        if not self.d1 or not self.delta:
            raise ValueError("d1 and delta must be non-empty")
        if not math.isfinite(self.d_ch) or self.d_ch < 0:
            raise ValueError(f"d_ch must be finite and >= 0, got {self.d_ch}")

    @property
    def gamma(self) -> int:
        return 1 if self.d2 is None else 2

    @staticmethod
    def _pick(values, it):
        if it < 1:
            raise ValueError(f"iterations are 1-based, got {it}")
        return values[min(it, len(values)) - 1]

    def at(self, it: int):
        """``(d1, d2, delta)`` for iteration ``it``; d2 is 0.0 for list size 1."""
        d2 = 0.0 if self.d2 is None else self._pick(self.d2, it)
        return self._pick(self.d1, it), d2, self._pick(self.delta, it)

    @classmethod
    def constant(cls, d_ch, d1, delta, d2=None):
        return cls(d_ch, [d1], [delta], None if d2 is None else [d2])

    def to_dict(self) -> dict:
        out = {"d_ch": self.d_ch, "d1": self.d1, "delta": self.delta}
        if self.d2 is not None:
            out["d2"] = self.d2
        if self.meta:
            out["meta"] = self.meta
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ReliabilitySchedule":
        try:
            return cls(data["d_ch"], data["d1"], data["delta"], data.get("d2"),
                       dict(data.get("meta", {})))
        except KeyError as exc:
            raise ValueError(f"schedule is missing {exc}") from None

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "ReliabilitySchedule":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
