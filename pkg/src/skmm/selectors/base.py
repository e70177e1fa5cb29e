"""Result types shared by all selectors."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import InvalidArgument

FEASIBILITY_TOL = 1e-8


@dataclass
class SelectionWeights:
    """Continuous weights on the capped simplex {sum s = 1, 0 <= s_i <= 1/n}."""

    s: np.ndarray
    budget: int

    def check(self, tol=FEASIBILITY_TOL):
        s = self.s
        ok = (
            abs(s.sum() - 1.0) <= tol
            and s.min(initial=0.0) >= -tol
            and s.max(initial=0.0) <= 1.0 / self.budget + tol
        )
        if not ok:
            raise AssertionError(
                f"weights left the capped simplex: sum={s.sum()!r}, "
                f"min={s.min()!r}, max={s.max()!r}, cap={1.0 / self.budget!r}"
            )
        return True


@dataclass
class Selection:
    indices: np.ndarray
    method: str
    seed: Optional[int] = None
    objective_trace: Optional[list] = None
    weights: Optional[SelectionWeights] = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        if np.unique(idx).size != idx.size:
            raise InvalidArgument("selection indices must be distinct")
        self.indices = np.sort(idx)

    @property
    def n(self):
        return int(self.indices.size)

    def to_dict(self, config=None):
        out = {
            "method": self.method,
            "n": self.n,
            "seed": self.seed,
            "indices": [int(i) for i in self.indices],
        }
        if self.weights is not None:
            out["weights"] = [float(w) for w in self.weights.s]
        if self.objective_trace is not None:
            out["objective_trace"] = [[int(t), float(v)] for t, v in self.objective_trace]
        if self.metadata:
            out["metadata"] = self.metadata
        out["config"] = config if config is not None else {}
        return out

    @classmethod
    def from_dict(cls, data):
        weights = None
        if data.get("weights") is not None:
            weights = SelectionWeights(np.asarray(data["weights"], dtype=float), int(data["n"]))
        return cls(
            indices=np.asarray(data["indices"], dtype=np.int64),
            method=data["method"],
            seed=data.get("seed"),
            objective_trace=data.get("objective_trace"),
            weights=weights,
            metadata=data.get("metadata", {}),
        )
