"""Joint outcome distributions and tallies over {+,-} x {+,-}.

Cells are ordered (+,+), (+,-), (-,+), (-,-), first symbol for the first
measured qubit (C in the protocol), second for the second (B).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

SUM_TOL = 1e-12


@dataclass(frozen=True)
class JointProbs:
    p_pp: float
    p_pm: float
    p_mp: float
    p_mm: float

    def __post_init__(self):
        for name, p in zip(("p_pp", "p_pm", "p_mp", "p_mm"), self):
            if not math.isfinite(p) or p < -SUM_TOL or p > 1 + SUM_TOL:
                raise ValueError(f"{name}={p!r} is not a probability")
        total = math.fsum(self)
        if abs(total - 1.0) > SUM_TOL:
            raise ValueError(f"joint probabilities sum to {total!r}, not 1")

    def __iter__(self) -> Iterator[float]:
        return iter((self.p_pp, self.p_pm, self.p_mp, self.p_mm))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return tuple(self)

    @property
    def p_same(self) -> float:
        return self.p_pp + self.p_mm

    @property
    def first_marginal(self) -> tuple[float, float]:
        return self.p_pp + self.p_pm, self.p_mp + self.p_mm

    @property
    def second_marginal(self) -> tuple[float, float]:
        return self.p_pp + self.p_mp, self.p_pm + self.p_mm

    def tv_distance(self, other: JointProbs) -> float:
        """Total-variation distance: half the L1 distance between the cells."""
        return 0.5 * math.fsum(abs(p - q) for p, q in zip(self, other))


@dataclass(frozen=True)
class JointCounts:
    n_pp: int = 0
    n_pm: int = 0
    n_mp: int = 0
    n_mm: int = 0

    def __post_init__(self):
        for name, n in zip(("n_pp", "n_pm", "n_mp", "n_mm"), self):
            if int(n) != n or n < 0:
                raise ValueError(f"{name}={n!r} is not a non-negative count")

    def __iter__(self) -> Iterator[int]:
        return iter((self.n_pp, self.n_pm, self.n_mp, self.n_mm))

    def __add__(self, other: JointCounts) -> JointCounts:
        return JointCounts(*(a + b for a, b in zip(self, other)))

    def as_tuple(self) -> tuple[int, int, int, int]:
        return tuple(self)

    @property
    def total(self) -> int:
        return sum(self)

    @property
    def n_same(self) -> int:
        return self.n_pp + self.n_mm

    @classmethod
    def from_outcomes(cls, first, second) -> JointCounts:
        """Tally paired +1/-1 outcome sequences."""
        c = np.asarray(first)
        b = np.asarray(second)
        if c.shape != b.shape:
            raise ValueError("outcome sequences differ in length")
        if not (np.isin(c, (1, -1)).all() and np.isin(b, (1, -1)).all()):
            raise ValueError("outcomes must be +1 or -1")
        cp, bp = c == 1, b == 1
        return cls(
            int(np.count_nonzero(cp & bp)),
            int(np.count_nonzero(cp & ~bp)),
            int(np.count_nonzero(~cp & bp)),
            int(np.count_nonzero(~cp & ~bp)),
        )
