"""Containers shared by the exact evaluators and the numerical machinery."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class SolutionModel:
    """A closed-form (or linear-system-backed) field u(n, t) with metadata.

    family is one of "one_soliton", "multi_soliton", "two_soliton",
    "double_pole", "kink".  background_left/right are the exact limits of u
    as n -> -inf / +inf (equal for the soliton families).  velocity is the
    analytic propagation speed where a single one is defined, else None.
    """

    family: str
    background_left: float
    background_right: float
    velocity: float | None
    evaluator: Callable[[int, float], float] = field(repr=False)

    def u(self, n: int, t: float) -> float:
        return self.evaluator(n, t)

    @property
    def background(self) -> float:
        """Common far-field level; only meaningful when both sides agree."""
        if self.background_left != self.background_right:
            raise ValueError(f"{self.family} has distinct far-field levels")
        return self.background_left

    def sample(self, n_lo: int, n_hi: int, times) -> "LatticeTrajectory":
        """Evaluate on the integer window [n_lo, n_hi] for each time."""
        sites = np.arange(n_lo, n_hi + 1)
        times = np.atleast_1d(np.asarray(times, dtype=float))
        values = np.empty((times.size, sites.size))
        for i, t in enumerate(times):
            for j, n in enumerate(sites):
                values[i, j] = self.evaluator(int(n), float(t))
        return LatticeTrajectory(sites=sites, times=times, values=values)


@dataclass(frozen=True)
class LatticeTrajectory:
    """Field samples over an integer window times a time grid.

    values[i, j] = u(sites[j], times[i]).  Immutable once produced; safe to
    share across threads.
    """

    sites: np.ndarray
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.times.size, self.sites.size):
            raise ValueError("trajectory shape mismatch")
        self.sites.setflags(write=False)
        self.times.setflags(write=False)
        self.values.setflags(write=False)

    @property
    def n_lo(self) -> int:
        return int(self.sites[0])

    @property
    def n_hi(self) -> int:
        return int(self.sites[-1])

    def at_time(self, i: int) -> np.ndarray:
        return self.values[i]
