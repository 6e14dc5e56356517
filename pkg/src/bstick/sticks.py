"""Broken-stick sampling under two equivalent models, and polygon-event predicates.

A stick of unit length broken at n-1 uniform points yields n spacings.  The
same spacing distribution arises from n unit-mean exponentials normalized by
their sum, which is the second sampler offered here; the Monte Carlo engine
estimates under either model and the verification suite checks they agree.

Polygon inequalities are non-strict: a set of lengths forms a k-gon iff its
maximum is <= the sum of the others, so degenerate (zero-area) polygons count
as formed.  The event boundary has probability zero, so estimates are
unaffected by the choice.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple

import numpy as np

__all__ = [
    "ORACLE_MAX_N",
    "SamplerModel",
    "EventKind",
    "EventSpec",
    "SubsetCheck",
    "sample_spacings",
    "sample_spacings_batch",
    "all_k_subsets_polygon",
    "subset_polygon_oracle",
    "exists_k_polygon_windowed",
    "max_spacing_exceeds",
    "event_indicator_batch",
]

# C(n, k) enumeration guard for the brute-force oracle.
ORACLE_MAX_N = 15


class SamplerModel(Enum):
    """How one broken stick is realized from uniform draws."""

    UNIFORM_BREAKS = "uniform"
    EXPONENTIAL_NORMALIZED = "exponential"

    def draws_per_trial(self, n: int) -> int:
        """Uniform draws consumed per trial: n-1 break points, or n exponentials."""
        if self is SamplerModel.UNIFORM_BREAKS:
            return n - 1
        return n


class EventKind(Enum):
    ALL_K_SUBSETS = "all"
    EXISTS_K = "exists"
    MAX_SPACING = "max-spacing"


@dataclass(frozen=True)
class EventSpec:
    """A per-trial indicator: which polygon event is being estimated.

    Exactly one parameter is carried: ``k`` for the subset events, ``x`` for
    the max-spacing threshold.  ``x`` is kept as an exact Fraction so records
    can echo the threshold verbatim.
    """

    kind: EventKind
    k: int | None = None
    x: Fraction | None = None

    def __post_init__(self) -> None:
        if self.kind is EventKind.MAX_SPACING:
            if self.k is not None or self.x is None:
                raise ValueError("max-spacing event takes x and no k")
            if not 0 < self.x < 1:
                raise ValueError("max-spacing threshold must lie in (0, 1)")
        else:
            if self.x is not None or self.k is None:
                raise ValueError(f"{self.kind.value} event takes k and no x")
            if self.k < 3:
                raise ValueError("polygon events require k >= 3")

    @classmethod
    def all_k_subsets(cls, k: int) -> EventSpec:
        return cls(EventKind.ALL_K_SUBSETS, k=k)

    @classmethod
    def exists_k(cls, k: int) -> EventSpec:
        return cls(EventKind.EXISTS_K, k=k)

    @classmethod
    def max_spacing(cls, x: Fraction | float | str) -> EventSpec:
        return cls(EventKind.MAX_SPACING, x=Fraction(x))

    def validate_for(self, n: int) -> None:
        if self.k is not None and not 3 <= self.k <= n:
            raise ValueError(f"event needs 3 <= k <= n, got k={self.k}, n={n}")

    def label(self) -> str:
        """Stable, comma-free identifier used in output records."""
        if self.kind is EventKind.MAX_SPACING:
            return f"max-spacing:x={self.x}"
        return f"{self.kind.value}:k={self.k}"


class SubsetCheck(NamedTuple):
    """Brute-force verdict over all k-subsets of one spacing vector."""

    all_subsets: bool
    some_subset: bool


def sample_spacings_batch(
    n: int, model: SamplerModel, rng: np.random.Generator, count: int
) -> np.ndarray:
    """Sample ``count`` spacing vectors as a (count, n) array.

    Draw consumption is fixed per trial (``model.draws_per_trial(n)`` uniforms,
    row-major), so trial t of a batch sees exactly the draws that t sequential
    single-trial calls would have consumed.  Exponentials come from the inverse
    transform -log(1-u); u in [0, 1) keeps the result finite.
    """
    if n < 1:
        raise ValueError("sample_spacings requires n >= 1")
    if count < 0:
        raise ValueError("count must be nonnegative")
    if model is SamplerModel.UNIFORM_BREAKS:
        breaks = np.sort(rng.random((count, n - 1)), axis=1)
        return np.diff(breaks, axis=1, prepend=0.0, append=1.0)
    u = rng.random((count, n))
    y = -np.log1p(-u)
    return y / y.sum(axis=1, keepdims=True)


def sample_spacings(n: int, model: SamplerModel, rng: np.random.Generator) -> np.ndarray:
    """Sample one broken stick: n nonnegative spacings summing to 1."""
    return sample_spacings_batch(n, model, rng, 1)[0]


def _as_row(s) -> np.ndarray:
    arr = np.asarray(s, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("spacing vector must be a nonempty 1-d array")
    return arr.reshape(1, -1)


def _check_k(k: int, n: int) -> None:
    if not 3 <= k <= n:
        raise ValueError(f"need 3 <= k <= n, got k={k}, n={n}")


def all_k_subsets_polygon(s, k: int) -> bool:
    """True iff every k-subset of the spacings forms a k-gon.

    Reduces to one inequality: the largest spacing must not exceed the sum of
    the k-1 smallest (the hardest subset is the k-1 smallest plus the largest).
    """
    row = _as_row(s)
    _check_k(k, row.shape[1])
    return bool(_indicator_all(row, k)[0])


def exists_k_polygon_windowed(s, k: int) -> bool:
    """True iff some window of k consecutive sorted spacings forms a k-gon."""
    row = _as_row(s)
    _check_k(k, row.shape[1])
    return bool(_indicator_exists_windowed(row, k)[0])


def max_spacing_exceeds(s, x: float) -> bool:
    """True iff the largest spacing strictly exceeds x."""
    if not 0 < x < 1:
        raise ValueError("threshold must lie in (0, 1)")
    row = _as_row(s)
    return bool(row.max() > x)


def subset_polygon_oracle(s, k: int) -> SubsetCheck:
    """Exhaustively test the k-gon inequality over all C(n, k) subsets.

    Ground truth for the fast predicates.  Guarded to n <= ORACLE_MAX_N.
    """
    row = _as_row(s)
    n = row.shape[1]
    _check_k(k, n)
    if n > ORACLE_MAX_N:
        raise ValueError(f"oracle limited to n <= {ORACLE_MAX_N}, got n={n}")
    all_ok, any_ok = _subset_check_batch(row, k)
    return SubsetCheck(bool(all_ok[0]), bool(any_ok[0]))


def _indicator_all(spacings: np.ndarray, k: int) -> np.ndarray:
    srt = np.sort(spacings, axis=1)
    return srt[:, -1] <= srt[:, : k - 1].sum(axis=1)


def _indicator_exists_windowed(spacings: np.ndarray, k: int) -> np.ndarray:
    n = spacings.shape[1]
    srt = np.sort(spacings, axis=1)
    csum = np.cumsum(srt, axis=1)
    csum = np.concatenate([np.zeros((srt.shape[0], 1)), csum], axis=1)
    hit = np.zeros(srt.shape[0], dtype=bool)
    for j in range(n - k + 1):
        rest = csum[:, j + k - 1] - csum[:, j]
        hit |= srt[:, j + k - 1] <= rest
    return hit


def _subset_check_batch(spacings: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    m, n = spacings.shape
    all_ok = np.ones(m, dtype=bool)
    any_ok = np.zeros(m, dtype=bool)
    for idx in combinations(range(n), k):
        sub = spacings[:, idx]
        mx = sub.max(axis=1)
        ok = mx <= sub.sum(axis=1) - mx
        all_ok &= ok
        any_ok |= ok
    return all_ok, any_ok


def event_indicator_batch(
    event: EventSpec, spacings: np.ndarray, use_oracle: bool = False
) -> np.ndarray:
    """Evaluate the event indicator on a (trials, n) batch of spacing vectors.

    ``use_oracle`` swaps the reduced predicates for the brute-force subset
    enumeration (n <= ORACLE_MAX_N); max-spacing has no oracle form.
    """
    n = spacings.shape[1]
    if event.kind is EventKind.MAX_SPACING:
        return spacings.max(axis=1) > float(event.x)
    event.validate_for(n)
    if use_oracle:
        if n > ORACLE_MAX_N:
            raise ValueError(f"oracle limited to n <= {ORACLE_MAX_N}, got n={n}")
        all_ok, any_ok = _subset_check_batch(spacings, event.k)
        return all_ok if event.kind is EventKind.ALL_K_SUBSETS else any_ok
    if event.kind is EventKind.ALL_K_SUBSETS:
        return _indicator_all(spacings, event.k)
    return _indicator_exists_windowed(spacings, event.k)
