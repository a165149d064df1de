"""Finite time scales: unions of closed intervals and isolated points.

A :class:`TimeScale` is built through :func:`normalize`, which sorts the
segments and merges any that touch or overlap, so every scale has a unique
minimal decomposition.  All jump operators accept scalars or numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import BadSegment, EmptyRange, EmptyScale, NotInScale

REL_TOL = 1e-12


def tolerance(t):
    """Membership tolerance used everywhere: ``1e-12 * max(1, |t|)``."""
    return REL_TOL * np.maximum(1.0, np.abs(t))


@dataclass(frozen=True)
class Segment:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise BadSegment(f"segment lo={self.lo} exceeds hi={self.hi}")

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    @property
    def length(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class PointClass:
    right_scattered: bool
    right_dense: bool
    left_scattered: bool
    left_dense: bool

    @property
    def dense(self) -> bool:
        return self.right_dense and self.left_dense

    @property
    def isolated(self) -> bool:
        return self.right_scattered and self.left_scattered


@dataclass(frozen=True)
class TimeScale:
    segments: tuple[Segment, ...]
    _lo: np.ndarray = field(init=False, repr=False, compare=False)
    _hi: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.segments:
            raise EmptyScale("a time scale needs at least one segment")
        lo = np.array([s.lo for s in self.segments], dtype=float)
        hi = np.array([s.hi for s in self.segments], dtype=float)
        if np.any(hi[:-1] >= lo[1:]):
            raise BadSegment("segments must be sorted with positive gaps; use normalize()")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "_lo", lo)
        object.__setattr__(self, "_hi", hi)

    # -- construction helpers -------------------------------------------

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[float]]) -> "TimeScale":
        return normalize([Segment(float(lo), float(hi)) for lo, hi in pairs])

    @classmethod
    def interval(cls, lo: float, hi: float) -> "TimeScale":
        return normalize([Segment(float(lo), float(hi))])

    @classmethod
    def points(cls, pts: Iterable[float]) -> "TimeScale":
        return normalize([Segment(float(p), float(p)) for p in pts])

    @classmethod
    def integers(cls, lo: int, hi: int) -> "TimeScale":
        return cls.points(range(int(lo), int(hi) + 1))

    def to_pairs(self) -> list[list[float]]:
        return [[s.lo, s.hi] for s in self.segments]

    # -- basic geometry -------------------------------------------------

    @property
    def min(self) -> float:
        return self.segments[0].lo

    @property
    def max(self) -> float:
        return self.segments[-1].hi

    @cached_property
    def is_discrete(self) -> bool:
        return all(s.degenerate for s in self.segments)

    @cached_property
    def is_continuous(self) -> bool:
        return len(self.segments) == 1 and not self.segments[0].degenerate

    def _locate(self, t):
        """Segment index of each t (snapped to endpoints); -1 if outside."""
        t = np.asarray(t, dtype=float)
        tol = tolerance(t)
        idx = np.searchsorted(self._lo, t + tol, side="right") - 1
        ok = idx >= 0
        safe = np.where(ok, idx, 0)
        ok &= t <= self._hi[safe] + tol
        return np.where(ok, idx, -1)

    def contains(self, t):
        res = self._locate(t) >= 0
        return bool(res) if np.ndim(res) == 0 else res

    def _checked_index(self, t):
        idx = self._locate(t)
        if np.any(idx < 0):
            bad = np.asarray(t, dtype=float)[idx < 0] if np.ndim(idx) else t
            raise NotInScale(f"{np.ravel(bad)[:3].tolist()} not in time scale")
        return idx

    def snap(self, t):
        """Round points lying within tolerance of a segment endpoint onto it."""
        t = np.asarray(t, dtype=float)
        idx = self._checked_index(t)
        lo, hi = self._lo[idx], self._hi[idx]
        tol = tolerance(t)
        out = np.where(np.abs(t - lo) <= tol, lo, t)
        out = np.where(np.abs(t - hi) <= tol, hi, out)
        return _scalar_like(out, t)

    # -- jump operators -------------------------------------------------

    def sigma(self, t):
        """Forward jump; clamps to ``t`` at the maximum."""
        t = np.asarray(t, dtype=float)
        idx = self._checked_index(t)
        at_right_end = np.abs(t - self._hi[idx]) <= tolerance(t)
        nxt = np.minimum(idx + 1, len(self.segments) - 1)
        jumps = at_right_end & (idx + 1 < len(self.segments))
        return _scalar_like(np.where(jumps, self._lo[nxt], t), t)

    def rho(self, t):
        """Backward jump; clamps to ``t`` at the minimum."""
        t = np.asarray(t, dtype=float)
        idx = self._checked_index(t)
        at_left_end = np.abs(t - self._lo[idx]) <= tolerance(t)
        prv = np.maximum(idx - 1, 0)
        jumps = at_left_end & (idx > 0)
        return _scalar_like(np.where(jumps, self._hi[prv], t), t)

    def graininess(self, t):
        return self.sigma(t) - np.asarray(t, dtype=float)

    def right_scattered(self, t):
        """True where sigma(t) > t (the clamped maximum is never scattered here)."""
        t = np.asarray(t, dtype=float)
        res = self.sigma(t) > t
        return bool(res) if np.ndim(res) == 0 else res

    def classify(self, t: float) -> PointClass:
        t = float(t)
        self._checked_index(t)
        tol = float(tolerance(t))
        first, last = self.segments[0], self.segments[-1]
        if abs(t - self.max) <= tol:
            right_dense = not last.degenerate
        else:
            right_dense = not self.sigma(t) > t
        if abs(t - self.min) <= tol:
            left_dense = not first.degenerate
        else:
            left_dense = not self.rho(t) < t
        return PointClass(
            right_scattered=not right_dense,
            right_dense=right_dense,
            left_scattered=not left_dense,
            left_dense=left_dense,
        )

    # -- sub-structure --------------------------------------------------

    def restrict(self, a: float, b: float) -> "TimeScale":
        self._checked_index(np.array([a, b]))
        if not a < b:
            raise EmptyRange(f"restrict needs a < b, got a={a}, b={b}")
        a, b = float(self.snap(a)), float(self.snap(b))
        out = []
        for s in self.segments:
            lo, hi = max(s.lo, a), min(s.hi, b)
            if lo <= hi:
                out.append(Segment(lo, hi))
        return normalize(out)

    def continuous_pieces(self, a: float, b: float) -> list[tuple[float, float]]:
        """Nondegenerate pieces of ``[a, b] ∩ T`` as (lo, hi) pairs."""
        pieces = []
        for s in self.segments:
            lo, hi = max(s.lo, a), min(s.hi, b)
            if lo < hi:
                pieces.append((lo, hi))
        return pieces

    def scattered_points(self, a: float, b: float) -> np.ndarray:
        """Right-scattered points of T lying in ``[a, b)``, ascending."""
        tol_b = float(tolerance(b))
        his = self._hi[:-1]
        keep = (his >= a - float(tolerance(a))) & (his < b - tol_b)
        return his[keep].copy()

    def dense_grid(self, a: float, b: float, per_segment: int) -> np.ndarray:
        """``per_segment`` equispaced points on each continuous piece of [a, b]."""
        grids = [np.linspace(lo, hi, per_segment) for lo, hi in self.continuous_pieces(a, b)]
        return np.concatenate(grids) if grids else np.empty(0)

    def is_integer_window(self, a: float, b: float) -> bool:
        """True when ``[a, b] ∩ T`` is exactly the consecutive integers a..b."""
        if not (float(a).is_integer() and float(b).is_integer()):
            return False
        sub = self.restrict(a, b)
        expect = np.arange(a, b + 1)
        got = np.array([s.lo for s in sub.segments])
        return sub.is_discrete and got.shape == expect.shape and np.array_equal(got, expect)


def normalize(segments: Iterable[Segment | Sequence[float]]) -> TimeScale:
    """Sort segments and merge those that touch or overlap."""
    segs = [s if isinstance(s, Segment) else Segment(float(s[0]), float(s[1])) for s in segments]
    if not segs:
        raise EmptyScale("a time scale needs at least one segment")
    segs.sort(key=lambda s: (s.lo, s.hi))
    merged = [segs[0]]
    for s in segs[1:]:
        cur = merged[-1]
        if s.lo - cur.hi <= float(tolerance(cur.hi)):
            merged[-1] = Segment(cur.lo, max(cur.hi, s.hi))
        else:
            merged.append(s)
    return TimeScale(tuple(merged))


def _scalar_like(out, ref):
    return float(out) if np.ndim(ref) == 0 else out
