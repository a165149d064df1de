"""Delta derivative, delta integral and the generalized monomials h_k.

Integrals over a time scale split into two parts: composite 5-point
Gauss-Legendre quadrature on every continuous piece, and the jump sum
``f(t) * mu(t)`` over right-scattered points.  Integrands are vectorized
callables; quadrature nodes are always interior to a continuous piece, so
``sigma`` is the identity there and compositions such as ``f(sigma(s))`` need
no special handling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import DegeneratePoint, DepthExceeded, NotInScale
from .funcdsl import DifferentiableFn
from .timescale import TimeScale, tolerance

GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(5)
KAHAN_THRESHOLD = 1000
MAX_HK_DEPTH = 4


@dataclass(frozen=True)
class QuadratureConfig:
    panels_per_unit: int = 64
    rule: str = "gauss-legendre-5"
    abs_tol: float = 1e-9

    def __post_init__(self):
        if int(self.panels_per_unit) != self.panels_per_unit or self.panels_per_unit < 16:
            raise ValueError("panels_per_unit must be an integer >= 16")
        if self.rule != "gauss-legendre-5":
            raise ValueError(f"unsupported quadrature rule {self.rule!r}")
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")

    def refined(self, factor: int = 2) -> "QuadratureConfig":
        return QuadratureConfig(self.panels_per_unit * factor, self.rule, self.abs_tol)

    def to_dict(self) -> dict:
        return {"panels_per_unit": self.panels_per_unit, "rule": self.rule, "abs_tol": self.abs_tol}


DEFAULT_CONFIG = QuadratureConfig()

Integrand = Callable[[np.ndarray], np.ndarray]


def _call(f: Integrand, x: np.ndarray) -> np.ndarray:
    return np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)


# ---------------------------------------------------------------------------
# derivatives


def _check_not_degenerate(T: TimeScale, t: np.ndarray):
    if T.segments[-1].degenerate and np.any(np.abs(t - T.max) <= tolerance(t)):
        raise DegeneratePoint("delta derivative undefined at an isolated maximum")


def delta_derivative(f: DifferentiableFn, T: TimeScale, t):
    """``f^Δ(t)``: jump quotient at right-scattered points, f' elsewhere."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    sig = T.sigma(t_arr)
    _check_not_degenerate(T, t_arr)
    mu = sig - t_arr
    out = np.empty_like(t_arr)
    sc = mu > 0
    if np.any(sc):
        out[sc] = (f(sig[sc]) - f(t_arr[sc])) / mu[sc]
    if np.any(~sc):
        out[~sc] = f.derivative(t_arr[~sc])
    return float(out[0]) if np.ndim(t) == 0 else out


def shifted_delta_derivative(f: DifferentiableFn, T: TimeScale, t):
    """Delta derivative of the composition ``f ∘ sigma`` at t."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    sig = T.sigma(t_arr)
    _check_not_degenerate(T, t_arr)
    mu = sig - t_arr
    out = np.empty_like(t_arr)
    sc = mu > 0
    if np.any(sc):
        out[sc] = (f(T.sigma(sig[sc])) - f(sig[sc])) / mu[sc]
    if np.any(~sc):
        out[~sc] = f.derivative(t_arr[~sc])
    return float(out[0]) if np.ndim(t) == 0 else out


# ---------------------------------------------------------------------------
# integrals


def _split(lo: float, hi: float, cuts: np.ndarray) -> np.ndarray:
    inner = cuts[(cuts > lo) & (cuts < hi)]
    return np.unique(np.concatenate(([lo], inner, [hi])))


def _panels(knots: np.ndarray, ppu: int):
    """Left and right panel edges; ceil(length * ppu) panels per knot interval."""
    lens = np.diff(knots)
    n = np.maximum(1, np.ceil(lens * ppu).astype(int))
    idx = np.repeat(np.arange(len(lens)), n)
    j = np.arange(idx.size) - np.repeat(np.cumsum(n) - n, n)
    left = knots[idx] + lens[idx] * (j / n[idx])
    right = np.where(j + 1 == n[idx], knots[idx + 1], knots[idx] + lens[idx] * ((j + 1) / n[idx]))
    return left, right


def _panel_integrals(f: Integrand, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    nodes = mid[:, None] + half[:, None] * GL_NODES[None, :]
    vals = _call(f, nodes.ravel()).reshape(nodes.shape)
    return half * (vals @ GL_WEIGHTS)


def _elements(f, T: TimeScale, a: float, b: float, cfg: QuadratureConfig, cuts: np.ndarray):
    """Contiguous elements covering [a, b]: (right end, integral) pairs in order."""
    ends, vals = [], []
    pieces = T.continuous_pieces(a, b)
    if pieces:
        lefts, rights = [], []
        for lo, hi in pieces:
            knots = _split(lo, hi, cuts)
            l, r = _panels(knots, cfg.panels_per_unit)
            lefts.append(l)
            rights.append(r)
        left, right = np.concatenate(lefts), np.concatenate(rights)
        ends.append(right)
        vals.append(_panel_integrals(f, left, right))
    pts = T.scattered_points(a, b)
    if pts.size:
        sig = T.sigma(pts)
        ends.append(sig)
        vals.append(_call(f, pts) * (sig - pts))
    if not ends:
        return np.empty(0), np.empty(0)
    ends, vals = np.concatenate(ends), np.concatenate(vals)
    order = np.argsort(ends, kind="stable")
    return ends[order], vals[order]


def delta_integral(
    f: Integrand,
    T: TimeScale,
    a: float,
    b: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    breakpoints: Iterable[float] = (),
) -> float:
    """``∫_a^b f(s) Δs``; negated when a > b.

    ``breakpoints`` are points where f may have a kink or jump; quadrature
    panels are split there so no panel straddles one.
    """
    a, b = float(T.snap(a)), float(T.snap(b))
    if a > b:
        return -delta_integral(f, T, b, a, cfg, breakpoints)
    if a == b:
        return 0.0
    cuts = np.asarray(list(breakpoints), dtype=float)
    pieces = T.continuous_pieces(a, b)
    total = 0.0
    if pieces:
        parts = []
        for lo, hi in pieces:
            l, r = _panels(_split(lo, hi, cuts), cfg.panels_per_unit)
            parts.append(_panel_integrals(f, l, r))
        total += float(np.sum(np.concatenate(parts)))
    pts = T.scattered_points(a, b)
    if pts.size:
        jumps = _call(f, pts) * (T.sigma(pts) - pts)
        if pts.size > KAHAN_THRESHOLD:
            total += math.fsum(jumps)
        else:
            acc = 0.0
            for v in jumps.tolist():
                acc += v
            total += acc
    return total


def cumulative_delta_integral(
    f: Integrand,
    T: TimeScale,
    a: float,
    xs,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    breakpoints: Iterable[float] = (),
) -> np.ndarray:
    """``∫_a^x f Δs`` for every x in ``xs`` (each x >= a and in T).

    Every x is also used as a panel boundary, so the cost is one integrand
    evaluation pass regardless of how many x are requested.
    """
    xs = np.asarray(T.snap(np.atleast_1d(np.asarray(xs, dtype=float))), dtype=float)
    a = float(T.snap(a))
    if np.any(xs < a - tolerance(a)):
        raise NotInScale("cumulative integral queried left of its base point")
    top = float(xs.max()) if xs.size else a
    if top <= a:
        return np.zeros_like(xs)
    cuts = np.concatenate([np.asarray(list(breakpoints), dtype=float), xs])
    ends, vals = _elements(f, T, a, top, cfg, cuts)
    cum = np.concatenate(([0.0], np.cumsum(vals)))
    k = np.searchsorted(ends, xs + tolerance(xs), side="right")
    return cum[k]


# ---------------------------------------------------------------------------
# generalized monomials


def hk(T: TimeScale, t, s: float, k: int, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """``h_k(t, s)`` with ``h_0 = 1`` and ``h_{k+1}(t, s) = ∫_s^t h_k(τ, s) Δτ``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k > MAX_HK_DEPTH:
        raise DepthExceeded(f"h_k is capped at k <= {MAX_HK_DEPTH}, got {k}")
    scalar = np.ndim(t) == 0
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    s = float(T.snap(s))
    t_arr = np.asarray(T.snap(t_arr), dtype=float)
    if k == 0:
        out = np.ones_like(t_arr)
    elif k == 1:
        # ∫_s^t 1 Δτ is exactly t - s on every time scale
        out = t_arr - s
    else:
        base = min(s, float(t_arr.min()))
        query = np.concatenate(([s], t_arr))
        cum = cumulative_delta_integral(
            lambda tau: hk(T, tau, s, k - 1, cfg), T, base, query, cfg
        )
        out = cum[1:] - cum[0]
    return float(out[0]) if scalar else out
