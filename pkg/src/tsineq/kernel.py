"""The weighted Peano kernel and the integrals of its absolute value.

For a weight ``w`` with delta derivative ``nu > 0`` and a parameter function
``psi``, the kernel is piecewise in s::

    K(s, t) = w(s) - shift_lo    for s in [a, t)
    K(s, t) = w(s) - shift_hi    for s in [t, b]

with ``shift_lo = w(a) + psi(lam) (w(b) - w(a)) / 2`` and
``shift_hi = w(a) + (1 + psi(1 - lam)) (w(b) - w(a)) / 2``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import funcdsl
from .calculus import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    cumulative_delta_integral,
    delta_derivative,
    delta_integral,
    hk,
)
from .errors import EmptyRange, NonPositiveWeight, OutOfRange, OutOfWindow, ShiftNotInScale
from .funcdsl import DifferentiableFn, ParamFunction
from .timescale import TimeScale, tolerance

log = logging.getLogger(__name__)

WEIGHT_GRID = 256


@dataclass(frozen=True)
class WeightPair:
    w: DifferentiableFn
    positivity_floor: float = 1e-12

    @classmethod
    def from_text(cls, text: str, positivity_floor: float = 1e-12) -> "WeightPair":
        return cls(DifferentiableFn.from_text(text), positivity_floor)

    @property
    def is_identity(self) -> bool:
        poly = funcdsl.as_polynomial(self.w.expr)
        return poly is not None and poly.trim().coef.tolist() == [0.0, 1.0]


def nu_eval(weight: WeightPair, T: TimeScale, t):
    """Delta derivative of the weight's antiderivative ``w`` at t."""
    nu = delta_derivative(weight.w, T, t)
    if np.any(np.asarray(nu) < weight.positivity_floor):
        raise NonPositiveWeight(f"nu = w^Δ falls below {weight.positivity_floor}")
    return nu


@dataclass(frozen=True)
class KernelParams:
    scale: TimeScale
    a: float
    b: float
    lam: float
    psi: ParamFunction
    weight: WeightPair
    shift_lo: float = field(init=False)
    shift_hi: float = field(init=False)
    w_a: float = field(init=False, repr=False)
    w_b: float = field(init=False, repr=False)

    def __post_init__(self):
        T = self.scale
        if not (T.contains(self.a) and T.contains(self.b)):
            raise OutOfWindow(f"window [{self.a}, {self.b}] not in the time scale")
        if not self.a < self.b:
            raise EmptyRange("kernel window needs a < b")
        object.__setattr__(self, "a", float(T.snap(self.a)))
        object.__setattr__(self, "b", float(T.snap(self.b)))
        if not 0.0 <= self.lam <= 1.0:
            raise OutOfRange(f"lambda must lie in [0, 1], got {self.lam}")
        w_a, w_b = float(self.weight.w(self.a)), float(self.weight.w(self.b))
        span = w_b - w_a
        object.__setattr__(self, "w_a", w_a)
        object.__setattr__(self, "w_b", w_b)
        object.__setattr__(self, "shift_lo", w_a + self.psi(self.lam) * span / 2)
        object.__setattr__(self, "shift_hi", w_a + (1 + self.psi(1 - self.lam)) * span / 2)
        self._check_weight()

    def _check_weight(self):
        T = self.scale
        probes = np.concatenate(
            [T.scattered_points(self.a, self.b), T.dense_grid(self.a, self.b, WEIGHT_GRID)]
        )
        nu_eval(self.weight, T, probes)
        pts = T.scattered_points(self.a, self.b)
        if pts.size:
            quotient = delta_derivative(self.weight.w, T, pts)
            classical = self.weight.w.derivative(pts)
            if not np.allclose(quotient, classical, rtol=1e-12, atol=0):
                log.info("nu at scattered points differs from the classical derivative of w")

    @property
    def coef(self) -> float:
        """``(1 + psi(1 - lam) - psi(lam)) / 2``, the weight on f(t)."""
        return (1 + self.psi(1 - self.lam) - self.psi(self.lam)) / 2

    @property
    def left_weight(self) -> float:
        return self.psi(self.lam)

    @property
    def right_weight(self) -> float:
        return 1 - self.psi(1 - self.lam)

    def nu(self, t):
        return nu_eval(self.weight, self.scale, t)

    def nu_integral(self, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
        return delta_integral(self.nu, self.scale, self.a, self.b, cfg)

    def roots(self) -> list[float]:
        """Points of the continuous pieces where w(s) equals either shift."""
        out = []
        for c in (self.shift_lo, self.shift_hi):
            out.extend(_branch_roots(self.weight.w, self.scale, self.a, self.b, c))
        return sorted(set(out))


def build_kernel(
    T: TimeScale,
    a: float,
    b: float,
    lam: float,
    psi: ParamFunction | None = None,
    w: str | DifferentiableFn = "t",
) -> KernelParams:
    psi = psi or funcdsl.IDENTITY_PSI
    fn = DifferentiableFn.from_text(w) if isinstance(w, str) else w
    return KernelParams(T, a, b, lam, psi, WeightPair(fn))


def _branch_roots(w: DifferentiableFn, T: TimeScale, a: float, b: float, c: float):
    roots = []
    for lo, hi in T.continuous_pieces(a, b):
        glo, ghi = float(w(lo)) - c, float(w(hi)) - c
        if glo * ghi < 0:
            roots.append(brentq(lambda s: float(w(s)) - c, lo, hi, xtol=1e-13))
    return roots


def check_window(kp: KernelParams, x):
    x = np.asarray(x, dtype=float)
    tol = tolerance(x)
    if np.any(x < kp.a - tol) or np.any(x > kp.b + tol):
        raise OutOfWindow("point outside the kernel window [a, b]")


def kernel_eval(kp: KernelParams, s, t: float):
    """K(s, t); the branch s = t belongs to the upper piece [t, b]."""
    check_window(kp, s)
    check_window(kp, t)
    s_arr = np.asarray(kp.scale.snap(s), dtype=float)
    t = float(kp.scale.snap(t))
    shift = np.where(s_arr < t - tolerance(t), kp.shift_lo, kp.shift_hi)
    out = kp.weight.w(s_arr) - shift
    return float(out) if np.ndim(s) == 0 else out


def _abs_branch(kp: KernelParams, c: float):
    return lambda s: np.abs(kp.weight.w(s) - c)


def abs_kernel_line_integral(kp: KernelParams, t: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``∫_a^b |K(s, t)| Δs`` for a single t, by direct quadrature."""
    check_window(kp, t)
    t = float(kp.scale.snap(t))
    brk = [t, *kp.roots()]
    return delta_integral(lambda s: np.abs(kernel_eval(kp, s, t)), kp.scale, kp.a, kp.b, cfg, brk)


def abs_kernel_line_integrals(kp: KernelParams, ts, cfg: QuadratureConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Vectorized line integrals: ``∫_a^t |w - shift_lo| + ∫_t^b |w - shift_hi|``."""
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    check_window(kp, ts)
    brk = kp.roots()
    query = np.concatenate((ts, [kp.b]))
    lower = cumulative_delta_integral(_abs_branch(kp, kp.shift_lo), kp.scale, kp.a, ts, cfg, brk)
    upper = cumulative_delta_integral(_abs_branch(kp, kp.shift_hi), kp.scale, kp.a, query, cfg, brk)
    return lower + (upper[-1] - upper[:-1])


def abs_kernel_double_integral(kp: KernelParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``∫_a^b ∫_a^b |K(s, t)| Δs Δt``."""
    return delta_integral(
        lambda ts: abs_kernel_line_integrals(kp, ts, cfg), kp.scale, kp.a, kp.b, cfg, kp.roots()
    )


# ---------------------------------------------------------------------------
# identity weight: the line integral as four h_2 terms


def shift_points(kp: KernelParams) -> tuple[float, float]:
    return kp.shift_lo, kp.shift_hi


def _require_identity_weight(kp: KernelParams):
    if not kp.weight.is_identity:
        raise ValueError("the h2 form of the bound needs w(t) = t")
    T = kp.scale
    for c in shift_points(kp):
        if not T.contains(c):
            raise ShiftNotInScale(f"shift point {c!r} is not in the time scale")


def h2_precondition_holds(kp: KernelParams, t) -> bool:
    """True when every t lies between the two shift points."""
    t = np.asarray(t, dtype=float)
    tol = tolerance(t)
    return bool(np.all((t >= kp.shift_lo - tol) & (t <= kp.shift_hi + tol)))


def h2_bound_terms(kp: KernelParams, t, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """``h2(a, c1) + h2(t, c1) + h2(t, c2) + h2(b, c2)`` for the shifts c1, c2.

    Equals the |K| line integral when c1 <= t <= c2 and bounds it from above
    otherwise.
    """
    _require_identity_weight(kp)
    T = kp.scale
    c1, c2 = (float(T.snap(c)) for c in shift_points(kp))
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    ends = hk(T, kp.a, c1, 2, cfg) + hk(T, kp.b, c2, 2, cfg)
    out = ends + hk(T, t_arr, c1, 2, cfg) + hk(T, t_arr, c2, 2, cfg)
    return float(out[0]) if np.ndim(t) == 0 else out


def h2_bound_double_integral(kp: KernelParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Outer delta integral of :func:`h2_bound_terms` over t in [a, b]."""
    _require_identity_weight(kp)
    brk = list(shift_points(kp))
    return delta_integral(lambda ts: h2_bound_terms(kp, ts, cfg), kp.scale, kp.a, kp.b, cfg, brk)
