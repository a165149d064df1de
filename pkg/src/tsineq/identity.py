"""Both sides of the weighted Montgomery identity and their residual."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .calculus import DEFAULT_CONFIG, QuadratureConfig, delta_derivative, delta_integral
from .funcdsl import DifferentiableFn
from .kernel import KernelParams, check_window, kernel_eval

DENSE_PROBES = 16


@dataclass(frozen=True)
class IdentityResidual:
    t: float
    lhs: float
    rhs_kernel_part: float
    rhs_sigma_part: float
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return abs(self.residual) <= self.tolerance

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = self.passed
        return d


def boundary_mean(f: DifferentiableFn, kp: KernelParams) -> float:
    """``(psi(lam) f(a) + (1 - psi(1 - lam)) f(b)) / 2``."""
    return (kp.left_weight * float(f(kp.a)) + kp.right_weight * float(f(kp.b))) / 2


def montgomery_lhs(f: DifferentiableFn, kp: KernelParams, t: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    check_window(kp, t)
    return (kp.coef * float(f(t)) + boundary_mean(f, kp)) * kp.nu_integral(cfg)


def montgomery_rhs(
    f: DifferentiableFn, kp: KernelParams, t: float, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> tuple[float, float]:
    """``(∫ K(s, t) f^Δ(s) Δs, ∫ nu(s) f(sigma(s)) Δs)``."""
    check_window(kp, t)
    T = kp.scale
    t = float(T.snap(t))
    kernel_part = delta_integral(
        lambda s: kernel_eval(kp, s, t) * delta_derivative(f, T, s), T, kp.a, kp.b, cfg, [t]
    )
    sigma_part = delta_integral(lambda s: kp.nu(s) * f(T.sigma(s)), T, kp.a, kp.b, cfg)
    return kernel_part, sigma_part


def identity_tolerance(kp: KernelParams, lhs: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Exact up to rounding on purely discrete windows, ``10 * abs_tol`` otherwise."""
    if not kp.scale.continuous_pieces(kp.a, kp.b):
        return 1e-12 * (1 + abs(lhs))
    return 10 * cfg.abs_tol


def montgomery_residual(
    f: DifferentiableFn, kp: KernelParams, t: float, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> IdentityResidual:
    t = float(kp.scale.snap(t))
    lhs = montgomery_lhs(f, kp, t, cfg)
    kpart, spart = montgomery_rhs(f, kp, t, cfg)
    return IdentityResidual(t, lhs, kpart, spart, lhs - (kpart + spart), identity_tolerance(kp, lhs, cfg))


def probe_points(kp: KernelParams, per_segment: int = DENSE_PROBES) -> np.ndarray:
    """Every scattered point of [a, b], b itself and a grid on each continuous piece."""
    T = kp.scale
    pts = np.concatenate(
        [[kp.a, kp.b], T.scattered_points(kp.a, kp.b), T.dense_grid(kp.a, kp.b, per_segment)]
    )
    return np.unique(pts)


def montgomery_sweep(
    f: DifferentiableFn, kp: KernelParams, cfg: QuadratureConfig = DEFAULT_CONFIG, probes=None
) -> list[IdentityResidual]:
    probes = probe_points(kp) if probes is None else np.asarray(probes, dtype=float)
    return [montgomery_residual(f, kp, float(t), cfg) for t in probes]
