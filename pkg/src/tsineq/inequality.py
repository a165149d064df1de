"""Left and right sides of the weighted trapezoid and Grüss inequalities.

Every verifier returns an :class:`InequalityReport` whose ``components`` hold
each term of the left-hand side as printed, the sup-norms and the kernel
integrals, so a margin violation can be traced to a single quantity.

The general verifiers (``trapezoid_verify`` and ``gruss_verify``) work on any
finite time scale through the delta calculus.  The continuous and integer
specializations are evaluated along independent routes (adaptive scipy
quadrature, plain sums) so that agreement between the two is a real check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

from . import funcdsl
from .calculus import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    cumulative_delta_integral,
    delta_derivative,
    delta_integral,
    shifted_delta_derivative,
)
from .errors import DegeneratePoint, NotContinuousScale, NotIntegerScale
from .funcdsl import IDENTITY_PSI, DifferentiableFn
from .kernel import (
    KernelParams,
    abs_kernel_double_integral,
    abs_kernel_line_integrals,
    build_kernel,
    h2_bound_double_integral,
    h2_precondition_holds,
)
from .timescale import TimeScale

SUP_GRID = 1024
ROOT_SCAN_PER_UNIT = 64
THEOREM_IDS = (
    "thm3.2", "cor3.3", "cor3.4", "cor3.5", "cor3.6",
    "thm3.7", "cor3.8", "cor3.9", "cor3.10", "pach1.1", "pach1.2",
)
# Left and right sides of the general theorems at lambda = 0, psi = id, w = t
# on a real interval are these multiples of the classical statements.
TRAPEZOID_REDUCTION_FACTOR = 2.0


def gruss_reduction_factor(a: float, b: float) -> float:
    return 2.0 * (b - a) ** 2


def default_slack(rhs: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    return 10 * cfg.abs_tol + 1e-12 * (1 + abs(rhs))


@dataclass
class InequalityReport:
    theorem_id: str
    lhs: float
    rhs: float
    slack: float
    components: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return self.margin >= -self.slack

    def to_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "slack": self.slack,
            "pass": self.passed,
            "components": dict(self.components),
            "notes": list(self.notes),
        }


def _plain(v):
    """numpy scalars to builtins so reports serialize cleanly."""
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    return v


def _report(theorem_id, lhs, rhs, cfg, components, notes=()):
    lhs, rhs = float(lhs), float(rhs)
    comps = {k: _plain(v) for k, v in components.items()}
    return InequalityReport(theorem_id, lhs, rhs, default_slack(rhs, cfg), comps, list(notes))


# ---------------------------------------------------------------------------
# sup norms


@dataclass(frozen=True)
class SupNorms:
    """Sup-norm estimates over the points where the proofs use each derivative.

    ``N`` is the sup of the delta derivative of ``f ∘ sigma``, the quantity
    the bound actually needs.  ``N_composed`` is the sup of ``|f^Δ(sigma(t))|``;
    the two coincide on uniform scales but on uneven ones the latter can be
    too small for the bound to hold, so it is reported only.
    ``exact`` is True when every continuous contribution came from
    polynomial critical points rather than grid probing.
    """

    M: float = 0.0
    N: float = 0.0
    P: float = 0.0
    Q: float = 0.0
    N_composed: float = 0.0
    probe_count: int = 0
    exact: bool = True


def _sup_abs_derivative_on(f: DifferentiableFn, lo: float, hi: float) -> tuple[float, bool, int]:
    """max |f'| on [lo, hi]: exact for polynomials, grid plus local refinement otherwise."""
    poly = funcdsl.as_polynomial(f.expr)
    if poly is not None and poly.degree() <= 4:
        d = poly.deriv()
        cands = [lo, hi]
        if d.degree() >= 1:
            for r in d.deriv().roots():
                if abs(r.imag) < 1e-12 and lo <= r.real <= hi:
                    cands.append(r.real)
        return float(np.max(np.abs(d(np.array(cands))))), True, len(cands)
    grid = np.linspace(lo, hi, SUP_GRID)
    vals = np.abs(f.derivative(grid))
    i = int(np.argmax(vals))
    best = float(vals[i])
    left, right = grid[max(i - 1, 0)], grid[min(i + 1, SUP_GRID - 1)]
    if right > left:
        res = optimize.minimize_scalar(
            lambda x: -abs(float(f.derivative(x))), bounds=(left, right), method="bounded",
            options={"xatol": 1e-12},
        )
        best = max(best, -float(res.fun))
    return best, False, SUP_GRID


def _sup_continuous(f: DifferentiableFn, pieces) -> tuple[float, bool, int]:
    best, exact, count = 0.0, True, 0
    for lo, hi in pieces:
        v, ex, n = _sup_abs_derivative_on(f, lo, hi)
        best, exact, count = max(best, v), exact and ex, count + n
    return best, exact, count


def _max_abs(values) -> float:
    values = np.asarray(values, dtype=float)
    return float(np.max(np.abs(values))) if values.size else 0.0


def sup_norms(
    T: TimeScale,
    a: float,
    b: float,
    f: DifferentiableFn | None = None,
    p: DifferentiableFn | None = None,
    q: DifferentiableFn | None = None,
) -> SupNorms:
    """Sups of |f^Δ|, |(f∘σ)^Δ|, |f^Δ∘σ|, |p^Δ|, |q^Δ| over [a, b) ∩ T.

    Scattered points of [a, b) are probed individually (the left endpoint is
    included because the integrals weight it by its graininess); every
    continuous piece of [a, b] contributes the sup of the classical
    derivative.
    """
    pieces = T.continuous_pieces(a, b)
    pts = T.scattered_points(a, b)
    out = {}
    exact, count = True, 0
    for name, fn in (("f", f), ("p", p), ("q", q)):
        if fn is None:
            continue
        cont, ex, n = _sup_continuous(fn, pieces)
        exact, count = exact and ex, count + n + pts.size
        out[name] = max(cont, _max_abs(delta_derivative(fn, T, pts)) if pts.size else 0.0)
        if name == "f":
            out["N"] = max(cont, _max_abs(shifted_delta_derivative(fn, T, pts)) if pts.size else 0.0)
            out["N_composed"] = max(cont, _composed_sup(fn, T, pts))
    return SupNorms(
        M=out.get("f", 0.0), N=out.get("N", 0.0), P=out.get("p", 0.0), Q=out.get("q", 0.0),
        N_composed=out.get("N_composed", 0.0), probe_count=count, exact=exact,
    )


def _composed_sup(f: DifferentiableFn, T: TimeScale, pts: np.ndarray) -> float:
    if not pts.size:
        return 0.0
    nxt = T.sigma(pts)
    try:
        return _max_abs(delta_derivative(f, T, nxt))
    except DegeneratePoint:
        # sigma(t) is an isolated maximum: f^Δ is undefined there, skip it
        keep = nxt < T.max
        return _max_abs(delta_derivative(f, T, nxt[keep])) if np.any(keep) else 0.0


# ---------------------------------------------------------------------------
# helpers shared by the verifiers


def _roots_of(fn, pieces) -> list[float]:
    """Sign changes of fn on continuous pieces, for |fn| breakpoints."""
    roots = []
    for lo, hi in pieces:
        n = max(16, math.ceil((hi - lo) * ROOT_SCAN_PER_UNIT)) + 1
        xs = np.linspace(lo, hi, n)
        ys = np.asarray(fn(xs), dtype=float)
        roots.extend(xs[1:-1][ys[1:-1] == 0.0].tolist())
        for i in np.nonzero(ys[:-1] * ys[1:] < 0)[0]:
            roots.append(optimize.brentq(lambda x: float(fn(x)), xs[i], xs[i + 1], xtol=1e-14))
    return sorted(roots)


def _kernel_weighted_lines(kp: KernelParams, h, ts, cfg: QuadratureConfig) -> np.ndarray:
    """``∫_a^b K(s, t) h(s) Δs`` for every t in ts."""
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    T, w = kp.scale, kp.weight.w
    query = np.concatenate((ts, [kp.b]))
    lower = cumulative_delta_integral(lambda s: (w(s) - kp.shift_lo) * h(s), T, kp.a, ts, cfg)
    upper = cumulative_delta_integral(lambda s: (w(s) - kp.shift_hi) * h(s), T, kp.a, query, cfg)
    return lower + (upper[-1] - upper[:-1])


def composition_breaks(T: TimeScale, a: float, b: float) -> np.ndarray:
    """Points of (a, b] that are left-dense and right-scattered.

    ``f ∘ sigma`` jumps at each of them, so the trapezoid left-hand side no
    longer equals its kernel representation there and the bound can fail.
    """
    his = np.array([s.hi for s in T.segments[:-1] if not s.degenerate])
    return his[(his > a) & (his <= b)] if his.size else his


def _break_notes(T, a, b):
    brk = composition_breaks(T, a, b)
    if not brk.size:
        return brk, []
    return brk, [f"f∘sigma jumps at {brk.tolist()}: the bound is not guaranteed on this window"]


def _require_continuous(T: TimeScale, a: float, b: float):
    if T.continuous_pieces(a, b) != [(a, b)]:
        raise NotContinuousScale("this form needs [a, b] to be a single real interval of the scale")


def _require_integer(T: TimeScale, a: float, b: float):
    if not T.is_integer_window(a, b):
        raise NotIntegerScale(f"[{a}, {b}] is not a run of consecutive integers in the scale")


def _quad(fn, lo, hi, points=()):
    pts = [x for x in points if lo < x < hi]
    val, _ = integrate.quad(fn, lo, hi, points=pts or None, epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


# ---------------------------------------------------------------------------
# weighted trapezoid inequality


def trapezoid_verify(f: DifferentiableFn, kp: KernelParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> InequalityReport:
    T, a, b = kp.scale, kp.a, kp.b
    W = kp.nu_integral(cfg)
    fa, fb = float(f(a)), float(f(b))
    fsa, fsb = float(f(T.sigma(a))), float(f(T.sigma(b)))
    coef_term = kp.coef * (fb**2 - fa**2)
    sigma_integral = delta_integral(lambda s: kp.nu(s) * (f(T.sigma(s)) + f(T.sigma(T.sigma(s)))), T, a, b, cfg)
    sigma_term = (fb - fa) / W * sigma_integral
    boundary_term = (kp.left_weight * (fa + fsa) + kp.right_weight * (fb + fsb)) / 2 * (fb - fa)
    signed = coef_term - sigma_term + boundary_term

    norms = sup_norms(T, a, b, f=f)
    dk = abs_kernel_double_integral(kp, cfg)
    rhs = norms.M * (norms.N + norms.M) / W * dk

    kernel_form = _trapezoid_kernel_form(f, kp, W, cfg)
    brk, notes = _break_notes(T, a, b)
    if not norms.exact:
        notes.append("sup norms estimated by grid probing (lower bounds)")
    return _report("thm3.2", abs(signed), rhs, cfg, {
        "nu_integral": W, "double_abs_kernel": dk, "M": norms.M, "N": norms.N,
        "N_composed": norms.N_composed, "coef_term": coef_term, "sigma_integral": sigma_integral,
        "sigma_term": sigma_term, "boundary_term": boundary_term, "signed_lhs": signed,
        "kernel_form": kernel_form, "identity_gap": signed - kernel_form,
        "sup_probes": norms.probe_count, "composition_breaks": int(brk.size),
    }, notes)


def _trapezoid_kernel_form(f, kp: KernelParams, W: float, cfg: QuadratureConfig) -> float:
    """``(1/W) ∫ f^Δ(t) ∫ K(s, t) (f^Δ(s) + (f∘σ)^Δ(s)) Δs Δt``, the exact value of the signed LHS."""
    T = kp.scale

    def h(s):
        return delta_derivative(f, T, s) + shifted_delta_derivative(f, T, s)

    def outer(ts):
        return delta_derivative(f, T, ts) * _kernel_weighted_lines(kp, h, ts, cfg)

    return delta_integral(outer, T, kp.a, kp.b, cfg) / W


def trapezoid_corollary_R(f: DifferentiableFn, kp: KernelParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> InequalityReport:
    """Real-interval form (sigma = id, N = M), by adaptive quadrature."""
    T, a, b = kp.scale, kp.a, kp.b
    _require_continuous(T, a, b)
    w = kp.weight.w
    W = _quad(lambda x: float(w.derivative(x)), a, b)
    fa, fb = float(f(a)), float(f(b))
    coef_term = kp.coef / 2 * (fb**2 - fa**2)
    mean_term = (fb - fa) / W * _quad(lambda x: float(w.derivative(x) * f(x)), a, b)
    boundary_term = (kp.left_weight * fa + kp.right_weight * fb) / 2 * (fb - fa)
    signed = coef_term - mean_term + boundary_term
    M, _, _ = _sup_continuous(f, [(a, b)])
    dk = _real_double_abs_kernel(kp)
    rhs = M**2 / W * dk
    return _report("cor3.3", abs(signed), rhs, cfg, {
        "nu_integral": W, "double_abs_kernel": dk, "M": M, "coef_term": coef_term,
        "mean_term": mean_term, "boundary_term": boundary_term, "signed_lhs": signed,
    })


def _real_line_abs_kernel(kp: KernelParams, t: float) -> float:
    w = kp.weight.w
    pts = [t, *kp.roots()]
    lower = _quad(lambda s: abs(float(w(s)) - kp.shift_lo), kp.a, t, pts) if t > kp.a else 0.0
    upper = _quad(lambda s: abs(float(w(s)) - kp.shift_hi), t, kp.b, pts) if t < kp.b else 0.0
    return lower + upper


def _real_double_abs_kernel(kp: KernelParams) -> float:
    return _quad(lambda t: _real_line_abs_kernel(kp, t), kp.a, kp.b, kp.roots())


def trapezoid_corollary_wt(f: DifferentiableFn, kp: KernelParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> InequalityReport:
    """Identity weight: nu = 1, the |K| line integral replaced by four h2 terms.

    Raises ShiftNotInScale when a shift point is not in the scale.
    """
    T, a, b = kp.scale, kp.a, kp.b
    h2_factor = h2_bound_double_integral(kp, cfg)
    length = b - a
    fa, fb = float(f(a)), float(f(b))
    fsa, fsb = float(f(T.sigma(a))), float(f(T.sigma(b)))
    coef_term = kp.coef * (fb**2 - fa**2)
    sigma_integral = delta_integral(lambda s: f(T.sigma(s)) + f(T.sigma(T.sigma(s))), T, a, b, cfg)
    sigma_term = (fb - fa) / length * sigma_integral
    boundary_term = (kp.left_weight * (fa + fsa) + kp.right_weight * (fb + fsb)) / 2 * (fb - fa)
    signed = coef_term - sigma_term + boundary_term
    norms = sup_norms(T, a, b, f=f)
    rhs = norms.M * (norms.N + norms.M) / length * h2_factor
    dk = abs_kernel_double_integral(kp, cfg)
    outer_pts = np.concatenate([T.scattered_points(a, b), np.ravel(T.continuous_pieces(a, b))])
    holds = h2_precondition_holds(kp, outer_pts)
    brk, notes = _break_notes(T, a, b)
    if not holds:
        notes.append("t leaves [shift_lo, shift_hi]: the h2 form over-estimates the kernel integral")
    return _report("cor3.4", abs(signed), rhs, cfg, {
        "h2_factor": h2_factor, "double_abs_kernel": dk, "h2_equals_kernel": holds,
        "shift_lo": kp.shift_lo, "shift_hi": kp.shift_hi, "M": norms.M, "N": norms.N,
        "coef_term": coef_term, "sigma_term": sigma_term, "boundary_term": boundary_term,
        "signed_lhs": signed, "composition_breaks": int(brk.size),
    }, notes)


def trapezoid_corollary_linear(
    f: DifferentiableFn, T: TimeScale, a: float, b: float, lam: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> InequalityReport:
    """psi = id and w = t, with the printed lambda coefficients."""
    kp = build_kernel(T, a, b, lam, IDENTITY_PSI, "t")
    a, b = kp.a, kp.b
    h2_factor = h2_bound_double_integral(kp, cfg)
    fa, fb = float(f(a)), float(f(b))
    fsa, fsb = float(f(T.sigma(a))), float(f(T.sigma(b)))
    sigma_integral = delta_integral(lambda s: f(T.sigma(s)) + f(T.sigma(T.sigma(s))), T, a, b, cfg)
    signed = (
        (1 - lam) * (fb**2 - fa**2)
        - (fb - fa) / (b - a) * sigma_integral
        + lam * (fa + fb + fsa + fsb) / 2 * (fb - fa)
    )
    norms = sup_norms(T, a, b, f=f)
    rhs = norms.M * (norms.N + norms.M) / (b - a) * h2_factor
    brk, notes = _break_notes(T, a, b)
    return _report("cor3.5", abs(signed), rhs, cfg, {
        "h2_factor": h2_factor, "M": norms.M, "N": norms.N, "signed_lhs": signed,
        "shift_lo": kp.shift_lo, "shift_hi": kp.shift_hi, "composition_breaks": int(brk.size),
    }, notes)


def _integer_kernel_matrix(kp: KernelParams, ts: np.ndarray) -> np.ndarray:
    """|K(s, t)| for s, t in ts (rows t, columns s), from raw w values."""
    ws = kp.weight.w(ts)
    shift = np.where(ts[None, :] < ts[:, None], kp.shift_lo, kp.shift_hi)
    return np.abs(ws[None, :] - shift)


def trapezoid_corollary_Z(f: DifferentiableFn, kp: KernelParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> InequalityReport:
    """Integer form with plain sums; the scale must contain a, a+1, ..., b+1."""
    T, a, b = kp.scale, kp.a, kp.b
    if not T.contains(b + 1):
        raise NotIntegerScale("the integer form evaluates f(b + 1); the scale must contain b + 1")
    _require_integer(T, a, b + 1)
    s = np.arange(a, b)
    w = kp.weight.w
    nu = w(s + 1) - w(s)
    W = math.fsum(nu)
    fa, fb, fa1, fb1 = (float(f(x)) for x in (a, b, a + 1, b + 1))
    coef_term = kp.coef * (fb**2 - fa**2)
    sigma_sum = math.fsum(nu * (f(s + 1) + f(s + 2)))
    sigma_term = (fb - fa) / W * sigma_sum
    boundary_term = (kp.left_weight * (fa + fa1) + kp.right_weight * (fb + fb1)) / 2 * (fb - fa)
    signed = coef_term - sigma_term + boundary_term
    M = _max_abs(f(s + 1) - f(s))
    N = _max_abs(f(s + 2) - f(s + 1))
    ksum = math.fsum(_integer_kernel_matrix(kp, s).ravel())
    rhs = M * (N + M) / W * ksum
    return _report("cor3.6", abs(signed), rhs, cfg, {
        "nu_sum": W, "kernel_sum": ksum, "M": M, "N": N, "coef_term": coef_term,
        "sigma_term": sigma_term, "boundary_term": boundary_term, "signed_lhs": signed,
    }, ["the integer form reads f(b + 1), a point beyond the window"])


# ---------------------------------------------------------------------------
# weighted Grüss inequality


def _gruss_lhs_terms(kp, p_int, q_int, pq_int, W, nu_p_sigma, nu_q_sigma, pa, pb, qa, qb):
    product_term = 2 * kp.coef * W * pq_int
    p_boundary = (kp.left_weight * pa + kp.right_weight * pb) / 2 * W * q_int
    q_boundary = (kp.left_weight * qa + kp.right_weight * qb) / 2 * W * p_int
    p_cross = q_int * nu_p_sigma
    q_cross = p_int * nu_q_sigma
    # grouped so that swapping p and q gives a bit-identical result
    signed = product_term + (p_boundary + q_boundary) - (p_cross + q_cross)
    return signed, {
        "product_term": product_term, "p_boundary_term": p_boundary,
        "q_boundary_term": q_boundary, "p_cross_term": p_cross, "q_cross_term": q_cross,
        "signed_lhs": signed,
    }


def gruss_verify(
    p: DifferentiableFn, q: DifferentiableFn, kp: KernelParams, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> InequalityReport:
    T, a, b = kp.scale, kp.a, kp.b
    W = kp.nu_integral(cfg)
    p_int = delta_integral(p, T, a, b, cfg)
    q_int = delta_integral(q, T, a, b, cfg)
    pq_int = delta_integral(lambda s: p(s) * q(s), T, a, b, cfg)
    nu_p = delta_integral(lambda s: kp.nu(s) * p(T.sigma(s)), T, a, b, cfg)
    nu_q = delta_integral(lambda s: kp.nu(s) * q(T.sigma(s)), T, a, b, cfg)
    signed, comps = _gruss_lhs_terms(
        kp, p_int, q_int, pq_int, W, nu_p, nu_q, float(p(a)), float(p(b)), float(q(a)), float(q(b))
    )
    norms = sup_norms(T, a, b, p=p, q=q)
    pieces = T.continuous_pieces(a, b)
    brk = sorted(set(kp.roots()) | set(_roots_of(p, pieces)) | set(_roots_of(q, pieces)))

    def outer(ts):
        return (norms.P * np.abs(q(ts)) + norms.Q * np.abs(p(ts))) * abs_kernel_line_integrals(kp, ts, cfg)

    rhs = delta_integral(outer, T, a, b, cfg, brk)
    kernel_form = _gruss_kernel_form(p, q, kp, cfg)
    comps.update({
        "nu_integral": W, "p_integral": p_int, "q_integral": q_int, "pq_integral": pq_int,
        "P": norms.P, "Q": norms.Q, "kernel_form": kernel_form,
        "identity_gap": signed - kernel_form, "sup_probes": norms.probe_count,
    })
    notes = [] if norms.exact else ["sup norms estimated by grid probing (lower bounds)"]
    return _report("thm3.7", abs(signed), rhs, cfg, comps, notes)


def _gruss_kernel_form(p, q, kp: KernelParams, cfg: QuadratureConfig) -> float:
    """``∫ q(t) ∫ K p^Δ Δs Δt + ∫ p(t) ∫ K q^Δ Δs Δt``, the exact value of the signed LHS."""
    T = kp.scale
    first = delta_integral(
        lambda ts: q(ts) * _kernel_weighted_lines(kp, lambda s: delta_derivative(p, T, s), ts, cfg),
        T, kp.a, kp.b, cfg,
    )
    second = delta_integral(
        lambda ts: p(ts) * _kernel_weighted_lines(kp, lambda s: delta_derivative(q, T, s), ts, cfg),
        T, kp.a, kp.b, cfg,
    )
    return first + second


def gruss_corollary_R(
    p: DifferentiableFn, q: DifferentiableFn, kp: KernelParams, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> InequalityReport:
    """Real-interval form, by adaptive quadrature."""
    T, a, b = kp.scale, kp.a, kp.b
    _require_continuous(T, a, b)
    w = kp.weight.w
    W = _quad(lambda x: float(w.derivative(x)), a, b)
    p_int = _quad(lambda x: float(p(x)), a, b)
    q_int = _quad(lambda x: float(q(x)), a, b)
    pq_int = _quad(lambda x: float(p(x) * q(x)), a, b)
    nu_p = _quad(lambda x: float(w.derivative(x) * p(x)), a, b)
    nu_q = _quad(lambda x: float(w.derivative(x) * q(x)), a, b)
    signed, comps = _gruss_lhs_terms(
        kp, p_int, q_int, pq_int, W, nu_p, nu_q, float(p(a)), float(p(b)), float(q(a)), float(q(b))
    )
    P, _, _ = _sup_continuous(p, [(a, b)])
    Q, _, _ = _sup_continuous(q, [(a, b)])
    brk = sorted(set(kp.roots()) | set(_roots_of(p, [(a, b)])) | set(_roots_of(q, [(a, b)])))
    rhs = _quad(
        lambda t: (P * abs(float(q(t))) + Q * abs(float(p(t)))) * _real_line_abs_kernel(kp, t), a, b, brk
    )
    comps.update({"nu_integral": W, "P": P, "Q": Q})
    return _report("cor3.8", abs(signed), rhs, cfg, comps)


def gruss_corollary_Z(
    p: DifferentiableFn, q: DifferentiableFn, kp: KernelParams, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> InequalityReport:
    """Integer form with plain sums over a..b-1."""
    T, a, b = kp.scale, kp.a, kp.b
    _require_integer(T, a, b)
    s = np.arange(a, b)
    w = kp.weight.w
    nu = w(s + 1) - w(s)
    W = math.fsum(nu)
    ps, qs = p(s), q(s)
    signed, comps = _gruss_lhs_terms(
        kp, math.fsum(ps), math.fsum(qs), math.fsum(ps * qs), W,
        math.fsum(nu * p(s + 1)), math.fsum(nu * q(s + 1)),
        float(p(a)), float(p(b)), float(q(a)), float(q(b)),
    )
    P = _max_abs(p(s + 1) - ps)
    Q = _max_abs(q(s + 1) - qs)
    kmat = _integer_kernel_matrix(kp, s)
    rhs = math.fsum((P * np.abs(qs) + Q * np.abs(ps)) * kmat.sum(axis=1))
    comps.update({"nu_sum": W, "P": P, "Q": Q})
    return _report("cor3.9", abs(signed), rhs, cfg, comps)


def classic_weight_polynomial(t, a: float, b: float):
    """``t^2 - t(a + b) + (a^2 + b^2) / 2``."""
    t = np.asarray(t, dtype=float)
    return t**2 - t * (a + b) + (a**2 + b**2) / 2


def pachpatte_weight(t, a: float, b: float):
    """``(b - a)^2 / 4 + (t - (a + b) / 2)^2``."""
    t = np.asarray(t, dtype=float)
    return (b - a) ** 2 / 4 + (t - (a + b) / 2) ** 2


def gruss_corollary_classic(
    p: DifferentiableFn, q: DifferentiableFn, lam: float, a: float, b: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> InequalityReport:
    """psi = id, w = t on a real interval, with the printed polynomial weight."""
    a, b = float(a), float(b)
    L = b - a
    p_int = _quad(lambda x: float(p(x)), a, b)
    q_int = _quad(lambda x: float(q(x)), a, b)
    pq_int = _quad(lambda x: float(p(x) * q(x)), a, b)
    product_term = 2 * (1 - lam) * L * pq_int
    p_boundary = lam * L * (float(p(a)) + float(p(b))) / 2 * q_int
    q_boundary = lam * L * (float(q(a)) + float(q(b))) / 2 * p_int
    cross = 2 * q_int * p_int
    signed = product_term + (p_boundary + q_boundary) - cross
    P, _, _ = _sup_continuous(p, [(a, b)])
    Q, _, _ = _sup_continuous(q, [(a, b)])
    brk = sorted(set(_roots_of(p, [(a, b)])) | set(_roots_of(q, [(a, b)])))
    rhs = _quad(
        lambda t: (P * abs(float(q(t))) + Q * abs(float(p(t)))) * float(classic_weight_polynomial(t, a, b)),
        a, b, brk,
    )
    grid = np.linspace(a, b, 257)
    poly_gap = float(np.max(np.abs(classic_weight_polynomial(grid, a, b) - pachpatte_weight(grid, a, b))))
    return _report("cor3.10", abs(signed), rhs, cfg, {
        "product_term": product_term, "p_boundary_term": p_boundary, "q_boundary_term": q_boundary,
        "cross_term": cross, "signed_lhs": signed, "P": P, "Q": Q, "weight_polynomial_gap": poly_gap,
    })


# ---------------------------------------------------------------------------
# classical statements used as reduction oracles


def pachpatte_trapezoid(f: DifferentiableFn, a: float, b: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> InequalityReport:
    a, b = float(a), float(b)
    fa, fb = float(f(a)), float(f(b))
    mean = _quad(lambda x: float(f(x)), a, b)
    signed = 0.5 * (fb**2 - fa**2) - (fb - fa) / (b - a) * mean
    sup, _, _ = _sup_continuous(f, [(a, b)])
    rhs = (b - a) ** 2 * sup**2 / 3
    return _report("pach1.1", abs(signed), rhs, cfg, {"integral": mean, "sup_derivative": sup, "signed_lhs": signed})


def pachpatte_gruss(f: DifferentiableFn, g: DifferentiableFn, a: float, b: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> InequalityReport:
    a, b = float(a), float(b)
    L = b - a
    fg = _quad(lambda x: float(f(x) * g(x)), a, b)
    fi = _quad(lambda x: float(f(x)), a, b)
    gi = _quad(lambda x: float(g(x)), a, b)
    signed = fg / L - (fi / L) * (gi / L)
    F, _, _ = _sup_continuous(f, [(a, b)])
    G, _, _ = _sup_continuous(g, [(a, b)])
    brk = sorted(set(_roots_of(f, [(a, b)])) | set(_roots_of(g, [(a, b)])))
    weighted = _quad(
        lambda x: (F * abs(float(g(x))) + G * abs(float(f(x)))) * float(pachpatte_weight(x, a, b)), a, b, brk
    )
    rhs = weighted / (2 * L**2)
    return _report("pach1.2", abs(signed), rhs, cfg, {
        "fg_integral": fg, "f_integral": fi, "g_integral": gi, "sup_f": F, "sup_g": G, "signed_lhs": signed,
    })
