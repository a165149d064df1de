"""
The weighted Montgomery identity
================================

f(t), mixed with boundary values and scaled by ∫nu, equals a kernel integral
of f^Δ plus a weighted mean of f∘sigma.  On purely discrete scales both sides
are finite sums, so the residual is pure rounding.
"""
from tsineq import DifferentiableFn, QuadratureConfig, TimeScale
from tsineq.identity import montgomery_sweep
from tsineq.kernel import build_kernel

f = DifferentiableFn.from_text("sin(2*t) + t^2/4")

D = TimeScale.points([0, 1, 3, 4, 6, 7, 8])
kp = build_kernel(D, 0, 7, 0.3, w="t + t^3/10")
worst = max(abs(r.residual) for r in montgomery_sweep(f, kp))
print(f"discrete scale: worst residual {worst:.1e}")

M = TimeScale.from_pairs([[0, 1], [1.5, 1.5], [2, 2], [2.5, 3]])
kp = build_kernel(M, 0, 2.5, 0.3, w="t + t^3/10")
print("   t        lhs              kernel part      sigma part       residual")
for r in montgomery_sweep(f, kp):
    print(f"{r.t:5.3f}  {r.lhs: .12f}  {r.rhs_kernel_part: .12f}  {r.rhs_sigma_part: .12f}  {r.residual: .1e}")

# with a derivative that peaks near 0 the residual tracks the quadrature error
g = DifferentiableFn.from_text("log(t + 0.02)")
for ppu in (16, 32, 64, 128):
    worst = max(abs(r.residual) for r in montgomery_sweep(g, kp, QuadratureConfig(ppu)))
    print(f"panels per unit {ppu:4d}: worst residual {worst:.2e}")
