"""
Trapezoid and Grüss inequalities, and where the trapezoid bound breaks
======================================================================

Both inequalities reduce to Pachpatte's classical statements on a real
interval at lambda = 0.  The trapezoid bound also involves f∘sigma; when
f∘sigma jumps inside the window (a segment ending just before a gap), the
printed bound can fail.
"""
from tsineq import DifferentiableFn, TimeScale
from tsineq.inequality import (
    TRAPEZOID_REDUCTION_FACTOR,
    gruss_reduction_factor,
    gruss_verify,
    pachpatte_gruss,
    pachpatte_trapezoid,
    trapezoid_verify,
)
from tsineq.kernel import build_kernel

t, t2 = DifferentiableFn.from_text("t"), DifferentiableFn.from_text("t^2")
R = TimeScale.interval(0, 1)
kp = build_kernel(R, 0, 1, 0)

classic, general = pachpatte_trapezoid(t2, 0, 1), trapezoid_verify(t2, kp)
print(f"trapezoid, f = t^2 on [0, 1]: classical {classic.lhs:.6f} <= {classic.rhs:.6f}")
print(f"   general form {general.lhs:.6f} <= {general.rhs:.6f}  (factor {TRAPEZOID_REDUCTION_FACTOR:g})")

classic, general = pachpatte_gruss(t, t, 0, 1), gruss_verify(t, t, kp)
print(f"Grüss, p = q = t on [0, 1]:   classical {classic.lhs:.6f} <= {classic.rhs:.6f}")
print(f"   general form {general.lhs:.6f} <= {general.rhs:.6f}  (factor {gruss_reduction_factor(0, 1):g})")

# f∘sigma jumps from 1 to 3 at t = 1, the right end of the window
T = TimeScale.from_pairs([[0, 1], [3, 3]])
r = trapezoid_verify(t, build_kernel(T, 0, 1, 1))
print(f"\non [0, 1] ∪ {{3}}: lhs {r.lhs:.3f} > rhs {r.rhs:.3f}: passed = {r.passed}")
print("   ", r.notes[0])

# the same function on a window that ends inside the segment is fine
r = trapezoid_verify(t, build_kernel(T, 0, 0.8, 1))
print(f"on [0, 0.8]:        lhs {r.lhs:.3f} <= rhs {r.rhs:.3f}: passed = {r.passed}")

# N in the bound uses (f∘sigma)^Δ; the composed f^Δ∘sigma can be smaller
r = trapezoid_verify(t2, build_kernel(TimeScale.points([0, 1, 3, 4, 6]), 0, 4, 0))
print(f"\nN = {r.components['N']:g}, f^Δ∘sigma would give {r.components['N_composed']:g}")
