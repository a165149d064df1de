"""
The weighted kernel and its absolute integrals
==============================================

The kernel K(s, t) is w(s) minus one of two shift points, depending on
whether s lies before or after t.  The shift points depend on lambda and on
the parameter function psi.
"""
import numpy as np

from tsineq import ParamFunction, TimeScale
from tsineq.kernel import (
    abs_kernel_double_integral,
    abs_kernel_line_integrals,
    build_kernel,
    h2_bound_double_integral,
    kernel_eval,
)

R = TimeScale.interval(0, 2)
for lam in (0.0, 0.5, 1.0):
    kp = build_kernel(R, 0, 2, lam)
    s = np.linspace(0, 2, 5)
    print(f"lambda {lam}: shifts {kp.shift_lo:.3f}, {kp.shift_hi:.3f}; K(s, 1) =", kernel_eval(kp, s, 1.0))

# the double integral of |K| shrinks as the shift points move to the middle
for lam in (0.0, 0.25, 0.5, 0.75, 1.0):
    print(f"lambda {lam:4}: ∫∫|K| = {abs_kernel_double_integral(build_kernel(R, 0, 2, lam)):.6f}")

# a non-identity weight and a table psi on a mixed scale
T = TimeScale.from_pairs([[0, 1], [1.4, 1.4], [2, 3]])
psi = ParamFunction("table", points=((0, 0.5), (0.5, 0.1), (1, 1)))
kp = build_kernel(T, 0, 2.5, 0.35, psi, "exp(t/4)")
ts = np.array([0, 0.5, 1, 1.4, 2, 2.5])
print("line integrals of |K| on the mixed scale:", abs_kernel_line_integrals(kp, ts))

# with w = t the line integral has a closed form in h2, exact while
# shift_lo <= t <= shift_hi; at lambda = 1 both shifts sit at the midpoint
for lam in (0.0, 1.0):
    kp = build_kernel(R, 0, 2, lam)
    print(f"lambda {lam}: h2 form {h2_bound_double_integral(kp):.6f}  kernel {abs_kernel_double_integral(kp):.6f}")
