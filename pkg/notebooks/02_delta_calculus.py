"""
Delta derivatives and delta integrals
=====================================

At a right-scattered point the delta derivative is a difference quotient
across the gap; at a right-dense point it is the ordinary derivative.  The
delta integral adds Gauss-Legendre quadrature over the segments to
left-endpoint sums over the gaps.
"""
import math

import numpy as np

from tsineq import DifferentiableFn, QuadratureConfig, TimeScale
from tsineq.calculus import delta_derivative, delta_integral, hk

f = DifferentiableFn.from_text("t^2")
Z = TimeScale.integers(0, 5)
R = TimeScale.interval(0, 1)
M = TimeScale.from_pairs([[0, 1], [2, 2], [3, 3]])

print("on the integers f^Δ(2) =", delta_derivative(f, Z, 2), "= f(3) - f(2)")
print("on [0, 1]       f^Δ(0.5) =", delta_derivative(f, R, 0.5), "= 2t")
print("on the mixed scale f^Δ(1) =", delta_derivative(f, M, 1), "= (f(2) - f(1)) / 1")

# ∫_0^1 t^2 dt + f(1)*1 + f(2)*1
print("∫ t^2 over the mixed scale:", delta_integral(f, M, 0, 3), "exact", 1 / 3 + 1 + 4)

# Gauss-Legendre order: a peaked integrand converges fast as panels double
g = DifferentiableFn.from_text("1/(t + 0.02)")
exact = math.log(1.02 / 0.02) + g(1.0) + g(2.0)
for ppu in (16, 32, 64, 128):
    err = abs(delta_integral(g, M, 0, 3, QuadratureConfig(ppu)) - exact)
    print(f"panels per unit {ppu:4d}: error {err:.2e}")

# generalized monomials: (t - s)^2 / 2 on a segment, a falling factorial on the integers
print("h2 on [0, 2]:", hk(TimeScale.interval(0, 2), 2, 0, 2))
print("h2 on {0..3}:", hk(TimeScale.integers(0, 3), 3, 0, 2), "= 3 * 2 / 2")
print("h_k(t, 0) on {0..5}, k = 0..3:")
print(np.array([[hk(Z, t, 0, k) for t in range(6)] for k in range(4)]))
