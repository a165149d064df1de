"""
Time scales: segments, points and the jump operators
=====================================================

A time scale here is a finite union of closed segments and isolated points.
"""
import numpy as np

from tsineq import TimeScale

# a segment, a gap, two isolated points, another segment
T = TimeScale.from_pairs([[0, 1], [1.5, 1.5], [2, 2], [2.5, 3.5]])
print(T)

# sigma jumps forward across gaps, rho backward; both clamp at the ends
xs = np.array([0.0, 0.5, 1.0, 1.5, 2.0, 3.5])
print("t     ", xs)
print("sigma ", T.sigma(xs))
print("rho   ", T.rho(xs))
print("mu    ", T.graininess(xs))

# every point gets a left/right dense/scattered classification
for t in (0.5, 1.0, 1.5, 2.5):
    c = T.classify(t)
    print(t, "right scattered" if c.right_scattered else "right dense",
          "/", "left scattered" if c.left_scattered else "left dense")

# overlapping input segments are merged, touching ones too
print(TimeScale.from_pairs([[0, 1], [0.5, 2], [2, 3]]).to_pairs())

# restricting to a window keeps only what lies inside it
print(T.restrict(0.5, 3).to_pairs())
