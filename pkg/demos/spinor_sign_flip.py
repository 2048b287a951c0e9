"""
The rotation axis flips sign after one full revolution
=======================================================

For a constant angular velocity, the unit rotation axis n(t) traces a
closed curve with period 4*pi in rotation phase, not 2*pi: after the body
completes one revolution, the axis comes back flipped.  This script
integrates the Euler-vector ODE and compares it with the exact solution.
"""

import math

import numpy as np

import eulerspin as es

# spin about z, starting from a quarter turn about x
omega = es.ConstantOmega([0.0, 0.0, 1.0])
E0 = np.array([math.pi / 2.0, 0.0, 0.0])

# step chosen so that one revolution is a whole number of steps
dt = 2.0 * math.pi / 6300.0
traj = es.integrate("euler", E0, omega, 0.0, 4.0 * math.pi, dt)

theta = np.linalg.norm(traj.states, axis=1)
axes = traj.states / theta[:, None]

# the exact axis/angle solution for the same setup
sol = es.spinor_params([1.0, 0.0, 0.0], math.pi / 2.0, [0.0, 0.0, 1.0])
print(f"closed-form parameters: a = {sol.a:.6f}, b = {sol.b:.6f}")

E_exact = es.spinor_axis(sol, traj.times) * es.spinor_theta(sol, traj.times)[:, None]
print(f"max integration error over two revolutions: "
      f"{np.abs(traj.states - E_exact).max():.2e}")

# sample the axis at t, t + 2*pi, t + 4*pi: one revolution flips it,
# two bring it back
k = 0                       # the run covers exactly two revolutions
per_rev = 6300
n0, n1, n2 = axes[k], axes[k + per_rev], axes[k + 2 * per_rev]
print("n(t)        =", np.round(n0, 6))
print("n(t + 2pi)  =", np.round(n1, 6), " (sign-flipped)")
print("n(t + 4pi)  =", np.round(n2, 6), " (back to start)")
print(f"|n(t+2pi) + n(t)| = {np.linalg.norm(n1 + n0):.2e}")
print(f"|n(t+4pi) - n(t)| = {np.linalg.norm(n2 - n0):.2e}")
