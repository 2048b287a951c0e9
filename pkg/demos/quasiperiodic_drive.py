"""
Quasiperiodic response to a slowly rotating angular velocity
============================================================

Drive the rotation state with a unit angular velocity whose direction
rotates in the xy-plane with period 40.  The magnitude of the Euler
vector responds with two incommensurate frequencies; the strobe section
(one sample per drive period) never revisits a point.
"""

import math

import numpy as np

import eulerspin as es

omega = es.RotatingPlaneOmega.from_period(40.0)
E0 = np.full(3, 1.0 / math.sqrt(3.0))

traj = es.integrate("euler", E0, omega, 0.0, 4200.0, 0.01)

# power spectrum of |E(t)|: two dominant lines
mag = np.linalg.norm(traj.states, axis=1)
spec = es.power_spectrum(mag, traj.dt, window="none")
peaks = es.detect_peaks(spec, prominence_db=10.0, max_peaks=2)
print("dominant |E| frequencies (cycles/time):")
for freq, power_db in peaks:
    print(f"  f = {freq:.4f}  ({power_db:+.1f} dB, period {1.0 / freq:.1f})")

# strobe at the drive period: every point distinct
section = es.strobe(traj, 40.0)
gap = es.min_pairwise_distance(section.states)
print(f"strobe section: {len(section.times)} points, "
      f"closest pair {gap:.4f} apart -- the orbit never closes")

# largest Lyapunov exponent ~ 0: quasiperiodic, not chaotic
q0 = es.axis_angle_to_quaternion(es.AxisAngle(es.unit(E0), float(np.linalg.norm(E0))))
est = es.lyapunov_spectrum("quat", q0, omega, 0.0, 200.0, 0.01)
print(f"largest Lyapunov exponent: {est.exponents.max():.2e}  (no chaos)")
