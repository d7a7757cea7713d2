"""Holomorphic sectional curvature varies with direction; admissibility can fail.

First part: H(X) for vectors rotating from horizontal to vertical at one
point. Second part: where a constant lambda stops producing a metric.
"""
import numpy as np

from cotangent_kahler import connection as C
from cotangent_kahler import structures as S
from cotangent_kahler.base_manifold import SpaceForm
from cotangent_kahler.bundle import TangentVector, point_with_energy
from cotangent_kahler.families import ConstantFamily, ExampleFamily

M = SpaceForm(3, 1.0)
L = ExampleFamily(A=1.0, B=1.0, c=1.0)
pt = point_with_energy(M, [0.3, 0.0, -0.2], [0.4, 1.0, 0.2], 0.8)
u, w = np.array([1.0, 0.2, -0.5]), np.array([0.3, -1.0, 0.4])

print("angle   H(cos a u_h + sin a w_v)")
for a in np.linspace(0, np.pi / 2, 7):
    X = TangentVector(np.cos(a) * u, np.sin(a) * w)
    print(f"{a:5.2f}   {C.holomorphic_sectional_curvature(M, L, pt, X): .6f}")

print()
for lam0 in (0.5, 1.0, 2.0):
    report = S.admissibility_scan(ConstantFamily(A=1.0, lam0=lam0), 1.0, np.linspace(0.05, 10, 200))
    print(f"constant lambda = {lam0}: first failing grid t = {report.cutoff:.3g}, predicted cutoff 2c/(A lambda)^2 = {2 / lam0**2:g}")
