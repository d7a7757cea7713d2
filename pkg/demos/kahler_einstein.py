"""The Kähler form closes only for mu = lambda', and the metric is Einstein.

Sweeps the energy density t along one covector direction and prints the
closedness residual for a few choices of mu, followed by the Ricci/G ratio.
"""
import numpy as np

from cotangent_kahler import connection as C
from cotangent_kahler import structures as S
from cotangent_kahler.base_manifold import SpaceForm
from cotangent_kahler.bundle import point_with_energy
from cotangent_kahler.families import ExampleFamily

M = SpaceForm(3, 1.0)
L = ExampleFamily(A=1.0, B=1.0, c=1.0)
q, direction = np.array([0.2, -0.4, 0.1]), np.array([1.0, 0.5, -0.3])

header = "dphi (mu=lambda')"
print(f"{'t':>5}  {header:>18}  {'mu+0.1':>9}  {'mu+1':>9}  {'Ric/G (h)':>10}  {'Ric/G (v)':>10}")
for t in (0.1, 0.5, 1.0, 2.0, 5.0):
    pt = point_with_energy(M, q, direction, t)
    lam_prime = S.local_data(M, L, pt).dlam
    res = [S.dphi_residual(M, L, pt, lam_prime + s) for s in (0.0, 0.1, 1.0)]
    ric_h, ric_v, _ = C.ricci_at(M, L, pt)
    G1, G2 = S.metric_G_at(M, L, pt)
    ratio_h = np.mean(ric_h.data / G1.data)
    ratio_v = np.mean(ric_v.data / G2.data)
    print(f"{t:5.1f}  {res[0]:18.2e}  {res[1]:9.2e}  {res[2]:9.2e}  {ratio_h:10.6f}  {ratio_v:10.6f}")
print(f"expected Einstein constant A n / 2 = {L.A * M.n / 2}")
