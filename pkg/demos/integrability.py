"""When is the diagonal-lift J a complex structure?

Evaluates the Nijenhuis tensor at a few points for the integrable b1 and for
b1 shifted by small amounts, then compares against brackets taken numerically.
"""
import numpy as np

from cotangent_kahler import structures as S
from cotangent_kahler.base_manifold import SpaceForm
from cotangent_kahler.bundle import sample_point
from cotangent_kahler.families import ExampleFamily

M = SpaceForm(3, 1.0)
L = ExampleFamily(A=1.0, B=1.0, c=1.0)
rng = np.random.default_rng(0)

print(f"{'t':>6}  {'shift':>6}  {'max|N| closed':>14}  {'max|N| brackets':>16}")
for _ in range(3):
    pt = sample_point(M, rng, 0.1, 4.0)
    d = S.local_data(M, L, pt)
    for shift in (0.0, 0.01, 0.1):
        b1 = d.coeffs.b1 + shift
        closed = np.max(np.abs(S.nijenhuis_frame(M, L, pt, b1)))
        fd = np.max(np.abs(S.nijenhuis_fd(M, L, pt, b1)))
        print(f"{d.t:6.3f}  {shift:6.2f}  {closed:14.3e}  {fd:16.3e}")
