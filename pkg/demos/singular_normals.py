"""
Where a normal sits on the circle of real structures
====================================================

A unit vector of the quadric's tangent space makes an angle t in [0, pi/4]
with the circle of real structures.  JN is an eigenvector of the normal
Jacobi operator exactly at the two ends of that range.
"""

import numpy as np

from kahlercontact.model_frame import AmbientSpec, make_model_frame
from kahlercontact.singular_normals import adapted_decomposition, classify_normal, jn_eigen_defect, normal_at_angle

F = make_model_frame(3)
Q = AmbientSpec.quadric(F, 1)

for t in np.linspace(0, np.pi / 4, 9):
    N = normal_at_angle(F, t)
    kind = classify_normal(F, N).kind.value
    print(f"t={t:.4f}  defect={jn_eigen_defect(Q, N):.6f}  |sin 4t|={abs(np.sin(4 * t)):.6f}  {kind}")

###############################################################################
# A random normal: recover the adapted real structure and rebuild N.

rng = np.random.default_rng(7)
v = rng.standard_normal(6)
N = v / np.linalg.norm(v)
d = adapted_decomposition(F, N)
print(f"s*={d.s:.4f} t={d.t:.4f} reconstruction error {np.abs(d.reconstruct(F.J) - N).max():.1e}")
