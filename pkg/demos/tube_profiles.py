"""
Contact tubes in the quadric and its dual
=========================================

Each hypersurface here is homogeneous, so its whole extrinsic geometry lives
in one shape operator on the model tangent space.  We build the operators,
run the contact identities on them and rebuild the principal curvatures from
Jacobi fields along the normal geodesic.
"""

import numpy as np

from kahlercontact.contact_core import asquared_residual, contact_defect, pairing_check, trace_identities
from kahlercontact.tube_builder import (
    FOCAL_RADIUS_QN,
    profile_shape_operator,
    tube_profile_theorem1,
    tube_profile_theorem2,
    weingarten_curvatures,
)

# Tubes in Q^3 exist for radii below the first focal distance.
print(f"focal radius pi/(2 sqrt2) = {FOCAL_RADIUS_QN:.10f}")

for r in np.linspace(0.1, FOCAL_RADIUS_QN - 0.1, 5):
    p = tube_profile_theorem1(3, r)
    cs, sd = profile_shape_operator(p)
    print(
        f"r={r:.3f}  alpha={p.alpha:+.4f}  mu={p.mu:.4f}  rho={p.rho:.4f}  "
        f"defect={contact_defect(cs, sd):.1e}  S^2 identity={asquared_residual(cs, sd, p.ambient):.1e}"
    )

###############################################################################
# The lambda = 0 and mu = 2 rho eigenspaces are swapped by phi, which is the
# pairing lambda -> 2 rho - lambda of every contact hypersurface.

p = tube_profile_theorem1(4, 0.4)
print("pairing residual:", pairing_check(*profile_shape_operator(p)))

###############################################################################
# Principal curvatures from Jacobi fields: -f'(r)/f(r) with core initial data.

for key, value in weingarten_curvatures(p).items():
    print(f"{key:>6}: Jacobi {value:+.12f}   closed form {p.principal_curvatures()[key]:+.12f}")

###############################################################################
# The noncompact dual has three families; the horosphere has no radius.

for case, r in [(1, 1.0), (2, None), (3, 1.0)]:
    q = tube_profile_theorem2(case, 3, r)
    cs, sd = profile_shape_operator(q)
    tr = trace_identities(cs, sd, q.ambient)
    print(f"case {case}: alpha={q.alpha:.4f} mu={q.mu:.4f} alpha*rho={q.alpha * q.rho:.12f} trace residual {tr.max():.1e}")
