"""
Finite differences in flat C^n
==============================

Round spheres and tubes around holomorphic curves are contact hypersurfaces
of C^n.  Here everything is computed from charts by central differences and
compared with the exact geometry.
"""

from kahlercontact.immersion_lab import c2_tube_check, halving_ratios, quadratic_curve, sphere_check

# Sphere S^5(2) in C^3: S = -(1/2) Id and d eta = -omega.
check = sphere_check(3, 2.0, h=1e-3)
for key, value in check.residuals.items():
    print(f"{key:>22}: {value:.2e}")

###############################################################################
# Halving the step shrinks each residual by about four: the scheme is second order.

for key, ratio in halving_ratios(3, 2.0).items():
    print(f"{key:>22}: ratio {ratio:.2f}")

###############################################################################
# Tube of radius 1/2 around w = z^2/2 in C^2.  It is contact, but rho is not
# constant: it follows the curvature radius theta(z) of the curve.

tube = c2_tube_check(quadratic_curve(), 0.5)
print("principal curvatures at z=0:", tube.extras["centre_curvatures"])
print("rho variation over |z| <= 0.3:", round(tube.extras["rho_variation"], 4))
print("all checks pass:", tube.passed)
