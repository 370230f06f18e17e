"""Contact hypersurfaces in Kähler model spaces, checked numerically.

Submodules
----------
model_frame       tangent-space model with complex and real structures
curvature         curvature tensors of C^n, CP^n, CH^n and the quadrics
contact_core      induced almost contact structure and its identities
singular_normals  angle of a normal to the circle of real structures
tube_builder      principal-curvature profiles and Jacobi-field oracles
immersion_lab     finite-difference geometry of charts in C^n
cli               the ``verify`` command
"""
from .contact_core import (
    ContactStructure,
    ContactVerdict,
    ShapeData,
    asquared_residual,
    contact_defect,
    contact_eigenspaces,
    contact_rho,
    dim2_contact_check,
    flip_orientation,
    hopf_data,
    induce_contact_structure,
    make_shape_data,
    pairing_check,
    trace_identities,
    verify_contact,
)
from .curvature import (
    CurvatureReport,
    curvature,
    curvature_selftest,
    normal_jacobi_operator,
    ricci_operator,
)
from .errors import GeometryError
from .immersion_lab import (
    Chart,
    FormField,
    ImmersedPatch,
    exterior_derivative_oneform,
    exterior_derivative_twoform,
    extrinsic_geometry,
    c2_tube_check,
    sphere_check,
)
from .model_frame import (
    AmbientSpec,
    ModelFrame,
    gram_schmidt,
    make_model_frame,
    orthonormal_complement,
    rotate_real_structure,
)
from .singular_normals import adapted_decomposition, classify_normal, jn_eigen_defect
from .tube_builder import (
    PrincipalProfile,
    focal_distances,
    jacobi_ode_oracle,
    jacobi_solution,
    profile_shape_operator,
    tube_profile_theorem1,
    tube_profile_theorem2,
)

__version__ = "0.1.0"

__all__ = [
    "adapted_decomposition",
    "AmbientSpec",
    "asquared_residual",
    "c2_tube_check",
    "Chart",
    "classify_normal",
    "contact_defect",
    "contact_eigenspaces",
    "contact_rho",
    "ContactStructure",
    "ContactVerdict",
    "curvature",
    "curvature_selftest",
    "CurvatureReport",
    "dim2_contact_check",
    "exterior_derivative_oneform",
    "exterior_derivative_twoform",
    "extrinsic_geometry",
    "flip_orientation",
    "focal_distances",
    "FormField",
    "GeometryError",
    "gram_schmidt",
    "hopf_data",
    "ImmersedPatch",
    "induce_contact_structure",
    "jacobi_ode_oracle",
    "jacobi_solution",
    "jn_eigen_defect",
    "make_model_frame",
    "make_shape_data",
    "ModelFrame",
    "normal_jacobi_operator",
    "orthonormal_complement",
    "pairing_check",
    "PrincipalProfile",
    "profile_shape_operator",
    "ricci_operator",
    "rotate_real_structure",
    "ShapeData",
    "sphere_check",
    "trace_identities",
    "tube_profile_theorem1",
    "tube_profile_theorem2",
    "verify_contact",
]
