"""diraclab: machine checks for Clifford-bundle operator calculus.

Exact blade arithmetic on the Clifford/exterior fiber, curvature operators
with their closed forms and trace identities, explicit twistor sections of
round spheres with pointwise residual evaluation, and discrete Hodge
spectra on triangulated surfaces with the associated spectral bounds.
"""

__version__ = "0.1.0"

from .curvature import (
    BundleCurvature,
    CurvatureTensor,
    curvature_action,
    dual_weitzenboeck,
    kx_apply,
    positivity_2x2,
    r0,
    ricci_apply,
    tensor_weitzenboeck,
    theta,
    trace_weitzenboeck,
    weitzenboeck_apply,
    weitzenboeck_matrix,
    whitney_weitzenboeck,
)
from .dec import (
    CochainComplex,
    ConvergenceError,
    FactorizationError,
    SolverError,
    SpectrumResult,
    betti,
    build_dec,
    harmonic_cochains,
    inequality_checks,
    laplacian,
    multiplicity_near,
    solve_smallest,
    spectrum,
)
from .mesh import (
    DegenerateTriangleError,
    MeshError,
    NonManifoldError,
    NonOrientableError,
    NonTriangleFaceError,
    OffParseError,
    SimplicialSurface,
    flat_torus,
    icosphere,
    load_off,
    save_off,
)
from .multivector import (
    MultiVector,
    commutator,
    contract,
    dual_action,
    geometric_product,
    grade_project,
    hodge,
    inner,
    norm_squared,
    reversion,
    vector_action,
    volume_blade,
    wedge,
)
from .polyforms import Poly, PolyForm
from .sphere import (
    SphereSection,
    build_twistor_section,
    covariant_derivative,
    dirac,
    dirac_field,
    eigenvalue_gap_table,
    evaluate,
    harmonic_probe,
    killing_residual,
    linear_function_section,
    sample_points,
    tangent_frame,
    twistor_basis,
    twistor_residual,
    verify_identity_suite,
)
