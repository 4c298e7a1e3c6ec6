"""singlab: maximal surfaces, CMC-1 faces and frontal singularities.

Construct spacelike maximal surfaces in Lorentz-Minkowski 3-space and
CMC-1 faces in de Sitter 3-space from holomorphic Weierstrass data,
trace their singular curves, and classify every singular point as a
cuspidal edge, swallowtail, cuspidal cross cap or degenerate point --
by closed-form criteria and by an independent numeric frontal pipeline.
"""

__version__ = "0.1.0"

from .classification import Classification, Tag, classify_alpha, \
    classify_alpha_beta, tag_histogram
from .expr import ComplexJet, EvalDomainError, ExprError, ExprSyntaxError, \
    eval_jet, eval_value, parse, to_source
from .tracing import Rectangle
from .weierstrass import (DEFAULT_TOLERANCES, SingularCurve, SingularPoint,
                          Tolerances, TriangleMesh, WeierstrassData,
                          classify_h, classify_point, conjugate,
                          euclidean_normal, integrate_path, integrate_surface,
                          mesh, metric_density, signed_area_density,
                          singular_locus, special_points)
from .cmc1 import (HermitianPoint, SL2Frame, area_density_cmc1,
                   classify_point_cmc1, integrate_lift, lorentz_normal,
                   minkowski_inner, project, psi_tilde)
from .frontal import (FrontalMap, PRESETS, SingularPointReport,
                      area_density, classify, covariant_derivative,
                      curvature_profile, preset, psi_along_curve,
                      tangent_developable, trace_singular_curve)
from .genericity import (Jet2Point, PerturbationReport, classify_jet,
                         jacobian_check, membership, perturb_and_classify)

__all__ = [name for name in dir() if not name.startswith("_")]
