"""Generalized Kähler angles in almost-Hermitian geometry.

For an oriented ``2m``-dimensional subspace ``W`` of a space with compatible
metric and almost complex structure, ``cos(alpha) = omega^m|_W / (m! vol_W)``
where ``omega`` is the Kähler form. Wirtinger's inequality says
``|cos(alpha)| <= 1`` with equality exactly on complex subspaces.
"""

from .angle import (
    AngleReport,
    Classification,
    OrientedSubspace,
    WirtingerCheck,
    angle_report,
    classify,
    complex_subspace,
    complexity_residual,
    kahler_function,
    principal_angles,
    pullback_form,
    verify_wirtinger,
)
from .charts import (
    AngleField,
    FieldSummary,
    ImmersionChart,
    angle_field,
    catalog_chart,
    field_summary,
    gradient_field,
    tangent_frame,
)
from .config import TOL, Tolerances
from .errors import *  # noqa: F401,F403
from .exterior import (
    CanonicalForm,
    SkewMatrix,
    orthonormalize,
    pfaffian,
    skew_canonical,
    wedge_power_oracle,
)
from .expr import parse_components, parse_expression
from .structures import (
    OCTONION_TRIPLES,
    CompatibleStructure,
    StructureField,
    chart_field,
    cross7,
    kahler_form,
    nijenhuis,
    random_compatible,
    s6_structure,
    standard_structure,
    validate,
)

__version__ = "0.1.0"
